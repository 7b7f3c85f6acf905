#include "ringswarm/spectral.hpp"

#include "ringswarm/frames.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ringswarm {

Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

Poly poly_pow(const Poly& p, int e) {
    Poly r{1.0};
    for (int i = 0; i < e; ++i) r = poly_mul(r, p);
    return r;
}

double poly_eval(const Poly& p, double x) {
    double acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

std::vector<Complex> poly_roots(const Poly& p) {
    int d = static_cast<int>(p.size()) - 1;
    while (d > 0 && p[d] == 0) --d;
    if (d < 1) return {};
    MatrixXd comp = MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i] / p[d];
    Eigen::EigenSolver<MatrixXd> es(comp, false);
    std::vector<Complex> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

Poly char_poly(const MatrixXd& A) {
    int m = static_cast<int>(A.rows());
    Poly c(m + 1, 0.0);
    c[m] = 1.0;
    MatrixXd M = MatrixXd::Identity(m, m);
    for (int k = 1; k <= m; ++k) {
        MatrixXd AM = A * M;
        double ck = -AM.trace() / k;
        c[m - k] = ck;
        M = AM + ck * MatrixXd::Identity(m, m);
    }
    return c;
}

std::vector<Complex> eigenvalues(const MatrixXd& A) {
    Eigen::EigenSolver<MatrixXd> es(A, false);
    std::vector<Complex> out(A.rows());
    for (int i = 0; i < A.rows(); ++i) out[i] = es.eigenvalues()[i];
    return out;
}

std::pair<MatrixXd, MatrixXd> coupling_SC(const VectorXd& theta0) {
    int n = static_cast<int>(theta0.size());
    MatrixXd S(n, n), C(n, n);
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            S(k, m) = std::sin(theta0[m] - theta0[k]) / n;
            C(k, m) = std::cos(theta0[m] - theta0[k]) / n;
        }
    return {S, C};
}

MatrixXd jacobian_abuw(const VectorXd& theta0) {
    int n = static_cast<int>(theta0.size());
    auto [S, C] = coupling_SC(theta0);
    MatrixXd I = MatrixXd::Identity(n, n);
    MatrixXd J = MatrixXd::Zero(4 * n, 4 * n);
    J.block(0, 2 * n, n, n) = I;
    J.block(n, 3 * n, n, n) = I;
    J.block(2 * n, 0, n, n) = C;
    J.block(2 * n, n, n, n) = -S;
    J.block(2 * n, 3 * n, n, n) = 2 * I;
    J.block(3 * n, 0, n, n) = S - 2 * I;
    J.block(3 * n, n, n, n) = C;
    J.block(3 * n, 2 * n, n, n) = -2 * I;
    J.block(3 * n, 3 * n, n, n) = -2 * I;
    return J;
}

bool is_degenerate(const VectorXd& theta0, double tol) {
    int n = static_cast<int>(theta0.size());
    VectorXd c(n), s(n);
    for (int k = 0; k < n; ++k) {
        c[k] = std::cos(theta0[k]);
        s[k] = std::sin(theta0[k]);
    }
    double gram = c.squaredNorm() * s.squaredNorm() - std::pow(c.dot(s), 2);
    return gram < tol * n * n;
}

double omega_of(const VectorXd& theta0) {
    double f = 0;
    for (int k = 0; k < theta0.size(); ++k) f += std::pow(std::cos(theta0[k]), 2);
    return f / theta0.size() - 0.5;
}

std::pair<MatrixXd, MatrixXd> restrict_blocks(const VectorXd& theta0) {
    int n = static_cast<int>(theta0.size());
    double s2 = 0;
    for (int k = 0; k < n; ++k) s2 += std::sin(2 * theta0[k]);
    if (std::abs(s2) > 1e-9)
        throw std::invalid_argument("restrict_blocks: angles not normalized (sum sin 2theta != 0)");
    if (is_degenerate(theta0))
        throw std::invalid_argument(
            "restrict_blocks: degenerate angles (cos/sin vectors collinear); use the degenerate path");

    int m = n - 2;
    MatrixXd I = MatrixXd::Identity(m, m), O = MatrixXd::Zero(m, m);
    MatrixXd J1(4 * m, 4 * m);
    J1 << O, O, I, O,
          O, O, O, I,
          O, O, O, 2 * I,
          -2 * I, O, -2 * I, -2 * I;

    double w = omega_of(theta0);
    double f = 0.5 + w, d = 0.5 - w;
    Eigen::Matrix4d M, K;
    M << f, 0, 0, -d,
         0, d, f, 0,
         -2, d, f, 0,
         -f, -2, 0, d;
    K << 0, 0, 2, 0,
         0, 0, 0, 2,
         -2, 0, -2, 0,
         0, -2, 0, -2;
    MatrixXd J2 = MatrixXd::Zero(8, 8);
    J2.block<4, 4>(0, 4) = Eigen::Matrix4d::Identity();
    J2.block<4, 4>(4, 0) = M;
    J2.block<4, 4>(4, 4) = K;
    return {J1, J2};
}

Poly f_omega(double omega) {
    return {1 - 4 * omega * omega, 4, 12, 14, 9, 4, 1};
}

namespace {

// Determinant of a matrix whose entries are polynomials in q, by expansion
// along the first column. Sizes up to 6x6 only.
Poly poly_det(const std::vector<std::vector<Poly>>& A) {
    size_t m = A.size();
    if (m == 1) return A[0][0];
    Poly acc{0.0};
    for (size_t i = 0; i < m; ++i) {
        bool zero = true;
        for (double cf : A[i][0]) zero = zero && cf == 0;
        if (zero) continue;
        std::vector<std::vector<Poly>> minor;
        for (size_t r = 0; r < m; ++r) {
            if (r == i) continue;
            std::vector<Poly> row(A[r].begin() + 1, A[r].end());
            minor.push_back(std::move(row));
        }
        Poly term = poly_mul(A[i][0], poly_det(minor));
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        if (acc.size() < term.size()) acc.resize(term.size(), 0.0);
        for (size_t k = 0; k < term.size(); ++k) acc[k] += sign * term[k];
    }
    return acc;
}

}  // namespace

std::array<double, 6> hurwitz_minors(double omega) {
    double q = 1 - 4 * omega * omega;
    // Hurwitz matrix of lambda^6 + 4l^5 + 9l^4 + 14l^3 + 12l^2 + 4l + q,
    // entries as polynomials {const, coeff of q}.
    const Poly Q{0, 1};
    auto c = [](double v) { return Poly{v}; };
    std::vector<std::vector<Poly>> H = {
        {c(4), c(14), c(4), c(0), c(0), c(0)},
        {c(1), c(9), c(12), Q, c(0), c(0)},
        {c(0), c(4), c(14), c(4), c(0), c(0)},
        {c(0), c(1), c(9), c(12), Q, c(0)},
        {c(0), c(0), c(4), c(14), c(4), c(0)},
        {c(0), c(0), c(1), c(9), c(12), Q},
    };
    std::array<double, 6> out{};
    for (int k = 1; k <= 6; ++k) {
        std::vector<std::vector<Poly>> lead(k);
        for (int r = 0; r < k; ++r) lead[r] = {H[r].begin(), H[r].begin() + k};
        out[k - 1] = poly_eval(poly_det(lead), q);
    }
    return out;
}

std::array<double, 6> hurwitz_minors_closed_form(double omega) {
    double w2 = omega * omega;
    double core = -333 - 636 * w2 + 128 * w2 * w2;
    return {4,
            22,
            132,
            -352 * (w2 - 3),
            -8 * core,
            8 * (-1 + 2 * omega) * (1 + 2 * omega) * core};
}

std::pair<MatrixXd, MatrixXd> jacobian_degenerate(int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("jacobian_degenerate: n must be even, n >= 4");
    int m = n - 1;
    MatrixXd I = MatrixXd::Identity(m, m), O = MatrixXd::Zero(m, m);
    MatrixXd Jtop(3 * m, 3 * m);
    Jtop << O, I, O,
            O, O, 2 * I,
            -2 * I, -2 * I, -2 * I;
    MatrixXd Jdeg = MatrixXd::Zero(4 * n, 4 * n);
    Jdeg.block(m, m, 3 * m, 3 * m) = Jtop;
    Jdeg.block(4 * m, 4 * m, 2, 2) << -1, 1, 0, -1;
    Jdeg.block(4 * m + 2, 4 * m + 2, 2, 2) << 0, 1, -1, 0;
    return {Jdeg, Jtop};
}

double spectral_gap(const std::vector<Complex>& eigs) {
    double gap = 0;
    bool found = false;
    for (const auto& l : eigs)
        if (l.real() < -1e-9 && (!found || -l.real() < gap)) {
            gap = -l.real();
            found = true;
        }
    return found ? gap : 0.0;
}

Poly char_poly_J1_expected(int n) {
    // lambda^{n-2} (l^3 + 2l^2 + 4l + 4)^{n-2} = (l^4 + 2l^3 + 4l^2 + 4l)^{n-2}
    return poly_pow({0, 4, 4, 2, 1}, n - 2);
}

Poly char_poly_J2_expected(double omega) {
    return poly_mul({1, 0, 1}, f_omega(omega));
}

Poly char_poly_Jdeg_expected(int n) {
    Poly p = poly_pow({4, 4, 2, 1}, n - 1);
    p = poly_mul(p, poly_pow({0, 1}, n - 1));
    p = poly_mul(p, {1, 2, 1});  // (l+1)^2
    p = poly_mul(p, {1, 0, 1});  // l^2 + 1
    return p;
}

SpectralReport analyze(const VectorXd& theta0_raw) {
    SpectralReport r;
    VectorXd theta0 = normalize_ring_angles(theta0_raw);
    r.J = jacobian_abuw(theta0);
    r.eigs = eigenvalues(r.J);
    r.char_poly = char_poly(r.J);
    r.gap = spectral_gap(r.eigs);
    if (!is_degenerate(theta0)) {
        auto [J1, J2] = restrict_blocks(theta0);
        r.J1 = J1;
        r.J2 = J2;
        r.omega = omega_of(theta0);
        r.char_J1 = char_poly_J1_expected(static_cast<int>(theta0.size()));
        r.char_J2 = char_poly_J2_expected(r.omega);
        r.hurwitz = hurwitz_minors(r.omega);
    } else {
        r.degenerate = true;
        int n = static_cast<int>(theta0.size());
        auto [Jdeg, Jtop] = jacobian_degenerate(n);
        r.Jdeg = Jdeg;
        r.Jtop = Jtop;
        r.char_Jdeg = char_poly_Jdeg_expected(n);
    }
    return r;
}

SpectralReport analyze_degenerate(int n) {
    SpectralReport r;
    r.degenerate = true;
    VectorXd theta0(n);
    for (int k = 0; k < n; ++k) theta0[k] = (k < n / 2) ? 0.0 : M_PI;
    r.J = jacobian_abuw(theta0);
    r.eigs = eigenvalues(r.J);
    auto [Jdeg, Jtop] = jacobian_degenerate(n);
    r.Jdeg = Jdeg;
    r.Jtop = Jtop;
    r.char_Jdeg = char_poly_Jdeg_expected(n);
    r.char_poly = r.char_Jdeg;
    r.gap = spectral_gap(r.eigs);
    return r;
}

}  // namespace ringswarm
