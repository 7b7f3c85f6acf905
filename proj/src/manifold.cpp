#include "ringswarm/manifold.hpp"

#include "ringswarm/core.hpp"
#include "ringswarm/rhs.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <map>
#include <mutex>

namespace ringswarm {

ThetaVector theta_of(const ZVector& z, const BasisPack& basis) {
    if (z.n != basis.n) throw std::invalid_argument("theta_of: dimension mismatch");
    ThetaVector t;
    t.sin_t = basis.Vbb * z.Z;
    double m = t.sin_t.cwiseAbs().maxCoeff();
    if (m > 0.9)
        throw std::domain_error("theta_of: |sin theta| = " + std::to_string(m) +
                                " exceeds the 0.9 domain guard");
    t.cos_t = (1.0 - t.sin_t.array().square()).sqrt();
    return t;
}

EnergyResult energy(const ZVector& z, const BasisPack& basis) {
    ThetaVector th = theta_of(z, basis);
    EnergyResult r;
    r.E = basis.X.dot(th.cos_t) / basis.n;
    // decomposition route: cos Theta - 1 = Vbb alpha + E X
    int n = basis.n;
    MatrixXd A(n, n);
    A.leftCols(n - 1) = basis.Vbb;
    A.col(n - 1) = basis.X;
    VectorXd coef = A.partialPivLu().solve(th.cos_t - VectorXd::Ones(n));
    r.alpha = coef.head(n - 1);
    r.E_decomp = coef[n - 1];
    return r;
}

double mean_cos(const ZVector& z, const BasisPack& basis) {
    return theta_of(z, basis).cos_t.mean();
}

Dispersions dispersions(const ZVector& z, const BasisPack& basis) {
    int N = z.N();
    Dispersions d;
    d.DU = (basis.V * z.ZU()).squaredNorm() / N;
    d.DL = (basis.V * z.ZL()).squaredNorm() / N;
    return d;
}

std::pair<double, double> f1f2(const ZVector& z, const BasisPack& basis) {
    ThetaVector th = theta_of(z, basis);
    int n = basis.n;
    double s2 = 2.0 * th.sin_t.dot(th.cos_t) / n;        // (1/n) 1 . sin 2Theta
    double ss = 2.0 * th.sin_t.squaredNorm() / n;        // (2/n) 1 . sin^2 Theta
    double c2 = th.cos_t.squaredNorm() / n;              // (1/n) 1 . cos^2 Theta
    Eigen::Matrix2d A;
    A << 1 + s2, ss,
         2 * c2, s2 - 1;
    if (std::abs(A.determinant()) < 1e-12)
        throw std::runtime_error("f1f2: singular system (Z too large)");
    Eigen::Vector2d rhs(-s2 - 2 * ss, 2 - 2 * c2 - 2 * s2);
    Eigen::Vector2d f = A.partialPivLu().solve(rhs);
    return {f[0], f[1]};
}

DegenerateVector anchor_QZ(const ZVector& z, const BasisPack& basis) {
    EnergyResult e = energy(z, basis);
    auto [f1, f2] = f1f2(z, basis);
    DegenerateVector q(basis.n);
    q.Z = z.Z;
    q.beta = e.alpha;
    q.gamma1 = e.E * f1;
    q.gamma2 = e.E * (2 - f1 + f2);
    return q;
}

ZVector project_zero_energy(const ZVector& z0, const BasisPack& basis) {
    ZVector z = z0;
    for (int it = 0; it < 60; ++it) {
        ThetaVector th = theta_of(z, basis);
        double E = basis.X.dot(th.cos_t) / basis.n;
        if (std::abs(E) < 1e-14) return z;
        // grad E = -(1/n) sum_i X_i tan(theta_i) Vbb_i
        VectorXd grad = VectorXd::Zero(basis.n - 1);
        for (int i = 0; i < basis.n; ++i)
            grad -= basis.X[i] * (th.sin_t[i] / th.cos_t[i]) / basis.n *
                    basis.Vbb.row(i).transpose();
        double g2 = grad.squaredNorm();
        if (g2 < 1e-30) throw std::runtime_error("project_zero_energy: vanishing gradient");
        z.Z -= (E / g2) * grad;
    }
    throw std::runtime_error("project_zero_energy: Newton did not converge");
}

VectorXd reduced_coords(const DegenerateVector& v) { return v.flat().head(4 * v.n - 2); }

DegenerateVector from_reduced(const VectorXd& y, int n) {
    if (y.size() != 4 * n - 2) throw std::invalid_argument("from_reduced: size mismatch");
    VectorXd full(4 * n);
    full << y, 0.0, 0.0;
    return DegenerateVector::from_flat(full);
}

namespace {

// c and s combinations from reduced coordinates (independent of deltas):
// c = Vbb beta + Vbb beta_star - gamma1 X,
// s = -Vbb Z + (1/2) Vbb beta_dia + (gamma1 + gamma2) X.
void cs_of_reduced(const VectorXd& y, const BasisPack& basis, VectorXd& c, VectorXd& s) {
    int m = basis.n - 1;
    auto Z = y.segment(0, m);
    auto beta = y.segment(m, m);
    auto beta_dia = y.segment(2 * m, m);
    auto beta_star = y.segment(3 * m, m);
    double g1 = y[4 * m], g2 = y[4 * m + 1];
    c = basis.Vbb * (beta + beta_star) - g1 * basis.X;
    s = -basis.Vbb * Z + 0.5 * basis.Vbb * beta_dia + (g1 + g2) * basis.X;
}

}  // namespace

VectorXd reduced_rhs(const VectorXd& y, const BasisPack& basis) {
    int n = basis.n, m = n - 1;
    if (y.size() != 4 * n - 2) throw std::invalid_argument("reduced_rhs: size mismatch");
    VectorXd c, s, U, W;
    cs_of_reduced(y, basis, c, s);
    nonlinear_UW_from_cs(c, s, U, W);
    VectorXd TU = basis.Tbb * U, TW = basis.Tbb * W;
    double XU = basis.X.dot(U) / n, XW = basis.X.dot(W) / n;
    auto beta = y.segment(m, m);
    auto beta_dia = y.segment(2 * m, m);
    auto beta_star = y.segment(3 * m, m);
    double g1 = y[4 * m], g2 = y[4 * m + 1];
    VectorXd d(4 * n - 2);
    d.segment(0, m) = -0.5 * TU;
    d.segment(m, m) = beta_dia;
    d.segment(2 * m, m) = 2 * beta_star + TU;
    d.segment(3 * m, m) = -2 * beta - 2 * beta_dia - 2 * beta_star + TW;
    d[4 * m] = -g1 + g2 - XW;
    d[4 * m + 1] = -g2 + XU + XW;
    return d;
}

AffineInT gamma_on_constant(const VectorXd& y, const BasisPack& basis) {
    int n = basis.n, m = n - 1;
    VectorXd c, s, U, W;
    cs_of_reduced(y, basis, c, s);
    nonlinear_UW_from_cs(c, s, U, W);
    VectorXd TU = basis.Tbb * U, TW = basis.Tbb * W;
    AffineInT out;
    out.constant = VectorXd::Zero(4 * n - 2);
    out.linear = VectorXd::Zero(4 * n - 2);
    out.constant.segment(0, m) = y.segment(0, m);  // the anchoring Z
    out.linear.segment(0, m) = -0.5 * TU;
    out.constant.segment(m, m) = 0.5 * (TU + TW);
    // beta_dia component stays zero
    out.constant.segment(3 * m, m) = -0.5 * TU;
    out.constant[4 * m] = basis.X.dot(U) / n;
    out.constant[4 * m + 1] = basis.X.dot(U + W) / n;
    return out;
}

VectorXd gamma_on_constant_quadrature(const VectorXd& y, const BasisPack& basis, double t) {
    int n = basis.n, m = n - 1;
    VectorXd c, s, U, W;
    cs_of_reduced(y, basis, c, s);
    nonlinear_UW_from_cs(c, s, U, W);
    VectorXd TU = basis.Tbb * U, TW = basis.Tbb * W;

    VectorXd out = VectorXd::Zero(4 * n - 2);
    // Z block: Z + int_0^t -(1/2) TU dtau (integrand constant; Simpson exact)
    out.segment(0, m) = y.segment(0, m) + t * (-0.5 * TU);

    // hyperbolic block: int_{-inf}^t e^{Jtop (t-tau)} F dtau = int_0^inf e^{Jtop s} F ds.
    // The integral is linear in F, so accumulate the operator
    // (h/3) sum_i w_i e^{Jtop s_i} once per n and reuse it.
    const double T = 90.0;
    const int steps = 12000;  // Simpson, even count
    double h = T / steps;
    static std::map<int, MatrixXd> op_cache;
    static std::mutex op_mutex;
    MatrixXd op;
    {
        std::lock_guard<std::mutex> lock(op_mutex);
        auto it = op_cache.find(n);
        if (it == op_cache.end()) {
            MatrixXd Jtop(3 * m, 3 * m);
            MatrixXd I = MatrixXd::Identity(m, m), O = MatrixXd::Zero(m, m);
            Jtop << O, I, O, O, O, 2 * I, -2 * I, -2 * I, -2 * I;
            MatrixXd acc = MatrixXd::Zero(3 * m, 3 * m);
            for (int i = 0; i <= steps; ++i) {
                double sv = i * h;
                double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                acc += wgt * (Jtop * sv).exp();
            }
            it = op_cache.emplace(n, acc * (h / 3.0)).first;
        }
        op = it->second;
    }
    VectorXd F(3 * m);
    F << VectorXd::Zero(m), TU, TW;
    out.segment(m, 3 * m) = op * F;

    // gamma block: e^{A s} = e^{-s} [[1, s], [0, 1]] for the Jordan block
    double Fg1 = -basis.X.dot(W) / n;
    double Fg2 = basis.X.dot(U + W) / n;
    double a1 = 0, a2 = 0;
    for (int i = 0; i <= steps; ++i) {
        double sv = i * h;
        double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double e = std::exp(-sv);
        a1 += wgt * (e * (Fg1 + sv * Fg2));
        a2 += wgt * (e * Fg2);
    }
    out[4 * m] = a1 * (h / 3.0);
    out[4 * m + 1] = a2 * (h / 3.0);
    return out;
}

ReducedFlowApprox reduced_flow_approx(const ZVector& z, const BasisPack& basis) {
    EnergyResult e = energy(z, basis);
    double A = mean_cos(z, basis);
    ReducedFlowApprox r;
    r.dZdt = VectorXd::Zero(z.n - 1);
    int half = z.N() - 1;
    r.dZdt.head(half) = e.E * A * z.ZU();
    r.dZdt.segment(half, half) = -e.E * A * z.ZL();
    VectorXd rhs = reduced_rhs(reduced_coords(anchor_QZ(z, basis)), basis);
    r.dgamma = rhs.tail<2>();
    r.error_scale = std::abs(e.E) * z.norm_r() * z.norm_l1();
    return r;
}

LyapunovEval lyapunov_decoupled(const Eigen::Vector4d& st) {
    double x = st[0], y = st[1], u = st[2], v = st[3];
    double cross = v * x - u * y;
    LyapunovEval e;
    e.Ldot = -2.0 * std::pow(1.0 - u * u - v * v, 2);
    if (cross == 0) {
        e.L = std::numeric_limits<double>::infinity();
        e.region = Region::boundary;
        return e;
    }
    e.L = x * x + y * y + u * u + v * v - std::log(cross * cross);
    e.region = cross > 0 ? Region::omega_plus : Region::omega_minus;
    return e;
}

bool g_parallel_monitors = true;

void attach_monitors(Trajectory& traj, const std::vector<std::string>& channels,
                     TrajectorySystem system, const VectorXd& theta0) {
    if (channels.empty()) return;
    bool wants_degenerate = false, wants_ring = false, wants_L = false;
    for (const auto& ch : channels) {
        if (ch == "ring_dist") wants_ring = true;
        else if (ch == "L") wants_L = true;
        else if (ch == "E" || ch == "DL" || ch == "DU" || ch == "zlast" ||
                 ch == "sqrtDL_plus" || ch == "sqrtDL_minus" || ch == "A")
            wants_degenerate = true;
        else
            throw std::invalid_argument("attach_monitors: unknown channel '" + ch + "'");
    }
    if (wants_L && system != TrajectorySystem::decoupled)
        throw std::invalid_argument("attach_monitors: channel L requires a decoupled-system trajectory");
    if ((wants_degenerate || wants_ring) && system == TrajectorySystem::decoupled)
        throw std::invalid_argument("attach_monitors: degenerate/ring channels require a swarm or abuw trajectory");
    if (wants_ring && system == TrajectorySystem::abuw)
        throw std::invalid_argument("attach_monitors: ring_dist requires a swarm trajectory");
    int n = theta0.size() ? static_cast<int>(theta0.size())
                          : (traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size()) / 4);
    BasisPack basis;
    if (wants_degenerate) {
        if (theta0.size() == 0)
            throw std::invalid_argument("attach_monitors: degenerate channels need reference angles");
        if (n % 2 != 0)
            throw std::invalid_argument("attach_monitors: degenerate channels need even n");
        basis = build_basis(n);
    }

    size_t count = traj.size();
    for (const auto& ch : channels) traj.monitors[ch].assign(count, 0.0);

    auto sample = [&](size_t i) {
        const VectorXd& st = traj.states[i];
        double t = traj.times[i];
        if (wants_L) {
            traj.monitors["L"][i] = lyapunov_decoupled(Eigen::Vector4d(st)).L;
        }
        SwarmState sw;
        if (system == TrajectorySystem::swarm && (wants_ring || wants_degenerate))
            sw = SwarmState::from_flat(n, st);
        if (wants_ring) traj.monitors["ring_dist"][i] = ring_distance(sw);
        if (wants_degenerate) {
            VectorXd abuw = system == TrajectorySystem::swarm
                                ? to_abuw(sw, theta0, t).flat()
                                : st;
            DegenerateVector dv = DegenerateVector::from_flat(basis.Pinv * abuw);
            ZVector z(n, dv.Z);
            Dispersions d = dispersions(z, basis);
            double E = energy(z, basis).E;
            double zl = z.zlast();
            for (const auto& c : channels) {
                if (c == "E") traj.monitors["E"][i] = E;
                else if (c == "DL") traj.monitors["DL"][i] = d.DL;
                else if (c == "DU") traj.monitors["DU"][i] = d.DU;
                else if (c == "zlast") traj.monitors["zlast"][i] = zl;
                else if (c == "sqrtDL_plus") traj.monitors["sqrtDL_plus"][i] = std::sqrt(d.DL) + zl;
                else if (c == "sqrtDL_minus") traj.monitors["sqrtDL_minus"][i] = std::sqrt(d.DL) - zl;
                else if (c == "A") traj.monitors["A"][i] = mean_cos(z, basis);
            }
        }
    };

#ifdef RINGSWARM_HAVE_OPENMP
    if (g_parallel_monitors) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(count); ++i) sample(i);
        return;
    }
#endif
    for (size_t i = 0; i < count; ++i) sample(i);
}

AnchoredSystem taylor_anchored_system() {
    AnchoredSystem sys;
    sys.A_s = MatrixXd::Constant(1, 1, -1.0);
    sys.B = MatrixXd::Zero(2, 2);
    sys.f = [](const VectorXd&, const VectorXd& y) {
        double x = y[0], yy = y[1];
        VectorXd out(1);
        out[0] = x * (yy - x * std::sin(x)) * (std::sin(x) + x * std::cos(x)) + x * std::sin(x);
        return out;
    };
    sys.g = [](const VectorXd& xs, const VectorXd& y) {
        double x = y[0], yy = y[1], z = xs[0];
        VectorXd out(2);
        out[0] = x * (yy - x * std::sin(x));
        out[1] = -yy * yy * (yy - z);
        return out;
    };
    sys.equilibrium_curve = [](double s) {
        VectorXd e(2);
        e << s, s * std::sin(s);
        return e;
    };
    return sys;
}

double taylor_psi_analytic(double x, double y) {
    return x * (y - x * std::sin(x)) * (std::sin(x) + x * std::cos(x)) + x * std::sin(x);
}

double taylor_h_analytic(double x, double /*y*/) { return x * std::sin(x); }

VectorXd anchored_psi(const AnchoredSystem& sys, const VectorXd& y) {
    int s = static_cast<int>(sys.A_s.rows());
    Eigen::PartialPivLU<MatrixXd> Alu(sys.A_s);
    VectorXd psi = -Alu.solve(sys.f(VectorXd::Zero(s), y));
    std::string history;
    for (int it = 0; it < 50; ++it) {
        VectorXd res = sys.A_s * psi + sys.f(psi, y);
        history += std::to_string(res.norm()) + " ";
        if (res.norm() <= 1e-13) return psi;
        // Jacobian A_s + df/dx by central differences
        MatrixXd Jf = sys.A_s;
        double h = 1e-6;
        for (int j = 0; j < s; ++j) {
            VectorXd p = psi, q = psi;
            p[j] += h;
            q[j] -= h;
            Jf.col(j) += (sys.f(p, y) - sys.f(q, y)) / (2 * h);
        }
        psi -= Jf.partialPivLu().solve(res);
    }
    VectorXd res = sys.A_s * psi + sys.f(psi, y);
    if (res.norm() <= 1e-12) return psi;
    throw std::runtime_error("anchored_psi: Newton did not converge; residuals " + history);
}

PsiCertificate psi_error_certificate(const AnchoredSystem& sys,
                                     const std::vector<VectorXd>& samples,
                                     const std::function<double(const VectorXd&)>& h,
                                     const std::function<double(const VectorXd&)>& dist_E) {
    PsiCertificate cert;
    for (const auto& y : samples) {
        double d = dist_E(y);
        if (d <= 1e-15 || y.norm() <= 1e-15) {
            ++cert.excluded;
            continue;
        }
        double err = std::abs(h(y) - anchored_psi(sys, y)[0]);
        double ratio = err / (y.norm() * d);
        if (!std::isfinite(ratio)) cert.bounded = false;
        cert.max_ratio = std::max(cert.max_ratio, ratio);
    }
    return cert;
}

}  // namespace ringswarm
