#include "helpers.hpp"

#include <doctest.h>

using namespace ringswarm;
using namespace ringswarm::testing;

TEST_CASE("poly helpers: multiply, power, roots, char_poly") {
    Poly p = {1, 1};          // 1 + x
    Poly q = {-2, 0, 1};      // x^2 - 2
    Poly pq = poly_mul(p, q);
    REQUIRE(pq.size() == 4);
    CHECK(pq[0] == -2);
    CHECK(pq[1] == -2);
    CHECK(pq[2] == 1);
    CHECK(pq[3] == 1);

    Poly cube = poly_pow(p, 3);  // (1+x)^3
    CHECK(cube[0] == 1);
    CHECK(cube[1] == 3);
    CHECK(cube[2] == 3);
    CHECK(cube[3] == 1);

    auto roots = poly_roots({-2, 0, 1});
    CHECK(eig_multiset_distance(roots, {Complex(std::sqrt(2.0), 0), Complex(-std::sqrt(2.0), 0)}) < 1e-12);

    MatrixXd A(2, 2);
    A << 2, 1, 0, 3;
    Poly cp = char_poly(A);  // (l-2)(l-3) = 6 - 5l + l^2
    CHECK(cp[0] == 6);
    CHECK(cp[1] == -5);
    CHECK(cp[2] == 1);
}

TEST_CASE("jacobian_abuw matches finite differences (symmetric n=3)") {
    VectorXd th(3);
    th << 0, 2 * M_PI / 3, 4 * M_PI / 3;
    MatrixXd J = jacobian_abuw(th);
    RhsFn f = [&](double, const VectorXd& y, VectorXd& d) { abuw_rhs(th, y, d); };
    MatrixXd Jfd = fd_jacobian(f, VectorXd::Zero(12));
    CHECK((J - Jfd).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("coupling matrices: degenerate form and kernel structure") {
    int n = 6, N = 3;
    auto [S, C] = coupling_SC(degenerate_angles(n));
    CHECK(S.lpNorm<Eigen::Infinity>() < 1e-15);
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
            double expect = ((k < N) == (m < N) ? 1.0 : -1.0) / n;
            CHECK(std::abs(C(k, m) - expect) < 1e-15);
        }

    // non-degenerate: Ker S = Ker C = {cbar, sbar}^perp
    VectorXd th = random_normalized_ring_angles(5);
    auto [S5, C5] = coupling_SC(th);
    VectorXd cbar(5), sbar(5);
    for (int k = 0; k < 5; ++k) {
        cbar[k] = std::cos(th[k]);
        sbar[k] = std::sin(th[k]);
    }
    // vectors orthogonal to both cbar and sbar are killed by S and C
    MatrixXd M(2, 5);
    M.row(0) = cbar.transpose();
    M.row(1) = sbar.transpose();
    Eigen::FullPivLU<MatrixXd> lu2(M);
    MatrixXd K = lu2.kernel();  // 5 x 3
    CHECK((S5 * K).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((C5 * K).lpNorm<Eigen::Infinity>() < 1e-14);
    // and S, C are rank <= 2
    CHECK(S5.fullPivLu().rank() <= 2);
    CHECK(C5.fullPivLu().rank() <= 2);
}

TEST_CASE("block restriction: J1 spectrum is theta-independent, J2 carries omega") {
    for (int n : {3, 4, 5, 6, 7, 8}) {
        VectorXd th = random_normalized_ring_angles(n, 0.2);
        auto [J1, J2] = restrict_blocks(th);
        REQUIRE(J1.rows() == 4 * (n - 2));
        REQUIRE(J2.rows() == 8);

        Poly cp = char_poly(J1);
        Poly expect = char_poly_J1_expected(n);
        REQUIRE(cp.size() == expect.size());
        for (size_t i = 0; i < cp.size(); ++i)
            CHECK(std::abs(cp[i] - expect[i]) < 1e-9 * std::max(1.0, std::abs(expect[i])));

        double om = omega_of(th);
        Poly cp2 = char_poly(J2);
        Poly expect2 = char_poly_J2_expected(om);
        REQUIRE(cp2.size() == expect2.size());
        for (size_t i = 0; i < cp2.size(); ++i)
            CHECK(std::abs(cp2[i] - expect2[i]) < 1e-10 * std::max(1.0, std::abs(expect2[i])));
    }
}

TEST_CASE("block eigenvalues reproduce the full Jacobian spectrum") {
    for (int n : {3, 5, 6}) {
        VectorXd th = random_normalized_ring_angles(n, 0.2);
        MatrixXd J = jacobian_abuw(th);
        auto [J1, J2] = restrict_blocks(th);
        auto full = eigenvalues(J);
        auto e1 = eigenvalues(J1);
        auto e2 = eigenvalues(J2);
        e1.insert(e1.end(), e2.begin(), e2.end());
        CHECK(eig_multiset_distance(full, e1) < 1e-8);
    }
}

TEST_CASE("restrict_blocks refuses unnormalized or degenerate angles") {
    VectorXd bad(4);
    bad << 0.3, 0.3, M_PI + 0.3, M_PI + 0.3;  // valid ring, sum sin 2theta != 0
    CHECK_THROWS_AS(restrict_blocks(bad), std::invalid_argument);
    CHECK_THROWS_AS(restrict_blocks(degenerate_angles(4)), std::invalid_argument);
}

TEST_CASE("hurwitz minors: pinned values and closed-form agreement") {
    auto m0 = hurwitz_minors(0.0);
    CHECK(m0[0] == 4.0);
    CHECK(m0[1] == 22.0);
    CHECK(m0[2] == 132.0);
    CHECK(m0[3] == doctest::Approx(1056.0).epsilon(1e-13));
    CHECK(m0[4] == doctest::Approx(8 * 333.0).epsilon(1e-13));
    CHECK(m0[5] == doctest::Approx(8 * 333.0).epsilon(1e-13));

    for (int i = 0; i <= 200; ++i) {
        double om = -0.5 + i / 200.0;
        auto a = hurwitz_minors(om);
        auto b = hurwitz_minors_closed_form(om);
        for (int j = 0; j < 6; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-10);
        if (std::abs(om) <= 0.499)
            for (int j = 0; j < 6; ++j) CHECK(a[j] > 0);
    }
    CHECK(std::abs(hurwitz_minors(0.5)[5]) < 1e-10);
    CHECK(std::abs(hurwitz_minors(-0.5)[5]) < 1e-10);
}

TEST_CASE("degenerate Jacobian block form and characteristic polynomial") {
    for (int n : {4, 6, 8}) {
        auto [Jdeg, Jtop] = jacobian_degenerate(n);
        Poly cp = char_poly(Jdeg);
        Poly expect = char_poly_Jdeg_expected(n);
        REQUIRE(cp.size() == expect.size());
        for (size_t i = 0; i < cp.size(); ++i)
            CHECK(cp[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    // J_top row pattern (0 I 0; 0 0 2I; -2I -2I -2I), blocks of n-1
    auto [Jdeg4, Jtop4] = jacobian_degenerate(4);
    int m = 3;
    MatrixXd expect = MatrixXd::Zero(3 * m, 3 * m);
    expect.block(0, m, m, m) = MatrixXd::Identity(m, m);
    expect.block(m, 2 * m, m, m) = 2 * MatrixXd::Identity(m, m);
    expect.block(2 * m, 0, m, m) = -2 * MatrixXd::Identity(m, m);
    expect.block(2 * m, m, m, m) = -2 * MatrixXd::Identity(m, m);
    expect.block(2 * m, 2 * m, m, m) = -2 * MatrixXd::Identity(m, m);
    CHECK((Jtop4 - expect).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("n=4 degenerate eigenvalue multiset") {
    auto [Jdeg, Jtop] = jacobian_degenerate(4);
    auto eigs = eigenvalues(Jdeg);
    auto cubic = poly_roots({4, 4, 2, 1});
    std::vector<Complex> expect;
    for (int i = 0; i < 3; ++i) expect.push_back(0);
    expect.push_back(Complex(0, 1));
    expect.push_back(Complex(0, -1));
    expect.push_back(-1);
    expect.push_back(-1);
    for (const auto& r : cubic)
        for (int i = 0; i < 3; ++i) expect.push_back(r);
    CHECK(eig_multiset_distance(eigs, expect) < 1e-7);
}

TEST_CASE("spectral gap: degenerate value and monotone decay toward omega = 1/2") {
    SpectralReport rep = analyze_degenerate(4);
    CHECK(rep.degenerate);
    // gap set by the cubic's real root pair -0.3509 +- 1.73i
    CHECK(rep.gap == doctest::Approx(0.35225).epsilon(1e-3));

    // The gap is positive on the whole open interval; past the real-root
    // bifurcation (omega ~ 0.35) the slow real root heads to zero
    // monotonically.
    for (double om = 0.0; om < 0.4999; om += 0.01) CHECK(spectral_gap(poly_roots(f_omega(om))) > 0);
    double prev = std::numeric_limits<double>::infinity();
    for (double om = 0.40; om < 0.4999; om += 0.005) {
        double branch = std::numeric_limits<double>::infinity();
        for (const auto& r : poly_roots(f_omega(om)))
            if (r.real() < -1e-9) branch = std::min(branch, -r.real());
        CHECK(branch <= prev + 1e-12);
        prev = branch;
    }
    auto half = poly_roots(f_omega(0.5));
    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& r : half) min_re = std::min(min_re, std::abs(r.real()));
    CHECK(min_re < 1e-8);  // zero eigenvalue at the boundary
}

TEST_CASE("analyze: non-degenerate report is internally consistent") {
    VectorXd th = random_ring_angles(5, 0.15);
    SpectralReport rep = analyze(th);
    CHECK(!rep.degenerate);
    CHECK(rep.J.rows() == 20);
    CHECK(std::abs(rep.omega) < 0.5);
    CHECK(rep.gap > 0);
    // characteristic polynomial of J factors as char_J1 * char_J2
    Poly prod = poly_mul(rep.char_J1, rep.char_J2);
    REQUIRE(prod.size() == rep.char_poly.size());
    for (size_t i = 0; i < prod.size(); ++i)
        CHECK(std::abs(prod[i] - rep.char_poly[i]) < 1e-7 * std::max(1.0, std::abs(prod[i])));
}
