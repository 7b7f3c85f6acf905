#include "helpers.hpp"
#include "ringswarm/integrate.hpp"
#include "ringswarm/manifold.hpp"

#include <doctest.h>

using namespace ringswarm;
using namespace ringswarm::testing;

namespace {

ZVector random_Z(int n, double scale) {
    return ZVector(n, random_vector(n - 1, scale));
}

}  // namespace

TEST_CASE("theta_of: sin branch and domain guard") {
    BasisPack basis = build_basis(4);
    ZVector z(4, VectorXd::Zero(3));
    ThetaVector th = theta_of(z, basis);
    CHECK(th.sin_t.norm() == 0.0);
    CHECK((th.cos_t - VectorXd::Ones(4)).norm() == 0.0);

    ZVector big(4, VectorXd::Constant(3, 2.0));
    CHECK_THROWS_AS(theta_of(big, basis), std::domain_error);
}

TEST_CASE("energy: zero at Z=0, zero on mirrored halves, dual route agreement") {
    BasisPack basis = build_basis(6);
    EnergyResult e0 = energy(ZVector(6, VectorXd::Zero(5)), basis);
    CHECK(e0.E == 0.0);
    CHECK(e0.alpha.norm() == 0.0);

    // mirrored groups: theta_k = theta_{N+k}; X is antisymmetric so E = 0.
    // Build Z from such a theta: sin Theta must lie in range(Vbb).
    VectorXd sins(6);
    sins << 0.1, -0.05, 0.02, 0.1, -0.05, 0.02;
    VectorXd Zm = basis.Tbb * sins;
    CHECK((basis.Vbb * Zm - sins).lpNorm<Eigen::Infinity>() < 1e-13);  // really in range
    EnergyResult em = energy(ZVector(6, Zm), basis);
    CHECK(std::abs(em.E) < 1e-14);

    for (int i = 0; i < 10; ++i) {
        EnergyResult e = energy(random_Z(6, 0.1), basis);
        CHECK(std::abs(e.E - e.E_decomp) < 1e-12);
    }
}

TEST_CASE("dispersions: split semantics and dual route") {
    BasisPack basis = build_basis(8);
    CHECK(dispersions(ZVector(8, VectorXd::Zero(7)), basis).DU == 0.0);

    // Z_U = 0, Z_L != 0
    ZVector z(8, VectorXd::Zero(7));
    z.Z.segment(3, 3) = random_vector(3, 0.2);
    Dispersions d = dispersions(z, basis);
    CHECK(d.DU == 0.0);
    CHECK(d.DL > 0.0);

    // matrix route vs sin-variance route: D_L = (1/N) sum (sin theta_{N+k} - z_last)^2
    for (int i = 0; i < 10; ++i) {
        ZVector zr = random_Z(8, 0.1);
        Dispersions dr = dispersions(zr, basis);
        ThetaVector th = theta_of(zr, basis);
        int N = 4;
        double DU = 0, DL = 0;
        double mu = 0, ml = 0;
        for (int k = 0; k < N; ++k) mu += th.sin_t[k] / N;
        for (int k = 0; k < N; ++k) ml += th.sin_t[N + k] / N;
        for (int k = 0; k < N; ++k) DU += (th.sin_t[k] - mu) * (th.sin_t[k] - mu) / N;
        for (int k = 0; k < N; ++k) DL += (th.sin_t[N + k] - zr.zlast()) * (th.sin_t[N + k] - zr.zlast()) / N;
        CHECK(std::abs(dr.DU - DU) < 1e-13);
        CHECK(std::abs(dr.DL - DL) < 1e-13);
    }
}

TEST_CASE("f1f2: zero at origin, O(|Z|) scaling, residual in the defining system") {
    BasisPack basis = build_basis(6);
    auto [f1, f2] = f1f2(ZVector(6, VectorXd::Zero(5)), basis);
    CHECK(f1 == 0.0);
    CHECK(f2 == 0.0);

    double C = 0;
    for (int i = 0; i < 20; ++i) {
        ZVector z = random_Z(6, 0.05);
        auto [g1, g2] = f1f2(z, basis);
        C = std::max(C, std::max(std::abs(g1), std::abs(g2)) / z.norm_l1());

        // residual of the defining 2x2 system
        ThetaVector th = theta_of(z, basis);
        int n = 6;
        double s2 = 0, ss = 0, c2 = 0;
        for (int k = 0; k < n; ++k) {
            s2 += 2 * th.sin_t[k] * th.cos_t[k] / n;
            ss += 2 * th.sin_t[k] * th.sin_t[k] / n;
            c2 += th.cos_t[k] * th.cos_t[k] / n;
        }
        double r1 = g1 * (1 + s2) + g2 * ss - (-s2 - 2 * ss);
        double r2 = 2 * c2 * g1 + (s2 - 1) * g2 - (2 - 2 * c2 - 2 * s2);
        CHECK(std::abs(r1) < 1e-12);
        CHECK(std::abs(r2) < 1e-12);
    }
    CHECK(C < 10.0);  // O(|Z|) with a modest constant

    // dyadic halving: the bound constant stays stable
    double prev = -1;
    ZVector dir = random_Z(6, 1.0);
    dir.Z /= dir.norm_l1();
    for (int k = 2; k <= 6; ++k) {
        ZVector z(6, dir.Z * std::pow(2.0, -k));
        auto [g1, g2] = f1f2(z, basis);
        double ratio = std::max(std::abs(g1), std::abs(g2)) / z.norm_l1();
        if (prev >= 0) CHECK(ratio < prev * 1.5 + 1e-9);
        prev = ratio;
    }
}

TEST_CASE("anchor_QZ: trivial point and stationarity at zero energy") {
    BasisPack basis = build_basis(6);
    CHECK(anchor_QZ(ZVector(6, VectorXd::Zero(5)), basis).flat().norm() == 0.0);

    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        ZVector z0 = random_Z(6, 0.08);
        ZVector z = project_zero_energy(z0, basis);
        CHECK(std::abs(energy(z, basis).E) < 1e-13);
        DegenerateVector q = anchor_QZ(z, basis);
        VectorXd rhs = reduced_rhs(reduced_coords(q), basis);
        if (rhs.lpNorm<Eigen::Infinity>() > 1e-11) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("reduced system is conjugate to the abuw flow on the delta-complement") {
    int n = 6;
    BasisPack basis = build_basis(n);
    VectorXd th0 = degenerate_angles(n);
    for (int i = 0; i < 5; ++i) {
        DegenerateVector d = DegenerateVector::from_flat(random_vector(4 * n, 0.05));
        d.delta1 = d.delta2 = 0;
        VectorXd y_abuw = from_degenerate(d, basis).flat();
        VectorXd dydt(4 * n);
        abuw_rhs(th0, y_abuw, dydt);
        DegenerateVector dd = DegenerateVector::from_flat(basis.Pinv * dydt);
        VectorXd red = reduced_rhs(reduced_coords(d), basis);
        CHECK((red - reduced_coords(dd)).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("gamma_on_constant: fixed point, trivial input, quadrature oracle") {
    for (int n : {4, 6}) {
        BasisPack basis = build_basis(n);

        // zero input is a fixed point with no linear part
        AffineInT g0 = gamma_on_constant(VectorXd::Zero(4 * n - 2), basis);
        CHECK(g0.constant.norm() == 0.0);
        CHECK(g0.linear.norm() == 0.0);

        // fixed point at the anchor of a zero-energy Z
        ZVector z = project_zero_energy(ZVector(n, random_vector(n - 1, 0.06)), basis);
        VectorXd q = reduced_coords(anchor_QZ(z, basis));
        AffineInT gq = gamma_on_constant(q, basis);
        CHECK((gq.constant - q).lpNorm<Eigen::Infinity>() < 1e-10);
        CHECK(gq.linear.lpNorm<Eigen::Infinity>() < 1e-10);

        // quadrature oracle on random constants
        for (int i = 0; i < 3; ++i) {
            VectorXd y = random_vector(4 * n - 2, 0.05);
            AffineInT g = gamma_on_constant(y, basis);
            for (double t : {-1.0, 0.0, 1.0}) {
                VectorXd quad = gamma_on_constant_quadrature(y, basis, t);
                CHECK((g.constant + t * g.linear - quad).lpNorm<Eigen::Infinity>() < 1e-9);
            }
        }
    }
}

TEST_CASE("gamma contraction distance at anchors scales like E |Z|_r") {
    BasisPack basis = build_basis(6);
    double C = 0;
    for (int i = 0; i < 30; ++i) {
        ZVector z = random_Z(6, 0.05);
        double E = energy(z, basis).E;
        if (std::abs(E) < 1e-12 || z.norm_r() < 1e-12) continue;
        VectorXd q = reduced_coords(anchor_QZ(z, basis));
        AffineInT g = gamma_on_constant(q, basis);
        double dist = (g.constant - q).lpNorm<Eigen::Infinity>() + g.linear.lpNorm<Eigen::Infinity>();
        C = std::max(C, dist / (std::abs(E) * z.norm_r()));
    }
    CHECK(C < 50.0);
}

TEST_CASE("reduced_flow_approx: zero-energy kill switch and D_U growth direction") {
    BasisPack basis = build_basis(6);
    ZVector z = project_zero_energy(random_Z(6, 0.05), basis);
    CHECK(reduced_flow_approx(z, basis).dZdt.norm() < 1e-13);

    // Z_L = 0, Z_U != 0, E > 0: leading dZ_U/dt = E A Z_U (expansion)
    for (int i = 0; i < 20; ++i) {
        ZVector zu(6, VectorXd::Zero(5));
        zu.Z.head(2) = random_vector(2, 0.1);
        double E = energy(zu, basis).E;
        if (E <= 0) continue;
        ReducedFlowApprox fl = reduced_flow_approx(zu, basis);
        double A = mean_cos(zu, basis);
        CHECK((fl.dZdt.head(2) - E * A * zu.ZU()).lpNorm<Eigen::Infinity>() < 1e-13);
        CHECK(fl.dZdt.tail(3).norm() < 1e-14);
    }
}

TEST_CASE("reduced_flow_approx oracle: full-system dZ/dt over a small-Z sweep") {
    int n = 4;
    BasisPack basis = build_basis(n);
    VectorXd th0 = degenerate_angles(n);
    ZVector dir(n, VectorXd::Zero(n - 1));
    dir.Z << 0.7, 0.9, 0.05;
    dir.Z /= dir.norm_l1();

    for (int k = 3; k <= 6; ++k) {
        ZVector z(n, dir.Z * std::pow(2.0, -k));
        DegenerateVector q = anchor_QZ(z, basis);
        VectorXd y = from_degenerate(q, basis).flat();
        VectorXd dydt(4 * n);
        abuw_rhs(th0, y, dydt);
        VectorXd dZ_full = (basis.Pinv * dydt).head(n - 1);
        ReducedFlowApprox fl = reduced_flow_approx(z, basis);
        double denom = std::max(fl.dZdt.norm(), 1e-300);
        double rel = (dZ_full - fl.dZdt).norm() / denom;
        // relative discrepancy bounded by C |Z|
        CHECK(rel < 40.0 * z.norm_l1());
    }
}

TEST_CASE("lyapunov_decoupled: pinned values and trajectory identity") {
    LyapunovEval a = lyapunov_decoupled({1, 0, 0, 1});
    CHECK(a.L == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a.Ldot == 0.0);
    CHECK(a.region == Region::omega_plus);

    LyapunovEval b = lyapunov_decoupled({2, 0, 0, 1});
    CHECK(b.L == doctest::Approx(5.0 - std::log(4.0)).epsilon(1e-15));
    CHECK(b.Ldot == 0.0);

    CHECK(lyapunov_decoupled({0.5, 0.5, 0.5, 0.5}).region == Region::boundary);
    CHECK(std::isinf(lyapunov_decoupled({0.5, 0.5, 0.5, 0.5}).L));

    // chain-rule derivative along the flow matches the closed form
    RhsId id;
    id.tag = RhsId::Tag::decoupled4d;
    RhsFn f = make_rhs(id);
    for (int i = 0; i < 10; ++i) {
        Eigen::Vector4d s(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
        double cross = s[3] * s[0] - s[2] * s[1];
        if (std::abs(cross) < 0.1) continue;
        VectorXd d(4);
        f(0, s, d);
        double x = s[0], y = s[1], u = s[2], v = s[3];
        double chain = 2 * x * d[0] + 2 * y * d[1] + 2 * u * d[2] + 2 * v * d[3] -
                       2 * (d[3] * x + v * d[0] - d[2] * y - u * d[1]) / cross;
        CHECK(std::abs(chain - lyapunov_decoupled(s).Ldot) < 1e-10);
    }
}

TEST_CASE("attach_monitors: channel validation and exact degenerate start") {
    int n = 4;
    VectorXd th0 = degenerate_angles(n);
    RingSpec spec;
    spec.n = n;
    spec.angles = th0;
    RhsId id;
    id.tag = RhsId::Tag::swarm;
    id.n = n;
    Trajectory traj = integrate_span(make_rhs(id), make_ring_state(spec, 0).flat(), 0, 5, 11);
    REQUIRE(traj.complete);

    CHECK_THROWS_AS(attach_monitors(traj, {"L"}, TrajectorySystem::swarm, th0), std::invalid_argument);
    CHECK_THROWS_AS(attach_monitors(traj, {"nope"}, TrajectorySystem::swarm, th0), std::invalid_argument);

    attach_monitors(traj, {"E", "DL", "DU", "zlast", "A", "ring_dist"}, TrajectorySystem::swarm, th0);
    for (double e : traj.monitors.at("E")) CHECK(std::abs(e) < 1e-9);
    for (double d : traj.monitors.at("DL")) CHECK(std::abs(d) < 1e-9);
    for (double d : traj.monitors.at("DU")) CHECK(std::abs(d) < 1e-9);
    for (double r : traj.monitors.at("ring_dist")) CHECK(r < 1e-7);
    for (double a : traj.monitors.at("A")) CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("attach_monitors: serial and parallel paths agree") {
    int n = 6;
    VectorXd th0 = degenerate_angles(n);
    RingSpec spec;
    spec.n = n;
    spec.angles = project_ring_angles(th0 + random_vector(n, 0.02));
    RhsId id;
    id.tag = RhsId::Tag::swarm;
    id.n = n;
    Trajectory t1 = integrate_span(make_rhs(id), make_ring_state(spec, 0).flat(), 0, 8, 64);
    REQUIRE(t1.complete);
    Trajectory t2 = t1;
    std::vector<std::string> ch = {"E", "DL", "DU", "zlast", "sqrtDL_plus", "sqrtDL_minus"};
    bool saved = g_parallel_monitors;
    g_parallel_monitors = false;
    attach_monitors(t1, ch, TrajectorySystem::swarm, th0);
    g_parallel_monitors = true;
    attach_monitors(t2, ch, TrajectorySystem::swarm, th0);
    g_parallel_monitors = saved;
    for (const auto& name : ch) {
        const auto& a = t1.monitors.at(name);
        const auto& b = t2.monitors.at(name);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("taylor anchored system: psi closed form, equilibrium exactness, certificate") {
    AnchoredSystem sys = taylor_anchored_system();

    CHECK(anchored_psi(sys, VectorXd::Zero(2)).norm() == 0.0);

    double maxerr = 0;
    for (int i = 0; i < 50; ++i) {
        VectorXd y(2);
        y << uniform(-1, 1), uniform(-1, 1);
        VectorXd psi = anchored_psi(sys, y);
        maxerr = std::max(maxerr, std::abs(psi[0] - taylor_psi_analytic(y[0], y[1])));
    }
    CHECK(maxerr < 1e-10);

    // equilibrium points (x0, x0 sin x0): psi equals h there
    for (int i = 0; i < 10; ++i) {
        double x0 = uniform(-1.2, 1.2);
        VectorXd y = sys.equilibrium_curve(x0);
        VectorXd psi = anchored_psi(sys, y);
        CHECK(std::abs(psi[0] - taylor_h_analytic(y[0], y[1])) < 1e-12);
    }

    std::vector<VectorXd> samples;
    for (int i = 0; i < 200; ++i) {
        VectorXd y(2);
        y << uniform(-1, 1), uniform(-1, 1);
        samples.push_back(y);
    }
    // exact on-curve samples must be excluded, not counted as unbounded
    samples.push_back(sys.equilibrium_curve(0.5));
    auto h = [](const VectorXd& y) { return taylor_h_analytic(y[0], y[1]); };
    auto dist = [&](const VectorXd& y) {
        double best = std::numeric_limits<double>::infinity();
        for (double x0 = -2.0; x0 <= 2.0; x0 += 1e-3)
            best = std::min(best, std::hypot(y[0] - x0, y[1] - x0 * std::sin(x0)));
        // exact on-curve samples must report distance zero
        best = std::min(best, std::hypot(y[0] - 0.5, y[1] - 0.5 * std::sin(0.5)));
        return best;
    };
    PsiCertificate cert = psi_error_certificate(sys, samples, h, dist);
    CHECK(cert.bounded);
    CHECK(cert.excluded >= 1);
    CHECK(cert.max_ratio < 100.0);
}

TEST_CASE("psi error ratio scales down with ||y|| on a dyadic sequence") {
    AnchoredSystem sys = taylor_anchored_system();
    VectorXd dir(2);
    dir << 0.8, 0.6;
    auto curve_dist = [&](const VectorXd& y) {
        double best = std::numeric_limits<double>::infinity();
        for (double x0 = -2.0; x0 <= 2.0; x0 += 1e-4) {
            double ex = x0, ey = x0 * std::sin(x0);
            best = std::min(best, std::hypot(y[0] - ex, y[1] - ey));
        }
        return best;
    };
    double prev = -1;
    for (int k = 1; k <= 5; ++k) {
        VectorXd y = dir * std::pow(2.0, -k);
        double err = std::abs(taylor_h_analytic(y[0], y[1]) - anchored_psi(sys, y)[0]);
        double ratio = err / (y.norm() * curve_dist(y));
        if (prev >= 0) CHECK(ratio < prev * 1.2 + 1e-12);
        prev = ratio;
    }
}
