#include "ringswarm/core.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ringswarm {

SwarmState make_ring_state(const RingSpec& spec, double t) {
    if (spec.n < 2) throw std::invalid_argument("make_ring_state: n must be >= 2");
    if (spec.spin != 1 && spec.spin != -1) throw std::invalid_argument("make_ring_state: spin must be +1 or -1");
    if (spec.constraint_residual() > kTolRing)
        throw std::invalid_argument("make_ring_state: angles violate the zero-sum constraint, residual " +
                                    std::to_string(spec.constraint_residual()));
    SwarmState s(spec.n);
    for (int k = 0; k < spec.n; ++k) {
        double ph = spec.spin * t + spec.angles[k];
        s.set_pos(k, spec.center + Vector2d(std::cos(ph), std::sin(ph)));
        s.set_vel(k, spec.spin * Vector2d(-std::sin(ph), std::cos(ph)));
    }
    return s;
}

VectorXd project_ring_angles(const VectorXd& raw_angles) {
    int n = static_cast<int>(raw_angles.size());
    if (n < 2) throw std::invalid_argument("project_ring_angles: need n >= 2");
    VectorXd th = raw_angles;
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        Vector2d g(0, 0);
        Eigen::Matrix2Xd Jc(2, n);
        for (int k = 0; k < n; ++k) {
            double c = std::cos(th[k]), s = std::sin(th[k]);
            g[0] += c;
            g[1] += s;
            Jc(0, k) = -s;
            Jc(1, k) = c;
        }
        best = std::min(best, g.norm());
        if (g.norm() <= 1e-14) return th;
        Eigen::Matrix2d JJt = Jc * Jc.transpose();
        // minimal-norm Newton step for the underdetermined constraint system
        th -= Jc.transpose() * JJt.ldlt().solve(g);
    }
    throw std::runtime_error("project_ring_angles: Newton did not converge, best residual " +
                             std::to_string(best));
}

namespace {

double fit_distance(const SwarmState& state, const RingSpec& spec) {
    SwarmState ideal = make_ring_state(spec, 0.0);
    double d = 0;
    for (int i = 0; i < 2 * state.n; ++i) {
        d = std::max(d, std::abs(state.positions[i] - ideal.positions[i]));
        d = std::max(d, std::abs(state.velocities[i] - ideal.velocities[i]));
    }
    return d;
}

// Projection with a fallback: clustered seeds (e.g. all particles at one
// point) make the constraint Newton singular; spreading the seed uniformly
// always yields a feasible start.
VectorXd project_or_spread(VectorXd psi) {
    try {
        return project_ring_angles(psi);
    } catch (const std::runtime_error&) {
        int n = static_cast<int>(psi.size());
        for (int k = 0; k < n; ++k) psi[k] += 2 * M_PI * k / n;
        return project_ring_angles(psi);
    }
}

RingFit fit_with_spin(const SwarmState& state, int spin) {
    int n = state.n;
    Vector2d c = state.center_of_mass();
    VectorXd psi(n);
    for (int k = 0; k < n; ++k) {
        Vector2d r = state.pos(k) - c;
        psi[k] = (r.norm() > 1e-12) ? std::atan2(r.y(), r.x()) : 0.0;
    }
    psi = project_or_spread(psi);

    // Gauss-Newton on the 4n residuals (positions and velocities vs the
    // exact ring state), parameters (psi, c); psi re-projected onto the
    // constraint manifold after every step.
    VectorXd res(4 * n);
    MatrixXd Jr(4 * n, n + 2);
    for (int it = 0; it < 60; ++it) {
        Jr.setZero();
        for (int k = 0; k < n; ++k) {
            double cp = std::cos(psi[k]), sp = std::sin(psi[k]);
            res[4 * k + 0] = state.pos(k).x() - c.x() - cp;
            res[4 * k + 1] = state.pos(k).y() - c.y() - sp;
            res[4 * k + 2] = state.vel(k).x() - spin * (-sp);
            res[4 * k + 3] = state.vel(k).y() - spin * cp;
            Jr(4 * k + 0, k) = sp;          // d res / d psi_k
            Jr(4 * k + 1, k) = -cp;
            Jr(4 * k + 2, k) = spin * cp;
            Jr(4 * k + 3, k) = spin * sp;
            Jr(4 * k + 0, n) = -1;          // d res / d c
            Jr(4 * k + 1, n + 1) = -1;
        }
        VectorXd step = (Jr.transpose() * Jr + 1e-12 * MatrixXd::Identity(n + 2, n + 2))
                            .ldlt()
                            .solve(Jr.transpose() * res);
        psi -= step.head(n);
        c -= step.tail<2>();
        psi = project_or_spread(psi);
        if (step.norm() < 1e-14) break;
    }
    RingFit fit;
    fit.spec.n = n;
    fit.spec.angles = psi;
    fit.spec.center = c;
    fit.spec.spin = spin;
    fit.distance = fit_distance(state, fit.spec);
    return fit;
}

}  // namespace

RingFit nearest_ring_state(const SwarmState& state) {
    RingFit plus = fit_with_spin(state, +1);
    RingFit minus = fit_with_spin(state, -1);
    return plus.distance <= minus.distance ? plus : minus;
}

double ring_distance(const SwarmState& state) { return nearest_ring_state(state).distance; }

VectorXd degenerate_angles(int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("degenerate_angles: n must be even, n >= 4");
    VectorXd th = VectorXd::Zero(n);
    th.tail(n / 2).setConstant(M_PI);
    return th;
}

SwarmState make_translating_state(int n, const Vector2d& v, const Vector2d& d, double t) {
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("make_translating_state: |v| must be 1");
    SwarmState s(n);
    for (int k = 0; k < n; ++k) {
        s.set_pos(k, v * t + d);
        s.set_vel(k, v);
    }
    return s;
}

}  // namespace ringswarm
