#pragma once

#include "ringswarm/core.hpp"
#include "ringswarm/frames.hpp"
#include "ringswarm/rhs.hpp"
#include "ringswarm/spectral.hpp"

#include <random>

namespace ringswarm::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240817ull);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline VectorXd random_vector(int n, double scale) {
    VectorXd v(n);
    std::normal_distribution<double> g;
    for (int i = 0; i < n; ++i) v[i] = scale * g(rng());
    return v;
}

/// Random valid ring angles: uniform spaced + jitter, projected onto the
/// zero-sum constraint. Non-degenerate by construction for jitter < pi/4.
inline VectorXd random_ring_angles(int n, double jitter = 0.3) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        VectorXd raw(n);
        for (int k = 0; k < n; ++k) raw[k] = 2 * M_PI * k / n + uniform(-jitter, jitter);
        VectorXd th = project_ring_angles(raw);
        if (!is_degenerate(th)) return th;
    }
    throw std::runtime_error("random_ring_angles: could not find non-degenerate sample");
}

inline VectorXd random_normalized_ring_angles(int n, double jitter = 0.3) {
    return normalize_ring_angles(random_ring_angles(n, jitter));
}

/// Central finite-difference Jacobian of a flat RHS at y0.
inline MatrixXd fd_jacobian(const RhsFn& f, const VectorXd& y0, double h = 1e-5) {
    int d = static_cast<int>(y0.size());
    MatrixXd J(d, d);
    VectorXd fp(d), fm(d);
    for (int j = 0; j < d; ++j) {
        VectorXd p = y0, m = y0;
        p[j] += h;
        m[j] -= h;
        f(0.0, p, fp);
        f(0.0, m, fm);
        J.col(j) = (fp - fm) / (2 * h);
    }
    return J;
}

/// Chain-rule time derivative of the abuw coordinates of a swarm state
/// (complex-arithmetic route, independent of abuw_rhs).
inline VectorXd abuw_time_derivative(const SwarmState& st, const VectorXd& theta0, double t) {
    int n = st.n;
    SwarmState acc = swarm_rhs(st);  // (rdot, rddot)
    VectorXd d(4 * n);
    for (int k = 0; k < n; ++k) {
        double ph = t + theta0[k];
        std::complex<double> e(std::cos(ph), -std::sin(ph));  // e^{-i ph}
        std::complex<double> r(st.pos(k).x(), st.pos(k).y());
        std::complex<double> rd(st.vel(k).x(), st.vel(k).y());
        std::complex<double> rdd(acc.velocities[2 * k], acc.velocities[2 * k + 1]);
        std::complex<double> i(0, 1);
        std::complex<double> ab_dot = e * (rd - i * r);          // adot + i bdot
        std::complex<double> vv_dot = e * (rdd - i * rd);        // (udot-bdot) + i(adot+wdot)
        d[k] = ab_dot.real();
        d[n + k] = ab_dot.imag();
        d[2 * n + k] = vv_dot.real() + ab_dot.imag();
        d[3 * n + k] = vv_dot.imag() - ab_dot.real();
    }
    return d;
}

/// Chain-rule time derivative of the rotating-frame coordinates.
inline VectorXd rotating_time_derivative(const SwarmState& st, double t) {
    int n = st.n;
    SwarmState acc = swarm_rhs(st);
    VectorXd xy = to_rotating_frame(st, t);
    VectorXd d(4 * n);
    for (int k = 0; k < n; ++k) {
        std::complex<double> e(std::cos(t), -std::sin(t));
        std::complex<double> r(st.pos(k).x(), st.pos(k).y());
        std::complex<double> rd(st.vel(k).x(), st.vel(k).y());
        std::complex<double> rdd(acc.velocities[2 * k], acc.velocities[2 * k + 1]);
        std::complex<double> i(0, 1);
        std::complex<double> XY_dot = e * (rd - i * r);
        std::complex<double> V(xy[2 * n + k], xy[3 * n + k]);
        std::complex<double> V_dot = e * (rdd - i * rd) - i * XY_dot;
        d[k] = XY_dot.real();
        d[n + k] = XY_dot.imag();
        d[2 * n + k] = V_dot.real();
        d[3 * n + k] = V_dot.imag();
    }
    return d;
}

inline SwarmState random_swarm_state(int n, double scale = 1.0) {
    SwarmState st(n);
    st.positions = random_vector(2 * n, scale);
    st.velocities = random_vector(2 * n, scale);
    return st;
}

/// Multiset match of eigenvalue lists via greedy nearest pairing.
inline double eig_multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t bi = 0;
        for (size_t i = 0; i < b.size(); ++i) {
            double d = std::abs(x - b[i]);
            if (d < best) {
                best = d;
                bi = i;
            }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + bi);
    }
    return worst;
}

}  // namespace ringswarm::testing
