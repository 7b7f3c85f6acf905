#pragma once

#include "ringswarm/types.hpp"

namespace ringswarm {

/// Per-particle coordinates seeded by reference ring angles theta0:
/// r_k = e^{i(t+theta0_k)}((a_k+1) + i b_k), u = da/dt, w = db/dt.
/// The seeding ring state itself sits at the origin.
struct AbuwVector {
    int n = 0;
    VectorXd a, b, u, w;  // each n

    AbuwVector() = default;
    explicit AbuwVector(int n_)
        : n(n_), a(VectorXd::Zero(n_)), b(VectorXd::Zero(n_)), u(VectorXd::Zero(n_)), w(VectorXd::Zero(n_)) {}

    VectorXd flat() const {
        VectorXd y(4 * n);
        y << a, b, u, w;
        return y;
    }
    static AbuwVector from_flat(const VectorXd& y) {
        if (y.size() % 4 != 0) throw std::invalid_argument("AbuwVector::from_flat: size not 4n");
        AbuwVector v(static_cast<int>(y.size()) / 4);
        v.a = y.segment(0, v.n);
        v.b = y.segment(v.n, v.n);
        v.u = y.segment(2 * v.n, v.n);
        v.w = y.segment(3 * v.n, v.n);
        return v;
    }
};

/// Coordinates adapted to the degenerate (two antipodal groups) case, n even.
/// Flat layout: [Z (n-1), beta (n-1), beta_dia (n-1), beta_star (n-1),
///               gamma1, gamma2, delta1, delta2].
struct DegenerateVector {
    int n = 0;  // even
    VectorXd Z, beta, beta_dia, beta_star;  // each n-1
    double gamma1 = 0, gamma2 = 0, delta1 = 0, delta2 = 0;

    DegenerateVector() = default;
    explicit DegenerateVector(int n_)
        : n(n_), Z(VectorXd::Zero(n_ - 1)), beta(VectorXd::Zero(n_ - 1)),
          beta_dia(VectorXd::Zero(n_ - 1)), beta_star(VectorXd::Zero(n_ - 1)) {}

    VectorXd flat() const {
        VectorXd y(4 * n);
        y << Z, beta, beta_dia, beta_star, gamma1, gamma2, delta1, delta2;
        return y;
    }
    static DegenerateVector from_flat(const VectorXd& y) {
        if (y.size() % 4 != 0) throw std::invalid_argument("DegenerateVector::from_flat: size not 4n");
        int n = static_cast<int>(y.size()) / 4;
        DegenerateVector v(n);
        int m = n - 1;
        v.Z = y.segment(0, m);
        v.beta = y.segment(m, m);
        v.beta_dia = y.segment(2 * m, m);
        v.beta_star = y.segment(3 * m, m);
        v.gamma1 = y[4 * m];
        v.gamma2 = y[4 * m + 1];
        v.delta1 = y[4 * m + 2];
        v.delta2 = y[4 * m + 3];
        return v;
    }
};

/// Deterministic basis matrices for the degenerate machinery.
struct BasisPack {
    int n = 0;      // even, >= 4
    int N = 0;      // n/2
    MatrixXd V;     // N x (N-1), orthonormal columns orthogonal to 1_N
    MatrixXd T;     // (N-1) x N, T V = I, T 1_N = 0
    MatrixXd Vbb;   // n x (n-1)
    MatrixXd Tbb;   // (n-1) x n, Tbb Vbb = I
    VectorXd X;     // n-vector (1..1, -1..-1)
    MatrixXd P;     // 4n x 4n
    MatrixXd Pinv;  // closed-form inverse of P
};

// Rotating frame r_k = e^{it}(X_k + iY_k); flat layout [X, Y, Xdot, Ydot].
VectorXd to_rotating_frame(const SwarmState& state, double t);
SwarmState from_rotating_frame(const VectorXd& xy, double t);

AbuwVector to_abuw(const SwarmState& state, const VectorXd& theta0, double t);
SwarmState from_abuw(const AbuwVector& v, const VectorXd& theta0, double t);

/// Rotate all angles by the smallest common shift theta* so that
/// sum_k sin(2 theta_k) = 0; the zero-sum constraint is preserved.
VectorXd normalize_ring_angles(const VectorXd& theta0);

BasisPack build_basis(int n);

DegenerateVector to_degenerate(const AbuwVector& v, const BasisPack& basis);
AbuwVector from_degenerate(const DegenerateVector& v, const BasisPack& basis);

}  // namespace ringswarm
