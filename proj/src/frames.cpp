#include "ringswarm/frames.hpp"

#include <cmath>

namespace ringswarm {

VectorXd to_rotating_frame(const SwarmState& state, double t) {
    int n = state.n;
    VectorXd out(4 * n);
    double ct = std::cos(t), st = std::sin(t);
    for (int k = 0; k < n; ++k) {
        // X + iY = e^{-it} r
        Vector2d r = state.pos(k), v = state.vel(k);
        double X = ct * r.x() + st * r.y();
        double Y = -st * r.x() + ct * r.y();
        // Xdot + iYdot = e^{-it} rdot - i(X + iY)
        double vx = ct * v.x() + st * v.y();
        double vy = -st * v.x() + ct * v.y();
        out[k] = X;
        out[n + k] = Y;
        out[2 * n + k] = vx + Y;
        out[3 * n + k] = vy - X;
    }
    return out;
}

SwarmState from_rotating_frame(const VectorXd& xy, double t) {
    int n = static_cast<int>(xy.size()) / 4;
    SwarmState s(n);
    double ct = std::cos(t), st = std::sin(t);
    for (int k = 0; k < n; ++k) {
        double X = xy[k], Y = xy[n + k], Xd = xy[2 * n + k], Yd = xy[3 * n + k];
        s.set_pos(k, {ct * X - st * Y, st * X + ct * Y});
        // rdot = e^{it}(Xdot + iYdot + i(X + iY))
        double vx = Xd - Y, vy = Yd + X;
        s.set_vel(k, {ct * vx - st * vy, st * vx + ct * vy});
    }
    return s;
}

AbuwVector to_abuw(const SwarmState& state, const VectorXd& theta0, double t) {
    int n = state.n;
    if (theta0.size() != n) throw std::invalid_argument("to_abuw: angle count mismatch");
    AbuwVector out(n);
    for (int k = 0; k < n; ++k) {
        double ph = t + theta0[k];
        double c = std::cos(ph), s = std::sin(ph);
        Vector2d r = state.pos(k), v = state.vel(k);
        // (a+1) + ib = e^{-i ph} r
        double re = c * r.x() + s * r.y();
        double im = -s * r.x() + c * r.y();
        out.a[k] = re - 1.0;
        out.b[k] = im;
        // e^{-i ph} rdot = (u - b) + i(a + 1 + w)
        double vre = c * v.x() + s * v.y();
        double vim = -s * v.x() + c * v.y();
        out.u[k] = vre + out.b[k];
        out.w[k] = vim - (out.a[k] + 1.0);
    }
    return out;
}

SwarmState from_abuw(const AbuwVector& v, const VectorXd& theta0, double t) {
    int n = v.n;
    if (theta0.size() != n) throw std::invalid_argument("from_abuw: angle count mismatch");
    SwarmState s(n);
    for (int k = 0; k < n; ++k) {
        double ph = t + theta0[k];
        double c = std::cos(ph), sn = std::sin(ph);
        double re = v.a[k] + 1.0, im = v.b[k];
        s.set_pos(k, {c * re - sn * im, sn * re + c * im});
        double vre = v.u[k] - v.b[k];
        double vim = v.a[k] + 1.0 + v.w[k];
        s.set_vel(k, {c * vre - sn * vim, sn * vre + c * vim});
    }
    return s;
}

VectorXd normalize_ring_angles(const VectorXd& theta0) {
    double s2 = 0, c2 = 0;
    for (int k = 0; k < theta0.size(); ++k) {
        s2 += std::sin(2 * theta0[k]);
        c2 += std::cos(2 * theta0[k]);
    }
    if (std::hypot(s2, c2) < 1e-14) return theta0;  // condition holds for every shift
    // Need sum sin(2(theta+t*)) = c2 sin(2t*) + s2 cos(2t*) = 0.
    double base = 0.5 * std::atan2(-s2, c2);
    double best = base;
    for (int k = -2; k <= 2; ++k) {
        double cand = base + k * M_PI / 2;
        if (std::abs(cand) < std::abs(best)) best = cand;
    }
    return theta0.array() + best;
}

BasisPack build_basis(int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("build_basis: n must be even, n >= 4");
    BasisPack p;
    p.n = n;
    p.N = n / 2;
    int N = p.N;

    // Gram-Schmidt on the difference vectors e_k - e_{k+1}.
    p.V = MatrixXd::Zero(N, N - 1);
    for (int j = 0; j < N - 1; ++j) {
        VectorXd col = VectorXd::Zero(N);
        col[j] = 1;
        col[j + 1] = -1;
        for (int i = 0; i < j; ++i) col -= p.V.col(i).dot(col) * p.V.col(i);
        p.V.col(j) = col / col.norm();
    }
    p.T = p.V.transpose();  // orthonormal columns, so this inverts on range(V)

    p.Vbb = MatrixXd::Zero(n, n - 1);
    p.Vbb.block(0, 0, N, N - 1) = p.V;
    p.Vbb.block(N, N - 1, N, N - 1) = p.V;
    p.Vbb.col(n - 2).setOnes();

    p.Tbb = MatrixXd::Zero(n - 1, n);
    p.Tbb.block(0, 0, N - 1, N) = p.T;
    p.Tbb.block(N - 1, N, N - 1, N) = p.T;
    p.Tbb.row(n - 2).setConstant(1.0 / n);

    p.X = VectorXd::Ones(n);
    p.X.tail(N).setConstant(-1.0);

    int m = n - 1;
    p.P = MatrixXd::Zero(4 * n, 4 * n);
    auto row = [&](int blk) { return blk * n; };      // a,b,u,w row offsets
    auto col = [&](int blk) { return blk * m; };      // Z,beta,beta_dia,beta_star col offsets
    int cg1 = 4 * m, cg2 = 4 * m + 1, cd1 = 4 * m + 2, cd2 = 4 * m + 3;
    // a = Vbb beta - gamma1 X - gamma2 X - delta2 X
    p.P.block(row(0), col(1), n, m) = p.Vbb;
    p.P.block(row(0), cg1, n, 1) = -p.X;
    p.P.block(row(0), cg2, n, 1) = -p.X;
    p.P.block(row(0), cd2, n, 1) = -p.X;
    // b = Vbb Z + (1/2) Vbb beta_dia - gamma2 X + delta1 X
    p.P.block(row(1), col(0), n, m) = p.Vbb;
    p.P.block(row(1), col(2), n, m) = 0.5 * p.Vbb;
    p.P.block(row(1), cg2, n, 1) = -p.X;
    p.P.block(row(1), cd1, n, 1) = p.X;
    // u = Vbb beta_dia + gamma1 X + delta1 X
    p.P.block(row(2), col(2), n, m) = p.Vbb;
    p.P.block(row(2), cg1, n, 1) = p.X;
    p.P.block(row(2), cd1, n, 1) = p.X;
    // w = Vbb beta_star + gamma2 X + delta2 X
    p.P.block(row(3), col(3), n, m) = p.Vbb;
    p.P.block(row(3), cg2, n, 1) = p.X;
    p.P.block(row(3), cd2, n, 1) = p.X;

    p.Pinv = MatrixXd::Zero(4 * n, 4 * n);
    VectorXd Xn = p.X / n;
    // Z = Tbb b - (1/2) Tbb u
    p.Pinv.block(col(0), row(1), m, n) = p.Tbb;
    p.Pinv.block(col(0), row(2), m, n) = -0.5 * p.Tbb;
    // beta = Tbb a
    p.Pinv.block(col(1), row(0), m, n) = p.Tbb;
    // beta_dia = Tbb u; beta_star = Tbb w
    p.Pinv.block(col(2), row(2), m, n) = p.Tbb;
    p.Pinv.block(col(3), row(3), m, n) = p.Tbb;
    // gamma1 = -(1/n) X.(a + w)
    p.Pinv.block(cg1, row(0), 1, n) = -Xn.transpose();
    p.Pinv.block(cg1, row(3), 1, n) = -Xn.transpose();
    // gamma2 = (1/n) X.(a - b + u + w)
    p.Pinv.block(cg2, row(0), 1, n) = Xn.transpose();
    p.Pinv.block(cg2, row(1), 1, n) = -Xn.transpose();
    p.Pinv.block(cg2, row(2), 1, n) = Xn.transpose();
    p.Pinv.block(cg2, row(3), 1, n) = Xn.transpose();
    // delta1 = (1/n) X.(a + u + w)
    p.Pinv.block(cd1, row(0), 1, n) = Xn.transpose();
    p.Pinv.block(cd1, row(2), 1, n) = Xn.transpose();
    p.Pinv.block(cd1, row(3), 1, n) = Xn.transpose();
    // delta2 = (1/n) X.(-a + b - u)
    p.Pinv.block(cd2, row(0), 1, n) = -Xn.transpose();
    p.Pinv.block(cd2, row(1), 1, n) = Xn.transpose();
    p.Pinv.block(cd2, row(2), 1, n) = -Xn.transpose();
    return p;
}

DegenerateVector to_degenerate(const AbuwVector& v, const BasisPack& basis) {
    if (v.n != basis.n) throw std::invalid_argument("to_degenerate: dimension mismatch");
    return DegenerateVector::from_flat(basis.Pinv * v.flat());
}

AbuwVector from_degenerate(const DegenerateVector& v, const BasisPack& basis) {
    if (v.n != basis.n) throw std::invalid_argument("from_degenerate: dimension mismatch");
    return AbuwVector::from_flat(basis.P * v.flat());
}

}  // namespace ringswarm
