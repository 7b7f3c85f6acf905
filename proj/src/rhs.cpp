#include "ringswarm/rhs.hpp"

#include <cmath>

namespace ringswarm {

bool g_use_expanded_forms = false;

void RhsId::validate() const {
    switch (tag) {
        case Tag::rose_eps:
            if (epsilon <= 0) throw std::invalid_argument("rose_eps requires epsilon > 0");
            break;
        case Tag::abuw: {
            if (theta0.size() < 2) throw std::invalid_argument("abuw requires reference angles");
            double cr = 0, sr = 0;
            for (int k = 0; k < theta0.size(); ++k) {
                cr += std::cos(theta0[k]);
                sr += std::sin(theta0[k]);
            }
            if (std::hypot(cr, sr) > 1e-9)
                throw std::invalid_argument("abuw reference angles violate the zero-sum constraint");
            break;
        }
        default:
            break;
    }
}

SwarmState swarm_rhs(const SwarmState& state) {
    SwarmState d(state.n);
    Vector2d R = state.center_of_mass();
    for (int k = 0; k < state.n; ++k) {
        Vector2d v = state.vel(k);
        double speed2 = v.squaredNorm();
        d.set_pos(k, v);
        d.set_vel(k, (1.0 - speed2) * v - (state.pos(k) - R));
    }
    return d;
}

void swarm_rhs_flat(int n, const VectorXd& y, VectorXd& dydt) {
    dydt.resize(4 * n);
    double Rx = 0, Ry = 0;
    for (int k = 0; k < n; ++k) {
        Rx += y[2 * k];
        Ry += y[2 * k + 1];
    }
    Rx /= n;
    Ry /= n;
    for (int k = 0; k < n; ++k) {
        double x = y[2 * k], yy = y[2 * k + 1];
        double u = y[2 * n + 2 * k], v = y[2 * n + 2 * k + 1];
        double g = 1.0 - u * u - v * v;
        dydt[2 * k] = u;
        dydt[2 * k + 1] = v;
        dydt[2 * n + 2 * k] = g * u - (x - Rx);
        dydt[2 * n + 2 * k + 1] = g * v - (yy - Ry);
    }
}

Eigen::Vector4d decoupled_rhs(const Eigen::Vector4d& s) {
    double x = s[0], y = s[1], u = s[2], v = s[3];
    double g = 1.0 - u * u - v * v;
    return {u, v, g * u - x, g * v - y};
}

Eigen::Vector2d rose_rhs(const Eigen::Vector2d& p, RoseVariant variant, double epsilon) {
    double x = p[0], y = p[1];
    double g = 4 * x * x - x * x * x * x - y * y;
    if (variant == RoseVariant::eps) g += epsilon * epsilon;
    double fx, fy;
    if (!g_use_expanded_forms) {
        double x2 = x * x, y2 = y * y;
        fx = -(x2 * x2 - 6 * x2 * y2 + y2 * y2);
        fy = -4 * x * y * (x2 - y2);
    } else {
        fx = -(x * x * x * x) + 6 * x * x * y * y - y * y * y * y;
        fy = -(4 * x * x * x * y) + 4 * x * y * y * y;
    }
    return {g * fx, g * fy};
}

Eigen::Vector3d taylor3d_rhs(const Eigen::Vector3d& p) {
    double x = p[0], y = p[1], z = p[2];
    double q = y - x * std::sin(x);
    return {x * q, -y * y * (y - z), -z + x * q * (std::sin(x) + x * std::cos(x)) + x * std::sin(x)};
}

void rotating_frame_rhs(int n, const VectorXd& y, VectorXd& dydt) {
    dydt.resize(4 * n);
    auto X = y.segment(0, n);
    auto Y = y.segment(n, n);
    auto P = y.segment(2 * n, n);  // Xdot
    auto Q = y.segment(3 * n, n);  // Ydot
    double Xbar = X.mean(), Ybar = Y.mean();
    for (int k = 0; k < n; ++k) {
        double a = P[k] - Y[k];
        double b = X[k] + Q[k];
        double g = 1.0 - a * a - b * b;
        dydt[k] = P[k];
        dydt[n + k] = Q[k];
        dydt[2 * n + k] = 2 * Q[k] + g * a + Xbar;
        dydt[3 * n + k] = -2 * P[k] + g * b + Ybar;
    }
}

void nonlinear_UW_from_cs(const VectorXd& c, const VectorXd& s, VectorXd& U, VectorXd& W) {
    int n = static_cast<int>(c.size());
    U.resize(n);
    W.resize(n);
    for (int k = 0; k < n; ++k) {
        double ck = c[k], sk = s[k];
        if (!g_use_expanded_forms) {
            double q = (ck + 1) * (ck + 1) + sk * sk - 1;
            U[k] = -sk * q;
            W[k] = -(ck + 1) * q + 2 * ck;
        } else {
            double q = sk * sk + 2 * ck + ck * ck;
            U[k] = -q * sk;
            W[k] = -(sk * sk + ck * ck) - q * ck;
        }
    }
}

void nonlinear_UW(const VectorXd& abuw, VectorXd& U, VectorXd& W) {
    int n = static_cast<int>(abuw.size()) / 4;
    VectorXd c = abuw.segment(0, n) + abuw.segment(3 * n, n);  // a + w
    VectorXd s = abuw.segment(2 * n, n) - abuw.segment(n, n);  // u - b
    nonlinear_UW_from_cs(c, s, U, W);
}

void abuw_rhs(const VectorXd& theta0, const VectorXd& y, VectorXd& dydt) {
    int n = static_cast<int>(theta0.size());
    dydt.resize(4 * n);
    auto a = y.segment(0, n);
    auto b = y.segment(n, n);
    auto u = y.segment(2 * n, n);
    auto w = y.segment(3 * n, n);
    VectorXd U, W;
    VectorXd c = a + w, s = u - b;
    nonlinear_UW_from_cs(c, s, U, W);
    // coupling sums (1/n) sum_m cos(theta_m - theta_k) a_m etc.
    // cos(tm - tk) = cos tm cos tk + sin tm sin tk, so the sums factor through
    // the four scalar products below.
    double ca = 0, sa = 0, cb = 0, sb = 0;
    for (int m = 0; m < n; ++m) {
        double cm = std::cos(theta0[m]), sm = std::sin(theta0[m]);
        ca += cm * a[m];
        sa += sm * a[m];
        cb += cm * b[m];
        sb += sm * b[m];
    }
    for (int k = 0; k < n; ++k) {
        double ck = std::cos(theta0[k]), sk = std::sin(theta0[k]);
        double Ca_k = (ck * ca + sk * sa) / n;  // (C a)_k
        double Cb_k = (ck * cb + sk * sb) / n;
        double Sa_k = (ck * sa - sk * ca) / n;  // (S a)_k, S_km = sin(tm - tk)/n
        double Sb_k = (ck * sb - sk * cb) / n;
        dydt[k] = u[k];
        dydt[n + k] = w[k];
        dydt[2 * n + k] = 2 * w[k] + U[k] + Ca_k - Sb_k;
        // W absorbs exactly the nonlinear terms -(s^2+c^2) - (s^2+2c+c^2)c.
        dydt[3 * n + k] = -2 * u[k] - 2 * a[k] - 2 * w[k] + W[k] + Sa_k + Cb_k;
    }
}

RhsFn make_rhs(const RhsId& id) {
    id.validate();
    switch (id.tag) {
        case RhsId::Tag::swarm: {
            int n = id.n;
            return [n](double, const VectorXd& y, VectorXd& d) { swarm_rhs_flat(n, y, d); };
        }
        case RhsId::Tag::decoupled4d:
            return [](double, const VectorXd& y, VectorXd& d) {
                d = decoupled_rhs(Eigen::Vector4d(y));
            };
        case RhsId::Tag::rose_eps: {
            double eps = id.epsilon;
            return [eps](double, const VectorXd& y, VectorXd& d) {
                d = rose_rhs(Eigen::Vector2d(y), RoseVariant::eps, eps);
            };
        }
        case RhsId::Tag::rose_singular:
            return [](double, const VectorXd& y, VectorXd& d) {
                d = rose_rhs(Eigen::Vector2d(y), RoseVariant::singular);
            };
        case RhsId::Tag::taylor3d:
            return [](double, const VectorXd& y, VectorXd& d) {
                d = taylor3d_rhs(Eigen::Vector3d(y));
            };
        case RhsId::Tag::rotating_frame: {
            int n = id.n;
            return [n](double, const VectorXd& y, VectorXd& d) { rotating_frame_rhs(n, y, d); };
        }
        case RhsId::Tag::abuw: {
            VectorXd th = id.theta0;
            return [th](double, const VectorXd& y, VectorXd& d) { abuw_rhs(th, y, d); };
        }
    }
    throw std::logic_error("unreachable");
}

int state_dim(const RhsId& id) {
    switch (id.tag) {
        case RhsId::Tag::swarm:
        case RhsId::Tag::rotating_frame:
            return 4 * id.n;
        case RhsId::Tag::abuw:
            return 4 * static_cast<int>(id.theta0.size());
        case RhsId::Tag::decoupled4d:
            return 4;
        case RhsId::Tag::rose_eps:
        case RhsId::Tag::rose_singular:
            return 2;
        case RhsId::Tag::taylor3d:
            return 3;
    }
    throw std::logic_error("unreachable");
}

}  // namespace ringswarm
