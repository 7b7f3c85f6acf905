#pragma once

#include "ringswarm/types.hpp"

#include <functional>

namespace ringswarm {

/// Identifies one of the vector fields in the catalog, with its parameters.
struct RhsId {
    enum class Tag { swarm, decoupled4d, rose_eps, rose_singular, taylor3d, rotating_frame, abuw };
    Tag tag = Tag::swarm;
    int n = 0;                 // swarm / rotating_frame / abuw
    double epsilon = 0.0;      // rose_eps
    VectorXd theta0;           // abuw reference angles

    void validate() const;
};

/// When true, RHS evaluations use the expanded polynomial forms instead of the
/// factored ones. Test-only switch for dual-evaluation checks.
extern bool g_use_expanded_forms;

// d/dt [positions, velocities] for the swarm model
// r''_k = (1-|r'_k|^2) r'_k - (r_k - R),  R = mean position.
SwarmState swarm_rhs(const SwarmState& state);
void swarm_rhs_flat(int n, const VectorXd& y, VectorXd& dydt);

// (x,y,u,v) -> (u, v, (1-u^2-v^2)u - x, (1-u^2-v^2)v - y)
Eigen::Vector4d decoupled_rhs(const Eigen::Vector4d& s);

enum class RoseVariant { eps, singular };
Eigen::Vector2d rose_rhs(const Eigen::Vector2d& p, RoseVariant variant, double epsilon = 0.0);

Eigen::Vector3d taylor3d_rhs(const Eigen::Vector3d& p);

// Rotating frame (X, Y, Xdot, Ydot), each block of n.
void rotating_frame_rhs(int n, const VectorXd& y, VectorXd& dydt);

// (a, b, u, w) blocks of n, seeded by ring angles theta0.
void abuw_rhs(const VectorXd& theta0, const VectorXd& y, VectorXd& dydt);

// Nonlinear parts of the abuw system: U_k = -s_k((c_k+1)^2 + s_k^2 - 1),
// W_k = -(c_k+1)((c_k+1)^2 + s_k^2 - 1) + 2 c_k, with s = u - b, c = a + w.
void nonlinear_UW(const VectorXd& abuw, VectorXd& U, VectorXd& W);
void nonlinear_UW_from_cs(const VectorXd& c, const VectorXd& s, VectorXd& U, VectorXd& W);

/// Generic flat-vector RHS for the integrator.
using RhsFn = std::function<void(double t, const VectorXd& y, VectorXd& dydt)>;

RhsFn make_rhs(const RhsId& id);
int state_dim(const RhsId& id);

}  // namespace ringswarm
