#pragma once

#include "ringswarm/types.hpp"

namespace ringswarm {

/// r_k(t) = c + e^{i spin t} e^{i theta_k}, rdot_k = spin i e^{i spin t} e^{i theta_k}.
/// Throws if the spec violates the zero-sum constraint beyond kTolRing.
SwarmState make_ring_state(const RingSpec& spec, double t);

/// Nearest angle vector satisfying sum_k e^{i theta_k} = 0, found by Newton
/// with minimal-norm updates on the two real constraint equations.
VectorXd project_ring_angles(const VectorXd& raw_angles);

struct RingFit {
    RingSpec spec;
    double distance = 0;  // max-norm deviation over positions and velocities
};

/// Best-fitting ring state (angles on the constraint set, center, spin),
/// Gauss-Newton seeded from polar angles about the empirical center.
RingFit nearest_ring_state(const SwarmState& state);

/// Shorthand: nearest_ring_state(state).distance.
double ring_distance(const SwarmState& state);

/// Angles (0,...,0, pi,...,pi) of the degenerate ring state, n even.
VectorXd degenerate_angles(int n);

/// All particles at r_k = v t + d with |v| = 1.
SwarmState make_translating_state(int n, const Vector2d& v, const Vector2d& d, double t);

}  // namespace ringswarm
