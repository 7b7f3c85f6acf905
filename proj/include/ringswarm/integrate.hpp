#pragma once

#include "ringswarm/rhs.hpp"
#include "ringswarm/types.hpp"

namespace ringswarm {

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double dt_init = 1e-3;
    double dt_max = 0;       // 0 = no cap
    double dt_min = 1e-14;   // below this the step is declared dead
    long max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4). Samples the solution at the requested times
// (must be increasing, sample_times.front() >= t0) via 4th-order Hermite
// interpolation on accepted steps. On step underflow or non-finite state the
// returned trajectory has complete=false, a failure_reason, and whatever
// samples were reached.
Trajectory integrate(const RhsFn& f, const VectorXd& y0, double t0,
                     const std::vector<double>& sample_times,
                     const StepControl& ctrl = {});

// Convenience: uniform sampling of [t0, t_end] with n_samples points
// (endpoints included).
Trajectory integrate_span(const RhsFn& f, const VectorXd& y0, double t0,
                          double t_end, int n_samples,
                          const StepControl& ctrl = {});

std::vector<double> linspace(double a, double b, int n);

}  // namespace ringswarm
