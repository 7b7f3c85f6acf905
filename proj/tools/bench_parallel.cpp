// Benchmark: OpenMP monitor attachment vs the serial reference path, and a
// consistency check that both produce identical channels.
#include "ringswarm/core.hpp"
#include "ringswarm/integrate.hpp"
#include "ringswarm/manifold.hpp"
#include "ringswarm/rhs.hpp"

#include <chrono>
#include <iostream>

using namespace ringswarm;

int main() {
    int n = 6;
    RingSpec spec;
    spec.n = n;
    spec.angles = degenerate_angles(n);
    spec.spin = 1;
    SwarmState st = make_ring_state(spec, 0.0);
    // small symmetric perturbation so the degenerate channels move
    for (int k = 0; k < n; ++k) st.positions[2 * k + 1] += 1e-2 * ((k % 2) ? 1 : -1);

    RhsId id;
    id.tag = RhsId::Tag::swarm;
    id.n = n;
    Trajectory traj = integrate_span(make_rhs(id), st.flat(), 0.0, 50.0, 2000);
    std::vector<std::string> channels = {"E", "DL", "DU", "zlast", "ring_dist"};

    auto run = [&](bool parallel) {
        g_parallel_monitors = parallel;
        Trajectory t = traj;
        auto t0 = std::chrono::steady_clock::now();
        attach_monitors(t, channels, TrajectorySystem::swarm, spec.angles);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::pair{dt, t};
    };

    auto [dt_serial, t_serial] = run(false);
    auto [dt_parallel, t_parallel] = run(true);

    double max_diff = 0;
    for (const auto& [name, chan] : t_serial.monitors)
        for (size_t i = 0; i < chan.size(); ++i)
            max_diff = std::max(max_diff, std::abs(chan[i] - t_parallel.monitors.at(name)[i]));

    std::cout << "samples: " << traj.size() << "\n"
              << "serial:   " << dt_serial << " s\n"
              << "parallel: " << dt_parallel << " s\n"
              << "speedup:  " << dt_serial / dt_parallel << "x\n"
              << "max channel difference: " << max_diff << "\n";
    return max_diff == 0.0 ? 0 : 1;
}
