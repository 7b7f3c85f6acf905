#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringswarm {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;
using Complex = std::complex<double>;

/// Full phase point of the n-particle planar swarm.
/// Layout: positions and velocities are 2n-vectors, interleaved (x1,y1,x2,y2,...).
struct SwarmState {
    int n = 0;
    VectorXd positions;   // 2n
    VectorXd velocities;  // 2n

    SwarmState() = default;
    SwarmState(int n_) : n(n_), positions(VectorXd::Zero(2 * n_)), velocities(VectorXd::Zero(2 * n_)) {}

    Vector2d pos(int k) const { return positions.segment<2>(2 * k); }
    Vector2d vel(int k) const { return velocities.segment<2>(2 * k); }
    void set_pos(int k, const Vector2d& p) { positions.segment<2>(2 * k) = p; }
    void set_vel(int k, const Vector2d& v) { velocities.segment<2>(2 * k) = v; }

    Vector2d center_of_mass() const {
        Vector2d c = Vector2d::Zero();
        for (int k = 0; k < n; ++k) c += pos(k);
        return c / n;
    }

    bool finite() const { return positions.allFinite() && velocities.allFinite(); }

    /// Flat 4n-vector [positions, velocities] for the integrator.
    VectorXd flat() const {
        VectorXd y(4 * n);
        y << positions, velocities;
        return y;
    }
    static SwarmState from_flat(int n, const VectorXd& y) {
        if (y.size() != 4 * n) throw std::invalid_argument("SwarmState::from_flat: size mismatch");
        SwarmState s(n);
        s.positions = y.head(2 * n);
        s.velocities = y.tail(2 * n);
        return s;
    }
};

/// Ring-state configuration: r_k(t) = c + e^{i eps t} e^{i theta_k},
/// with the zero-sum constraint sum_k e^{i theta_k} = 0.
struct RingSpec {
    int n = 0;
    VectorXd angles;  // n, radians
    Vector2d center = Vector2d::Zero();
    int spin = +1;  // +1 or -1

    /// |sum_k e^{i angles_k}|, the zero-sum constraint residual.
    double constraint_residual() const {
        double cr = 0, sr = 0;
        for (int k = 0; k < n; ++k) {
            cr += std::cos(angles[k]);
            sr += std::sin(angles[k]);
        }
        return std::hypot(cr, sr);
    }
};

constexpr double kTolRing = 1e-12;

enum class SystemKind { swarm, decoupled, rose_eps, rose_singular, taylor_example };

/// One simulation run: which system, where it starts, how long, step control,
/// which monitor channels to attach.
struct Scenario {
    SystemKind system = SystemKind::swarm;
    int n = 0;
    std::optional<SwarmState> initial;       // swarm
    std::optional<VectorXd> initial_lowdim;  // decoupled / rose / taylor
    std::optional<RingSpec> ring;            // ring-state initial condition
    double t_end = 10.0;
    double dt_init = 1e-3;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double rose_epsilon = 0.1;  // rose_eps only
    std::vector<std::string> monitors;
    std::uint64_t seed = 0;

    void validate() const {
        if (t_end <= 0) throw std::invalid_argument("Scenario: t_end must be positive");
        if (abs_tol <= 0 || rel_tol <= 0) throw std::invalid_argument("Scenario: tolerances must be positive");
    }
};

/// Time-stamped states plus named monitor channels aligned with the times.
struct Trajectory {
    std::vector<double> times;
    std::vector<VectorXd> states;
    std::map<std::string, std::vector<double>> monitors;

    size_t size() const { return times.size(); }
    bool complete = true;        // false if the integrator bailed out early
    std::string failure_reason;  // set when complete == false
};

}  // namespace ringswarm
