#pragma once

#include "ringswarm/frames.hpp"
#include "ringswarm/types.hpp"

#include <functional>

namespace ringswarm {

/// Slow coordinate Z with the (Z_U, Z_L, z_last) split, n even.
struct ZVector {
    int n = 0;     // particle count (even)
    VectorXd Z;    // n-1

    ZVector() = default;
    ZVector(int n_, VectorXd z) : n(n_), Z(std::move(z)) {
        if (Z.size() != n - 1) throw std::invalid_argument("ZVector: size must be n-1");
    }

    int N() const { return n / 2; }
    VectorXd ZU() const { return Z.head(N() - 1); }
    VectorXd ZL() const { return Z.segment(N() - 1, N() - 1); }
    double zlast() const { return Z[n - 2]; }

    double norm_l1() const { return Z.lpNorm<1>(); }                  // |Z|
    double norm_r() const { return Z.head(n - 2).lpNorm<1>(); }      // |Z|_r
};

/// Angles defined implicitly by sin(theta_i) = (Vbb Z)_i, cos > 0 branch.
/// Domain guard: max |sin theta_i| <= 0.9.
struct ThetaVector {
    VectorXd sin_t, cos_t;  // each n
};
ThetaVector theta_of(const ZVector& z, const BasisPack& basis);

struct EnergyResult {
    double E = 0;       // closed form (1/n) X . cos Theta
    double E_decomp = 0;  // route via the {Vbb, X} basis decomposition
    VectorXd alpha;     // n-1
};
EnergyResult energy(const ZVector& z, const BasisPack& basis);

/// Mean cosine A(Z) = (1/n) 1 . cos Theta.
double mean_cos(const ZVector& z, const BasisPack& basis);

struct Dispersions {
    double DU = 0, DL = 0;
};
Dispersions dispersions(const ZVector& z, const BasisPack& basis);

/// The pair (f1, f2) solving the 2x2 linear system tied to the anchor.
std::pair<double, double> f1f2(const ZVector& z, const BasisPack& basis);

/// Anchor point Q_Z = [Z, alpha, 0, 0, E f1, E (2 - f1 + f2)], deltas zero.
DegenerateVector anchor_QZ(const ZVector& z, const BasisPack& basis);

/// Project Z onto {E(Z) = 0} by Newton along the energy gradient.
ZVector project_zero_energy(const ZVector& z, const BasisPack& basis);

/// Reduced system d/dt (Z, beta, beta_dia, beta_star, gamma1, gamma2),
/// flat layout of length 4n-2; decoupled from (delta1, delta2).
VectorXd reduced_rhs(const VectorXd& y, const BasisPack& basis);
VectorXd reduced_coords(const DegenerateVector& v);  // first 4n-2 components
DegenerateVector from_reduced(const VectorXd& y, int n);  // deltas = 0

/// Affine-in-t value of the contraction operator on a constant input:
/// value(t) = constant + t * linear.
struct AffineInT {
    VectorXd constant;  // 4n-2
    VectorXd linear;    // 4n-2 (only the Z block is nonzero)
};
AffineInT gamma_on_constant(const VectorXd& y_reduced, const BasisPack& basis);

/// Same operator evaluated by quadrature of the integral form (oracle).
VectorXd gamma_on_constant_quadrature(const VectorXd& y_reduced, const BasisPack& basis, double t);

struct ReducedFlowApprox {
    VectorXd dZdt;       // leading term E * A * (Z_U, -Z_L, 0)
    Vector2d dgamma;     // gamma rates of the reduced system at Q_Z
    double error_scale;  // |E| * |Z|_r * |Z|
};
ReducedFlowApprox reduced_flow_approx(const ZVector& z, const BasisPack& basis);

enum class Region { omega_plus, omega_minus, boundary };
struct LyapunovEval {
    double L = 0;     // +inf flag on the boundary
    double Ldot = 0;  // -2 (1 - u^2 - v^2)^2
    Region region = Region::boundary;
};
LyapunovEval lyapunov_decoupled(const Eigen::Vector4d& s);

/// Attach monitor channels to a trajectory. Channel names: E, DL, DU, zlast,
/// sqrtDL_plus, sqrtDL_minus, A, ring_dist, L. Which are valid depends on the
/// trajectory's system:
///   swarm (needs even-n theta0): E, DL, DU, zlast, sqrtDL_plus, sqrtDL_minus, A
///   swarm (any n): ring_dist
///   abuw (even n): same degenerate channels as swarm
///   decoupled: L
enum class TrajectorySystem { swarm, abuw, decoupled };

/// When OpenMP is available, monitor attachment maps over samples in
/// parallel; set false to force the serial reference path (bench/tests).
extern bool g_parallel_monitors;

void attach_monitors(Trajectory& traj, const std::vector<std::string>& channels,
                     TrajectorySystem system, const VectorXd& theta0 = VectorXd());

/// Block system xdot_s = A_s x + f(x, y), ydot = B y + g(x, y) with
/// f, g and their gradients vanishing at the origin.
struct AnchoredSystem {
    MatrixXd A_s;  // stable, nonsingular, s x s
    MatrixXd B;    // c x c
    std::function<VectorXd(const VectorXd& x, const VectorXd& y)> f;
    std::function<VectorXd(const VectorXd& x, const VectorXd& y)> g;
    // optional: sample a point of the equilibrium set E (center coords) from
    // a scalar parameter
    std::function<VectorXd(double)> equilibrium_curve;
};

/// The 3d example with non-polynomial manifold z = x sin x:
/// stable variable z, center variables (x, y).
AnchoredSystem taylor_anchored_system();
double taylor_psi_analytic(double x, double y);
double taylor_h_analytic(double x, double y);

/// Nullcline solve A_s Psi + f(Psi, y) = 0 by Newton from -A_s^{-1} f(0, y).
VectorXd anchored_psi(const AnchoredSystem& sys, const VectorXd& y);

struct PsiCertificate {
    double max_ratio = 0;  // max |h - Psi| / (|y| dist(y, E))
    int excluded = 0;      // samples with dist(y, E) == 0
    bool bounded = true;
};
PsiCertificate psi_error_certificate(const AnchoredSystem& sys,
                                     const std::vector<VectorXd>& samples,
                                     const std::function<double(const VectorXd&)>& h,
                                     const std::function<double(const VectorXd&)>& dist_E);

}  // namespace ringswarm
