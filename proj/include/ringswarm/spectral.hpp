#pragma once

#include "ringswarm/types.hpp"

#include <array>

namespace ringswarm {

/// Polynomials are coefficient vectors in ascending degree: p[k] is the
/// coefficient of lambda^k.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& p, const Poly& q);
Poly poly_pow(const Poly& p, int e);
std::vector<Complex> poly_roots(const Poly& p);  // companion-matrix roots
double poly_eval(const Poly& p, double x);

/// Characteristic polynomial det(lambda I - A) by Faddeev-LeVerrier.
/// Exact for integer matrices while coefficients stay below 2^53.
Poly char_poly(const MatrixXd& A);

std::vector<Complex> eigenvalues(const MatrixXd& A);

struct SpectralReport {
    MatrixXd J;
    std::vector<Complex> eigs;
    Poly char_poly;  // of J
    double gap = 0;

    // non-degenerate path
    MatrixXd J1, J2;
    Poly char_J1, char_J2;
    double omega = 0;
    std::array<double, 6> hurwitz{};

    // degenerate path
    MatrixXd Jdeg, Jtop;
    Poly char_Jdeg;
    bool degenerate = false;
};

/// Jacobian of the abuw system at the origin, block form
/// [[0,0,I,0],[0,0,0,I],[C,-S,0,2I],[S-2I,C,-2I,-2I]] with
/// C_km = cos(theta_m - theta_k)/n, S_km = sin(theta_m - theta_k)/n.
MatrixXd jacobian_abuw(const VectorXd& theta0);

/// Coupling matrices S and C themselves.
std::pair<MatrixXd, MatrixXd> coupling_SC(const VectorXd& theta0);

/// True when the vectors (cos theta_k) and (sin theta_k) are collinear,
/// i.e. all particles on one line through the center.
bool is_degenerate(const VectorXd& theta0, double tol = 1e-9);

/// omega with (1/n) sum cos^2 theta_k = 1/2 + omega; requires normalized
/// angles (sum sin 2theta = 0).
double omega_of(const VectorXd& theta0);

/// Block restrictions for non-degenerate normalized angles: J1 of size
/// 4(n-2), J2 of size 8. Throws for degenerate angles.
std::pair<MatrixXd, MatrixXd> restrict_blocks(const VectorXd& theta0);

/// f_omega(lambda) = 1 - 4 omega^2 + 4l + 12l^2 + 14l^3 + 9l^4 + 4l^5 + l^6.
Poly f_omega(double omega);

/// Leading principal minors D1..D6 of the Hurwitz matrix of f_omega,
/// computed as exact polynomials in q = 1 - 4 omega^2.
std::array<double, 6> hurwitz_minors(double omega);

/// Closed forms of the minors for cross-checking.
std::array<double, 6> hurwitz_minors_closed_form(double omega);

/// (J_deg, J_top) for even n, in the degenerate basis.
std::pair<MatrixXd, MatrixXd> jacobian_degenerate(int n);

/// min |Re lambda| over eigenvalues with Re lambda < -1e-9; 0 if none.
double spectral_gap(const std::vector<Complex>& eigs);

/// Expected closed-form characteristic polynomials (integer coefficients).
Poly char_poly_J1_expected(int n);    // lambda^{n-2} (l^3+2l^2+4l+4)^{n-2}
Poly char_poly_J2_expected(double omega);  // (1+l^2) f_omega
Poly char_poly_Jdeg_expected(int n);  // (cubic)^{n-1} l^{n-1} (l+1)^2 (l^2+1)

SpectralReport analyze(const VectorXd& theta0);
SpectralReport analyze_degenerate(int n);

}  // namespace ringswarm
