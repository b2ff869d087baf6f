#pragma once

#include "normsol/grid.hpp"

namespace normsol {

/// Radial profile of the entire-space ground state Z solving
/// Z'' + (N-1)/r Z' - Z + Z^p = 0, Z'(0) = 0, Z(r) -> 0, on a uniform
/// radial mesh, with its whole-space integrals.
struct SolitonProfile {
  int dim = 1;
  double p = 3.0;
  double z0 = 0.0;       // height at the origin
  double r_max = 0.0;
  double dr = 0.0;
  Vec r, z, dz;          // samples

  double l2sq = 0.0;     // ||Z||_{L2(R^N)}^2
  double gradsq = 0.0;   // ||grad Z||_{L2}^2
  double lp1 = 0.0;      // ||Z||_{L^{p+1}}^{p+1}
  double energy = 0.0;   // (1/2)gradsq + (1/2)l2sq - lp1/(p+1)

  /// Linear interpolation of Z at radius r; 0 beyond the mesh.
  double value_at(double rr) const;
};

/// Computes Z by bisection shooting on Z(0): RK4 on the radial ODE with a
/// series start at the axis, analytic Bessel-type tail grafted once the
/// profile drops below 1e-4 of its height (the shot diverges from the true
/// orbit at that depth, the linearized far field does not). r_max doubles
/// adaptively when the tail has not converged below 1e-10.
SolitonProfile shoot_ground_state(int N, double p, double tol = 1e-10,
                                  double r_max0 = 30.0);

/// Sharp Gagliardo-Nirenberg constant: the GN quotient evaluated at Z.
double gn_constant(const SolitonProfile& prof);

/// Explicit constants and mass-threshold lower bounds.
struct Constants {
  int dim = 1;
  double p = 0.0;
  double beta = 0.0;        // N(p-1)/4
  double C_Np = 0.0;        // sharp GN constant
  double D_Np = 0.0;        // [ (p+1)/(2C) (beta-1)^{beta-1} / beta^beta ]^{2/(p-1)}
  double rho_star = 0.0;    // ((p+1)/(2C))^{N/2}; NaN unless beta == 1
  double rho1_lower = 0.0;  // +inf below critical
  double rho3_lower = 0.0;
};

Constants thresholds(int N, double p, double C_Np, double lambda1, double lambda3);

double mu_from_rho(double rho, double p);  // mu = rho^{(p-1)/2}
double rho_from_mu(double mu, double p);   // rho = mu^{2/(p-1)}

struct MuHatResult {
  double value = 0.0;       // may be +inf
  double alpha_star = 0.0;  // argmax (meaningful for finite value)
};

/// sup over alpha > lambda1 of
///   (p+1)/2 (alpha - lambda1) / (C alpha^{N(p-1)/4} - measure^{-(p-1)/2}),
/// by golden-section search on log alpha; +inf when beta < 1 (unbounded).
MuHatResult mu_hat_1_detail(double lambda1, double C_Np, double measure, int N, double p);

inline double mu_hat_1(double lambda1, double C_Np, double measure, int N, double p) {
  return mu_hat_1_detail(lambda1, C_Np, measure, N, p).value;
}

}  // namespace normsol
