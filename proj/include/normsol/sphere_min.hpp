#pragma once

#include <vector>

#include "normsol/grid.hpp"
#include "normsol/soliton.hpp"

namespace normsol {

/// Constrained energy  E_mu(u) = 1/2 int |grad u|^2 - mu/(p+1) int |u|^{p+1}.
double energy(const Field& u, double mu, double p);

struct MinimizerResult {
  Field u;
  double mu = 0.0;
  double lambda = 0.0;
  double energy = 0.0;
  double alpha_cap = 0.0;
  double h1sq = 0.0;
  double residual = 0.0;
  int morse = 0;
  int morse_borderline = 0;
  bool converged = false;
  bool hit_cap = false;
  int iterations = 0;
};

struct MinimizeOptions {
  int max_iter = 300000;
  double residual_tol = 1e-8;
  double energy_tol = 1e-12;  // relative energy change, over 10 iterations
  bool compute_morse = true;
};

/// Projected-gradient descent of E_mu on the mass sphere, started from
/// phi_1 (or `init`). The H1 cap is monitored, not enforced: an iterate
/// crossing alpha_cap stops the run with hit_cap set, signalling mu too
/// large for that cap. alpha_cap <= 0 selects the default cap from the
/// admissibility window (computes the ground-state constant on demand).
MinimizerResult minimize_local(const GridPtr& grid, double p, double mu,
                               double alpha_cap = 0.0, const Field* init = nullptr,
                               const MinimizeOptions& opts = {});

/// (p+1)/2 (alpha - lambda_k) / (M_estimate - measure^{-(p-1)/2}):
/// the admissible-mu upper bound for the level-k minimax principle.
double admissible_mu_bound(double alpha, double lambda_k, double M_estimate,
                           double measure, double p);

struct WitnessPoint {
  double scale = 0.0;     // soliton rescaling a
  double alpha = 0.0;     // h1^2 of the normalized cutoff profile
  double energy = 0.0;    // E_mu value
  double gn_ratio = 0.0;  // int|u|^{p+1} / alpha^{N(p-1)/4}
};

/// Cutoff-rescaled soliton family on a geometric scale schedule; witnesses
/// E_mu -> -inf (supercritical, or critical with large mu) and the GN ratio
/// approaching C_{N,p}. Scales the grid cannot resolve are dropped; throws
/// if none are resolvable.
std::vector<WitnessPoint> blowup_witness(const GridPtr& grid, const SolitonProfile& prof,
                                         double mu, int n_scales);

}  // namespace normsol
