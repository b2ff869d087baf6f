#pragma once

#include <string>
#include <vector>

#include "normsol/grid.hpp"
#include "normsol/two_constraint.hpp"

namespace normsol {

struct RatioRow {
  double alpha = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha_over_lambda = 0.0;
  double gn_ratio = 0.0;  // f / alpha^{N(p-1)/4}
};

struct BlowupVerdicts {
  double alpha_lambda_limit = 0.0;
  std::string mu_trichotomy;  // "to_zero" | "to_infinity" | "finite" | "undetermined"
  double mu_limit = 0.0;      // meaningful when "finite"
  double gn_ratio_limit = 0.0;
  bool stable = false;        // extrapolations agree when the last point is dropped
};

struct BlowupReport {
  std::vector<RatioRow> rows;
  BlowupVerdicts verdicts;
};

/// Per-point multiplier ratios along a branch plus extrapolated limits
/// (linear extrapolation in lambda^{-1/2}) and trichotomy verdicts.
/// Requires at least 5 points reaching alpha >= 100 lambda_1.
BlowupReport asymptotic_ratios(const Branch& branch, double lambda1);

/// Same, from raw per-point columns (alpha, lambda, mu, f).
BlowupReport asymptotic_ratios_rows(const std::vector<RatioRow>& rows, int N, double p,
                                    double lambda1);

struct BumpInfo {
  std::vector<Eigen::VectorXd> centers;  // coordinates
  double min_separation_scaled = 0.0;    // sqrt(lambda) |P_i - P_j|, min over pairs
  double min_boundary_dist_scaled = 0.0; // sqrt(lambda) d(P_i, boundary), min
};

/// Local maxima of |u| above a fraction 0.2 of the global maximum, with
/// non-maximum suppression within radius 5 lambda^{-1/2}.
BumpInfo bump_detect(const Field& u, double lambda);

/// Least-squares decay rate: slope of log|u| against sqrt(lambda) times the
/// distance to the nearest center, over |u| in [1e-8, 1e-2] of the maximum.
/// Throws when the tail window is unresolved.
double decay_fit(const Field& u, double lambda, const std::vector<Eigen::VectorXd>& centers);

struct PohozaevCheck {
  double res_lp1 = 0.0;  // relative defect of ||V||_{p+1}^{p+1} = 2(p+1)/(p-1) E(V)
  double res_l2 = 0.0;   // relative defect of ||V||_2^2 = (N+2-p(N-2))/(p-1) E(V)
  double v_l2sq = 0.0;
  double v_lp1 = 0.0;
  double v_gradsq = 0.0;
  double v_energy = 0.0;
};

/// Rescales (u, lambda, mu) to the unit-multiplier normalization
/// V(y) = (mu/lambda)^{1/(p-1)} u(y/sqrt(lambda) + P) and evaluates both
/// whole-space Pohozaev identities. Errors when boundary values exceed 1%
/// of the maximum (domain too small for the whole-space surrogate).
PohozaevCheck pohozaev_check(const Field& u, double lambda, double mu, double p);

}  // namespace normsol
