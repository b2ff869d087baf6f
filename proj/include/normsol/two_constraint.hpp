#pragma once

#include <cstdint>
#include <vector>

#include "normsol/grid.hpp"

namespace normsol {

/// One solved triple of the doubly-constrained maximization: u maximizes
/// int |u|^{p+1} over {l2 = 1, h1^2 = alpha} (locally), with the recovered
/// multipliers of -Lap u + lambda u = mu |u|^{p-1} u.
struct CriticalPoint {
  Field u;
  double alpha = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;       // mu^{2/(p-1)}
  double f = 0.0;         // int |u|^{p+1}
  double residual = 0.0;  // dual-norm residual relative to sqrt(alpha)
  int morse = 0;
  int morse_borderline = 0;
};

struct Branch {
  DomainSpec domain;
  double p = 0.0;
  std::vector<CriticalPoint> points;  // strictly increasing alpha
};

struct SolverOptions {
  int max_iter = 50000;
  double grad_tol = 1e-9;     // stop when |proj grad| <= grad_tol * f
  int max_restarts = 6;       // retries after converging to mu <= 0
  std::uint64_t seed = 12345;
  bool compute_morse = true;
};

/// Rescales a normalized field onto the level set {l2=1, h1^2=alpha} by
/// blending with a low/high-frequency direction, then polishing with the
/// two-multiplier Newton projection.
Field project_to_level(const GridPtr& grid, const Vec& v, double alpha);

/// Projected Barzilai-Borwein ascent of int |u|^{p+1} on the level set.
/// Requires alpha > lambda_1. The returned field has positive maximum.
CriticalPoint maximize_on_level(const GridPtr& grid, double p, double alpha,
                                const Field* init = nullptr,
                                const SolverOptions& opts = {});

/// Least-squares multipliers of -Lap u + lambda u = mu |u|^{p-1} u from the
/// 2x2 Gram projection of -Lap u onto span{-u, |u|^{p-1}u}; also returns the
/// relative dual norm of the remainder. Requires l2(u) = 1 up to round-off.
struct Multipliers {
  double lambda = 0.0;
  double mu = 0.0;
  double residual = 0.0;
};
Multipliers recover_multipliers(const Field& u, double p);

/// Geometric alpha-schedule continuation with warm starts.
Branch continue_branch(const GridPtr& grid, double p, double alpha_start,
                       double alpha_end, int steps, const SolverOptions& opts = {});

/// Maximizes int |u|^{p+1} over odd-symmetric fields on the level set
/// (odd under the domain's natural reflection): a lower bound for the
/// genus-3 max-min level. Requires alpha > lambda_3.
double antisym_lower_bound_M3(const GridPtr& grid, double p, double alpha,
                              const SolverOptions& opts = {});

}  // namespace normsol
