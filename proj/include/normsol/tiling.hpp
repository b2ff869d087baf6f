#pragma once

#include <string>
#include <vector>

#include "normsol/grid.hpp"

namespace normsol {

/// Tiling of a domain into congruent copies: k^N axis copies for
/// interval/rectangle, k angular sectors for the disk.
struct TilingSpec {
  DomainSpec base;
  int k = 1;
  int copies = 1;  // h_k

  static TilingSpec make(const DomainSpec& base, int k) {
    if (k < 1) throw config_error("TilingSpec: k must be >= 1");
    TilingSpec t;
    t.base = base;
    t.k = k;
    t.copies = base.kind == DomainKind::Disk ? k : 1;
    if (base.kind != DomainKind::Disk)
      for (int d = 0; d < base.dim(); ++d) t.copies *= k;
    return t;
  }
};

struct TiledSolution {
  Field u;              // on the k-refined grid over the same domain
  double lambda = 0.0;  // k^2 times the input lambda, exactly
  double mass_ratio = 0.0;  // quadrature mass ratio; -> k^{4/(p-1)}
  double residual = 0.0;    // dual-norm residual on the fine grid
};

/// Alternating-sign juxtaposition of the rescaled solution
/// u_k(x) = k^{2/(p-1)} u(kx) over k^N subrectangles; tile interfaces are
/// exact zeros of the refined grid. Requires an interval/rectangle field.
TiledSolution tile_rectangle(const Field& u, double lambda, double mu, double p, int k);

/// lambda_1 of the ball inscribed in the k-th disk sector:
/// (j_{N/2-1,1})^2 ((sin(pi/k)+1)/sin(pi/k))^2, an upper bound for
/// lambda_1 of the sector by domain monotonicity. Requires k >= 2, N >= 2.
double sector_lambda1_bound(int k, int N);

/// First positive zero of the Bessel function J_nu.
double bessel_j_first_zero(double nu);

struct LadderRow {
  int k = 0;
  int copies = 0;            // h_k
  double lambda1_bound = 0.0;
  double rho_lower = 0.0;    // h_k D lambda_1(D_k)^{2/(p-1) - N/2}
  double cumulative_max = 0.0;
};

struct LadderResult {
  double exponent = 0.0;  // (N-1)/(p-1) [1 + 4/(N-1) - p]
  std::string verdict;    // "diverges" or "inconclusive"
  std::vector<LadderRow> rows;
};

/// Solvable-mass ladder for disk sector tilings, k = 2..k_max;
/// lambda1_bounds[i] is the bound for k = i+2.
LadderResult mass_ladder(int N, double p, double D_Np,
                         const std::vector<double>& lambda1_bounds, int k_max);

}  // namespace normsol
