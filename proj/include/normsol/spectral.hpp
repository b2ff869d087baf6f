#pragma once

#include <vector>

#include "normsol/grid.hpp"

namespace normsol {

struct EigenPair {
  int k = 0;            // 1-based index
  double lambda = 0.0;
  Field phi;            // l2-normalized
  double residual = 0.0;  // || -Lap phi - lambda phi ||_{L2} / lambda
};

/// The `count` smallest Dirichlet eigenpairs of the grid operator,
/// L2-orthonormal, phi_1 sign-fixed positive. Shift-invert subspace
/// iteration on the cached stiffness factorization; dense fallback below
/// 3000 unknowns if the iteration stalls.
std::vector<EigenPair> dirichlet_eigs(const GridPtr& grid, int count,
                                      double tol = 1e-10, int max_iter = 400);

struct MorseCount {
  int index = 0;       // eigenvalues < -margin
  int borderline = 0;  // eigenvalues within [-margin, margin]
};

/// Negative-eigenvalue count of -Lap + lambda - p mu |u|^{p-1} on the whole
/// discrete space, by LDLT inertia of the shifted stiffness matrix.
/// Margin for "borderline" eigenvalues: 1e-8 * lambda_1(grid).
MorseCount morse_index(const Field& u, double lambda, double mu, double p);

/// True iff lambda3 <= (1 + N/4) 2^{2/N} lambda1 (Yang-type bound,
/// inclusive at the boundary).
bool yang_check(double lambda1, double lambda3, int N);

/// Sum_i x_i u_i with u_i the two-eigenfunction blend
///   u_i = sqrt((l_{off+i}-alpha)/(l_{off+i}-l_i)) phi_i
///       + sqrt((alpha-l_i)/(l_{off+i}-l_i)) phi_{off+i},
/// which places the result on {l2 = 1, h1^2 = alpha} by orthogonality.
/// Requires l_i < alpha < l_{off+i} for each i and |x| = 1.
Field eigen_sphere_points(const std::vector<EigenPair>& pairs, double alpha,
                          int off, const Vec& x);

}  // namespace normsol
