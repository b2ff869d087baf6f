#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <type_traits>

#include "normsol/domain.hpp"

namespace normsol {

using SparseMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Structured grid of interior nodes with quadrature weights and the
/// discrete Dirichlet Laplacian in stiffness form.
///
/// The operator is stored as the symmetric positive-definite stiffness
/// matrix K with  u^T K u ~ int |grad u|^2.  Together with the diagonal
/// weight vector w (lumped mass) the nodal action of -Lap is W^{-1} K,
/// which is self-adjoint in the weighted inner product <u,v> = sum w u v.
/// Eigenvalues are those of the pencil (K, W); all positive.
struct Grid {
  DomainSpec domain;
  int resolution = 0;              // n per axis
  Eigen::MatrixXd coords;          // nodes x dim, Cartesian coordinates
  Vec weights;                     // positive quadrature weight per node
  Vec boundary_dist;               // distance to the boundary per node
  SparseMat stiffness;             // K, symmetric positive definite
  double lambda1 = 0.0;            // smallest Dirichlet eigenvalue, cached
  double mesh_width = 0.0;         // h (max over axes)

  std::shared_ptr<const Eigen::SimplicialLDLT<SparseMat>> stiff_factor;

  Eigen::Index size() const { return weights.size(); }
  int dim() const { return domain.dim(); }

  double inner(const Vec& u, const Vec& v) const { return (weights.array() * u.array() * v.array()).sum(); }
  double l2sq(const Vec& u) const { return inner(u, u); }
  double h1sq(const Vec& u) const { return u.dot(stiffness * u); }
  double dirichlet(const Vec& u, const Vec& v) const { return u.dot(stiffness * v); }
  double lq_pow(const Vec& u, double q) const {
    return (weights.array() * u.array().abs().pow(q)).sum();
  }

  /// Nodal action of -Lap: W^{-1} K u.
  Vec apply_neg_lap(const Vec& u) const {
    return (stiffness * u).cwiseQuotient(weights);
  }

  /// Discrete H^{-1} norm of a nodal residual r: sqrt((W r)^T K^{-1} (W r)).
  double dual_norm(const Vec& r) const {
    Vec wr = weights.cwiseProduct(r);
    return std::sqrt(std::max(0.0, wr.dot(stiff_factor->solve(wr))));
  }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds the grid: second-order stencils, interior nodes only (Dirichlet
/// condition implicit), trapezoid-consistent weights whose sum equals the
/// domain measure exactly. Requires n >= 8; disk requires n even.
GridPtr build_grid(const DomainSpec& domain, int n);

/// Nodal values of a function on a grid.
struct Field {
  GridPtr grid;
  Vec values;

  Field() = default;
  Field(GridPtr g, Vec v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size())
      throw config_error("Field: values do not match grid");
  }

  double l2() const { return std::sqrt(grid->l2sq(values)); }
  double h1sq() const { return grid->h1sq(values); }
  double lq(double q) const { return std::pow(grid->lq_pow(values, q), 1.0 / q); }
};

struct FieldNorms {
  double l2 = 0.0;
  double h1seminorm = 0.0;
  double lq = 0.0;
};

/// Quadrature norms (l2, H1 seminorm, Lq) of a field; q >= 1.
FieldNorms norms(const Field& u, double q);

/// Field sampled from a callable f(x) (1D) or f(x,y) (2D).
template <typename F>
Field sample_field(const GridPtr& g, F&& f) {
  Vec v(g->size());
  for (Eigen::Index i = 0; i < g->size(); ++i) {
    if constexpr (std::is_invocable_v<F, double, double>)
      v[i] = f(g->coords(i, 0), g->coords(i, 1));
    else
      v[i] = f(g->coords(i, 0));
  }
  return Field(g, std::move(v));
}

}  // namespace normsol
