#include "normsol/spectral.hpp"

#include <algorithm>
#include <random>

namespace normsol {

namespace {

// Modified Gram-Schmidt in the weighted inner product, two passes.
void w_orthonormalize(const Grid& g, Eigen::MatrixXd& X) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i)
        X.col(j) -= g.inner(X.col(i), X.col(j)) * X.col(i);
    const double nrm = std::sqrt(g.l2sq(X.col(j)));
    if (!(nrm > 0.0)) throw numerical_error("eigs: orthonormalization breakdown");
    X.col(j) /= nrm;
  }
}

void fix_sign(Vec& v) {
  const double amax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8 * amax) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

std::vector<EigenPair> dense_eigs(const GridPtr& grid, int count) {
  const Grid& g = *grid;
  const Eigen::Index n = g.size();
  Eigen::VectorXd s = g.weights.array().sqrt();
  Eigen::MatrixXd A = Eigen::MatrixXd(g.stiffness);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) /= s[i] * s[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw numerical_error("eigs: dense solver failed");
  std::vector<EigenPair> out;
  for (int k = 0; k < count; ++k) {
    Vec v = es.eigenvectors().col(k).cwiseQuotient(s);
    v /= std::sqrt(g.l2sq(v));
    fix_sign(v);
    EigenPair ep;
    ep.k = k + 1;
    ep.lambda = es.eigenvalues()[k];
    ep.phi = Field(grid, std::move(v));
    Vec r = g.apply_neg_lap(ep.phi.values) - ep.lambda * ep.phi.values;
    ep.residual = std::sqrt(g.l2sq(r)) / ep.lambda;
    out.push_back(std::move(ep));
  }
  return out;
}

}  // namespace

std::vector<EigenPair> dirichlet_eigs(const GridPtr& grid, int count,
                                      double tol, int max_iter) {
  const Grid& g = *grid;
  if (count < 1) throw config_error("dirichlet_eigs: count must be >= 1");
  if (Eigen::Index(count) * 4 > g.size())
    throw config_error("dirichlet_eigs: count too large for grid");

  const Eigen::Index n = g.size();
  const int block = int(std::min<Eigen::Index>(count + 5, n));

  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = gauss(rng);
  w_orthonormalize(g, X);

  Vec ritz = Vec::Zero(block);
  bool converged = false;
  for (int it = 0; it < max_iter && !converged; ++it) {
    Eigen::MatrixXd Y(n, block);
    for (int j = 0; j < block; ++j)
      Y.col(j) = g.stiff_factor->solve(g.weights.cwiseProduct(X.col(j)));
    w_orthonormalize(g, Y);

    Eigen::MatrixXd Ar(block, block);
    Eigen::MatrixXd KY = g.stiffness * Y;
    Ar = Y.transpose() * KY;
    Ar = 0.5 * (Ar + Ar.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(Ar);
    X = Y * small.eigenvectors();
    ritz = small.eigenvalues();

    converged = true;
    for (int k = 0; k < count; ++k) {
      Vec r = g.apply_neg_lap(X.col(k)) - ritz[k] * X.col(k);
      if (std::sqrt(g.l2sq(r)) > tol * std::max(ritz[k], g.lambda1)) {
        converged = false;
        break;
      }
    }
  }

  if (!converged) {
    if (n <= 3000) return dense_eigs(grid, count);
    throw numerical_error("dirichlet_eigs: subspace iteration did not converge");
  }

  std::vector<EigenPair> out;
  for (int k = 0; k < count; ++k) {
    Vec v = X.col(k);
    v /= std::sqrt(g.l2sq(v));
    fix_sign(v);
    EigenPair ep;
    ep.k = k + 1;
    ep.lambda = ritz[k];
    ep.phi = Field(grid, std::move(v));
    Vec r = g.apply_neg_lap(ep.phi.values) - ep.lambda * ep.phi.values;
    ep.residual = std::sqrt(g.l2sq(r)) / ep.lambda;
    out.push_back(std::move(ep));
  }
  return out;
}

namespace {

// Count of negative pivots in LDLT of A; Sylvester's law gives the number
// of negative eigenvalues of the pencil (A, W). Retries with a small
// diagonal jitter when the unpivoted factorization hits a bad pivot.
int neg_inertia(const SparseMat& A, const Vec& w, double jitter_scale) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    SparseMat B = A;
    if (attempt > 0) {
      const double d = jitter_scale * std::pow(10.0, attempt - 13);
      SparseMat J(A.rows(), A.cols());
      J.setIdentity();
      for (Eigen::Index i = 0; i < w.size(); ++i) J.coeffRef(i, i) = d * w[i];
      B += J;
    }
    Eigen::SimplicialLDLT<SparseMat> f(B);
    if (f.info() != Eigen::Success) continue;
    Vec d = f.vectorD();
    if (!d.allFinite()) continue;
    const double dmax = d.cwiseAbs().maxCoeff();
    if ((d.cwiseAbs().array() < 1e-14 * dmax).any() && attempt < 3) continue;
    return int((d.array() < 0.0).count());
  }
  throw numerical_error("morse_index: inertia computation failed");
}

}  // namespace

MorseCount morse_index(const Field& u, double lambda, double mu, double p) {
  const Grid& g = *u.grid;
  if (!u.values.allFinite()) throw numerical_error("morse_index: non-finite field");
  Vec pot(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i)
    pot[i] = lambda - p * mu * std::pow(std::abs(u.values[i]), p - 1.0);

  SparseMat A = g.stiffness;
  SparseMat D(g.size(), g.size());
  D.setIdentity();
  for (Eigen::Index i = 0; i < g.size(); ++i) D.coeffRef(i, i) = g.weights[i] * pot[i];
  A += D;

  const double margin = 1e-8 * g.lambda1;
  SparseMat Wm(g.size(), g.size());
  Wm.setIdentity();
  for (Eigen::Index i = 0; i < g.size(); ++i) Wm.coeffRef(i, i) = g.weights[i] * margin;

  MorseCount mc;
  mc.index = neg_inertia(A + Wm, g.weights, g.lambda1);
  const int below_plus = neg_inertia(A - Wm, g.weights, g.lambda1);
  mc.borderline = std::max(0, below_plus - mc.index);
  return mc;
}

bool yang_check(double lambda1, double lambda3, int N) {
  if (!(lambda1 > 0.0) || !(lambda3 > 0.0))
    throw config_error("yang_check: eigenvalues must be positive");
  return lambda3 <= (1.0 + N / 4.0) * std::pow(2.0, 2.0 / N) * lambda1;
}

Field eigen_sphere_points(const std::vector<EigenPair>& pairs, double alpha,
                          int off, const Vec& x) {
  const int k = int(x.size());
  if (k < 1) throw config_error("eigen_sphere_points: empty coefficient vector");
  if (int(pairs.size()) < off + k)
    throw config_error("eigen_sphere_points: need at least off + k eigenpairs");
  if (std::abs(x.norm() - 1.0) > 1e-6)
    throw config_error("eigen_sphere_points: x must be a unit vector");

  const GridPtr grid = pairs[0].phi.grid;
  Vec acc = Vec::Zero(grid->size());
  for (int i = 0; i < k; ++i) {
    const double lo = pairs[i].lambda;
    const double hi = pairs[off + i].lambda;
    if (!(lo < alpha && alpha < hi))
      throw config_error("eigen_sphere_points: alpha not strictly between paired eigenvalues");
    const double c_lo = std::sqrt((hi - alpha) / (hi - lo));
    const double c_hi = std::sqrt((alpha - lo) / (hi - lo));
    acc += x[i] * (c_lo * pairs[i].phi.values + c_hi * pairs[off + i].phi.values);
  }
  return Field(grid, std::move(acc));
}

}  // namespace normsol
