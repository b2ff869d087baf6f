#include "normsol/tiling.hpp"

#include <cmath>

namespace normsol {

namespace {

constexpr Eigen::Index kMaxTiledNodes = Eigen::Index(1) << 24;

Vec nonlinear_term(const Vec& u, double p) {
  Vec q(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    q[i] = std::copysign(std::pow(std::abs(u[i]), p), u[i]);
  return q;
}

}  // namespace

TiledSolution tile_rectangle(const Field& u, double lambda, double mu, double p, int k) {
  const Grid& g = *u.grid;
  if (g.domain.kind == DomainKind::Disk)
    throw config_error("tile_rectangle: requires an interval or rectangle field");
  if (k < 1) throw config_error("tile_rectangle: k must be >= 1");

  const int n = g.resolution;
  const int nk = n * k;
  const Eigen::Index new_nodes =
      g.dim() == 1 ? Eigen::Index(nk - 1) : Eigen::Index(nk - 1) * (nk - 1);
  if (new_nodes > kMaxTiledNodes)
    throw numerical_error("tile_rectangle: refined grid exceeds the memory cap");

  GridPtr fine = build_grid(g.domain, nk);
  const double amp = std::pow(double(k), 2.0 / (p - 1.0));

  Vec v(fine->size());
  if (g.dim() == 1) {
    const int m = n - 1;
    for (int i = 1; i < nk; ++i) {
      const int j = i % n;       // position inside the tile
      const int tile = i / n;
      double val = 0.0;
      if (j != 0) {              // interfaces are Dirichlet nodes: exact zeros
        val = amp * u.values[j - 1];
        if (tile % 2 == 1) val = -val;
      }
      v[i - 1] = val;
      (void)m;
    }
  } else {
    const int m = n - 1, mk = nk - 1;
    for (int iy = 1; iy < nk; ++iy) {
      const int jy = iy % n, ty = iy / n;
      for (int ix = 1; ix < nk; ++ix) {
        const int jx = ix % n, tx = ix / n;
        double val = 0.0;
        if (jx != 0 && jy != 0) {
          val = amp * u.values[Eigen::Index(jy - 1) * m + (jx - 1)];
          if ((tx + ty) % 2 == 1) val = -val;
        }
        v[Eigen::Index(iy - 1) * mk + (ix - 1)] = val;
      }
    }
  }

  TiledSolution out;
  out.u = Field(fine, std::move(v));
  out.lambda = double(k) * double(k) * lambda;
  out.mass_ratio = fine->l2sq(out.u.values) / g.l2sq(u.values);

  Vec resid = fine->apply_neg_lap(out.u.values) + out.lambda * out.u.values -
              mu * nonlinear_term(out.u.values, p);
  out.residual = fine->dual_norm(resid) / std::sqrt(fine->h1sq(out.u.values));
  return out;
}

double bessel_j_first_zero(double nu) {
  auto f = [nu](double x) { return std::cyl_bessel_j(nu, x); };
  double lo = nu + 1e-9, hi = lo;
  const double f0 = f(std::max(lo, 1e-9));
  for (int i = 0; i < 4000; ++i) {
    hi += 0.05;
    if (f(hi) * f0 < 0.0) break;
  }
  if (!(f(hi) * f0 < 0.0)) throw numerical_error("bessel_j_first_zero: no sign change found");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) * f0 < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double sector_lambda1_bound(int k, int N) {
  if (k < 2) throw config_error("sector_lambda1_bound: k must be >= 2");
  if (N < 2) throw config_error("sector_lambda1_bound: N must be >= 2");
  const double s = std::sin(M_PI / k);
  const double radius = s / (s + 1.0);
  const double j = bessel_j_first_zero(N / 2.0 - 1.0);
  return j * j / (radius * radius);
}

LadderResult mass_ladder(int N, double p, double D_Np,
                         const std::vector<double>& lambda1_bounds, int k_max) {
  if (k_max < 2) throw config_error("mass_ladder: k_max must be >= 2");
  if (int(lambda1_bounds.size()) < k_max - 1)
    throw config_error("mass_ladder: need a lambda_1 bound for each k in 2..k_max");

  LadderResult out;
  out.exponent = double(N - 1) / (p - 1.0) * (1.0 + 4.0 / double(N - 1) - p);
  out.verdict = out.exponent > 1e-12 ? "diverges" : "inconclusive";

  const double expo = 2.0 / (p - 1.0) - N / 2.0;
  double cum = 0.0;
  for (int k = 2; k <= k_max; ++k) {
    LadderRow row;
    row.k = k;
    row.copies = k;  // disk sectors
    row.lambda1_bound = lambda1_bounds[k - 2];
    row.rho_lower = row.copies * D_Np * std::pow(row.lambda1_bound, expo);
    cum = std::max(cum, row.rho_lower);
    row.cumulative_max = cum;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace normsol
