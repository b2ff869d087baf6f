#include "normsol/grid.hpp"

#include <vector>

namespace normsol {

std::string DomainSpec::str() const {
  char buf[128];
  switch (kind) {
    case DomainKind::Interval:
      std::snprintf(buf, sizeof(buf), "interval:%.17g,%.17g", a, b);
      break;
    case DomainKind::Rectangle:
      std::snprintf(buf, sizeof(buf), "rectangle:%.17g,%.17g", w0, w1);
      break;
    case DomainKind::Disk:
      std::snprintf(buf, sizeof(buf), "disk:%.17g", radius);
      break;
  }
  return buf;
}

double measure(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::Interval:
      return d.b - d.a;
    case DomainKind::Rectangle:
      return d.w0 * d.w1;
    case DomainKind::Disk:
      return M_PI * d.radius * d.radius;
  }
  throw config_error("measure: unsupported domain kind");
}

namespace {

// 1D interior nodes of (0,L): x_i = i h, i = 1..n-1. Weight h per node,
// 3h/2 for the two boundary-adjacent ones, so the cells (bounded by node
// midpoints and the walls) partition (0,L) and the weights sum to L exactly.
void line_weights(int n, double h, std::vector<double>& w) {
  w.assign(n - 1, h);
  w.front() = 1.5 * h;
  w.back() = 1.5 * h;
}

GridPtr finalize(Grid&& g);

GridPtr build_interval(const DomainSpec& dom, int n) {
  const double L = dom.b - dom.a;
  const double h = L / n;
  const int m = n - 1;

  Grid g;
  g.domain = dom;
  g.resolution = n;
  g.mesh_width = h;
  g.coords.resize(m, 1);
  g.weights.resize(m);
  g.boundary_dist.resize(m);

  std::vector<double> w;
  line_weights(n, h, w);
  for (int i = 0; i < m; ++i) {
    const double x = dom.a + (i + 1) * h;
    g.coords(i, 0) = x;
    g.weights[i] = w[i];
    g.boundary_dist[i] = std::min(x - dom.a, dom.b - x);
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * m);
  for (int i = 0; i < m; ++i) {
    trip.emplace_back(i, i, 2.0 / h);
    if (i + 1 < m) {
      trip.emplace_back(i, i + 1, -1.0 / h);
      trip.emplace_back(i + 1, i, -1.0 / h);
    }
  }
  g.stiffness.resize(m, m);
  g.stiffness.setFromTriplets(trip.begin(), trip.end());
  return finalize(std::move(g));
}

// Tensor-product assembly K = Kx (x) Wy + Wx (x) Ky keeps the pencil (K, W)
// exactly separable, so 2D eigenvalues are sums of the 1D ones.
GridPtr build_rectangle(const DomainSpec& dom, int n) {
  const double hx = dom.w0 / n, hy = dom.w1 / n;
  const int m = n - 1;
  const Eigen::Index total = Eigen::Index(m) * m;

  Grid g;
  g.domain = dom;
  g.resolution = n;
  g.mesh_width = std::max(hx, hy);
  g.coords.resize(total, 2);
  g.weights.resize(total);
  g.boundary_dist.resize(total);

  std::vector<double> wx, wy;
  line_weights(n, hx, wx);
  line_weights(n, hy, wy);

  auto idx = [m](int ix, int iy) { return Eigen::Index(iy) * m + ix; };

  for (int iy = 0; iy < m; ++iy) {
    const double y = (iy + 1) * hy;
    for (int ix = 0; ix < m; ++ix) {
      const double x = (ix + 1) * hx;
      const Eigen::Index q = idx(ix, iy);
      g.coords(q, 0) = x;
      g.coords(q, 1) = y;
      g.weights[q] = wx[ix] * wy[iy];
      g.boundary_dist[q] = std::min(std::min(x, dom.w0 - x), std::min(y, dom.w1 - y));
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * total);
  for (int iy = 0; iy < m; ++iy) {
    for (int ix = 0; ix < m; ++ix) {
      const Eigen::Index q = idx(ix, iy);
      trip.emplace_back(q, q, 2.0 / hx * wy[iy] + 2.0 / hy * wx[ix]);
      if (ix + 1 < m) {
        trip.emplace_back(q, idx(ix + 1, iy), -wy[iy] / hx);
        trip.emplace_back(idx(ix + 1, iy), q, -wy[iy] / hx);
      }
      if (iy + 1 < m) {
        trip.emplace_back(q, idx(ix, iy + 1), -wx[ix] / hy);
        trip.emplace_back(idx(ix, iy + 1), q, -wx[ix] / hy);
      }
    }
  }
  g.stiffness.resize(total, total);
  g.stiffness.setFromTriplets(trip.begin(), trip.end());
  return finalize(std::move(g));
}

// Polar finite volumes, cell-centered in r so the axis needs no special
// treatment (the flux through r = 0 vanishes with the metric factor).
// Dirichlet wall handled by the half-cell flux. Weights r_i dr dth sum to
// pi R^2 exactly.
GridPtr build_disk(const DomainSpec& dom, int n) {
  if (n % 2 != 0) throw config_error("build_grid: disk requires even n");
  const int nr = n, nth = n;
  const double R = dom.radius;
  const double dr = R / nr;
  const double dth = 2.0 * M_PI / nth;
  const Eigen::Index total = Eigen::Index(nr) * nth;

  Grid g;
  g.domain = dom;
  g.resolution = n;
  g.mesh_width = std::max(dr, R * dth);
  g.coords.resize(total, 2);
  g.weights.resize(total);
  g.boundary_dist.resize(total);

  auto idx = [nth](int i, int j) { return Eigen::Index(i) * nth + j; };

  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < nth; ++j) {
      const double th = j * dth;
      const Eigen::Index q = idx(i, j);
      g.coords(q, 0) = r * std::cos(th);
      g.coords(q, 1) = r * std::sin(th);
      g.weights[q] = r * dr * dth;
      g.boundary_dist[q] = R - r;
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * total);
  auto add_edge = [&](Eigen::Index qa, Eigen::Index qb, double c) {
    trip.emplace_back(qa, qa, c);
    trip.emplace_back(qb, qb, c);
    trip.emplace_back(qa, qb, -c);
    trip.emplace_back(qb, qa, -c);
  };
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < nth; ++j) {
      const Eigen::Index q = idx(i, j);
      if (i + 1 < nr) add_edge(q, idx(i + 1, j), (i + 1) * dr * dth / dr);
      add_edge(q, idx(i, (j + 1) % nth), dr / (r * dth));
      if (i == nr - 1) trip.emplace_back(q, q, 2.0 * R * dth / dr);  // wall half-cell
    }
  }
  g.stiffness.resize(total, total);
  g.stiffness.setFromTriplets(trip.begin(), trip.end());
  return finalize(std::move(g));
}

// Smallest eigenvalue of (K, W) by inverse power iteration on the cached
// factorization; used for Morse margins and feasibility checks.
double smallest_eigenvalue(const Grid& g) {
  Vec x = Vec::Ones(g.size());
  x /= std::sqrt(g.l2sq(x));
  double lam = g.h1sq(x);
  for (int it = 0; it < 200; ++it) {
    Vec y = g.stiff_factor->solve(g.weights.cwiseProduct(x));
    y /= std::sqrt(g.l2sq(y));
    const double lam_new = g.h1sq(y);
    x.swap(y);
    if (std::abs(lam_new - lam) <= 1e-12 * lam_new) {
      lam = lam_new;
      break;
    }
    lam = lam_new;
  }
  return lam;
}

GridPtr finalize(Grid&& g) {
  auto fact = std::make_shared<Eigen::SimplicialLDLT<SparseMat>>();
  fact->compute(g.stiffness);
  if (fact->info() != Eigen::Success)
    throw numerical_error("build_grid: stiffness factorization failed");
  g.stiff_factor = std::move(fact);
  g.lambda1 = smallest_eigenvalue(g);
  return std::make_shared<const Grid>(std::move(g));
}

}  // namespace

GridPtr build_grid(const DomainSpec& domain, int n) {
  if (n < 8) throw config_error("build_grid: resolution n must be >= 8");
  switch (domain.kind) {
    case DomainKind::Interval:
      return build_interval(domain, n);
    case DomainKind::Rectangle:
      return build_rectangle(domain, n);
    case DomainKind::Disk:
      return build_disk(domain, n);
  }
  throw config_error("build_grid: unsupported domain kind");
}

FieldNorms norms(const Field& u, double q) {
  if (q < 1.0) throw config_error("norms: q must be >= 1");
  FieldNorms out;
  out.l2 = u.l2();
  out.h1seminorm = std::sqrt(std::max(0.0, u.h1sq()));
  out.lq = u.lq(q);
  return out;
}

}  // namespace normsol
