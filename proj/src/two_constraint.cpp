#include "normsol/two_constraint.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "normsol/spectral.hpp"

namespace normsol {

namespace {

Vec nonlinear_term(const Vec& u, double p) {
  Vec q(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    q[i] = std::copysign(std::pow(std::abs(u[i]), p), u[i]);
  return q;
}

// Newton on the two constraint residuals with corrections along {u, Lu};
// keeps both quadratic constraints to round-off without new factorizations.
bool newton_project(const Grid& g, Vec& u, double alpha, int max_iter = 20) {
  for (int it = 0; it < max_iter; ++it) {
    const double c1 = g.l2sq(u) - 1.0;
    const double c2 = g.h1sq(u) - alpha;
    if (std::abs(c1) <= 1e-13 && std::abs(c2) <= 1e-12 * alpha) return true;

    Vec d2 = g.apply_neg_lap(u);
    const double j11 = 2.0 * g.inner(u, u), j12 = 2.0 * g.inner(u, d2);
    const double j21 = 2.0 * g.dirichlet(u, u), j22 = 2.0 * g.dirichlet(u, d2);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) return false;
    const double a = (-c1 * j22 + c2 * j12) / det;
    const double b = (-c2 * j11 + c1 * j21) / det;

    const double base = c1 * c1 / std::max(1.0, alpha) + c2 * c2 / (alpha * alpha);
    double t = 1.0;
    bool accepted = false;
    for (int halve = 0; halve < 25; ++halve, t *= 0.5) {
      Vec trial = u + t * (a * u + b * d2);
      const double t1 = g.l2sq(trial) - 1.0;
      const double t2 = g.h1sq(trial) - alpha;
      if (t1 * t1 / std::max(1.0, alpha) + t2 * t2 / (alpha * alpha) < base) {
        u = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) return false;
  }
  const double c1 = g.l2sq(u) - 1.0;
  const double c2 = g.h1sq(u) - alpha;
  return std::abs(c1) <= 1e-11 && std::abs(c2) <= 1e-9 * alpha;
}

using Symmetrizer = std::function<void(Vec&)>;

Field project_to_level_sym(const GridPtr& grid, Vec v, double alpha,
                           const Symmetrizer& sym) {
  const Grid& g = *grid;
  if (sym) sym(v);
  double nv = std::sqrt(g.l2sq(v));
  if (!(nv > 0.0)) throw numerical_error("project_to_level: zero field");
  v /= nv;

  double quot = g.h1sq(v);
  if (std::abs(quot - alpha) > 1e-12 * alpha) {
    Vec w;
    if (quot < alpha) {
      // Blend with an oscillatory direction whose quotient exceeds alpha.
      w = Vec(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) w[i] = (i % 2 == 0) ? 1.0 : -1.0;
    } else {
      // Smooth toward phi_1 until the quotient drops below alpha.
      w = v;
      for (int it = 0; it < 200; ++it) {
        w = g.stiff_factor->solve(g.weights.cwiseProduct(w));
        w /= std::sqrt(g.l2sq(w));
        if (g.h1sq(w) < alpha) break;
      }
    }
    if (sym) sym(w);
    w -= g.inner(w, v) * v;
    double nw = std::sqrt(g.l2sq(w));
    if (!(nw > 1e-12)) throw numerical_error("project_to_level: degenerate blend direction");
    w /= nw;
    const double B = g.h1sq(w);
    if ((quot - alpha) * (B - alpha) >= 0.0)
      throw numerical_error("project_to_level: level not reachable at this resolution");

    double t_lo = 0.0, t_hi = M_PI / 2.0;
    auto level = [&](double t) {
      Vec u = std::cos(t) * v + std::sin(t) * w;
      return g.h1sq(u) - alpha;
    };
    double f_lo = quot - alpha;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      const double fm = level(mid);
      if ((fm > 0.0) == (f_lo > 0.0)) {
        t_lo = mid;
        f_lo = fm;
      } else {
        t_hi = mid;
      }
    }
    v = std::cos(t_lo) * v + std::sin(t_lo) * w;
  }

  if (sym) sym(v);
  if (!newton_project(g, v, alpha))
    throw numerical_error("project_to_level: constraint projection failed");
  return Field(grid, std::move(v));
}

// Tangential component of the ascent gradient w.r.t. both constraints.
Vec tangent_gradient(const Grid& g, const Vec& u, const Vec& lap_u, const Vec& grad) {
  const double g11 = g.l2sq(u);
  const double g12 = g.inner(u, lap_u);
  const double g22 = g.inner(lap_u, lap_u);
  const double r1 = g.inner(grad, u);
  const double r2 = g.inner(grad, lap_u);
  const double det = g11 * g22 - g12 * g12;
  if (det > 1e-12 * g11 * g22) {
    const double c1 = (r1 * g22 - r2 * g12) / det;
    const double c2 = (r2 * g11 - r1 * g12) / det;
    return grad - c1 * u - c2 * lap_u;
  }
  return grad - (r1 / g11) * u;  // near-eigenfunction degeneracy
}

Vec gaussian_bump(const Grid& g, std::mt19937_64* rng, double offset_frac) {
  double cx = 0.0, cy = 0.0, diam = 1.0;
  switch (g.domain.kind) {
    case DomainKind::Interval:
      cx = 0.5 * (g.domain.a + g.domain.b) + offset_frac * (g.domain.b - g.domain.a);
      diam = g.domain.b - g.domain.a;
      break;
    case DomainKind::Rectangle:
      cx = 0.5 * g.domain.w0 + offset_frac * g.domain.w0;
      cy = 0.5 * g.domain.w1;
      diam = std::max(g.domain.w0, g.domain.w1);
      break;
    case DomainKind::Disk:
      cx = offset_frac * g.domain.radius;
      diam = 2.0 * g.domain.radius;
      break;
  }
  const double sigma = diam / 8.0;
  Vec v(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double d2 = (g.coords(i, 0) - cx) * (g.coords(i, 0) - cx);
    if (g.dim() == 2) d2 += (g.coords(i, 1) - cy) * (g.coords(i, 1) - cy);
    v[i] = std::exp(-d2 / (2.0 * sigma * sigma));
  }
  if (rng) {
    std::normal_distribution<double> gauss;
    const double amp = 0.1 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < g.size(); ++i) v[i] += amp * gauss(*rng);
  }
  return v;
}

struct AscentResult {
  Vec u;
  double f = 0.0;
  int iterations = 0;
};

// Projected BB ascent of f(u) = int |u|^{p+1} on the level set.
AscentResult ascend(const GridPtr& grid, double p, double alpha, Vec u0,
                    const SolverOptions& opts, const Symmetrizer& sym) {
  const Grid& g = *grid;
  Field start = project_to_level_sym(grid, std::move(u0), alpha, sym);
  Vec u = start.values;

  auto fval = [&](const Vec& x) { return g.lq_pow(x, p + 1.0); };
  auto gradient = [&](const Vec& x) { return Vec((p + 1.0) * nonlinear_term(x, p)); };

  double f = fval(u);
  Vec lap_u = g.apply_neg_lap(u);
  Vec gt = tangent_gradient(g, u, lap_u, gradient(u));
  double gnorm = std::sqrt(g.l2sq(gt));
  double s = 0.01 / std::max(gnorm, 1e-30);

  Vec u_prev, gt_prev;
  int it = 0;
  bool stalled = false;
  for (; it < opts.max_iter; ++it) {
    if (gnorm <= opts.grad_tol * std::max(f, 1e-300)) break;

    bool accepted = false;
    Vec u_try;
    double f_try = 0.0;
    for (int halve = 0; halve < 60; ++halve, s *= 0.5) {
      u_try = u + s * gt;
      if (sym) sym(u_try);
      if (!newton_project(g, u_try, alpha)) continue;
      f_try = fval(u_try);
      if (f_try >= f - 1e-12 * std::abs(f)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {  // step collapsed against round-off
      stalled = true;
      break;
    }

    u_prev = u;
    gt_prev = gt;
    u = u_try;
    f = f_try;
    lap_u = g.apply_neg_lap(u);
    gt = tangent_gradient(g, u, lap_u, gradient(u));
    gnorm = std::sqrt(g.l2sq(gt));

    // BB step from the last displacement/gradient pair.
    Vec du = u - u_prev;
    Vec dg = gt - gt_prev;
    const double num = g.l2sq(du);
    const double den = g.inner(du, dg);
    if (std::abs(den) > 1e-300)
      s = std::min(std::max(std::abs(num / den), 1e-14), 1e8);
    else
      s *= 2.0;
  }

  if (gnorm > opts.grad_tol * std::max(f, 1e-300)) {
    // Accept a stall only within a modest factor of the target.
    if (!(stalled && gnorm <= 1e3 * opts.grad_tol * std::max(f, 1e-300)))
      throw numerical_error("maximize_on_level: ascent did not converge");
  }
  return {std::move(u), f, it};
}

std::vector<int> mirror_index(const Grid& g) {
  std::vector<int> mir(g.size());
  const int n = g.resolution;
  switch (g.domain.kind) {
    case DomainKind::Interval: {
      const int m = n - 1;
      for (int i = 0; i < m; ++i) mir[i] = m - 1 - i;
      break;
    }
    case DomainKind::Rectangle: {
      const int m = n - 1;
      for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) mir[iy * m + ix] = iy * m + (m - 1 - ix);
      break;
    }
    case DomainKind::Disk: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mir[i * n + j] = i * n + (j + n / 2) % n;
      break;
    }
  }
  return mir;
}

}  // namespace

Field project_to_level(const GridPtr& grid, const Vec& v, double alpha) {
  return project_to_level_sym(grid, v, alpha, nullptr);
}

Multipliers recover_multipliers(const Field& u, double p) {
  const Grid& g = *u.grid;
  const Vec& x = u.values;
  Vec q = nonlinear_term(x, p);
  Vec b = g.apply_neg_lap(x);

  const double g11 = g.l2sq(x);
  const double g12 = g.inner(x, q);
  const double g22 = g.l2sq(q);
  const double r1 = g.inner(b, x);
  const double r2 = g.inner(b, q);
  const double det = g11 * g22 - g12 * g12;
  if (!(det > 1e-14 * g11 * g22))
    throw numerical_error("recover_multipliers: Gram matrix singular (degenerate field)");

  const double c1 = (r1 * g22 - r2 * g12) / det;
  const double c2 = (r2 * g11 - r1 * g12) / det;
  Multipliers m;
  m.lambda = -c1;
  m.mu = c2;
  Vec resid = b + m.lambda * x - m.mu * q;
  m.residual = g.dual_norm(resid) / std::sqrt(std::max(g.h1sq(x), 1e-300));
  return m;
}

namespace {

CriticalPoint finish_point(const GridPtr& grid, double p, double alpha,
                           AscentResult&& res, const SolverOptions& opts) {
  const Grid& g = *grid;
  Vec u = std::move(res.u);
  if (u.maxCoeff() < -u.minCoeff()) u = -u;  // positive maximum

  CriticalPoint cp;
  cp.u = Field(grid, std::move(u));
  cp.alpha = alpha;
  cp.f = res.f;
  Multipliers m = recover_multipliers(cp.u, p);
  cp.lambda = m.lambda;
  cp.mu = m.mu;
  cp.residual = m.residual;
  cp.rho = m.mu > 0.0 ? std::pow(m.mu, 2.0 / (p - 1.0)) : 0.0;

  const double c1 = std::abs(g.l2sq(cp.u.values) - 1.0);
  const double c2 = std::abs(g.h1sq(cp.u.values) - alpha);
  if (c1 > 1e-10 || c2 > 1e-8 * alpha)
    throw numerical_error("maximize_on_level: constraints violated at accepted point");
  if (!(cp.lambda > -alpha))
    throw numerical_error("maximize_on_level: multiplier bound lambda > -alpha violated");

  if (opts.compute_morse) {
    MorseCount mc = morse_index(cp.u, cp.lambda, cp.mu, p);
    cp.morse = mc.index;
    cp.morse_borderline = mc.borderline;
  }
  return cp;
}

}  // namespace

CriticalPoint maximize_on_level(const GridPtr& grid, double p, double alpha,
                                const Field* init, const SolverOptions& opts) {
  const Grid& g = *grid;
  if (!(p > 1.0)) throw config_error("maximize_on_level: need p > 1");
  if (!(alpha > g.lambda1))
    throw config_error("maximize_on_level: infeasible level alpha <= lambda_1");

  std::mt19937_64 rng(opts.seed);
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    Vec u0;
    if (init != nullptr && attempt == 0)
      u0 = init->values;
    else
      u0 = gaussian_bump(g, attempt == 0 ? nullptr : &rng, 0.0);

    AscentResult res = ascend(grid, p, alpha, std::move(u0), opts, nullptr);
    Multipliers m = recover_multipliers(Field(grid, res.u), p);
    if (m.mu > 0.0) return finish_point(grid, p, alpha, std::move(res), opts);
    // Converged to a mu <= 0 critical point: restart from a perturbed bump.
  }
  throw numerical_error("maximize_on_level: no critical point with mu > 0 found");
}

Branch continue_branch(const GridPtr& grid, double p, double alpha_start,
                       double alpha_end, int steps, const SolverOptions& opts) {
  const Grid& g = *grid;
  if (!(g.lambda1 < alpha_start && alpha_start < alpha_end))
    throw config_error("continue_branch: need lambda_1 < alpha_start < alpha_end");
  if (steps < 2) throw config_error("continue_branch: need steps >= 2");

  Branch br;
  br.domain = g.domain;
  br.p = p;
  const double ratio = std::pow(alpha_end / alpha_start, 1.0 / (steps - 1));
  const Field* warm = nullptr;
  for (int i = 0; i < steps; ++i) {
    const double alpha = alpha_start * std::pow(ratio, i);
    try {
      CriticalPoint cp = maximize_on_level(grid, p, alpha, warm, opts);
      br.points.push_back(std::move(cp));
      warm = &br.points.back().u;
    } catch (const numerical_error& e) {
      throw numerical_error("continue_branch: failure at alpha = " +
                            std::to_string(alpha) + ": " + e.what());
    }
  }
  return br;
}

double antisym_lower_bound_M3(const GridPtr& grid, double p, double alpha,
                              const SolverOptions& opts) {
  const Grid& g = *grid;
  auto eigs = dirichlet_eigs(grid, 3);
  if (!(alpha > eigs[2].lambda))
    throw config_error("antisym_lower_bound_M3: need alpha > lambda_3");

  const std::vector<int> mir = mirror_index(g);
  Symmetrizer odd = [&mir](Vec& v) {
    Vec w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) w[i] = 0.5 * (v[i] - v[mir[i]]);
    v = std::move(w);
  };

  std::mt19937_64 rng(opts.seed);
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    Vec u0 = gaussian_bump(g, attempt == 0 ? nullptr : &rng, 0.25);
    AscentResult res = ascend(grid, p, alpha, std::move(u0), opts, odd);
    Multipliers m = recover_multipliers(Field(grid, res.u), p);
    if (m.mu > 0.0) return res.f;
  }
  throw numerical_error("antisym_lower_bound_M3: no critical point with mu > 0 found");
}

}  // namespace normsol
