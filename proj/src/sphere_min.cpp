#include "normsol/sphere_min.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "normsol/spectral.hpp"
#include "normsol/two_constraint.hpp"

namespace normsol {

double energy(const Field& u, double mu, double p) {
  return 0.5 * u.h1sq() - mu / (p + 1.0) * u.grid->lq_pow(u.values, p + 1.0);
}

namespace {

Vec nonlinear_term(const Vec& u, double p) {
  Vec q(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    q[i] = std::copysign(std::pow(std::abs(u[i]), p), u[i]);
  return q;
}

// Default cap: for beta > 1 the argmax of the admissibility window; for
// beta <= 1 the energy barrier radius of the start level (the functional is
// coercive there, so the sublevel set is bounded).
double default_cap(const Grid& g, double p, double mu, double C) {
  const int N = g.dim();
  const double beta = N * (p - 1.0) / 4.0;
  if (beta > 1.0) {
    MuHatResult mh = mu_hat_1_detail(g.lambda1, C, measure(g.domain), N, p);
    if (!std::isfinite(mh.value) || !(mu < mh.value))
      throw config_error(
          "minimize_local: mu not admissible for the default cap; pass alpha_cap");
    return mh.alpha_star;
  }
  const double e0 = 0.5 * g.lambda1 + 1.0;
  auto lower = [&](double a) { return 0.5 * a - mu * C / (p + 1.0) * std::pow(a, beta); };
  if (std::abs(beta - 1.0) < 1e-14 && !(mu * C < 0.5 * (p + 1.0)))
    throw config_error(
        "minimize_local: critical mu >= (p+1)/(2C), energy unbounded; pass alpha_cap");
  double hi = std::max(4.0 * g.lambda1, 4.0);
  while (lower(hi) < e0 && hi < 1e18) hi *= 2.0;
  return hi;
}

}  // namespace

MinimizerResult minimize_local(const GridPtr& grid, double p, double mu,
                               double alpha_cap, const Field* init,
                               const MinimizeOptions& opts) {
  const Grid& g = *grid;
  if (!(mu > 0.0)) throw config_error("minimize_local: mu must be positive");
  if (!(p > 1.0)) throw config_error("minimize_local: need p > 1");

  if (alpha_cap <= 0.0) {
    SolitonProfile prof = shoot_ground_state(g.dim(), p);
    alpha_cap = default_cap(g, p, mu, gn_constant(prof));
  }
  if (!(alpha_cap > g.lambda1))
    throw config_error("minimize_local: alpha_cap must exceed lambda_1");

  Vec u;
  if (init != nullptr)
    u = init->values;
  else
    u = dirichlet_eigs(grid, 1)[0].phi.values;
  u /= std::sqrt(g.l2sq(u));

  auto eval = [&](const Vec& x) {
    return 0.5 * g.h1sq(x) - mu / (p + 1.0) * g.lq_pow(x, p + 1.0);
  };

  MinimizerResult out;
  out.mu = mu;
  out.alpha_cap = alpha_cap;

  double E = eval(u);
  double s = 1.0 / std::max(1.0, g.lambda1);
  std::deque<double> recent{E};
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    Vec d = g.apply_neg_lap(u) - mu * nonlinear_term(u, p);
    Vec dt = d - g.inner(d, u) * u;  // sphere-tangential part
    const double dtn2 = g.l2sq(dt);

    bool accepted = false;
    Vec u_try;
    double E_try = 0.0;
    for (int halve = 0; halve < 60; ++halve, s *= 0.5) {
      u_try = u - s * d;
      u_try /= std::sqrt(g.l2sq(u_try));
      E_try = eval(u_try);
      if (E_try <= E - 1e-4 * s * dtn2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Step collapsed against round-off; accept if already stationary.
      Multipliers m = recover_multipliers(Field(grid, u), p);
      out.converged = m.residual <= opts.residual_tol;
      break;
    }

    u = std::move(u_try);
    E = E_try;
    s *= 2.0;

    const double alpha = g.h1sq(u);
    if (alpha > alpha_cap) {
      out.u = Field(grid, std::move(u));
      out.h1sq = alpha;
      out.energy = E;
      out.hit_cap = true;
      out.iterations = it + 1;
      return out;
    }

    recent.push_back(E);
    if (recent.size() > 10) recent.pop_front();
    const bool flat =
        recent.size() == 10 &&
        std::abs(recent.front() - recent.back()) <=
            opts.energy_tol * std::max(std::abs(recent.back()), 1e-300);
    if (flat) {
      Multipliers m = recover_multipliers(Field(grid, u), p);
      if (m.residual <= opts.residual_tol) {
        out.converged = true;
        break;
      }
    }
  }

  out.u = Field(grid, u);
  out.h1sq = g.h1sq(u);
  out.energy = E;
  out.iterations = it;
  if (!out.converged) return out;  // non-convergence reported via the flag

  Multipliers m = recover_multipliers(out.u, p);
  out.lambda = m.lambda;
  out.residual = m.residual;
  if (out.u.values.maxCoeff() < -out.u.values.minCoeff()) out.u.values = -out.u.values;
  if (opts.compute_morse) {
    MorseCount mc = morse_index(out.u, out.lambda, mu, p);
    out.morse = mc.index;
    out.morse_borderline = mc.borderline;
  }
  return out;
}

double admissible_mu_bound(double alpha, double lambda_k, double M_estimate,
                           double measure_, double p) {
  if (!(alpha > lambda_k)) throw config_error("admissible_mu_bound: need alpha > lambda_k");
  const double m = std::pow(measure_, -(p - 1.0) / 2.0);
  if (!(M_estimate > m))
    throw config_error("admissible_mu_bound: need M_estimate > measure^{-(p-1)/2}");
  const double den = M_estimate - m;
  const double val = 0.5 * (p + 1.0) * (alpha - lambda_k) / den;
  return std::isfinite(val) ? val : std::numeric_limits<double>::infinity();
}

std::vector<WitnessPoint> blowup_witness(const GridPtr& grid, const SolitonProfile& prof,
                                         double mu, int n_scales) {
  const Grid& g = *grid;
  if (n_scales < 1) throw config_error("blowup_witness: n_scales must be >= 1");
  if (g.dim() != prof.dim) throw config_error("blowup_witness: dimension mismatch");
  const double p = prof.p;

  double cx = 0.0, cy = 0.0;
  switch (g.domain.kind) {
    case DomainKind::Interval:
      cx = 0.5 * (g.domain.a + g.domain.b);
      break;
    case DomainKind::Rectangle:
      cx = 0.5 * g.domain.w0;
      cy = 0.5 * g.domain.w1;
      break;
    case DomainKind::Disk:
      break;  // center
  }
  // Cutoff support: slightly inside the center-to-boundary distance.
  double r0 = 0.0;
  switch (g.domain.kind) {
    case DomainKind::Interval:
      r0 = 0.5 * (g.domain.b - g.domain.a);
      break;
    case DomainKind::Rectangle:
      r0 = 0.5 * std::min(g.domain.w0, g.domain.w1);
      break;
    case DomainKind::Disk:
      r0 = g.domain.radius;
      break;
  }
  r0 *= 0.9;

  // Smooth compactly supported cutoff, equal to 1 at the center.
  auto cutoff = [r0](double d) {
    const double t = d / r0;
    if (t >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
  };

  std::vector<WitnessPoint> out;
  const double a0 = r0 / (2.0 * std::max(1.0, prof.r_max / 10.0));
  for (int j = 0; j < n_scales; ++j) {
    const double a = a0 * std::pow(0.5, j);
    if (a < 5.0 * g.mesh_width) break;  // unresolvable suffix dropped

    Vec v(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      double d2 = (g.coords(i, 0) - cx) * (g.coords(i, 0) - cx);
      if (g.dim() == 2) d2 += (g.coords(i, 1) - cy) * (g.coords(i, 1) - cy);
      const double d = std::sqrt(d2);
      v[i] = cutoff(d) * prof.value_at(d / a);
    }
    const double nrm = std::sqrt(g.l2sq(v));
    if (!(nrm > 0.0)) break;
    v /= nrm;

    WitnessPoint wp;
    wp.scale = a;
    wp.alpha = g.h1sq(v);
    const double f = g.lq_pow(v, p + 1.0);
    wp.energy = 0.5 * wp.alpha - mu / (p + 1.0) * f;
    wp.gn_ratio = f / std::pow(wp.alpha, g.dim() * (p - 1.0) / 4.0);
    out.push_back(wp);
  }
  if (out.empty())
    throw numerical_error("blowup_witness: grid too coarse to resolve any scale");
  return out;
}

}  // namespace normsol
