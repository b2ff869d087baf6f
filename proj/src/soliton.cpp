#include "normsol/soliton.hpp"

#include <cmath>
#include <limits>

namespace normsol {

namespace {

constexpr int kSteps = 1 << 17;

double odd_pow(double z, double p) { return std::copysign(std::pow(std::abs(z), p), z); }

struct OdeState {
  double z, v;
};

OdeState rhs(double r, OdeState s, int N, double p) {
  const double g = s.z - odd_pow(s.z, p);
  double vp;
  if (r < 1e-14)
    vp = g / N;
  else
    vp = g - (N - 1) / r * s.v;
  return {s.v, vp};
}

OdeState rk4_step(double r, OdeState s, double h, int N, double p) {
  OdeState k1 = rhs(r, s, N, p);
  OdeState k2 = rhs(r + 0.5 * h, {s.z + 0.5 * h * k1.z, s.v + 0.5 * h * k1.v}, N, p);
  OdeState k3 = rhs(r + 0.5 * h, {s.z + 0.5 * h * k2.z, s.v + 0.5 * h * k2.v}, N, p);
  OdeState k4 = rhs(r + h, {s.z + h * k3.z, s.v + h * k3.v}, N, p);
  return {s.z + h / 6.0 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
          s.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

// Series start near the axis: Z = a + c r^2 + e r^4 with the coefficients
// forced by the ODE, avoiding the 0/0 at r = 0.
OdeState series_start(double a, double h, int N, double p) {
  const double c = (a - std::pow(a, p)) / (2.0 * N);
  const double e = c * (1.0 - p * std::pow(a, p - 1.0)) / (4.0 * (N + 2.0));
  return {a + c * h * h + e * h * h * h * h, 2.0 * c * h + 4.0 * e * h * h * h};
}

enum class Shot { Crossed, Turned, Decayed };

Shot classify(double a, int N, double p, double r_max, double h) {
  OdeState s = series_start(a, h, N, p);
  double r = h;
  while (r < r_max) {
    if (s.z <= 0.0 || !std::isfinite(s.z)) return Shot::Crossed;
    if (s.v >= 0.0) return Shot::Turned;
    s = rk4_step(r, s, h, N, p);
    r += h;
  }
  return Shot::Decayed;
}

// Decaying solution of the linearized far field w'' + (N-1)/r w' - w = 0.
double tail_shape(double r, int N) {
  switch (N) {
    case 1:
      return std::exp(-r);
    case 2:
      return std::cyl_bessel_k(0.0, r);
    default:
      return std::exp(-r) / r;
  }
}
double tail_shape_deriv(double r, int N) {
  switch (N) {
    case 1:
      return -std::exp(-r);
    case 2:
      return -std::cyl_bessel_k(1.0, r);
    default:
      return -std::exp(-r) * (1.0 + 1.0 / r) / (r);
  }
}

double simpson(const Vec& y, double h) {
  const Eigen::Index n = y.size() - 1;  // intervals, even by construction
  double acc = y[0] + y[n];
  for (Eigen::Index i = 1; i < n; i += 2) acc += 4.0 * y[i];
  for (Eigen::Index i = 2; i < n; i += 2) acc += 2.0 * y[i];
  return acc * h / 3.0;
}

double sphere_factor(int N) {
  switch (N) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * M_PI;
    default:
      return 4.0 * M_PI;
  }
}

}  // namespace

double SolitonProfile::value_at(double rr) const {
  if (rr < 0.0) rr = -rr;
  if (rr >= r_max) return 0.0;
  const double t = rr / dr;
  const Eigen::Index i = Eigen::Index(t);
  if (i + 1 >= z.size()) return z[z.size() - 1];
  const double s = t - double(i);
  return (1.0 - s) * z[i] + s * z[i + 1];
}

SolitonProfile shoot_ground_state(int N, double p, double tol, double r_max0) {
  ProblemParams params(N, p);  // validates the (N, p) range
  (void)params;
  if (!(r_max0 >= 10.0)) throw config_error("shoot_ground_state: r_max too small");

  double r_max = r_max0;
  const double graft_frac = 1e-4;

  for (int attempt = 0; attempt < 4; ++attempt, r_max *= 2.0) {
    const double h = r_max / kSteps;

    // Bracket: a = 1 is the constant equilibrium (sub-shot); double until
    // the trajectory crosses zero.
    double lo = 1.0, hi = 2.0;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
      if (classify(hi, N, p, r_max, h) == Shot::Crossed) {
        bracketed = true;
        break;
      }
      lo = hi;
      hi *= 2.0;
    }
    if (!bracketed) throw numerical_error("shoot_ground_state: bisection bracket not found");

    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (classify(mid, N, p, r_max, h) == Shot::Crossed)
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 1e-16 * hi) break;
    }
    const double a = lo;

    SolitonProfile prof;
    prof.dim = N;
    prof.p = p;
    prof.z0 = a;
    prof.r_max = r_max;
    prof.dr = h;
    prof.r.resize(kSteps + 1);
    prof.z.resize(kSteps + 1);
    prof.dz.resize(kSteps + 1);

    prof.r[0] = 0.0;
    prof.z[0] = a;
    prof.dz[0] = 0.0;
    OdeState s = series_start(a, h, N, p);
    prof.r[1] = h;
    prof.z[1] = s.z;
    prof.dz[1] = s.v;

    Eigen::Index graft = -1;
    for (Eigen::Index i = 2; i <= kSteps; ++i) {
      s = rk4_step(prof.r[i - 1], s, h, N, p);
      prof.r[i] = i * h;
      prof.z[i] = s.z;
      prof.dz[i] = s.v;
      if (s.z <= graft_frac * a || s.v >= 0.0 || s.z <= 0.0) {
        graft = i;
        break;
      }
    }
    if (graft < 0 || prof.z[graft] <= 0.0 || prof.dz[graft] >= 0.0)
      continue;  // tail not reached cleanly: double r_max and retry

    const double scale = prof.z[graft] / tail_shape(prof.r[graft], N);
    for (Eigen::Index i = graft; i <= kSteps; ++i) {
      prof.z[i] = scale * tail_shape(i * h, N);
      prof.dz[i] = scale * tail_shape_deriv(i * h, N);
    }
    if (prof.z[kSteps] >= 1e-10 * a) continue;  // tail not converged

    for (Eigen::Index i = 0; i < kSteps; ++i)
      if (!(prof.z[i + 1] < prof.z[i]) || !(prof.z[i + 1] > 0.0))
        throw numerical_error("shoot_ground_state: profile not strictly decreasing");

    const double S = sphere_factor(N);
    Vec rpow(kSteps + 1);
    for (Eigen::Index i = 0; i <= kSteps; ++i) rpow[i] = std::pow(prof.r[i], N - 1);
    prof.l2sq = S * simpson((prof.z.array().square() * rpow.array()).matrix(), h);
    prof.gradsq = S * simpson((prof.dz.array().square() * rpow.array()).matrix(), h);
    prof.lp1 = S * simpson((prof.z.array().pow(p + 1.0) * rpow.array()).matrix(), h);
    prof.energy = 0.5 * prof.gradsq + 0.5 * prof.l2sq - prof.lp1 / (p + 1.0);

    // Pohozaev consistency guards the whole pipeline.
    const double lp1_id = 2.0 * (p + 1.0) / (p - 1.0) * prof.energy;
    if (std::abs(prof.lp1 - lp1_id) > std::max(tol, 1e-4) * prof.lp1)
      throw numerical_error("shoot_ground_state: Pohozaev identity violated");
    return prof;
  }
  throw numerical_error("shoot_ground_state: tolerance unachievable at chosen r_max");
}

double gn_constant(const SolitonProfile& prof) {
  const double N = prof.dim, p = prof.p;
  const double theta = N * (p - 1.0) / 4.0;
  const double eta = (p + 1.0) - N * (p - 1.0) / 2.0;
  return prof.lp1 / (std::pow(prof.gradsq, theta) * std::pow(prof.l2sq, eta / 2.0));
}

Constants thresholds(int N, double p, double C_Np, double lambda1, double lambda3) {
  ProblemParams params(N, p);
  if (!(C_Np > 0.0)) throw config_error("thresholds: C_Np must be positive");
  if (!(lambda1 > 0.0) || !(lambda3 >= lambda1))
    throw config_error("thresholds: need 0 < lambda1 <= lambda3");

  Constants c;
  c.dim = N;
  c.p = p;
  c.beta = N * (p - 1.0) / 4.0;
  c.C_Np = C_Np;

  const double beta = c.beta;
  // (beta-1)^{beta-1} -> 1 at beta = 1; kept at 1 below critical as well,
  // where D_Np is unused (the thresholds are infinite there).
  const double bfac = beta > 1.0 ? std::pow(beta - 1.0, beta - 1.0) : 1.0;
  c.D_Np = std::pow((p + 1.0) / (2.0 * C_Np) * bfac / std::pow(beta, beta), 2.0 / (p - 1.0));

  const bool critical = std::abs(beta - 1.0) < 1e-14;
  c.rho_star = critical ? std::pow((p + 1.0) / (2.0 * C_Np), N / 2.0)
                        : std::numeric_limits<double>::quiet_NaN();

  const double expo = 2.0 / (p - 1.0) - N / 2.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (beta < 1.0 && !critical) {
    c.rho1_lower = inf;
    c.rho3_lower = inf;
  } else if (critical) {
    c.rho1_lower = c.rho_star;
    c.rho3_lower = 2.0 * c.rho_star;
  } else {
    c.rho1_lower = c.D_Np * std::pow(lambda1, expo);
    c.rho3_lower = 2.0 * c.D_Np * std::pow(lambda3, expo);
  }
  return c;
}

double mu_from_rho(double rho, double p) {
  if (!(rho > 0.0)) throw config_error("mu_from_rho: rho must be positive");
  return std::pow(rho, (p - 1.0) / 2.0);
}

double rho_from_mu(double mu, double p) {
  if (!(mu > 0.0)) throw config_error("rho_from_mu: mu must be positive");
  return std::pow(mu, 2.0 / (p - 1.0));
}

MuHatResult mu_hat_1_detail(double lambda1, double C_Np, double measure, int N, double p) {
  if (!(lambda1 > 0.0) || !(measure > 0.0) || !(C_Np > 0.0))
    throw config_error("mu_hat_1: inputs must be positive");
  const double beta = N * (p - 1.0) / 4.0;
  const double m = std::pow(measure, -(p - 1.0) / 2.0);
  const double inf = std::numeric_limits<double>::infinity();

  auto g = [&](double alpha) {
    const double den = C_Np * std::pow(alpha, beta) - m;
    if (den <= 0.0) return inf;
    return 0.5 * (p + 1.0) * (alpha - lambda1) / den;
  };

  if (beta < 1.0) return {inf, inf};  // numerator linear, denominator sublinear
  if (std::abs(beta - 1.0) < 1e-14) {
    // Monotone on (lambda1, inf) when C lambda1 >= m; sup is the limit.
    if (C_Np * lambda1 < m) return {inf, lambda1};
    return {(p + 1.0) / (2.0 * C_Np), inf};
  }
  if (C_Np * std::pow(lambda1, beta) <= m) return {inf, lambda1};

  // Unimodal for beta > 1: golden-section on log alpha.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(lambda1 * (1.0 + 1e-12));
  double hi = std::log(lambda1) + std::log(1e8);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = g(std::exp(x1)), f2 = g(std::exp(x2));
  for (int it = 0; it < 300 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = g(std::exp(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = g(std::exp(x1));
    }
  }
  const double alpha_star = std::exp(0.5 * (lo + hi));
  return {g(alpha_star), alpha_star};
}

}  // namespace normsol
