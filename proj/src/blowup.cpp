#include "normsol/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normsol {

namespace {

// Linear extrapolation to t = 0 of y against t = lambda^{-1/2}, least
// squares over the last `m` points, optionally dropping trailing points.
double extrapolate(const std::vector<RatioRow>& rows,
                   double (*pick)(const RatioRow&), int drop, int m = 5) {
  const int n = int(rows.size()) - drop;
  const int lo = std::max(0, n - m);
  double st = 0, sy = 0, stt = 0, sty = 0, cnt = 0;
  for (int i = lo; i < n; ++i) {
    const double t = 1.0 / std::sqrt(rows[i].lambda);
    const double y = pick(rows[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    cnt += 1.0;
  }
  const double det = cnt * stt - st * st;
  if (std::abs(det) < 1e-300) return sy / std::max(cnt, 1.0);
  return (sy * stt - st * sty) / det;  // intercept at t = 0
}

double pick_ratio(const RatioRow& r) { return r.alpha_over_lambda; }
double pick_gn(const RatioRow& r) { return r.gn_ratio; }
double pick_mu(const RatioRow& r) { return r.mu; }

}  // namespace

BlowupReport asymptotic_ratios_rows(const std::vector<RatioRow>& rows, int N, double p,
                                    double lambda1) {
  if (rows.size() < 5 || rows.back().alpha < 100.0 * lambda1)
    throw numerical_error("asymptotic_ratios: branch too short");
  (void)N;
  (void)p;

  BlowupReport rep;
  rep.rows = rows;

  rep.verdicts.alpha_lambda_limit = extrapolate(rows, pick_ratio, 0);
  rep.verdicts.gn_ratio_limit = extrapolate(rows, pick_gn, 0);

  const double mu_mid = rows[rows.size() / 2].mu;
  const double e0 = extrapolate(rows, pick_mu, 0);
  const double e1 = extrapolate(rows, pick_mu, 1);
  const double e2 = extrapolate(rows, pick_mu, 2);

  if (rows.back().mu > 1.5 * mu_mid && mu_mid > 0.0) {
    rep.verdicts.mu_trichotomy = "to_infinity";
    rep.verdicts.mu_limit = std::numeric_limits<double>::infinity();
  } else if (e0 <= 0.1 * mu_mid) {
    rep.verdicts.mu_trichotomy = "to_zero";
    rep.verdicts.mu_limit = 0.0;
  } else if (std::abs(e1 - e0) <= 0.02 * std::abs(e0) &&
             std::abs(e2 - e0) <= 0.02 * std::abs(e0)) {
    rep.verdicts.mu_trichotomy = "finite";
    rep.verdicts.mu_limit = e0;
  } else {
    rep.verdicts.mu_trichotomy = "undetermined";
    rep.verdicts.mu_limit = std::numeric_limits<double>::quiet_NaN();
  }

  const double r1 = extrapolate(rows, pick_ratio, 1);
  const double g1 = extrapolate(rows, pick_gn, 1);
  rep.verdicts.stable =
      std::abs(r1 - rep.verdicts.alpha_lambda_limit) <=
          0.01 * std::abs(rep.verdicts.alpha_lambda_limit) &&
      std::abs(g1 - rep.verdicts.gn_ratio_limit) <=
          0.01 * std::abs(rep.verdicts.gn_ratio_limit);
  return rep;
}

BlowupReport asymptotic_ratios(const Branch& branch, double lambda1) {
  const double p = branch.p;
  const int N = branch.domain.dim();
  std::vector<RatioRow> rows;
  rows.reserve(branch.points.size());
  for (const CriticalPoint& cp : branch.points) {
    RatioRow r;
    r.alpha = cp.alpha;
    r.lambda = cp.lambda;
    r.mu = cp.mu;
    r.alpha_over_lambda = cp.alpha / cp.lambda;
    r.gn_ratio = cp.f / std::pow(cp.alpha, N * (p - 1.0) / 4.0);
    rows.push_back(r);
  }
  return asymptotic_ratios_rows(rows, N, p, lambda1);
}

BumpInfo bump_detect(const Field& u, double lambda) {
  if (!(lambda > 0.0)) throw config_error("bump_detect: lambda must be positive");
  const Grid& g = *u.grid;
  const double umax = u.values.cwiseAbs().maxCoeff();
  const double threshold = 0.2 * umax;
  const double suppress = 5.0 / std::sqrt(lambda);

  std::vector<Eigen::Index> candidates;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double a = std::abs(u.values[i]);
    if (a < threshold) continue;
    bool is_max = true;
    for (SparseMat::InnerIterator it(g.stiffness, i); it; ++it) {
      if (it.row() == i) continue;
      if (std::abs(u.values[it.row()]) > a) {
        is_max = false;
        break;
      }
    }
    if (is_max) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(u.values[a]) > std::abs(u.values[b]);
  });

  BumpInfo info;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c : candidates) {
    bool ok = true;
    for (Eigen::Index kpt : kept) {
      const double d = (g.coords.row(c) - g.coords.row(kpt)).norm();
      if (d < suppress) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(c);
  }

  const double sq = std::sqrt(lambda);
  double min_sep = std::numeric_limits<double>::infinity();
  double min_bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < kept.size(); ++i) {
    info.centers.push_back(g.coords.row(kept[i]).transpose());
    min_bd = std::min(min_bd, sq * g.boundary_dist[kept[i]]);
    for (size_t j = 0; j < i; ++j)
      min_sep = std::min(min_sep, sq * (g.coords.row(kept[i]) - g.coords.row(kept[j])).norm());
  }
  info.min_separation_scaled = min_sep;
  info.min_boundary_dist_scaled = min_bd;
  return info;
}

double decay_fit(const Field& u, double lambda,
                 const std::vector<Eigen::VectorXd>& centers) {
  if (centers.empty()) throw config_error("decay_fit: need at least one center");
  if (!(lambda > 0.0)) throw config_error("decay_fit: lambda must be positive");
  const Grid& g = *u.grid;
  const double umax = u.values.cwiseAbs().maxCoeff();
  const double sq = std::sqrt(lambda);

  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double a = std::abs(u.values[i]);
    if (a < 1e-8 * umax || a > 1e-2 * umax) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : centers)
      d = std::min(d, (g.coords.row(i).transpose() - c).norm());
    const double x = sq * d;
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (cnt < 10 || xmax - xmin < 1.0)
    throw numerical_error("decay_fit: insufficient dynamic range");
  const double det = cnt * sxx - sx * sx;
  const double slope = (cnt * sxy - sx * sy) / det;
  return -slope;
}

PohozaevCheck pohozaev_check(const Field& u, double lambda, double mu, double p) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw config_error("pohozaev_check: lambda and mu must be positive");
  const Grid& g = *u.grid;
  const int N = g.dim();

  const double umax = u.values.cwiseAbs().maxCoeff();
  double edge = 0.0;
  const double shell = 1.6 * g.mesh_width;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (g.boundary_dist[i] <= shell) edge = std::max(edge, std::abs(u.values[i]));
  if (edge > 0.01 * umax)
    throw numerical_error("pohozaev_check: domain too small (boundary effects > 1%)");

  const double s2 = std::pow(mu / lambda, 2.0 / (p - 1.0)) * std::pow(lambda, N / 2.0);
  const double sp = std::pow(mu / lambda, (p + 1.0) / (p - 1.0)) * std::pow(lambda, N / 2.0);

  PohozaevCheck out;
  out.v_l2sq = s2 * g.l2sq(u.values);
  out.v_gradsq = s2 * g.h1sq(u.values) / lambda;
  out.v_lp1 = sp * g.lq_pow(u.values, p + 1.0);
  out.v_energy = 0.5 * out.v_gradsq + 0.5 * out.v_l2sq - out.v_lp1 / (p + 1.0);

  const double lp1_id = 2.0 * (p + 1.0) / (p - 1.0) * out.v_energy;
  const double l2_id = (N + 2.0 - p * (N - 2.0)) / (p - 1.0) * out.v_energy;
  out.res_lp1 = std::abs(out.v_lp1 - lp1_id) / out.v_lp1;
  out.res_l2 = std::abs(out.v_l2sq - l2_id) / out.v_l2sq;
  return out;
}

}  // namespace normsol
