#include <doctest.h>

#include <cmath>
#include <random>

#include "normsol/soliton.hpp"

using namespace normsol;

namespace {

// Independent coarse shooting oracle: separate RK4 loop at a different
// step, bisection on the initial height only; returns Z(0).
double shoot_oracle_z0(int N, double p, double h) {
  auto classify_crossed = [&](double a) {
    double z = a, v = 0.0, r = 0.0;
    const double rmax = 25.0;
    while (r < rmax) {
      auto f = [&](double zz, double vv, double rr) {
        const double g = zz - std::copysign(std::pow(std::abs(zz), p), zz);
        return rr < 1e-14 ? g / N : g - (N - 1) / rr * vv;
      };
      const double k1z = v, k1v = f(z, v, r);
      const double k2z = v + 0.5 * h * k1v, k2v = f(z + 0.5 * h * k1z, v + 0.5 * h * k1v, r + 0.5 * h);
      const double k3z = v + 0.5 * h * k2v, k3v = f(z + 0.5 * h * k2z, v + 0.5 * h * k2v, r + 0.5 * h);
      const double k4z = v + h * k3v, k4v = f(z + h * k3z, v + h * k3v, r + h);
      z += h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      r += h;
      if (z <= 0.0) return true;
      if (v >= 0.0 && r > 2 * h) return false;
    }
    return false;
  };
  double lo = 1.0, hi = 2.0;
  while (!classify_crossed(hi)) hi *= 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (classify_crossed(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("N=1 p=3 matches sqrt(2) sech(x) closed form") {
  auto prof = shoot_ground_state(1, 3.0);
  CHECK(prof.z0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6 / std::sqrt(2.0)));
  CHECK(prof.l2sq == doctest::Approx(4.0).epsilon(1e-4 / 4.0));
  CHECK(prof.gradsq == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
  CHECK(prof.lp1 == doctest::Approx(16.0 / 3.0).epsilon(1e-4));

  // pointwise agreement with the analytic profile
  for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double exact = std::sqrt(2.0) / std::cosh(r);
    CHECK(prof.value_at(r) == doctest::Approx(exact).epsilon(1e-5));
  }

  // independent quadrature of the analytic profile reproduces l2sq
  double acc = 0.0;
  const int m = 200000;
  const double h = 30.0 / m;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * 2.0 / std::pow(std::cosh(i * h), 2.0);
  }
  acc *= 2.0 * h / 3.0;  // two half-lines
  CHECK(prof.l2sq == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("N=1 p=5 mass matches sqrt(3) pi / 2") {
  auto prof = shoot_ground_state(1, 5.0);
  const double expect = std::sqrt(3.0) * M_PI / 2.0;
  CHECK(prof.l2sq == doctest::Approx(expect).epsilon(1e-4 / expect));
  CHECK(prof.z0 == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-6));
}

TEST_CASE("gn_constant closed form and critical identities") {
  SUBCASE("N=1 p=3: C = 1/sqrt(3)") {
    auto prof = shoot_ground_state(1, 3.0);
    CHECK(gn_constant(prof) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
  }
  SUBCASE("N=1 p=5 critical identity") {
    auto prof = shoot_ground_state(1, 5.0);
    const double C = gn_constant(prof);
    CHECK(std::pow((5.0 + 1.0) / (2.0 * C), 0.5) ==
          doctest::Approx(prof.l2sq).epsilon(5e-3));
  }
  SUBCASE("N=2 p=3 critical identity") {
    auto prof = shoot_ground_state(2, 3.0);
    const double C = gn_constant(prof);
    CHECK(std::pow((3.0 + 1.0) / (2.0 * C), 1.0) ==
          doctest::Approx(prof.l2sq).epsilon(5e-3));
  }
}

TEST_CASE("N=2 p=3 height agrees with an independent coarse shooter") {
  auto prof = shoot_ground_state(2, 3.0);
  const double oracle = shoot_oracle_z0(2, 3.0, 1e-3);
  CHECK(prof.z0 == doctest::Approx(oracle).epsilon(5e-3));
}

TEST_CASE("Pohozaev identities hold on the profile") {
  for (auto [N, p] : {std::pair<int, double>{1, 3.0}, {1, 7.0}, {2, 3.0}, {3, 3.0}}) {
    auto prof = shoot_ground_state(N, p);
    const double E = prof.energy;
    CHECK(std::abs(prof.lp1 - 2.0 * (p + 1) / (p - 1) * E) <= 1e-4 * prof.lp1);
    CHECK(std::abs(prof.l2sq - (N + 2 - p * (N - 2)) / (p - 1) * E) <= 1e-4 * prof.l2sq);
  }
}

TEST_CASE("profile is positive, decreasing, with a converged tail") {
  auto prof = shoot_ground_state(1, 7.0);
  CHECK(prof.z[prof.z.size() - 1] < 1e-8 * prof.z0);
  for (Eigen::Index i = 0; i + 1 < prof.z.size(); ++i) {
    REQUIRE(prof.z[i] > 0.0);
    REQUIRE(prof.z[i + 1] < prof.z[i]);
  }

  // finite-difference equation residual along the mesh
  double worst = 0.0;
  const double h = prof.dr;
  for (Eigen::Index i = 1; i + 1 < prof.z.size(); i += 37) {
    const double zpp = (prof.z[i + 1] - 2 * prof.z[i] + prof.z[i - 1]) / (h * h);
    const double zp = (prof.z[i + 1] - prof.z[i - 1]) / (2 * h);
    const double res = zpp + (prof.dim - 1) / prof.r[i] * zp - prof.z[i] +
                       std::pow(prof.z[i], prof.p);
    worst = std::max(worst, std::abs(res));
  }
  CHECK(worst < 1e-5 * prof.z0);
}

TEST_CASE("doubling r_max leaves the norms unchanged") {
  auto a = shoot_ground_state(1, 3.0, 1e-10, 30.0);
  auto b = shoot_ground_state(1, 3.0, 1e-10, 60.0);
  CHECK(a.l2sq == doctest::Approx(b.l2sq).epsilon(1e-8));
  CHECK(a.gradsq == doctest::Approx(b.gradsq).epsilon(1e-8));
  CHECK(a.lp1 == doctest::Approx(b.lp1).epsilon(1e-8));
}

TEST_CASE("thresholds algebra") {
  SUBCASE("beta arithmetic and critical coincidences") {
    auto prof = shoot_ground_state(1, 5.0);
    const double C = gn_constant(prof);
    Constants c = thresholds(1, 5.0, C, 1.0, 9.0);
    CHECK(c.beta == doctest::Approx(1.0).epsilon(1e-15));
    // formula-level identity D = rho_star at the critical exponent
    CHECK(std::abs(c.D_Np - c.rho_star) <= 1e-12 * c.rho_star);
    CHECK(c.rho1_lower == doctest::Approx(c.rho_star).epsilon(1e-15));
    CHECK(c.rho3_lower == doctest::Approx(2 * c.rho_star).epsilon(1e-15));
    // and both equal the soliton mass up to quadrature error
    CHECK(c.rho_star == doctest::Approx(prof.l2sq).epsilon(5e-3));
  }
  SUBCASE("supercritical beta and finite thresholds") {
    Constants c = thresholds(1, 7.0, 0.4, 2.0, 18.0);
    CHECK(c.beta == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(std::isfinite(c.rho1_lower));
    CHECK(c.rho1_lower > 0.0);
    CHECK(std::isnan(c.rho_star));
    // rho1_lower = D lambda1^{2/(p-1) - N/2}
    CHECK(c.rho1_lower ==
          doctest::Approx(c.D_Np * std::pow(2.0, 2.0 / 6.0 - 0.5)).epsilon(1e-14));
  }
  SUBCASE("subcritical thresholds are infinite") {
    Constants c = thresholds(1, 3.0, 1.0 / std::sqrt(3.0), 1.0, 9.0);
    CHECK(std::isinf(c.rho1_lower));
    CHECK(std::isinf(c.rho3_lower));
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(thresholds(1, 0.5, 1.0, 1.0, 2.0), config_error);
    CHECK_THROWS_AS(thresholds(1, 3.0, -1.0, 1.0, 2.0), config_error);
    CHECK_THROWS_AS(thresholds(1, 3.0, 1.0, 2.0, 1.0), config_error);
  }
}

TEST_CASE("mu/rho conversions") {
  CHECK(mu_from_rho(1.0, 3.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mu_from_rho(4.0, 3.0) == doctest::Approx(4.0).epsilon(1e-15));  // rho^{(p-1)/2}, p = 3
  CHECK(mu_from_rho(4.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rho_from_mu(9.0, 5.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(rho_from_mu(mu_from_rho(2.31, 4.1), 4.1) == doctest::Approx(2.31).epsilon(1e-13));
  CHECK_THROWS_AS(mu_from_rho(0.0, 3.0), config_error);
  CHECK_THROWS_AS(rho_from_mu(-2.0, 3.0), config_error);
}

TEST_CASE("mu_hat_1: closed-form lower bound, grid-scan oracle, limits") {
  SUBCASE("supercritical: golden section matches a dense grid scan") {
    const double lambda1 = 1.0, C = 0.35, meas = M_PI;
    const int N = 1;
    const double p = 7.0;
    MuHatResult mh = mu_hat_1_detail(lambda1, C, meas, N, p);
    REQUIRE(std::isfinite(mh.value));
    CHECK(mh.value > 0.0);

    const double beta = N * (p - 1.0) / 4.0;
    const double m = std::pow(meas, -(p - 1.0) / 2.0);
    double best = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double alpha = lambda1 * std::pow(1e8, (i + 0.5) / 100000.0);
      const double den = C * std::pow(alpha, beta) - m;
      if (den <= 0) continue;
      best = std::max(best, 0.5 * (p + 1) * (alpha - lambda1) / den);
    }
    CHECK(mh.value == doctest::Approx(best).epsilon(1e-3));

    // paper-level closed-form lower bound (drop the measure term)
    const double lower = (p + 1.0) / (2.0 * C) * std::pow(beta - 1.0, beta - 1.0) /
                         std::pow(beta, beta) * std::pow(lambda1, -(beta - 1.0));
    CHECK(mh.value >= lower * (1.0 - 1e-12));
  }
  SUBCASE("subcritical is unbounded") {
    CHECK(std::isinf(mu_hat_1(1.0, 0.6, M_PI, 1, 3.0)));
  }
  SUBCASE("critical value is (p+1)/(2C)") {
    const double C = 4.0 / (M_PI * M_PI);  // approximately C_{1,5}
    CHECK(mu_hat_1(1.0, C, M_PI, 1, 5.0) ==
          doctest::Approx((5.0 + 1.0) / (2.0 * C)).epsilon(1e-12));
  }
}

TEST_CASE("GN inequality holds for random discrete fields with computed C") {
  auto prof = shoot_ground_state(1, 3.0);
  const double C = gn_constant(prof);
  auto g = build_grid(DomainSpec::interval(0, M_PI), 128);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  const double p = 3.0;
  for (int rep = 0; rep < 200; ++rep) {
    Vec v(g->size());
    for (Eigen::Index i = 0; i < g->size(); ++i) v[i] = gauss(rng);
    Field u(g, std::move(v));
    const double lhs = g->lq_pow(u.values, p + 1.0);
    const double rhs = C * std::pow(u.h1sq(), 1.0 * (p - 1.0) / 4.0 * 2.0) *
                       std::pow(u.l2(), (p + 1.0) - 1.0 * (p - 1.0) / 2.0);
    CHECK(lhs <= (1.0 + 1e-3) * rhs);
  }
}
