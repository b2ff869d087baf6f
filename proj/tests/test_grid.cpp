#include <doctest.h>

#include <random>

#include "normsol/grid.hpp"
#include "normsol/snapshot.hpp"

using namespace normsol;

TEST_CASE("measure is exact for all domain kinds") {
  CHECK(measure(DomainSpec::interval(0, M_PI)) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(measure(DomainSpec::rectangle(2, 3)) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(measure(DomainSpec::disk(1)) == doctest::Approx(M_PI).epsilon(1e-15));
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(DomainSpec::interval(1, 1), config_error);
  CHECK_THROWS_AS(DomainSpec::rectangle(-1, 2), config_error);
  CHECK_THROWS_AS(DomainSpec::disk(0), config_error);
  CHECK_THROWS_AS(ProblemParams(2, 1.0), config_error);
  CHECK_THROWS_AS(ProblemParams(3, 5.0), config_error);
  CHECK(ProblemParams(1, 5.0).criticality() == Criticality::Critical);
  CHECK(ProblemParams(1, 3.0).criticality() == Criticality::Subcritical);
  CHECK(ProblemParams(1, 7.0).criticality() == Criticality::Supercritical);
  CHECK(ProblemParams(2, 3.0).criticality() == Criticality::Critical);
}

TEST_CASE("interval grid: node count and exact weight sum") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 2048);
  CHECK(g->size() == 2047);
  CHECK(g->weights.sum() == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK_THROWS_AS(build_grid(DomainSpec::interval(0, 1), 4), config_error);
}

TEST_CASE("rectangle grid: node count and weight sum") {
  auto g = build_grid(DomainSpec::rectangle(1, 1), 64);
  CHECK(g->size() == 63 * 63);
  CHECK(g->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disk grid weight sum matches the area at two resolutions") {
  for (int n : {64, 128}) {
    auto g = build_grid(DomainSpec::disk(1), n);
    CHECK(g->weights.sum() == doctest::Approx(M_PI).epsilon(5e-3));
  }
}

TEST_CASE("analytic norms of sin on (0,pi)") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 2048);
  Field u = sample_field(g, [](double x) { return std::sin(x); });
  FieldNorms nm = norms(u, 4.0);
  CHECK(nm.l2 * nm.l2 == doctest::Approx(M_PI / 2).epsilon(1e-7));
  CHECK(nm.h1seminorm * nm.h1seminorm == doctest::Approx(M_PI / 2).epsilon(1e-5));
  // int sin^4 = 3 pi / 8, cross-checked below by independent quadrature
  CHECK(std::pow(nm.lq, 4.0) == doctest::Approx(3 * M_PI / 8).epsilon(1e-6));

  double simpson = 0.0;
  const int m = 4096;
  const double h = M_PI / m;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    simpson += w * std::pow(std::sin(i * h), 4.0);
  }
  simpson *= h / 3.0;
  CHECK(std::pow(nm.lq, 4.0) == doctest::Approx(simpson).epsilon(1e-6));
}

TEST_CASE("operator symmetry and positivity on random fields") {
  for (auto dom : {DomainSpec::interval(0, 2), DomainSpec::rectangle(1, 2),
                   DomainSpec::disk(1)}) {
    auto g = build_grid(dom, 16);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 5; ++rep) {
      Vec u(g->size()), v(g->size());
      for (Eigen::Index i = 0; i < g->size(); ++i) {
        u[i] = gauss(rng);
        v[i] = gauss(rng);
      }
      const double a = g->inner(u, g->apply_neg_lap(v));
      const double b = g->inner(g->apply_neg_lap(u), v);
      CHECK(a == doctest::Approx(b).epsilon(1e-11));
      CHECK(g->h1sq(u) > 0.0);
    }
    CHECK(g->lambda1 > 0.0);
  }
}

TEST_CASE("h1 convergence order on sin is second order") {
  double errs[2];
  int idx = 0;
  for (int n : {256, 512}) {
    auto g = build_grid(DomainSpec::interval(0, M_PI), n);
    Field u = sample_field(g, [](double x) { return std::sin(x); });
    errs[idx++] = std::abs(u.h1sq() - M_PI / 2);
  }
  const double ratio = errs[0] / errs[1];
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("field snapshot round-trips") {
  auto g = build_grid(DomainSpec::rectangle(1.5, 2.5), 12);
  Field u = sample_field(g, [](double x, double y) { return x * y * (1 - x); });
  const std::string path = "snapshot_test.mbf";
  write_snapshot(path, u, 3.5);
  Snapshot s = read_snapshot(path);
  CHECK(s.p == 3.5);
  CHECK(s.field.grid->domain.kind == DomainKind::Rectangle);
  CHECK(s.field.grid->resolution == 12);
  REQUIRE(s.field.values.size() == u.values.size());
  CHECK((s.field.values - u.values).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("dual norm agrees with eigen relation") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 128);
  Field u = sample_field(g, [](double x) { return std::sin(x); });
  Vec r = g->apply_neg_lap(u.values);
  // ||(-Lap) u||_{H^-1} = |u|_{H^1}
  CHECK(g->dual_norm(r) == doctest::Approx(std::sqrt(u.h1sq())).epsilon(1e-10));
}
