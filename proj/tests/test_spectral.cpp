#include <doctest.h>

#include <cmath>

#include "normsol/spectral.hpp"

using namespace normsol;

namespace {

// Independent Bessel-root oracle: plain bisection on std::cyl_bessel_j.
double bessel_root_oracle(double nu, double lo, double hi) {
  auto f = [nu](double x) { return std::cyl_bessel_j(nu, x); };
  REQUIRE(f(lo) * f(hi) < 0.0);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("interval spectrum k^2 within 0.1%") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 2048);
  auto pairs = dirichlet_eigs(g, 3);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].lambda == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(pairs[1].lambda == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(pairs[2].lambda == doctest::Approx(9.0).epsilon(1e-3));
  for (const auto& ep : pairs) {
    CHECK(ep.residual < 1e-8);
    // Rayleigh quotient reproduces the eigenvalue
    CHECK(ep.phi.h1sq() == doctest::Approx(ep.lambda).epsilon(1e-10));
    CHECK(ep.phi.l2() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // phi_1 is positive
  CHECK(pairs[0].phi.values.minCoeff() > 0.0);
  // pairwise orthonormality
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j)
      CHECK(std::abs(g->inner(pairs[i].phi.values, pairs[j].phi.values)) < 1e-10);
}

TEST_CASE("square spectrum (m^2+n^2) pi^2 with a double eigenvalue") {
  auto g = build_grid(DomainSpec::rectangle(1, 1), 64);
  auto pairs = dirichlet_eigs(g, 3);
  const double pi2 = M_PI * M_PI;
  CHECK(pairs[0].lambda == doctest::Approx(2 * pi2).epsilon(5e-3));
  CHECK(pairs[1].lambda == doctest::Approx(5 * pi2).epsilon(5e-3));
  CHECK(pairs[2].lambda == doctest::Approx(5 * pi2).epsilon(5e-3));
  CHECK(pairs[0].phi.values.minCoeff() > 0.0);
}

TEST_CASE("disk lambda_1 equals the squared first Bessel zero") {
  auto g = build_grid(DomainSpec::disk(1), 128);
  auto pairs = dirichlet_eigs(g, 1);
  const double j01 = bessel_root_oracle(0.0, 2.0, 3.0);
  CHECK(pairs[0].lambda == doctest::Approx(j01 * j01).epsilon(5e-3));
}

TEST_CASE("morse index of the pure Laplacian is zero") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 256);
  auto pairs = dirichlet_eigs(g, 1);
  MorseCount mc = morse_index(pairs[0].phi, 0.0, 0.0, 3.0);
  CHECK(mc.index == 0);
  CHECK(mc.borderline == 0);
}

TEST_CASE("morse index counts shifted eigenvalues and is sign-flip invariant") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 512);
  auto pairs = dirichlet_eigs(g, 3);
  // -Lap - 5: eigenvalues k^2 - 5, negative for k = 1, 2.
  Field zero(g, Vec::Zero(g->size()));
  MorseCount mc = morse_index(zero, -5.0, 0.0, 3.0);
  CHECK(mc.index == 2);

  // a potential well from a field; flipping the sign changes nothing
  Field u = pairs[0].phi;
  MorseCount m1 = morse_index(u, -2.0, 1.5, 3.0);
  Field neg(g, Vec(-u.values));
  MorseCount m2 = morse_index(neg, -2.0, 1.5, 3.0);
  CHECK(m1.index == m2.index);
  CHECK(m1.borderline == m2.borderline);
}

TEST_CASE("morse index matches dense eigen-decomposition on a coarse grid") {
  auto g = build_grid(DomainSpec::interval(0, 4), 96);
  // two-bump potential
  Field u = sample_field(g, [](double x) {
    return 1.7 * (std::exp(-8 * (x - 1.3) * (x - 1.3)) - std::exp(-8 * (x - 2.7) * (x - 2.7)));
  });
  const double lambda = 0.8, mu = 4.0, p = 3.0;
  MorseCount mc = morse_index(u, lambda, mu, p);

  // oracle: dense symmetric eigenproblem of W^{-1/2}(K + W diag(c))W^{-1/2}
  Eigen::MatrixXd A = Eigen::MatrixXd(g->stiffness);
  Eigen::VectorXd s = g->weights.array().sqrt();
  for (Eigen::Index i = 0; i < g->size(); ++i) {
    const double c = lambda - p * mu * std::pow(std::abs(u.values[i]), p - 1.0);
    A(i, i) += g->weights[i] * c;
  }
  for (Eigen::Index i = 0; i < g->size(); ++i)
    for (Eigen::Index j = 0; j < g->size(); ++j) A(i, j) /= s[i] * s[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const int oracle = int((es.eigenvalues().array() < 0.0).count());
  CHECK(mc.index == oracle);
  CHECK(mc.index >= 2);
}

TEST_CASE("yang_check arithmetic") {
  const double pi2 = M_PI * M_PI;
  CHECK(yang_check(2 * pi2, 5 * pi2, 2));              // bound 6 pi^2
  CHECK_FALSE(yang_check(1.0, 9.0, 1));                // bound 5
  CHECK(yang_check(1.0, (1.0 + 2.0 / 4.0) * std::pow(2.0, 2.0 / 2.0), 2));  // boundary
  CHECK_THROWS_AS(yang_check(-1.0, 2.0, 1), config_error);
}

TEST_CASE("eigen_sphere_points lands on both constraints") {
  auto g = build_grid(DomainSpec::interval(0, M_PI), 512);
  auto pairs = dirichlet_eigs(g, 4);

  SUBCASE("k = 1 single blend") {
    Vec x(1);
    x[0] = 1.0;
    const double alpha = 2.5;
    Field u = eigen_sphere_points(pairs, alpha, 1, x);
    CHECK(u.l2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(u.h1sq() == doctest::Approx(alpha).epsilon(1e-10));
    // coefficients ((4-2.5)/(4-1))^{1/2} and ((2.5-1)/(4-1))^{1/2} (discrete lambdas)
    const double l1 = pairs[0].lambda, l2 = pairs[1].lambda;
    const double c1 = std::sqrt((l2 - alpha) / (l2 - l1));
    const double c2 = std::sqrt((alpha - l1) / (l2 - l1));
    CHECK(c1 == doctest::Approx(std::sqrt((4 - 2.5) / 3.0)).epsilon(1e-4));
    CHECK(c2 == doctest::Approx(std::sqrt((2.5 - 1) / 3.0)).epsilon(1e-4));
    Vec expect = c1 * pairs[0].phi.values + c2 * pairs[1].phi.values;
    CHECK((u.values - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("k = 2 blend keeps both constraints") {
    Vec x(2);
    x[0] = std::sqrt(0.5);
    x[1] = -std::sqrt(0.5);
    const double alpha = 0.5 * (pairs[1].lambda + pairs[2].lambda);
    Field u = eigen_sphere_points(pairs, alpha, 2, x);
    CHECK(u.l2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(u.h1sq() == doctest::Approx(alpha).epsilon(1e-10));
  }

  SUBCASE("degenerate level is rejected") {
    Vec x(1);
    x[0] = 1.0;
    CHECK_THROWS_AS(eigen_sphere_points(pairs, pairs[0].lambda, 1, x), config_error);
    CHECK_THROWS_AS(eigen_sphere_points(pairs, 2.5, 4, x), config_error);
    Vec bad(1);
    bad[0] = 0.7;
    CHECK_THROWS_AS(eigen_sphere_points(pairs, 2.5, 1, bad), config_error);
  }
}

TEST_CASE("interval eigenvalue convergence is second order") {
  double errs[2];
  int idx = 0;
  for (int n : {128, 256}) {
    auto g = build_grid(DomainSpec::interval(0, M_PI), n);
    errs[idx++] = std::abs(dirichlet_eigs(g, 1)[0].lambda - 1.0);
  }
  const double ratio = errs[0] / errs[1];
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}
