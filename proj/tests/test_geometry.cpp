#include <doctest.h>

#include <cmath>

#include "sabrlab/geometry.hpp"
#include "sabrlab/rng.hpp"

using namespace sabrlab;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("isometry examples") {
  SUBCASE("beta = rho = 0 is the identity") {
    const ModelParams p(0.0, 0.0, 1.0);
    const auto z = sabr_isometry(p, 0.7, 1.9);
    CHECK(z.u == doctest::Approx(0.7));
    CHECK(z.v == doctest::Approx(1.9));
  }
  SUBCASE("beta = 1/2 doubles the root") {
    const ModelParams p(0.5, 0.0, 1.0);
    const auto z = sabr_isometry(p, 1.0, 1.0);
    CHECK(z.u == doctest::Approx(2.0));
    CHECK(z.v == doctest::Approx(1.0));
  }
  SUBCASE("reference point maps to (c/rho_bar, 1)") {
    for (const double c : {1.0, 1.5, 2.0}) {
      for (const double rho : {-0.4, 0.0, 0.5}) {
        for (const double beta : {0.0, 0.3, 0.5, 0.75}) {
          const ModelParams p(beta, rho, 1.0);
          const double X = std::pow((1.0 - beta) * (c + rho), 1.0 / (1.0 - beta));
          const auto z = sabr_isometry(p, X, 1.0);
          CHECK(z.u == doctest::Approx(c / p.rho_bar).epsilon(1e-12));
          CHECK(z.v == doctest::Approx(1.0));
        }
      }
    }
  }
  CHECK_THROWS_AS(sabr_isometry(ModelParams(1.0, 0.0, 1.0), 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sabr_isometry(ModelParams(0.5, 0.0, 1.0), 0.0, 1.0), std::domain_error);
}

TEST_CASE("hyperbolic cosh distance") {
  CHECK(hyperbolic_cosh_distance({0.3, 1.7}, {0.3, 1.7}) == doctest::Approx(1.0));
  // vertical geodesic from (0,1) to (0,e) has length 1
  CHECK(hyperbolic_cosh_distance({0.0, 1.0}, {0.0, std::exp(1.0)}) ==
        doctest::Approx(std::cosh(1.0)).epsilon(1e-14));

  SUBCASE("symmetry and triangle inequality on random configurations") {
    NormalSampler rng(SeedSpec{7, 0});
    for (int k = 0; k < 200; ++k) {
      const HyperbolicPoint a{4.0 * rng.normal(), 0.1 + 3.0 * rng.uniform01()};
      const HyperbolicPoint b{4.0 * rng.normal(), 0.1 + 3.0 * rng.uniform01()};
      const HyperbolicPoint c{4.0 * rng.normal(), 0.1 + 3.0 * rng.uniform01()};
      CHECK(hyperbolic_cosh_distance(a, b) ==
            doctest::Approx(hyperbolic_cosh_distance(b, a)).epsilon(1e-14));
      const double dab = std::acosh(hyperbolic_cosh_distance(a, b));
      const double dbc = std::acosh(hyperbolic_cosh_distance(b, c));
      const double dac = std::acosh(hyperbolic_cosh_distance(a, c));
      CHECK(dac <= dab + dbc + 1e-12);
    }
  }
}

TEST_CASE("closed-form SABR distance equals the composed map") {
  NormalSampler rng(SeedSpec{8, 0});
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double beta = 0.95 * rng.uniform01();
    const double rho = -0.9 + 1.8 * rng.uniform01();
    const ModelParams p(beta, rho, 1.0);
    const double X = 0.05 + 4.0 * rng.uniform01();
    const double Y = 0.05 + 4.0 * rng.uniform01();
    const double x = 0.05 + 4.0 * rng.uniform01();
    const double y = 0.05 + 4.0 * rng.uniform01();
    const double direct = sabr_cosh_distance(p, X, Y, x, y);
    const double composed = hyperbolic_cosh_distance(sabr_isometry(p, X, Y), sabr_isometry(p, x, y));
    worst = std::max(worst, std::abs(direct - composed));
  }
  CHECK(worst <= 1e-12);

  SUBCASE("coincident points and the flat case") {
    const ModelParams p(0.4, 0.2, 1.0);
    CHECK(sabr_cosh_distance(p, 1.3, 0.7, 1.3, 0.7) == doctest::Approx(1.0));
    const ModelParams flat(0.0, 0.0, 1.0);
    CHECK(sabr_cosh_distance(flat, 1.0, 2.0, 3.0, 1.0) ==
          doctest::Approx(hyperbolic_cosh_distance({1.0, 2.0}, {3.0, 1.0})).epsilon(1e-14));
  }
}

TEST_CASE("Legendre recurrence against closed forms") {
  CHECK(legendre_eval(0, -2.5) == 1.0);
  CHECK(legendre_eval(0, 7.0) == 1.0);
  CHECK(legendre_eval(1, 3.0) == doctest::Approx(3.0));
  CHECK(legendre_eval(2, 2.0) == doctest::Approx(5.5));  // (3 r^2 - 1) / 2
  for (const double r : {-1.0, 1.0, 1.5, 2.0, 4.0}) {
    CHECK(std::abs(legendre_eval(2, r) - 0.5 * (3.0 * r * r - 1.0)) <= 1e-14);
    CHECK(std::abs(legendre_eval(3, r) - 0.5 * (5.0 * r * r * r - 3.0 * r)) <= 1e-13);
  }
  SUBCASE("derivative recurrence") {
    CHECK(legendre_derivative(0, 2.0) == 0.0);
    CHECK(legendre_derivative(1, 2.0) == 1.0);
    CHECK(legendre_derivative(2, 2.0) == doctest::Approx(6.0));       // 3r
    CHECK(legendre_derivative(2, 1.0) == doctest::Approx(3.0));       // n(n+1)/2 at r=1
    CHECK(legendre_derivative(3, 1.5) == doctest::Approx(0.5 * (15.0 * 1.5 * 1.5 - 3.0)));
  }
}

TEST_CASE("CEV Riemannian distance") {
  CHECK(cev_riemannian_distance(0.0, 1.0, 0.4, 2.1) == doctest::Approx(1.7));
  CHECK(cev_riemannian_distance(0.5, 1.0, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(std::isinf(cev_riemannian_distance(1.0, 1.0, 0.5, 2.0)));
  CHECK(cev_riemannian_distance(1.0, 1.0, 2.0, 2.0) == 0.0);
  // finite at the origin for every beta < 1
  for (const double beta : {0.0, 0.25, 0.5, 0.75, 0.9})
    CHECK(std::isfinite(cev_riemannian_distance(beta, 2.0, 0.0, 1.0)));
}

TEST_CASE("metric tensor is the inverse covariance") {
  SUBCASE("hyperbolic normalization at (1,1)") {
    const auto g = metric_tensor(ModelParams(0.0, 0.0, 1.0), 1.0, 1.0);
    CHECK(g.g_xx == doctest::Approx(1.0));
    CHECK(g.g_xy == doctest::Approx(0.0));
    CHECK(g.g_yy == doctest::Approx(1.0));
  }

  SUBCASE("g xi = identity at 500 random points") {
    NormalSampler rng(SeedSpec{9, 0});
    for (int k = 0; k < 500; ++k) {
      const double beta = 0.99 * rng.uniform01();
      const double rho = -0.9 + 1.8 * rng.uniform01();
      const ModelParams p(beta, rho, 1.0);
      const double x = 0.05 + 4.0 * rng.uniform01();
      const double y = 0.05 + 4.0 * rng.uniform01();
      const auto g = metric_tensor(p, x, y);
      const auto xi = xi_matrix(beta, rho, x, y);
      CHECK(g.g_xx * xi[0][0] + g.g_xy * xi[1][0] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(g.g_xx * xi[0][1] + g.g_xy * xi[1][1] == doctest::Approx(0.0).epsilon(1e-10));
      CHECK(g.g_xy * xi[0][1] + g.g_yy * xi[1][1] == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("beta = 1 specialization") {
    NormalSampler rng(SeedSpec{10, 0});
    for (int k = 0; k < 100; ++k) {
      const double rho = -0.8 + 1.6 * rng.uniform01();
      const ModelParams p(1.0, rho, 1.0);
      const double x = 0.1 + 3.0 * rng.uniform01();
      const double y = 0.1 + 3.0 * rng.uniform01();
      const auto g = metric_tensor(p, x, y);
      const double c = 1.0 / (1.0 - rho * rho);
      CHECK(g.g_xx == doctest::Approx(c / (y * y * x * x)).epsilon(1e-12));
      CHECK(g.g_xy == doctest::Approx(-c * rho / (y * y * x)).epsilon(1e-12));
      CHECK(g.g_yy == doctest::Approx(c / (y * y)).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(metric_tensor(ModelParams(0.5, 0.0, 1.0), 0.0, 1.0), std::domain_error);
}

TEST_SUITE_END();
