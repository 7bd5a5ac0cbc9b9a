#include <doctest.h>

#include <cmath>

#include "sabrlab/model.hpp"
#include "sabrlab/operators.hpp"
#include "sabrlab/rng.hpp"

using namespace sabrlab;

namespace {

// Random polynomial sum a_ij x^i y^j, i+j <= 3, with exact derivatives.
ScalarField random_polynomial(NormalSampler& rng) {
  std::array<std::array<double, 4>, 4> a{};
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3 - i; ++j) a[i][j] = rng.normal();
  ScalarField f;
  f.value = [a](double x, double y) {
    double s = 0.0;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3 - i; ++j) s += a[i][j] * std::pow(x, i) * std::pow(y, j);
    return s;
  };
  f.gradient = [a](double x, double y) -> std::array<double, 2> {
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3 - i; ++j) {
        if (i > 0) sx += a[i][j] * i * std::pow(x, i - 1) * std::pow(y, j);
        if (j > 0) sy += a[i][j] * j * std::pow(x, i) * std::pow(y, j - 1);
      }
    return {sx, sy};
  };
  f.hessian = [a](double x, double y) -> std::array<double, 3> {
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3 - i; ++j) {
        if (i > 1) sxx += a[i][j] * i * (i - 1) * std::pow(x, i - 2) * std::pow(y, j);
        if (i > 0 && j > 0) sxy += a[i][j] * i * j * std::pow(x, i - 1) * std::pow(y, j - 1);
        if (j > 1) syy += a[i][j] * j * (j - 1) * std::pow(x, i) * std::pow(y, j - 2);
      }
    return {sxx, sxy, syy};
  };
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams(0.5, -0.3, 1.0));
  CHECK_THROWS_AS(ModelParams(1.2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-0.1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.5, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(0.5, 0.0, 1.0, 0.0), std::invalid_argument);

  const ModelParams p(0.3, -0.6, 2.0);
  CHECK(p.rho_bar * p.rho_bar + p.rho * p.rho == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("power convention at the origin") {
  CHECK(pow_conv(0.0, 0.0) == 1.0);
  CHECK(pow_conv(0.0, 0.5) == 0.0);
  CHECK(pow_conv(0.0, 1.0) == 0.0);
  CHECK(pow_conv(2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sabr coefficients") {
  const ModelParams p(0.5, 0.0, 1.0);
  const auto c = sabr_coefficients(p, {1.0, 2.0, false});
  CHECK(c.diffusion[0][0] == doctest::Approx(2.0));
  CHECK(c.diffusion[0][1] == 0.0);
  CHECK(c.diffusion[1][0] == doctest::Approx(0.0));
  CHECK(c.diffusion[1][1] == doctest::Approx(2.0));
  CHECK(c.drift[0] == 0.0);
  CHECK(c.drift[1] == 0.0);

  SUBCASE("absorbed state short-circuits to zero") {
    const auto z = sabr_coefficients(p, {0.0, 2.0, true});
    CHECK(z.diffusion[0][0] == 0.0);
    CHECK(z.diffusion[1][1] == 0.0);
    CHECK(z.drift[0] == 0.0);
  }

  SUBCASE("drifted variant first-order term") {
    // (y^2/2) beta x^(2 beta - 1) = (4/2) * 0.5 * 1 = 1 at (1,2)
    const auto d = sabr_coefficients(p, {1.0, 2.0, false}, true);
    CHECK(d.drift[0] == doctest::Approx(1.0));
    CHECK(d.drift[1] == 0.0);
  }

  SUBCASE("correlated row follows the Cholesky convention") {
    const ModelParams q(0.5, 0.6, 2.0);
    const auto cc = sabr_coefficients(q, {1.0, 3.0, false});
    CHECK(cc.diffusion[1][0] == doctest::Approx(2.0 * 3.0 * 0.6));
    CHECK(cc.diffusion[1][1] == doctest::Approx(2.0 * 3.0 * 0.8));
  }

  CHECK_THROWS_AS(sabr_coefficients(p, {1.0, -1.0, false}), std::domain_error);
}

TEST_CASE("exact Stratonovich CEV map") {
  CHECK(cev_exact_stratonovich(1.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(cev_exact_stratonovich(1.0, 0.5, 1.0, 2.0) == doctest::Approx(4.0));
  CHECK(cev_exact_stratonovich(1.0, 0.0, 1.0, -2.0) == 0.0);
  CHECK_THROWS_AS(cev_exact_stratonovich(1.0, 1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("generator examples") {
  ScalarField fx;
  fx.value = [](double x, double) { return x; };
  fx.gradient = [](double, double) -> std::array<double, 2> { return {1.0, 0.0}; };
  fx.hessian = [](double, double) -> std::array<double, 3> { return {0.0, 0.0, 0.0}; };

  SUBCASE("A has no first-order term") {
    const GeneratorSpec a{GeneratorKind::SabrA, ModelParams(0.7, 0.3, 1.0)};
    CHECK(apply_generator(a, fx, 1.3, 0.8) == doctest::Approx(0.0));
  }

  SUBCASE("heat-generator first-order coefficient") {
    // (beta/2) y^2 x^(2 beta - 1) = 0.25 at (1,1) for beta = 1/2, any rho
    for (const double rho : {-0.4, 0.0, 0.4}) {
      const GeneratorSpec lb{GeneratorKind::LaplaceBeltrami, ModelParams(0.5, rho, 1.0)};
      CHECK(apply_generator(lb, fx, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }

  SUBCASE("hyperbolic metric Laplacian eigenfunction") {
    // r0(x,y) = 1 + (x^2 + (y-1)^2) / (2y) satisfies Lap r0 = 2 r0.
    ScalarField r0;
    r0.value = [](double x, double y) { return 1.0 + (x * x + (y - 1.0) * (y - 1.0)) / (2.0 * y); };
    const ModelParams p(0.0, 0.0, 1.0);
    for (const auto& pt : {std::array<double, 2>{0.5, 0.7}, {1.0, 1.0}, {2.0, 1.5}}) {
      const double lhs = metric_laplacian_richardson(p, r0, pt[0], pt[1], 1e-2);
      const double rhs = 2.0 * r0.value(pt[0], pt[1]);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }
  }
}

TEST_CASE("factorization A = y^2 Atilde on random polynomials") {
  NormalSampler rng(SeedSpec{42, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_polynomial(rng);
    const ModelParams p(0.05 * (trial % 20), 0.9 - 0.09 * (trial % 20), 1.0);
    const GeneratorSpec a{GeneratorKind::SabrA, p};
    const GeneratorSpec at{GeneratorKind::TimeChangedAtilde, p};
    for (int k = 0; k < 50; ++k) {
      const double x = 0.1 + 3.0 * rng.uniform01();
      const double y = 0.1 + 3.0 * rng.uniform01();
      const double av = apply_generator(a, f, x, y);
      const double tv = apply_generator(at, f, x, y);
      CHECK(std::abs(av - y * y * tv) <= 1e-10 * (1.0 + std::abs(av)));
    }
  }
}

TEST_CASE("weighted Laplace-Beltrami identity") {
  NormalSampler rng(SeedSpec{43, 0});
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_polynomial(rng);
    const ModelParams p(0.1 + 0.08 * trial, -0.8 + 0.16 * trial, 1.0);
    const GeneratorSpec a{GeneratorKind::SabrA, p};
    const GeneratorSpec w{GeneratorKind::WeightedLaplaceBeltrami, p};
    for (int k = 0; k < 50; ++k) {
      const double x = 0.2 + 2.0 * rng.uniform01();
      const double y = 0.2 + 2.0 * rng.uniform01();
      const double lhs = apply_generator(w, f, x, y);
      const double fy = f.gradient(x, y)[1];
      const double rhs =
          apply_generator(a, f, x, y) - y * y * p.rho * p.beta * std::pow(x, p.beta - 1.0) * fy;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }

  SUBCASE("rho = 0 collapses to the generator") {
    const auto f = random_polynomial(rng);
    const ModelParams p(0.6, 0.0, 1.0);
    const GeneratorSpec a{GeneratorKind::SabrA, p};
    const GeneratorSpec w{GeneratorKind::WeightedLaplaceBeltrami, p};
    for (int k = 0; k < 25; ++k) {
      const double x = 0.2 + 2.0 * rng.uniform01();
      const double y = 0.2 + 2.0 * rng.uniform01();
      CHECK(apply_generator(w, f, x, y) ==
            doctest::Approx(apply_generator(a, f, x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite differences agree with analytic derivatives at order h^2") {
  ScalarField f;
  f.value = [](double x, double y) { return x * x * x * x + y * y * y * y + x * x * y * y; };
  f.gradient = [](double x, double y) -> std::array<double, 2> {
    return {4.0 * x * x * x + 2.0 * x * y * y, 4.0 * y * y * y + 2.0 * x * x * y};
  };
  f.hessian = [](double x, double y) -> std::array<double, 3> {
    return {12.0 * x * x + 2.0 * y * y, 4.0 * x * y, 12.0 * y * y + 2.0 * x * x};
  };
  ScalarField fd_only;
  fd_only.value = f.value;

  const GeneratorSpec gen{GeneratorKind::LaplaceBeltrami, ModelParams(0.5, 0.3, 1.0)};
  const double x = 1.2, y = 0.9;
  const double exact = apply_generator(gen, f, x, y);
  const double h = 0.05;
  const double err_h = std::abs(apply_generator(gen, fd_only, x, y, h) - exact);
  const double err_h2 = std::abs(apply_generator(gen, fd_only, x, y, 0.5 * h) - exact);
  CHECK(err_h / err_h2 == doctest::Approx(4.0).epsilon(0.25));  // O(h^2) halving
  const double rich = apply_generator_richardson(gen, fd_only, x, y, h);
  CHECK(std::abs(rich - exact) < 0.05 * err_h2);

  SUBCASE("stencil must stay inside the state space") {
    CHECK_THROWS_AS(apply_generator(gen, fd_only, 1e-6, 1.0, 0.01), std::domain_error);
  }
}

TEST_SUITE_END();
