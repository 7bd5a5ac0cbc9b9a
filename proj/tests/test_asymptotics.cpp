#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "sabrlab/asymptotics.hpp"
#include "sabrlab/experiments.hpp"
#include "sabrlab/parallel.hpp"

using namespace sabrlab;

TEST_SUITE_BEGIN("asymptotics");

TEST_CASE("Wilson interval") {
  const auto ci = wilson_interval(50, 100);
  CHECK(ci.lo < 0.5);
  CHECK(ci.hi > 0.5);
  CHECK(wilson_interval(0, 100).lo == 0.0);
  CHECK(wilson_interval(100, 100).hi == 1.0);

  SUBCASE("coverage on synthetic Bernoulli streams") {
    const double p_true = 0.3;
    int covered = 0;
    for (int rep = 0; rep < 200; ++rep) {
      NormalSampler rng(SeedSpec{900u + static_cast<std::uint64_t>(rep), 0});
      std::size_t k = 0;
      const std::size_t n = 500;
      for (std::size_t i = 0; i < n; ++i)
        if (rng.uniform01() < p_true) ++k;
      const auto c = wilson_interval(k, n);
      if (c.lo <= p_true && p_true <= c.hi) ++covered;
    }
    CHECK(covered >= 186);  // >= 93% coverage at nominal 95%
  }
}

TEST_CASE("total clock") {
  const ModelParams p(0.5, 0.0, 1.0);

  SUBCASE("mean matches the geometric-Brownian second moment") {
    // E integral_0^T Y^2 = y0^2 (e^(nu^2 T) - 1) / nu^2
    const double T = 0.5;
    const std::size_t n = 20000;
    std::vector<double> draws(n);
    parallel_for(n, [&](std::size_t i) {
      NormalSampler rng(SeedSpec{1001, i});
      draws[i] = total_clock(p, 1.0, T, 1e-3, rng).value;
    });
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
    double var = 0.0;
    for (const double v : draws) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (n - 1.0) / n);
    const double expected = std::expm1(1.0 * T);
    CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-3);
  }

  SUBCASE("fast vol-of-vol converges quickly") {
    const ModelParams fast(0.5, 0.0, 4.0);
    for (std::uint64_t i = 0; i < 20; ++i) {
      NormalSampler rng(SeedSpec{1002, i});
      CHECK(total_clock(fast, 1.0, 50.0, 0.01, rng).converged);
    }
  }

  SUBCASE("small starting volatility gives a vanishing clock") {
    NormalSampler rng(SeedSpec{1003, 0});
    CHECK(total_clock(p, 1e-6, 10.0, 0.01, rng).value <= 1e-9);
  }

  SUBCASE("adaptive horizon extends the same draw") {
    NormalSampler rng(SeedSpec{1004, 0});
    const auto d = total_clock_adaptive(p, 1.0, 0.01, rng, 5.0, 400.0);
    CHECK(d.value > 0.0);
    CHECK(d.horizon <= 400.0 + 1e-9);
  }

  CHECK_THROWS_AS(
      [] {
        NormalSampler rng(SeedSpec{1, 0});
        total_clock(ModelParams(0.5, 0.0, 0.0), 1.0, 1.0, 0.01, rng);
      }(),
      std::domain_error);
}

TEST_CASE("absorption probability by the clock race") {
  const ModelParams p(0.5, 0.0, 1.0);

  SUBCASE("absorbing start") {
    McConfig mc;
    mc.n = 100;
    const auto est = absorption_probability(p, 0.0, 1.0, false, mc);
    CHECK(est.p_hat == 0.0);
  }

  SUBCASE("nondegenerate estimate with a CI inside (0,1)") {
    McConfig mc;
    mc.n = 3000;
    mc.dt = 0.02;
    mc.master_seed = 5;
    const auto est = absorption_probability(p, 1.0, 1.0, false, mc);
    CHECK(est.p_hat > 0.02);
    CHECK(est.p_hat < 0.98);
    CHECK(est.ci.lo > 0.0);
    CHECK(est.ci.hi < 1.0);
    CHECK(est.tail_fraction < 0.05);
  }

  SUBCASE("monotone in the starting forward") {
    McConfig mc;
    mc.n = 3000;
    mc.dt = 0.02;
    mc.master_seed = 6;
    const auto low = absorption_probability(p, 1.0, 1.0, false, mc);
    const auto high = absorption_probability(p, 4.0, 1.0, false, mc);
    CHECK(high.p_hat >= low.p_hat - 0.05);
  }

  SUBCASE("drifted variant allows correlation") {
    McConfig mc;
    mc.n = 1500;
    mc.dt = 0.02;
    mc.master_seed = 7;
    const auto est = absorption_probability(ModelParams(0.5, 0.5, 1.0), 1.0, 1.0, true, mc);
    CHECK(est.p_hat > 0.0);
    CHECK(est.p_hat < 1.0);
  }

  CHECK_THROWS_AS(absorption_probability(ModelParams(0.5, 0.5, 1.0), 1.0, 1.0, false, McConfig{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(absorption_probability(ModelParams(1.0, 0.0, 1.0), 1.0, 1.0, false, McConfig{}),
                  std::domain_error);
}

TEST_CASE("case decomposition") {
  const TimeGrid grid(0.0, 2.0, 4);
  SUBCASE("forward hits, volatility does not") {
    const ScalarPath x{grid, {2.0, 1.0, 0.0, 0.0, 0.0}};
    const ScalarPath y{grid, {1.0, 1.0, 1.0, 1.0, 1.0}};
    CHECK(case_decomposition(x, y) == CaseTag::HitBeforeClockEnds);
  }
  SUBCASE("volatility hits, forward does not") {
    const ScalarPath x{grid, {2.0, 2.0, 2.0, 2.0, 2.0}};
    const ScalarPath y{grid, {1.0, 0.5, 0.0, 0.0, 0.0}};
    CHECK(case_decomposition(x, y) == CaseTag::ClockEndsFirst);
  }
  SUBCASE("synthetic simultaneous hit") {
    const ScalarPath x{grid, {2.0, 1.0, 0.0, 0.0, 0.0}};
    const ScalarPath y{grid, {2.0, 1.0, 0.0, 0.0, 0.0}};
    CHECK(case_decomposition(x, y) == CaseTag::Simultaneous);
  }
  SUBCASE("neither hits") {
    const ScalarPath x{grid, {2.0, 2.0, 2.0, 2.0, 2.0}};
    const ScalarPath y{grid, {1.0, 1.0, 1.0, 1.0, 1.0}};
    CHECK(case_decomposition(x, y) == CaseTag::Undecided);
  }

  SUBCASE("batch partition with a small undecided tail") {
    const ModelParams p(0.5, 0.0, 1.0);
    const std::size_t n = 2000;
    const auto counts = case_count_batch(p, 1.0, 1.0, 100.0, 0.01, n, 99);
    CHECK(counts.hit_before_clock + counts.clock_ends_first + counts.simultaneous +
              counts.undecided ==
          n);
    CHECK(static_cast<double>(counts.undecided) / n < 0.05);
    CHECK(counts.hit_before_clock > 0);
    CHECK(counts.clock_ends_first > 0);
  }
}

TEST_CASE("Feller boundary classification at infinity") {
  for (const double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(feller_boundary_class(beta) == BoundaryClass::NotEntrance);
    CHECK(std::isinf(cev_entrance_integral(beta)));
  }
  CHECK(feller_boundary_class(1.5) == BoundaryClass::Entrance);
  CHECK(feller_boundary_class(2.0) == BoundaryClass::Entrance);
  CHECK(std::abs(cev_entrance_integral(2.0) - 0.5) <= 1e-14);
  CHECK(cev_entrance_integral(1.5) == doctest::Approx(1.0));
}

TEST_CASE("mass at zero") {
  const ModelParams p(0.5, 0.9, 1.0);

  SUBCASE("zero horizon") {
    McConfig mc;
    mc.n = 100;
    CHECK(mass_at_zero(p, 1.0, 1.0, 0.0, mc).p_hat == 0.0);
  }

  SUBCASE("large-time regime gives an interior fraction") {
    McConfig mc;
    mc.n = 2000;
    mc.dt = 0.01;
    mc.master_seed = 11;
    const auto est = mass_at_zero(p, 1.0, 1.0, 100.0, mc);
    CHECK(est.p_hat > 0.0);
    CHECK(est.p_hat < 1.0);
  }

  SUBCASE("nondecreasing in the horizon") {
    McConfig mc;
    mc.n = 2000;
    mc.dt = 0.01;
    mc.master_seed = 12;
    const auto early = mass_at_zero(p, 1.0, 1.0, 10.0, mc);
    const auto late = mass_at_zero(p, 1.0, 1.0, 80.0, mc);
    CHECK(late.p_hat >= early.p_hat - 0.03);
  }

  SUBCASE("consistency with the clock race at rho = 0") {
    const ModelParams q(0.5, 0.0, 1.0);
    McConfig mc;
    mc.n = 4000;
    mc.dt = 0.02;
    mc.master_seed = 13;
    const auto mass = mass_at_zero(q, 1.0, 1.0, 120.0, mc);
    const auto race = absorption_probability(q, 1.0, 1.0, false, mc);
    const double half_widths =
        0.5 * (mass.ci.hi - mass.ci.lo) + 0.5 * (race.ci.hi - race.ci.lo);
    CHECK(std::abs((1.0 - mass.p_hat) - race.p_hat) <= half_widths + 0.04);
  }
}

TEST_SUITE_END();
