#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "inertol/corrected_inertial.hpp"
#include "inertol/verify.hpp"
#include "test_support.hpp"

using namespace inertol;
using inertol::testing::rel_close;
using Catch::Approx;

namespace {

SimulationPlan gap_plan(std::size_t samples, std::uint64_t seed,
                        Distribution distribution = Distribution::Normal) {
  return {testing::gap_chain(), std::vector<ComponentProcess>(5, {0.03, 0.01, distribution}),
          samples, seed};
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

double grid_value(const AssemblyModel& model, double r_y, double icc, const std::vector<double>& offsets) {
  return cpk_general(model, r_y, icc, offsets);
}

}  // namespace

TEST_CASE("monte_carlo_assembly", "[verify]") {
  SECTION("gap chain matches the composed statistics") {
    const auto result = monte_carlo_assembly(gap_plan(200'000, 42));
    const BatchStats expected = BatchStats::from(0.03 * std::sqrt(5.0), -0.03);
    const auto agreement = compare_to(result, expected);
    CHECK(agreement.passed);
    CHECK(agreement.z_delta < 4.0);
    CHECK(agreement.z_sigma < 4.0);
    CHECK(result.sample_count == 200'000);
    CHECK(result.se_delta == Approx(result.empirical.sigma / std::sqrt(200'000.0)).epsilon(1e-12));
  }
  SECTION("components fixed on target give a constant resultant") {
    SimulationPlan plan{testing::gap_chain(), std::vector<ComponentProcess>(5), 1000, 7};
    const auto result = monte_carlo_assembly(plan);
    CHECK(result.empirical.delta == 0.0);
    CHECK(result.empirical.sigma == 0.0);
    CHECK(compare_to(result, BatchStats::from(0.0, 0.0)).passed);
    CHECK_FALSE(compare_to(result, BatchStats::from(0.0, 0.01)).passed);
  }
  SECTION("uniform draws give the same spread") {
    const auto result = monte_carlo_assembly(gap_plan(200'000, 3, Distribution::Uniform));
    CHECK(compare_to(result, BatchStats::from(0.03 * std::sqrt(5.0), -0.03)).passed);
  }
  SECTION("uniform and normal spreads agree") {
    const auto normal = monte_carlo_assembly(gap_plan(200'000, 11, Distribution::Normal));
    const auto uniform = monte_carlo_assembly(gap_plan(200'000, 12, Distribution::Uniform));
    const double se = std::hypot(normal.se_sigma, uniform.se_sigma);
    CHECK(std::abs(normal.empirical.sigma - uniform.empirical.sigma) < 4.0 * se);
  }
  SECTION("deterministic for a fixed seed") {
    const auto a = monte_carlo_assembly(gap_plan(50'000, 42));
    const auto b = monte_carlo_assembly(gap_plan(50'000, 42));
    CHECK(bit_equal(a.empirical.delta, b.empirical.delta));
    CHECK(bit_equal(a.empirical.sigma, b.empirical.sigma));
    CHECK(bit_equal(a.empirical.inertia, b.empirical.inertia));
    CHECK(bit_equal(a.se_sigma, b.se_sigma));
    const auto c = monte_carlo_assembly(gap_plan(50'000, 43));
    CHECK_FALSE(bit_equal(a.empirical.sigma, c.empirical.sigma));
  }
  SECTION("streams depend only on seed and index") {
    CHECK(component_stream_seed(42, 0) == component_stream_seed(42, 0));
    CHECK(component_stream_seed(42, 0) != component_stream_seed(42, 1));
    CHECK(component_stream_seed(42, 0) != component_stream_seed(43, 0));
    // Appending a component with no influence leaves the other draws untouched.
    const auto base = testing::gap_chain();
    std::vector<ComponentSpec> comps(base.components().begin(), base.components().end());
    comps.push_back({"X6", 0.0, 1.0, 0.0});
    SimulationPlan longer{AssemblyModel("gap6", comps, ResultantSpec::interval(1.0, 1.0)),
                          std::vector<ComponentProcess>(6, {0.03, 0.01, Distribution::Normal}), 5000,
                          9};
    const auto a = monte_carlo_assembly(gap_plan(5000, 9));
    const auto b = monte_carlo_assembly(longer);
    CHECK(bit_equal(a.empirical.delta, b.empirical.delta));
    CHECK(bit_equal(a.empirical.sigma, b.empirical.sigma));
  }
  SECTION("invalid plans") {
    CHECK_THROWS_AS(monte_carlo_assembly(gap_plan(99, 1)), Error);
    auto plan = gap_plan(1000, 1);
    plan.processes[2].sigma = -1.0;
    CHECK_THROWS_AS(monte_carlo_assembly(plan), Error);
    plan.processes.pop_back();
    CHECK_THROWS_AS(monte_carlo_assembly(plan), Error);
  }
}

TEST_CASE("grid_min_cpk", "[verify]") {
  SECTION("one component") {
    const auto g = grid_min_cpk(1, 1.0, 1.0, 2001);
    CHECK(std::abs(g.min_cpk - std::sqrt(1.0 - 1.0 / 9.0)) < 1e-3);
    CHECK(std::abs(g.argmin_offsets[0] - worst_offset(1.0, 1.0)) <= g.grid_step[0]);
    CHECK(g.evaluations == 2001);
  }
  SECTION("two components") {
    const auto g = grid_min_cpk(2, 1.0, 1.0, 401);
    CHECK(std::abs(g.min_cpk - std::sqrt(1.0 - 2.0 / 9.0)) < 1e-2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(g.argmin_offsets[i] - 1.0 / 18.0) <= g.grid_step[i]);
    }
    CHECK(g.evaluations == 401 * 401);
  }
  SECTION("three components") {
    const auto g = grid_min_cpk(3, 1.0, 1.0, 101);
    CHECK(std::abs(g.min_cpk - 0.8165) < 1e-2);
    CHECK(std::round(g.min_cpk * 1000.0) / 1000.0 == Approx(0.816).margin(1e-3));
  }
  SECTION("minimum is no larger than any grid point") {
    const auto g = grid_min_cpk(2, 1.0, 1.0, 41);
    const auto model = uniform_chain(2, ResultantSpec::interval(0.0, 1.0));
    const double limit = uniform_inertia_limit(1.0, 1.0, 2);
    const double last = limit * (1.0 - kGridEdgeMargin);
    for (int i = 0; i < 41; ++i) {
      for (int j = 0; j < 41; ++j) {
        const std::vector<double> offsets{last * i / 40.0, last * j / 40.0};
        REQUIRE(g.min_cpk <= grid_value(model, 1.0, 1.0, offsets) + 1e-12);
      }
    }
  }
  SECTION("refinement never raises the minimum") {
    for (std::size_t n = 1; n <= 3; ++n) {
      double previous = grid_min_cpk(n, 1.0, 1.2, 11).min_cpk;
      for (std::size_t res = 21; res <= (n == 3 ? 81u : 161u); res = 2 * res - 1) {
        const double current = grid_min_cpk(n, 1.0, 1.2, res).min_cpk;
        REQUIRE(current <= previous);
        previous = current;
      }
    }
  }
  SECTION("never below the analytic minimum") {
    for (double icc : {0.9, 1.2, 1.6}) {
      for (std::size_t n = 1; n <= 3; ++n) {
        const auto g = grid_min_cpk(n, 1.0, icc, 61);
        REQUIRE(g.min_cpk >= cpk_min(icc, n).value() - 1e-12);
      }
    }
  }
  SECTION("errors") {
    CHECK_THROWS_MATCHES(grid_min_cpk(5, 1.0, 1.0, 11), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.category() == ErrorCategory::UnsupportedSize;
                         }));
    CHECK_THROWS_AS(grid_min_cpk(2, 1.0, 1.0, 10), Error);
    CHECK_THROWS_AS(grid_min_cpk(0, 1.0, 1.0, 11), Error);
  }
}

TEST_CASE("grid_min_cpk_general", "[verify]") {
  SECTION("mixed signs match the uniform chain") {
    const auto g = grid_min_cpk_general(testing::chain({1.0, -1.0}), 1.0, 1.0, 401);
    const auto u = grid_min_cpk(2, 1.0, 1.0, 401);
    CHECK(g.min_cpk == Approx(u.min_cpk).epsilon(1e-12));
    CHECK(g.argmin_offsets[1] < 0.0);
  }
  SECTION("unequal incidence") {
    const double icc = 1.0;
    const auto g = grid_min_cpk_general(testing::chain({2.0, 1.0}), 1.0, icc, 401);
    CHECK(std::abs(g.min_cpk - std::sqrt(icc * icc - 2.0 / 9.0)) < 1e-2);
    const double star = worst_offset(1.0, icc);
    CHECK(std::abs(g.argmin_offsets[0] - star / 2.0) <= g.grid_step[0]);
    CHECK(std::abs(g.argmin_offsets[1] - star) <= g.grid_step[1]);
  }
  SECTION("single component with a large incidence") {
    const auto g = grid_min_cpk_general(testing::chain({3.0}), 1.0, 1.0, 2001);
    CHECK(std::abs(g.min_cpk - std::sqrt(1.0 - 1.0 / 9.0)) < 1e-3);
  }
  SECTION("zero incidence is rejected") {
    CHECK_THROWS_AS(grid_min_cpk_general(testing::chain({1.0, 0.0}), 1.0, 1.0, 11), Error);
  }
}

TEST_CASE("derivative_check", "[verify]") {
  const double limit = uniform_inertia_limit(1.0, 1.0, 3);
  for (int j = 1; j <= 100; ++j) {
    REQUIRE(derivative_check(1.0, 1.0, 3, limit * j / 101.0, 1e-7 * limit) < 1e-6);
  }
  const double star = worst_offset(1.0, 1.0);
  CHECK(std::abs(cpk_derivative(1.0, 1.0, 3, star)) < 1e-12);
  const double h = 1e-7 * limit;
  CHECK(std::abs((cpk_at_offset(1.0, 1.0, 3, star + h) - cpk_at_offset(1.0, 1.0, 3, star - h)) / (2 * h)) <
        1e-6);
  CHECK(cpk_derivative(1.0, 1.0, 3, 1e-9) == Approx(-6.0).epsilon(1e-6));

  CHECK_THROWS_AS(derivative_check(1.0, 1.0, 3, 1e-8, 1e-7), Error);
  CHECK_THROWS_AS(derivative_check(1.0, 1.0, 3, limit - 1e-8, 1e-7), Error);
  CHECK_THROWS_AS(derivative_check(1.0, 1.0, 3, 0.01, 0.0), Error);
}
