#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "inertol/stack_model.hpp"
#include "test_support.hpp"

using namespace inertol;
using inertol::testing::Generator;
using inertol::testing::rel_close;
using Catch::Approx;

TEST_CASE("inertia_from_stats", "[stack_model]") {
  CHECK(inertia_from_stats(0.03, 0.04) == Approx(0.05).epsilon(1e-15));
  CHECK(inertia_from_stats(0.7, 0.0) == 0.7);
  CHECK(inertia_from_stats(0.0596, 0.0) == 0.0596);
  CHECK(inertia_from_stats(0.0, -0.2) == 0.2);

  SECTION("rejects non-finite and negative input") {
    CHECK_THROWS_AS(inertia_from_stats(NAN, 0.0), Error);
    CHECK_THROWS_AS(inertia_from_stats(0.1, INFINITY), Error);
    CHECK_THROWS_AS(inertia_from_stats(-0.1, 0.0), Error);
  }
}

TEST_CASE("inertia_from_samples", "[stack_model]") {
  SECTION("symmetric pair") {
    const std::vector<double> xs{9.0, 11.0};
    const auto s = inertia_from_samples(xs, 10.0);
    CHECK(s.delta == 0.0);
    CHECK(s.sigma == 1.0);
    CHECK(s.inertia == 1.0);
  }
  SECTION("constant on target") {
    const std::vector<double> xs{10.0, 10.0, 10.0};
    const auto s = inertia_from_samples(xs, 10.0);
    CHECK(s.delta == 0.0);
    CHECK(s.sigma == 0.0);
    CHECK(s.inertia == 0.0);
  }
  SECTION("empty set") {
    CHECK_THROWS_AS(inertia_from_samples(std::vector<double>{}, 0.0), Error);
  }
  SECTION("population divisor") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    // sum of squared deviations 5, n = 4
    CHECK(inertia_from_samples(xs, 2.5).sigma == Approx(std::sqrt(5.0 / 4.0)));
  }
  SECTION("normal batch agrees with the closed form") {
    std::mt19937_64 engine(2024);
    std::normal_distribution<double> draw(10.04, 0.03);
    std::vector<double> xs(100'000);
    for (double& x : xs) x = draw(engine);
    const auto s = inertia_from_samples(xs, 10.0);
    // Standard error of sqrt(mean q), q = (x - target)^2, by the delta method.
    double q_mean = 0.0;
    for (double x : xs) q_mean += (x - 10.0) * (x - 10.0);
    q_mean /= xs.size();
    double q_var = 0.0;
    for (double x : xs) {
      const double q = (x - 10.0) * (x - 10.0);
      q_var += (q - q_mean) * (q - q_mean);
    }
    q_var /= xs.size();
    const double se = std::sqrt(q_var / xs.size()) / (2.0 * std::sqrt(q_mean));
    CHECK(std::abs(s.inertia - inertia_from_stats(0.03, 0.04)) <= 3.0 * se);
  }
}

TEST_CASE("taguchi_loss", "[stack_model]") {
  CHECK(taguchi_loss(1.0, BatchStats::from(0.03, 0.04)) == Approx(0.0025).epsilon(1e-14));
  CHECK(taguchi_loss(100.0, BatchStats::from(0.1, 0.0)) == Approx(1.0).epsilon(1e-14));
  CHECK(taguchi_loss(2.0, BatchStats::from(1.0, 1.0)) == Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(taguchi_loss(0.0, BatchStats::from(1.0, 0.0)), Error);
}

TEST_CASE("capability indices", "[stack_model]") {
  SECTION("inertial Cp") {
    CHECK(*cp_inertial(0.06, 0.03) == Approx(2.0));
    CHECK(*cp_inertial(0.25, 0.25) == 1.0);
    CHECK(*cp_inertial(0.0745, 0.0745) == 1.0);
    CHECK_FALSE(cp_inertial(0.06, 0.0).has_value());
  }
  SECTION("Cpi") {
    CHECK(*cpi(0.06, BatchStats::from(0.03, 0.04)) == Approx(1.2));
    CHECK(*cpi(0.06, BatchStats::from(0.06, 0.0)) == 1.0);
    CHECK_FALSE(cpi(0.06, BatchStats::from(0.0, 0.0)).has_value());
    const auto centered = BatchStats::from(0.021, 0.0);
    CHECK(*cpi(0.05, centered) == *cp_inertial(0.05, centered.sigma));
  }
  SECTION("interval Cpk") {
    CHECK(*cpk(1.0, 0.0, 1.0 / 6.0) == Approx(1.0));
    CHECK(*cpk(1.0, 0.1, 0.1) == Approx(4.0 / 3.0));
    CHECK(*cpk(1.0, 0.0, 1.0 / (6.0 * 1.25)) == Approx(1.25));
    CHECK_FALSE(cpk(1.0, 0.1, 0.0).has_value());
  }
  SECTION("Cpk matches the two-sided min form") {
    Generator gen(7);
    for (int trial = 0; trial < 200; ++trial) {
      const double width = gen.uniform(0.1, 3.0);
      const double target = gen.uniform(-5.0, 5.0);
      const double delta = gen.uniform(-1.0, 1.0);
      const double sigma = gen.uniform(0.01, 1.0);
      const double mean = target + delta;
      const double lower = target - width / 2.0;
      const double upper = target + width / 2.0;
      const double two_sided = std::min((mean - lower) / (3.0 * sigma), (upper - mean) / (3.0 * sigma));
      CHECK(rel_close(*cpk(width, delta, sigma), two_sided, 1e-9));
    }
  }
  SECTION("capability set of a perfect batch") {
    const auto set = capability(0.06, 1.0, BatchStats::from(0.0, 0.0));
    CHECK_FALSE(set.cp.has_value());
    CHECK_FALSE(set.cpi.has_value());
    CHECK_FALSE(set.cpk.has_value());
  }
  SECTION("centered batch: Cpi equals Cp") {
    const auto set = capability(0.06, std::nullopt, BatchStats::from(0.04, 0.0));
    CHECK(*set.cpi == *set.cp);
    CHECK_FALSE(set.cpk.has_value());
  }
}

TEST_CASE("AssemblyModel validation", "[stack_model]") {
  const auto spec = ResultantSpec::interval(1.0, 1.0);
  CHECK_THROWS_AS(AssemblyModel("empty", {}, spec), Error);
  CHECK_THROWS_AS(AssemblyModel("dup", {{"a", 1, 1, 0}, {"a", 1, 1, 0}}, spec), Error);
  CHECK_THROWS_AS(AssemblyModel("beta", {{"a", 1, 0.0, 0}}, spec), Error);
  CHECK_THROWS_AS(AssemblyModel("alpha", {{"a", NAN, 1, 0}}, spec), Error);
  CHECK_THROWS_AS(ResultantSpec::interval(0.0, 0.0), Error);
  CHECK_THROWS_AS(ResultantSpec::inertia(0.0, -1.0), Error);

  SECTION("alpha0 defaults to a nominal chain on target") {
    const AssemblyModel m("m", {{"a", 1, 1, 10.0}, {"b", -1, 1, 4.0}}, spec);
    CHECK(m.alpha0() == Approx(1.0 - 6.0));
    CHECK(m.nominal_resultant() == Approx(1.0));
  }
  SECTION("zero alpha is allowed but reported") {
    const AssemblyModel m("m", {{"a", 1, 1, 0}, {"b", 0, 1, 0}}, spec);
    CHECK(m.non_influential() == std::vector<std::string>{"b"});
  }
  SECTION("interval bounds") {
    const auto r = ResultantSpec::interval(1.0, 1.0);
    CHECK(r.lower() == 0.5);
    CHECK(r.upper() == 1.5);
    CHECK_THROWS_AS(r.max_inertia(), Error);
    CHECK_THROWS_AS(ResultantSpec::inertia(0.0, 0.1).width(), Error);
  }
}

TEST_CASE("resultant composition", "[stack_model]") {
  SECTION("centered components give a centered resultant") {
    const auto model = testing::chain({1.0, -2.0, 0.5});
    const std::vector<BatchStats> s{BatchStats::from(0.1, 0.0), BatchStats::from(0.2, 0.0),
                                    BatchStats::from(0.3, 0.0)};
    CHECK(resultant_stats(model, s).delta == 0.0);
  }
  SECTION("five-component gap chain") {
    const auto model = testing::gap_chain();
    const std::vector<BatchStats> s(5, BatchStats::from(0.03, 0.01));
    const auto y = resultant_stats(model, s);
    // delta_Y = 0.01 - 4 * 0.01; sigma_Y = sqrt(5 * 0.03^2)
    CHECK(y.delta == Approx(-0.03).epsilon(1e-12));
    CHECK(y.sigma == Approx(0.03 * std::sqrt(5.0)).epsilon(1e-12));
    CHECK(y.sigma == Approx(0.06708).epsilon(1e-4));
  }
  SECTION("single component is the identity") {
    const auto model = testing::chain({1.0});
    const std::vector<BatchStats> s{BatchStats::from(0.02, -0.01)};
    const auto y = resultant_stats(model, s);
    CHECK(y.delta == s[0].delta);
    CHECK(y.sigma == s[0].sigma);
    CHECK(y.inertia == s[0].inertia);
  }
  SECTION("inertia: aligned pure offsets stack linearly") {
    const auto model = testing::chain({1.0, 1.0});
    const std::vector<BatchStats> s(2, BatchStats::from(0.0, 1.0));
    CHECK(resultant_inertia(model, s) == Approx(2.0));
  }
  SECTION("inertia: centered components add in quadrature") {
    const auto model = testing::chain({1.0, 1.0});
    const std::vector<BatchStats> s(2, BatchStats::from(1.0, 0.0));
    CHECK(resultant_inertia(model, s) == Approx(std::sqrt(2.0)));
  }
  SECTION("length mismatch") {
    const auto model = testing::chain({1.0, 1.0});
    const std::vector<BatchStats> s(3);
    CHECK_THROWS_AS(resultant_stats(model, s), Error);
    CHECK_THROWS_AS(resultant_inertia(model, s), Error);
  }
}

TEST_CASE("stack_model properties", "[stack_model][property]") {
  Generator gen(0xC0FFEE);

  SECTION("double-product inertia equals the inertia of composed statistics") {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto model = gen.model(10);
      const auto s = gen.stats(model.size());
      const double direct = resultant_inertia(model, s);
      const double composed = resultant_stats(model, s).inertia;
      REQUIRE(rel_close(direct, composed, 1e-12));
    }
  }
  SECTION("inertia squared is sigma squared plus delta squared") {
    for (int trial = 0; trial < 500; ++trial) {
      const double sigma = gen.uniform(0.0, 10.0);
      const double delta = gen.uniform(-10.0, 10.0);
      const double i = inertia_from_stats(sigma, delta);
      REQUIRE(rel_close(i * i, sigma * sigma + delta * delta, 1e-14));
      REQUIRE(i >= std::abs(delta));
      REQUIRE(i >= sigma);
    }
  }
  SECTION("sample inertia: direct form equals the stats form") {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> xs(gen.count(1, 50));
      for (double& x : xs) x = gen.uniform(-3.0, 3.0);
      const double target = gen.uniform(-1.0, 1.0);
      const auto s = inertia_from_samples(xs, target);
      REQUIRE(rel_close(s.inertia, std::hypot(s.sigma, s.delta), 1e-12));
    }
  }
  SECTION("Cpk is even in delta and reduces to W / (6 sigma) on center") {
    for (int trial = 0; trial < 200; ++trial) {
      const double w = gen.uniform(0.1, 5.0);
      const double d = gen.uniform(-1.0, 1.0);
      const double s = gen.uniform(0.01, 1.0);
      REQUIRE(*cpk(w, d, s) == *cpk(w, -d, s));
      REQUIRE(rel_close(*cpk(w, 0.0, s), w / (6.0 * s), 1e-14));
    }
  }
  SECTION("inertia is homogeneous under scaling") {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> xs(gen.count(1, 30));
      for (double& x : xs) x = gen.uniform(-3.0, 3.0);
      const double target = gen.uniform(-1.0, 1.0);
      const double c = gen.uniform(0.01, 100.0);
      std::vector<double> scaled;
      for (double x : xs) scaled.push_back(c * x);
      REQUIRE(rel_close(inertia_from_samples(scaled, c * target).inertia,
                        c * inertia_from_samples(xs, target).inertia, 1e-12));
    }
  }
}
