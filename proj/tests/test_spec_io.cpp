#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <functional>
#include <fstream>

#include "inertol/report.hpp"
#include "inertol/spec_io.hpp"
#include "test_support.hpp"

using namespace inertol;
using Catch::Matchers::ContainsSubstring;

namespace {

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::Usage;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("inertol_test_" + name);
}

}  // namespace

TEST_CASE("parse_assembly_spec", "[spec_io]") {
  SECTION("gap example file") {
    const auto model = parse_assembly_spec(std::filesystem::path(INERTOL_TEST_DATA_DIR) / "gap.json");
    CHECK(model.size() == 5);
    CHECK(model.name() == "gap");
    CHECK(model.resultant().width() == 1.0);
    CHECK(model.resultant().target() == 1.0);
    CHECK(model.components()[0].alpha == 1.0);
    for (std::size_t i = 1; i < 5; ++i) CHECK(model.components()[i].alpha == -1.0);
    CHECK(model.is_uniform());
  }
  SECTION("beta and target default") {
    const auto model = parse_assembly_spec_text(
        R"({"name": "a", "resultant": {"target": 0, "width": 2}, "components": [{"name": "x", "alpha": 2}]})");
    CHECK(model.components()[0].beta == 1.0);
    CHECK(model.components()[0].target == 0.0);
  }
  SECTION("inertia requirement") {
    const auto model = parse_assembly_spec_text(
        R"({"name": "a", "resultant": {"target": 0, "inertia": 0.1}, "components": [{"name": "x", "alpha": 1}]})");
    CHECK_FALSE(model.resultant().is_interval());
    CHECK(model.resultant().max_inertia() == 0.1);
  }
  SECTION("errors carry their location") {
    auto parse = [](const char* text) { return [text] { parse_assembly_spec_text(text, "f.json"); }; };
    CHECK(category_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1}, "components": []})")) ==
          ErrorCategory::Parse);
    CHECK_THAT(message_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": -1},
                                    "components": [{"name": "x", "alpha": 1}]})")),
               ContainsSubstring("f.json") && ContainsSubstring("width"));
    CHECK_THAT(message_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1},
                                    "components": [{"name": "x", "alpha": 1}, {"name": "x", "alpha": 1}]})")),
               ContainsSubstring("x"));
    CHECK_THAT(message_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1},
                                    "components": [{"name": "x"}]})")),
               ContainsSubstring("components[0].alpha"));
    CHECK_THAT(message_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1, "inertia": 1},
                                    "components": [{"name": "x", "alpha": 1}]})")),
               ContainsSubstring("resultant"));
    CHECK_THAT(message_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1},
                                    "components": [{"name": "x", "alpha": 1, "colour": 2}]})")),
               ContainsSubstring("colour"));
    CHECK_THAT(message_of(parse("{\"name\": \"a\",\n  \"resultant\": }")), ContainsSubstring("f.json:2"));
    CHECK(category_of(parse(R"({"name": "a", "resultant": {"target": 0, "width": 1},
                               "components": [{"name": "x", "alpha": 1, "beta": 0}]})")) ==
          ErrorCategory::Parse);
  }
  SECTION("missing file") {
    CHECK(category_of([] { parse_assembly_spec("/nonexistent/spec.json"); }) == ErrorCategory::Io);
  }
}

TEST_CASE("spec round trip", "[spec_io][property]") {
  testing::Generator gen(5150);
  for (int trial = 0; trial < 300; ++trial) {
    const auto model = gen.model(10);
    const auto back = parse_assembly_spec_text(serialize_assembly_spec(model));
    REQUIRE(back.name() == model.name());
    REQUIRE(back.alpha0() == model.alpha0());
    REQUIRE(back.resultant().target() == model.resultant().target());
    REQUIRE(back.resultant().width() == model.resultant().width());
    REQUIRE(back.size() == model.size());
    for (std::size_t i = 0; i < model.size(); ++i) REQUIRE(back.components()[i] == model.components()[i]);
  }
  const AssemblyModel inertial("i", {{"a", 1, 1, 0}}, ResultantSpec::inertia(2.0, 0.125));
  const auto back = parse_assembly_spec_text(serialize_assembly_spec(inertial));
  CHECK(back.resultant().max_inertia() == 0.125);
}

TEST_CASE("parse_batch_data", "[spec_io]") {
  const auto model = testing::chain({1.0, -1.0});
  SECTION("columns follow the header, not the declaration order") {
    const auto data = parse_batch_data_text("# parts\nc2,c1\n1.5,2\n\n2.5,-3e-1\n", model);
    CHECK(data.rows == 2);
    CHECK(data.samples[0] == std::vector<double>{2.0, -0.3});
    CHECK(data.samples[1] == std::vector<double>{1.5, 2.5});
  }
  SECTION("errors") {
    auto parse = [&](const char* text) { return [&model, text] { parse_batch_data_text(text, model, "d.csv"); }; };
    CHECK(category_of(parse("c1,c3\n1,2\n")) == ErrorCategory::Data);
    CHECK(category_of(parse("c1\n1\n")) == ErrorCategory::Data);
    CHECK(category_of(parse("c1,c1,c2\n1,2,3\n")) == ErrorCategory::Data);
    CHECK_THAT(message_of(parse("c1,c2\n1,2\n3\n")), ContainsSubstring("d.csv:3"));
    CHECK_THAT(message_of(parse("c1,c2\n1,2\n3,x\n")), ContainsSubstring("d.csv:3"));
    CHECK_THAT(message_of(parse("c1,c2\n1,2\n3,1,5\n")), ContainsSubstring("d.csv:3"));
    CHECK(category_of(parse("c1,c2\n")) == ErrorCategory::Data);
    CHECK(category_of(parse("c1,c2\n1,2,\n")) == ErrorCategory::Data);
  }
}

TEST_CASE("display config", "[spec_io]") {
  const auto path = temp_path("config.json");
  write_file(path, R"({"precision": 4})");
  CHECK(parse_display_config(path).precision == 4);
  write_file(path, R"({})");
  CHECK(parse_display_config(path).precision == 6);
  write_file(path, R"({"precision": 0})");
  CHECK_THROWS_AS(parse_display_config(path), Error);
  write_file(path, R"({"precision": 2.5})");
  CHECK_THROWS_AS(parse_display_config(path), Error);
  std::filesystem::remove(path);
  CHECK(category_of([] { write_file("/nonexistent/dir/out.txt", "x"); }) == ErrorCategory::Io);
}

TEST_CASE("report formatting", "[report]") {
  CHECK(format_sig(0.0596285, 6) == "0.0596285");
  CHECK(format_sig(1.0 / 3.0, 3) == "0.333");
  CHECK(format_fixed(0.2, 3) == "0.200");
  CHECK(format_fixed(-0.0001, 3) == "0.000");
  CHECK(format_exact(0.1) == "0.1");
  CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_sig_or(std::nullopt, 6, "perfect") == "perfect");

  Report report("Title");
  report.line("hello");
  report.table({"a", "bb"}, {{"long", "1"}});
  report.data("rows", {"a", "b"}, {{"1", "2"}});
  const std::string text = report.render();
  CHECK_THAT(text, ContainsSubstring("Title\n"));
  CHECK_THAT(text, ContainsSubstring("--- machine-readable ---\n[rows]\na,b\n1,2\n"));
}
