#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/report.hpp"
#include "carnot/scenario.hpp"

using namespace carnot;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = CARNOT_DATA_DIR;

std::string group_path(const std::string& name) { return kData + "/groups/" + name + ".json"; }
std::string scenario_path(const std::string& name) { return kData + "/scenarios/" + name + ".json"; }

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "carnot_test_scenario";
  fs::create_directories(d);
  return d;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("group spec files") {
  const GroupSpecB h1 = parse_group_spec(group_path("heisenberg1"));
  CHECK(h1.m() == 2);
  CHECK(h1.n() == 1);
  CHECK(h1.b(0, 1, 0) == -1.0);
  CHECK(h1.epsilon2() > 0.0);
  const GroupSpecB f = parse_group_spec(group_path("free32"));
  CHECK(f.m() == 3);
  CHECK(f.n() == 3);

  // Round trip through JSON keeps the matrices and the constant.
  const GroupSpecB back = group_from_json(json::parse(group_to_json(f).dump()));
  CHECK(back.epsilon2() == f.epsilon2());
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k) CHECK(back.b(s, i, k) == f.b(s, i, k));

  // An explicit constant is taken as given.
  const GroupSpecB fixed = group_from_json(
      json::parse(R"({"name":"h","m":2,"n":1,"matrices":[[[0,1],[-1,0]]],"epsilon2":0.7})"));
  CHECK(fixed.epsilon2() == 0.7);
}

TEST_CASE("group spec errors") {
  try {
    parse_group_spec(group_path("not_skew"));
    FAIL("expected not_skew_symmetric");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_skew_symmetric);
    CHECK(std::string(e.what()).find("not_skew.json") != std::string::npos);
  }
  const std::string broken = write_temp("broken.json", "{\n  \"m\": 2,\n  \"n\": 1,\n  \"matrices\": [\n}\n");
  try {
    parse_group_spec(broken);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK(error_code_of([] { parse_group_spec(kData + "/groups/missing.json"); }) == Errc::io_error);
  CHECK(error_code_of([] { group_from_json(json::parse(R"({"m":2,"n":1})")); }) == Errc::parse_error);
  CHECK(error_code_of([] { group_from_json(json::parse(R"({"m":2,"n":1,"matrices":[[[0,1]]]})")); }) ==
        Errc::parse_error);
  CHECK(error_code_of([] { group_from_json(json::parse("[1,2]")); }) == Errc::parse_error);
}

TEST_CASE("operation registry") {
  const auto& names = operation_names();
  CHECK(names.size() == 9);
  for (const char* n : {"group validate", "group calibrate", "graph analyze", "pde characteristics",
                        "pde broadstar", "pde perimeter", "pde holder-bound", "surface reifenberg",
                        "pde smoothing"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  const GroupSpecB h1 = heisenberg(1);
  CHECK(error_code_of([&] { run_operation("pde nothing", h1, json::object(), 1); }) ==
        Errc::invalid_argument);
  CHECK(error_code_of([&] { run_operation("pde perimeter", h1, json::object(), 1); }) ==
        Errc::parse_error);
  CHECK(error_code_of([&] {
          run_operation("pde perimeter", h1,
                        json::parse(R"({"box":{"lo":[0],"hi":[1]},"psi":{"type":"constant","value":0}})"), 1);
        }) == Errc::parse_error);
  CHECK(load_scenario_params("").empty());
  CHECK(error_code_of([] { load_scenario_params(write_temp("arr.json", "[1]")); }) == Errc::parse_error);
}

TEST_CASE("dyadic radii field") {
  const json p = json::parse(R"({"box":{"lo":[-1,-1],"hi":[1,1]},"psi":{"type":"constant","value":0},
                                 "base":[0,0],"expect":"zero","samples_per_ball":20,
                                 "radii":{"dyadic_from":3,"dyadic_to":5}})");
  const Report rep = run_operation("surface reifenberg", heisenberg(1), p, 1);
  REQUIRE(rep.rows().size() == 3);
  CHECK(rep.rows()[0][0] == format_double(0.125));
  CHECK(rep.rows()[2][0] == format_double(0.03125));
  CHECK(rep.all_pass());
}

TEST_CASE("report formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  Report rep("pde perimeter", 7);
  rep.set_columns({"a", "b"});
  rep.add_row(Vec{1.0, 0.5});
  rep.add_invariant("ok", true, 1.0, 2.0);
  CHECK(rep.csv() == "a,b\n1,0.5\n");
  CHECK(rep.all_pass());
  rep.add_invariant("bad", false, 3.0, 2.0, "why");
  CHECK_FALSE(rep.all_pass());
  const auto s = rep.summary();
  CHECK(s["operation"] == "pde perimeter");
  CHECK(s["seed"] == 7);
  CHECK(s["invariants"].size() == 2);
  CHECK(error_code_of([&] { emit_plot_data(rep, (scratch() / "x.plot.dat").string()); }) ==
        Errc::invalid_argument);
  rep.set_series({"r", "v"}, {{0.25, 1.0}, {0.5, 2.0}});
  CHECK(plot_data(rep).find("0.5") < plot_data(rep).find("0.25"));
}

TEST_CASE("run_scenario exit status") {
  Scenario sc;
  sc.operation = "pde perimeter";
  sc.spec_path = group_path("heisenberg1");
  sc.params = load_scenario_params(scenario_path("perimeter_x2"));
  sc.out_prefix = (scratch() / "perim").string();
  std::ostringstream err;
  CHECK(run_scenario(sc, err) == 0);
  CHECK(err.str().empty());
  CHECK(fs::exists(sc.out_prefix + ".csv"));
  CHECK(fs::exists(sc.out_prefix + ".summary.json"));
  const json summary = json::parse(slurp(sc.out_prefix + ".summary.json"));
  CHECK(summary["pass"] == true);

  // A wrong expectation is an invariant failure.
  sc.params["expect"] = 1.0;
  CHECK(run_scenario(sc, err) == 2);
  CHECK(err.str().find("invariant failure") != std::string::npos);

  // A broken spec is an error.
  std::ostringstream err2;
  sc.spec_path = group_path("not_skew");
  CHECK(run_scenario(sc, err2) == 1);
  CHECK(err2.str().find("not_skew_symmetric") != std::string::npos);

  std::ostringstream err3;
  sc.spec_path = group_path("heisenberg1");
  sc.operation = "pde unknown";
  CHECK(run_scenario(sc, err3) == 1);
}

TEST_CASE("calibrate writes a reusable spec") {
  Scenario sc;
  sc.operation = "group calibrate";
  sc.spec_path = group_path("heisenberg2");
  sc.params = load_scenario_params(scenario_path("group_calibrate"));
  sc.out_prefix = (scratch() / "cal").string();
  std::ostringstream err;
  REQUIRE(run_scenario(sc, err) == 0);
  const GroupSpecB g = parse_group_spec(sc.out_prefix + ".group.json");
  CHECK(g.m() == 4);
  CHECK(g.epsilon2() == parse_group_spec(group_path("heisenberg2")).epsilon2());
}

TEST_CASE("reports are deterministic") {
  for (const char* name : {"reifenberg_x2sq", "broadstar_y", "holder_y"}) {
    CAPTURE(name);
    const json manifest = json::parse(slurp(kData + "/scenarios/manifest.json"));
    std::string op;
    for (const json& e : manifest)
      if (e["scenario"] == std::string(name) + ".json") op = e["operation"];
    REQUIRE(!op.empty());
    Scenario sc;
    sc.operation = op;
    sc.spec_path = group_path("heisenberg1");
    sc.params = load_scenario_params(scenario_path(name));
    sc.seed = 11;
    std::ostringstream err;
    sc.out_prefix = (scratch() / (std::string(name) + "_a")).string();
    REQUIRE(run_scenario(sc, err) == 0);
    sc.out_prefix = (scratch() / (std::string(name) + "_b")).string();
    REQUIRE(run_scenario(sc, err) == 0);
    for (const char* ext : {".csv", ".summary.json"}) {
      const std::string a = slurp((scratch() / (std::string(name) + "_a" + ext)).string());
      CHECK(!a.empty());
      CHECK(a == slurp((scratch() / (std::string(name) + "_b" + ext)).string()));
    }
  }
}

TEST_CASE("manifest scenarios parse") {
  const json manifest = json::parse(slurp(kData + "/scenarios/manifest.json"));
  CHECK(manifest.size() >= 20);
  for (const json& e : manifest) {
    CAPTURE(e.dump());
    CHECK(fs::exists(scenario_path(e["scenario"].get<std::string>().substr(
        0, e["scenario"].get<std::string>().size() - 5))));
    CHECK(fs::exists(group_path(e["group"])));
    const auto& names = operation_names();
    CHECK(std::find(names.begin(), names.end(), e["operation"].get<std::string>()) != names.end());
  }
}
