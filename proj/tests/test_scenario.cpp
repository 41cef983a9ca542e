#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "levylmm/scenario.hpp"

using namespace levylmm;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(LEVYLMM_TEST_DIR) / "fixtures";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_out_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("levylmm_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json minimal_scenario() {
  return json::parse(R"({
    "grid": {"first_maturity": 0.5, "delta": 0.5, "count": 3},
    "curve": {"pillars": [[0.5, 0.98], [1.0, 0.955], [1.5, 0.93]]},
    "volatility": {"flat": 0.2},
    "characteristics": {"c": 1.0}
  })");
}

}  // namespace

TEST_CASE("minimal scenario gets the documented defaults") {
  const Scenario sc = parse_scenario(minimal_scenario());
  CHECK(sc.config.step == doctest::Approx(0.5 / 8.0).epsilon(1e-15));
  CHECK(sc.config.n_paths == 100000);
  CHECK(sc.config.seed == 42);
  CHECK(!sc.model.measure.is_forward());
  CHECK(sc.maturities == std::vector<double>{0.5, 1.0});
  CHECK(std::string(sc.model.curve.interpolation()) == "log-linear");
}

TEST_CASE("scenario rejections name the offending field") {
  SUBCASE("increasing curve names the pillar") {
    json doc = minimal_scenario();
    doc["curve"]["pillars"] = json::parse("[[0.5, 0.955], [1.0, 0.98]]");
    try {
      parse_scenario(doc);
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("pillar 1") != std::string::npos);
    }
  }

  SUBCASE("eta without a jump density") {
    json doc = minimal_scenario();
    doc["characteristics"]["eta"] = 1.0;
    CHECK_THROWS_AS(parse_scenario(doc), std::invalid_argument);
  }

  SUBCASE("interpolated maturity without a resolvable loading") {
    json doc = minimal_scenario();
    doc["volatility"] = json::parse(R"({"entries": [{"maturity": 0.5, "lambda": 0.2}]})");
    doc["interpolated_maturities"] = json::array({1.2});
    CHECK_THROWS_AS(parse_scenario(doc), std::invalid_argument);
  }

  SUBCASE("unknown measure") {
    json doc = minimal_scenario();
    doc["measure"] = "terminal";
    CHECK_THROWS_AS(parse_scenario(doc), std::invalid_argument);
  }

  SUBCASE("step must divide delta") {
    json doc = minimal_scenario();
    doc["simulation"] = json{{"step", 0.3}};
    CHECK_THROWS_AS(parse_scenario(doc), std::invalid_argument);
  }
}

TEST_CASE("golden scenario resolves to the golden model dump") {
  const Scenario sc = parse_scenario_file(kFixtures / "reference.json");
  const json dump = model_to_json(sc.model);
  const json golden = json::parse(slurp(kFixtures / "golden_model.json"));
  CHECK(dump == golden);
}

TEST_CASE("run_command writes artifacts and honors the exit contract") {
  Scenario sc = parse_scenario_file(kFixtures / "reference.json");
  sc.config.n_paths = 500;  // unit-test scale

  SUBCASE("build writes the resolved model with its condition report") {
    const auto dir = fresh_out_dir("build");
    CHECK(run_command("build", sc, dir) == 0);
    const json model = json::parse(slurp(dir / "model.json"));
    CHECK(model["conditions"]["cond2_pass"].get<bool>());
    CHECK(model["initial_rates"].size() == 3);
  }

  SUBCASE("build flags a failing condition through the exit status") {
    Scenario bad = sc;
    bad.model.chars.density = JumpDensity::two_sided_exponential(0.3);
    const auto dir = fresh_out_dir("build_bad");
    CHECK(run_command("build", bad, dir) == 2);
    const json model = json::parse(slurp(dir / "model.json"));
    CHECK(!model["conditions"]["cond2_pass"].get<bool>());
  }

  SUBCASE("simulate is byte-identical for a fixed seed") {
    const auto dir1 = fresh_out_dir("sim1");
    const auto dir2 = fresh_out_dir("sim2");
    CHECK(run_command("simulate", sc, dir1) == 0);
    CHECK(run_command("simulate", sc, dir2) == 0);
    CHECK(slurp(dir1 / "paths.csv") == slurp(dir2 / "paths.csv"));
    CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
    Scenario other = sc;
    other.config.seed = 43;
    const auto dir3 = fresh_out_dir("sim3");
    CHECK(run_command("simulate", other, dir3) == 0);
    CHECK(slurp(dir1 / "paths.csv") != slurp(dir3 / "paths.csv"));
  }

  SUBCASE("extend appends a tenor date") {
    Scenario ext = sc;
    ext.extensions.push_back(ExtensionRequest{PiecewiseConstant(0.0), 0.05});
    const auto dir = fresh_out_dir("extend");
    CHECK(run_command("extend", ext, dir) == 0);
    const json model = json::parse(slurp(dir / "model.json"));
    CHECK(model["grid"]["maturities"].size() == 5);
    CHECK(model["initial_rates"].size() == 4);
  }

  SUBCASE("interpolate reports gamma per date") {
    Scenario interp = sc;
    interp.config.n_paths = 2000;
    interp.interpolated_maturities = {0.75, 1.25};
    const auto dir = fresh_out_dir("interp");
    CHECK(run_command("interpolate", interp, dir) == 0);
    const json report = json::parse(slurp(dir / "report.json"));
    CHECK(report["gamma"].size() == 2);
    for (const auto& row : report["gamma"]) {
      CHECK(row["gamma"].get<double>() >= 0.0);
      CHECK(row["gamma"].get<double>() <= 1.0);
      CHECK(row["residual"].get<double>() <= 1e-10);
    }
  }

  SUBCASE("price emits an estimate with its standard error") {
    Scenario caplet = parse_scenario_file(kFixtures / "caplet_atm.json");
    caplet.config.n_paths = 2000;
    const auto dir = fresh_out_dir("price");
    CHECK(run_command("price", caplet, dir) == 0);
    const json report = json::parse(slurp(dir / "report.json"));
    CHECK(report["estimate"].get<double>() > 0.0);
    CHECK(report["std_error"].get<double>() > 0.0);
  }

  SUBCASE("unknown command is rejected") {
    CHECK_THROWS_AS(run_command("frobnicate", sc, fresh_out_dir("bad")),
                    std::invalid_argument);
  }
}
