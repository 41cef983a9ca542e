#include "levylmm/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "levylmm/interpolation.hpp"
#include "levylmm/validation.hpp"

namespace levylmm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument("scenario: " + field + ": " + what);
}

double require_number(const json& doc, const std::string& field) {
  if (!doc.contains(field) || !doc[field].is_number()) fail(field, "expected a number");
  return doc[field].get<double>();
}

PiecewiseConstant parse_piecewise(const json& node, const std::string& field) {
  if (node.is_number()) return PiecewiseConstant(node.get<double>());
  if (!node.is_object() || !node.contains("times") || !node.contains("values"))
    fail(field, "expected a number or {times, values}");
  try {
    return PiecewiseConstant(node["times"].get<std::vector<double>>(),
                             node["values"].get<std::vector<double>>());
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
}

json piecewise_to_json(const PiecewiseConstant& f) {
  return json{{"times", f.breakpoints()}, {"values", f.values()}};
}

JumpDensity parse_density(const json& node) {
  if (!node.is_object() || !node.contains("family"))
    fail("characteristics.jump_density", "expected {family, ...}");
  const std::string family = node["family"].get<std::string>();
  try {
    if (family == "gaussian")
      return JumpDensity::gaussian(node.value("mean", 0.0), require_number(node, "sd"));
    if (family == "two_sided_exponential")
      return JumpDensity::two_sided_exponential(require_number(node, "rate"));
    if (family == "discrete")
      return JumpDensity::discrete(
          node.at("points").get<std::vector<std::pair<double, double>>>());
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    fail("characteristics.jump_density", e.what());
  }
  fail("characteristics.jump_density.family",
       "unknown family `" + family + "` (gaussian | two_sided_exponential | discrete)");
}

json density_to_json(const JumpDensity& d) {
  switch (d.kind) {
    case JumpKind::gaussian:
      return json{{"family", "gaussian"}, {"mean", d.mean}, {"sd", d.sd}};
    case JumpKind::two_sided_exponential:
      return json{{"family", "two_sided_exponential"}, {"rate", d.rate}};
    case JumpKind::discrete:
      return json{{"family", "discrete"}, {"points", d.points}};
  }
  return json{};
}

MeasureLabel parse_measure(const json& node) {
  if (node.is_string()) {
    const std::string s = node.get<std::string>();
    if (s == "spot" || s == "spot-libor") return MeasureLabel::spot();
    fail("measure", "unknown measure `" + s + "` (spot | {forward: T})");
  }
  if (node.is_object() && node.contains("forward"))
    return MeasureLabel::forward(node["forward"].get<double>());
  fail("measure", "expected \"spot\" or {forward: T}");
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

void write_json(const std::filesystem::path& file, const json& doc) {
  write_text(file, doc.dump(2) + "\n");
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw std::invalid_argument("scenario: expected a JSON object");
  Scenario sc;

  // grid
  if (!doc.contains("grid")) fail("grid", "missing");
  const json& g = doc["grid"];
  sc.model.grid = TenorGrid::equidistant(require_number(g, "first_maturity"),
                                         require_number(g, "delta"),
                                         static_cast<int>(require_number(g, "count")));

  // curve
  if (!doc.contains("curve")) fail("curve", "missing");
  const json& cv = doc["curve"];
  if (cv.contains("csv")) {
    sc.model.curve = DiscountCurve::from_csv(base_dir / cv["csv"].get<std::string>());
  } else if (cv.contains("pillars")) {
    sc.model.curve = DiscountCurve::from_pillars(
        cv["pillars"].get<std::vector<std::pair<double, double>>>());
  } else {
    fail("curve", "expected {pillars: [[T, B], ...]} or {csv: path}");
  }

  // volatility
  if (!doc.contains("volatility")) fail("volatility", "missing");
  const json& vol = doc["volatility"];
  std::vector<VolatilitySpec::Entry> entries;
  if (vol.contains("flat")) {
    const PiecewiseConstant lam = parse_piecewise(vol["flat"], "volatility.flat");
    for (int s = 1; s <= sc.model.rate_count(); ++s)
      entries.push_back(VolatilitySpec::Entry{sc.model.fixing(s), lam});
  }
  if (vol.contains("entries")) {
    for (const json& e : vol["entries"]) {
      if (!e.contains("maturity")) fail("volatility.entries", "entry without maturity");
      entries.push_back(VolatilitySpec::Entry{
          e["maturity"].get<double>(),
          e.contains("lambda") ? parse_piecewise(e["lambda"], "volatility.entries.lambda")
                               : parse_piecewise(e, "volatility.entries")});
    }
  }
  if (entries.empty()) fail("volatility", "needs `flat` or `entries`");
  double lambda_max = 0.0;
  for (const auto& e : entries)
    lambda_max = std::max(lambda_max, e.lambda.sup(0.0, e.maturity));
  lambda_max = vol.value("lambda_max", lambda_max);
  std::optional<double> sum_bound;
  if (vol.contains("sum_bound")) sum_bound = vol["sum_bound"].get<double>();
  sc.model.vols = VolatilitySpec(std::move(entries), lambda_max, sum_bound);

  // characteristics
  if (!doc.contains("characteristics")) fail("characteristics", "missing");
  const json& ch = doc["characteristics"];
  sc.model.chars.drift_b =
      ch.contains("b") ? parse_piecewise(ch["b"], "characteristics.b") : PiecewiseConstant(0.0);
  sc.model.chars.variance_c =
      ch.contains("c") ? parse_piecewise(ch["c"], "characteristics.c") : PiecewiseConstant(0.0);
  sc.model.chars.intensity_eta = ch.contains("eta")
                                     ? parse_piecewise(ch["eta"], "characteristics.eta")
                                     : PiecewiseConstant(0.0);
  if (ch.contains("jump_density")) {
    sc.model.chars.density = parse_density(ch["jump_density"]);
  } else if (!sc.model.chars.intensity_eta.is_zero()) {
    fail("characteristics.jump_density", "required when eta > 0");
  }
  sc.model.chars.validate();

  sc.model.measure = doc.contains("measure") ? parse_measure(doc["measure"])
                                             : MeasureLabel::spot();

  if (doc.contains("initial_rates")) {
    for (const json& r : doc["initial_rates"])
      sc.model.initial_rate_overrides.emplace_back(require_number(r, "maturity"),
                                                   require_number(r, "rate"));
  }

  // simulation config
  const json sim = doc.value("simulation", json::object());
  sc.config.step = sim.value("step", sc.model.grid.delta / 8.0);
  sc.config.n_paths = sim.value("paths", 100000);
  sc.config.seed = sim.value("seed", std::uint64_t{42});
  sc.config.validate(sc.model.grid.delta);

  if (doc.contains("maturities"))
    sc.maturities = doc["maturities"].get<std::vector<double>>();
  else
    for (int s = 1; s <= sc.model.rate_count(); ++s)
      sc.maturities.push_back(sc.model.fixing(s));

  if (doc.contains("interpolated_maturities"))
    sc.interpolated_maturities = doc["interpolated_maturities"].get<std::vector<double>>();
  for (double T : sc.interpolated_maturities)
    if (!sc.model.grid.contains(T)) (void)sc.model.volatility_for(T);  // must resolve

  if (doc.contains("extensions")) {
    for (const json& e : doc["extensions"]) {
      ExtensionRequest req;
      if (e.contains("lambda")) req.lambda = parse_piecewise(e["lambda"], "extensions.lambda");
      if (e.contains("initial_rate")) req.initial_rate = e["initial_rate"].get<double>();
      sc.extensions.push_back(std::move(req));
    }
  }

  if (doc.contains("caplet")) {
    sc.caplet = CapletRequest{require_number(doc["caplet"], "fixing"),
                              require_number(doc["caplet"], "strike")};
  }

  sc.model.validate();
  return sc;
}

Scenario parse_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("scenario: cannot open " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument("scenario: " + file.string() + " is not valid JSON: " +
                                e.what());
  }
  return parse_scenario(doc, file.parent_path());
}

nlohmann::json model_to_json(const ModelSpec& model, const ConditionReport* conditions) {
  json doc;
  doc["grid"] = {{"maturities", model.grid.maturities}, {"delta", model.grid.delta}};
  doc["curve"] = {{"pillars", model.curve.pillars()},
                  {"interpolation", model.curve.interpolation()}};
  json rates = json::array();
  for (int s = 1; s <= model.rate_count(); ++s)
    rates.push_back({{"maturity", model.fixing(s)},
                     {"rate", model.initial_rate(model.fixing(s))}});
  doc["initial_rates"] = rates;
  json entries = json::array();
  for (double T : model.vols.maturities()) {
    json e = piecewise_to_json(model.vols.raw(T));
    e["maturity"] = T;
    e["sup"] = model.vols.sup(T);
    entries.push_back(e);
  }
  doc["volatility"] = {{"entries", entries},
                       {"lambda_max", model.vols.lambda_max()},
                       {"sum_sup", model.vols.sum_sup()},
                       {"sum_bound", model.vols.sum_bound()}};
  doc["characteristics"] = {{"b", piecewise_to_json(model.chars.drift_b)},
                            {"c", piecewise_to_json(model.chars.variance_c)},
                            {"eta", piecewise_to_json(model.chars.intensity_eta)},
                            {"jump_density", density_to_json(model.chars.density)}};
  doc["measure"] = model.measure.is_forward()
                       ? json{{"forward", model.measure.maturity}}
                       : json("spot-libor");
  if (conditions) {
    doc["conditions"] = {{"cond1_pass", conditions->cond1_pass},
                         {"cond2_pass", conditions->cond2_pass},
                         {"cond3_pass", conditions->cond3_pass},
                         {"bound_M", conditions->bound_M},
                         {"capped_M", conditions->capped_M},
                         {"diagnostics", conditions->diagnostics}};
  }
  return doc;
}

int run_command(const std::string& command, const Scenario& scenario,
                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ModelSpec& model = scenario.model;
  const SimConfig& config = scenario.config;
  const double horizon = std::max(scenario.maturities.empty()
                                      ? model.grid.delta
                                      : scenario.maturities.back(),
                                  model.grid.delta);

  if (command == "build") {
    const ConditionReport report = check_conditions(model.chars, model.vols, horizon);
    write_json(out_dir / "model.json", model_to_json(model, &report));
    return report.all_pass() ? 0 : 2;
  }

  if (command == "extend") {
    ModelSpec extended = model;
    for (const ExtensionRequest& req : scenario.extensions) {
      const double settlement = extended.grid.terminal() + extended.grid.delta;
      const double L0 = req.initial_rate
                            ? *req.initial_rate
                            : initial_forward_libor(extended.curve, settlement,
                                                    extended.grid.delta);
      extended = extend_tenor(extended, req.lambda, L0);
    }
    const ConditionReport report =
        check_conditions(extended.chars, extended.vols, extended.grid.terminal());
    write_json(out_dir / "model.json", model_to_json(extended, &report));
    return report.all_pass() ? 0 : 2;
  }

  if (command == "interpolate") {
    if (scenario.interpolated_maturities.empty())
      throw std::invalid_argument("interpolate: scenario lists no interpolated_maturities");
    const GammaConstruction gc =
        interpolate_numeraire(model, config, scenario.interpolated_maturities);
    json rows = json::array();
    for (const GammaResult& r : gc.results)
      rows.push_back({{"maturity", r.maturity},
                      {"gamma", r.gamma},
                      {"residual", r.residual},
                      {"discount", r.target}});
    write_json(out_dir / "report.json",
               json{{"command", "interpolate"}, {"gamma", rows}, {"seed", config.seed}});
    return 0;
  }

  if (command == "simulate") {
    const RatePathSet paths = simulate(model, config, scenario.maturities);
    std::ofstream csv(out_dir / "paths.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (out_dir / "paths.csv").string());
    write_paths_csv(paths, csv);
    json stats = json::array();
    for (double T : scenario.maturities) {
      const Eigen::ArrayXd fix = paths.fixing(T);
      stats.push_back({{"maturity", T},
                       {"initial", paths.initial(T)},
                       {"fixing_mean", sample_mean(fix)},
                       {"fixing_std_error", sample_std_error(fix)}});
    }
    write_json(out_dir / "report.json", json{{"command", "simulate"},
                                             {"measure", model.measure.name()},
                                             {"paths", config.n_paths},
                                             {"step", config.step},
                                             {"seed", config.seed},
                                             {"fixings", stats}});
    return 0;
  }

  if (command == "validate") {
    const ValidationReport report = consistency_suite(model, config);
    json checks = json::array();
    for (const ValidationCheck& c : report.checks)
      checks.push_back({{"name", c.name},
                        {"statistic", c.statistic},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass},
                        {"runtime_s", c.runtime_s},
                        {"note", c.note}});
    write_json(out_dir / "report.json", json{{"command", "validate"},
                                             {"checks", checks},
                                             {"overall_pass", report.overall_pass()},
                                             {"seed", config.seed}});
    return report.overall_pass() ? 0 : 1;
  }

  if (command == "price") {
    if (!scenario.caplet) throw std::invalid_argument("price: scenario lists no caplet");
    std::vector<double> maturities = scenario.maturities;
    maturities.push_back(scenario.caplet->fixing);
    const RatePathSet paths = simulate(model, config, maturities);
    const CapletPrice price =
        caplet_price_mc(paths, model.grid, model.curve, scenario.caplet->strike,
                        scenario.caplet->fixing, model.grid.delta);
    write_json(out_dir / "report.json",
               json{{"command", "price"},
                    {"caplet",
                     {{"fixing", scenario.caplet->fixing},
                      {"strike", scenario.caplet->strike},
                      {"settlement", scenario.caplet->fixing + model.grid.delta}}},
                    {"estimate", price.price},
                    {"std_error", price.std_error},
                    {"measure", model.measure.name()},
                    {"paths", config.n_paths},
                    {"seed", config.seed}});
    return 0;
  }

  throw std::invalid_argument("unknown command `" + command +
                              "` (build | extend | interpolate | simulate | validate | price)");
}

}  // namespace levylmm
