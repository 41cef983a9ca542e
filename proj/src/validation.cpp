#include "levylmm/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "levylmm/measure_engine.hpp"

namespace levylmm {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double black_caplet_reference(double L0, double strike, double total_vol,
                              double discount, double delta) {
  if (!(total_vol >= 0.0)) throw std::invalid_argument("black: total vol must be >= 0");
  if (total_vol == 0.0 || L0 <= 0.0)
    return discount * delta * std::max(L0 - strike, 0.0);
  if (strike <= 0.0) return discount * delta * (L0 - strike);
  const double d1 = (std::log(L0 / strike) + 0.5 * total_vol * total_vol) / total_vol;
  const double d2 = d1 - total_vol;
  return discount * delta * (L0 * normal_cdf(d1) - strike * normal_cdf(d2));
}

MartingaleResult martingale_test(const RatePathSet& paths, const TenorGrid& grid,
                                 const MeasureLabel& target, double maturity,
                                 bool use_density) {
  MartingaleResult out;
  out.initial = paths.initial(maturity);
  Eigen::ArrayXd sample = paths.fixing(maturity);
  if (use_density && !(target == paths.measure)) {
    const DensityPath d = density_path(paths, grid, MeasurePair{paths.measure, target});
    sample *= d.values.col(paths.node_index(maturity));
  }
  out.mean = sample_mean(sample);
  out.std_error = sample_std_error(sample);
  const double diff = out.mean - out.initial;
  // degenerate samples: a one-ulp gap between the mean and L0 is not drift
  if (std::abs(diff) <= 1e-13 * std::max(1.0, std::abs(out.initial)))
    out.z = 0.0;
  else if (out.std_error == 0.0)
    out.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  else
    out.z = diff / out.std_error;
  return out;
}

bool ValidationReport::overall_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.pass; });
}

namespace {

double black_total_vol(const ModelSpec& model, double fixing) {
  const PiecewiseConstant& lam = model.vols.raw(fixing);
  std::vector<double> cuts{0.0, fixing};
  for (double b : lam.breakpoints())
    if (b > 0.0 && b < fixing) cuts.push_back(b);
  for (double b : model.chars.variance_c.breakpoints())
    if (b > 0.0 && b < fixing) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double var = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const double l = lam(mid);
    var += l * l * model.chars.variance_c(mid) * (cuts[k + 1] - cuts[k]);
  }
  return std::sqrt(var);
}

std::vector<double> grid_fixings(const ModelSpec& model) {
  std::vector<double> out;
  for (int s = 1; s <= model.rate_count(); ++s) out.push_back(model.fixing(s));
  return out;
}

// Control model with strong loadings, unit diffusion and one extra tenor so
// that drift defects are detectable well above the Monte Carlo noise
// whatever the model under validation looks like.
ModelSpec control_model(const ModelSpec& model) {
  ModelSpec control = model;
  control.grid = model.grid.extended();
  control.measure = MeasureLabel::spot();
  control.chars.variance_c = PiecewiseConstant(1.0);
  std::vector<VolatilitySpec::Entry> entries;
  for (int s = 1; s <= control.grid.count() - 1; ++s)
    entries.push_back(VolatilitySpec::Entry{control.grid.maturity(s), PiecewiseConstant(0.4)});
  control.vols = VolatilitySpec(std::move(entries), 1.0);
  control.initial_rate_overrides.clear();
  for (int s = 1; s <= control.rate_count(); ++s)
    control.initial_rate_overrides.emplace_back(control.fixing(s), 0.05);
  if (!check_conditions(control.chars, control.vols, control.grid.terminal()).all_pass())
    control.chars.intensity_eta = PiecewiseConstant(0.0);  // jumps are not the point here
  return control;
}

struct CheckTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

ValidationReport consistency_suite(const ModelSpec& model, const SimConfig& config) {
  ValidationReport report;
  auto add = [&](std::string name, double statistic, double tolerance, bool pass,
                 double runtime, std::string note) {
    report.checks.push_back(ValidationCheck{std::move(name), statistic, tolerance, pass,
                                            runtime, std::move(note)});
  };
  const int n = model.rate_count();
  const double delta = model.grid.delta;

  // (a) interpolated coefficients reduce to the discrete spot ones on the grid
  {
    CheckTimer timer;
    std::mt19937_64 probe_rng(mix_seed(config.seed, 1001));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 0.5);
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
      const int s = 1 + static_cast<int>(uni(probe_rng) * n) % n;
      const double T = model.fixing(s);
      const double t = uni(probe_rng) * (T - 1e-6);
      std::vector<double> state(static_cast<std::size_t>(n));
      for (double& L : state) L = 0.05 * std::exp(gauss(probe_rng));
      const SdeCoefficients spot = spot_sde_coefficients(model, s, t, state);
      const SdeCoefficients interp = interpolated_sde_coefficients(
          model, T, t, state, state[static_cast<std::size_t>(s - 1)]);
      worst = std::max({worst, std::abs(spot.drift - interp.drift),
                        std::abs(spot.diffusion_loading - interp.diffusion_loading),
                        std::abs(spot.compensator_correction - interp.compensator_correction),
                        std::abs(spot.lambda - interp.lambda)});
    }
    add("grid_reduction", worst, 1e-14, worst <= 1e-14, timer.elapsed(),
        "max coefficient gap over 100 random (t, state) probes at grid dates");
  }

  // (b) gamma defining equation and exact endpoints
  {
    CheckTimer timer;
    std::vector<double> dates;
    for (int k = 1; k <= n; ++k)
      for (int j : {1, 2, 4, 6, 7})
        dates.push_back(model.grid.maturity(k) + j * delta / 8.0);
    dates.push_back(model.grid.maturity(1));
    dates.push_back(model.grid.terminal());
    const GammaConstruction gc = interpolate_numeraire(model, config, dates, 1e-10);
    double worst = 0.0;
    double endpoint_gap = 0.0;
    for (const GammaResult& r : gc.results) {
      if (model.grid.contains(r.maturity)) {
        const double pinned = same_date(r.maturity, model.grid.terminal()) ? 1.0 : 0.0;
        endpoint_gap = std::max(endpoint_gap, std::abs(r.gamma - pinned));
      } else {
        worst = std::max(worst, r.residual);
      }
    }
    add("gamma_interpolation", worst, 1e-10, worst <= 1e-10 && endpoint_gap == 0.0,
        timer.elapsed(), "max defining-equation residual over 5 dates per interval; "
                         "gamma endpoints pinned exactly");
  }

  // shared spot-measure run for the density and martingale checks
  ModelSpec spot_model = model;
  spot_model.measure = MeasureLabel::spot();
  const RatePathSet spot_paths = simulate(spot_model, config, grid_fixings(model));

  // (c) density algebra: composition, positivity, mean one, telescoping,
  // reweighted forward-measure martingales
  {
    CheckTimer timer;
    const MeasureLabel A = MeasureLabel::spot();
    const MeasureLabel B = MeasureLabel::forward(model.grid.maturity(std::min(2, n + 1)));
    const MeasureLabel C = MeasureLabel::forward(model.grid.terminal());
    const DensityPath ab = density_path(spot_paths, model.grid, MeasurePair{A, B});
    const DensityPath bc = density_path(spot_paths, model.grid, MeasurePair{B, C});
    const DensityPath ac = density_path(spot_paths, model.grid, MeasurePair{A, C});
    const double comp_gap = (ac.values - ab.values * bc.values).abs().maxCoeff();
    add("density_composition", comp_gap, 1e-12, comp_gap <= 1e-12, timer.elapsed(),
        "pathwise (spot->F2)(F2->terminal) vs spot->terminal");

    const double min_density = std::min(ab.values.minCoeff(), ac.values.minCoeff());
    add("density_positive", min_density, 0.0, min_density > 0.0, timer.elapsed(),
        "strict positivity of the density process (statistic is the minimum)");

    double worst_z = 0.0;
    for (int m = 2; m <= model.grid.count(); ++m) {
      const DensityPath d = density_path(
          spot_paths, model.grid, MeasurePair{A, MeasureLabel::forward(model.grid.maturity(m))});
      for (int k = 0; k < spot_paths.nodes(); ++k) {
        if (!model.grid.contains(spot_paths.times[k]) && spot_paths.times[k] != 0.0) continue;
        const Eigen::ArrayXd col = d.values.col(k);
        const double se = sample_std_error(col);
        if (se == 0.0) continue;
        worst_z = std::max(worst_z, std::abs((sample_mean(col) - 1.0) / se));
      }
    }
    add("density_mean_one", worst_z, 3.0, worst_z <= 3.0, timer.elapsed(),
        "max |z| of E[density] = 1 over tenor dates and target measures");

    double tele_gap = 0.0;
    const double t_probe = model.grid.maturity(1);
    for (int j = 1; j <= n; ++j) {
      const Eigen::ArrayXd num = bond_price(spot_paths, model, model.grid.maturity(j), t_probe);
      const Eigen::ArrayXd den =
          bond_price(spot_paths, model, model.grid.maturity(j + 1), t_probe);
      const Eigen::ArrayXd lhs = num / den;
      const Eigen::ArrayXd rhs =
          1.0 + delta * spot_paths.rate_at(model.grid.maturity(j), t_probe);
      tele_gap = std::max(tele_gap, (lhs - rhs).abs().maxCoeff());
    }
    add("telescoping_bonds", tele_gap, 1e-14, tele_gap <= 1e-14, timer.elapsed(),
        "F_B(t,T_j,T_{j+1}) = 1 + delta L(t,T_j) pathwise at t = T_1");

    double worst_mart = 0.0;
    for (int s = 1; s <= n; ++s) {
      const MartingaleResult r =
          martingale_test(spot_paths, model.grid,
                          MeasureLabel::forward(model.grid.maturity(s + 1)), model.fixing(s));
      worst_mart = std::max(worst_mart, std::abs(r.z));
    }
    add("martingale_reweighted", worst_mart, 3.0, worst_mart <= 3.0, timer.elapsed(),
        "max |z| of the density-reweighted forward-measure fixing means");
  }

  // (d) zero-jump Black reduction and measure-equivalent pricing
  {
    CheckTimer timer;
    const double fixing = model.fixing(n);
    const double strike = model.initial_rate(fixing);
    ModelSpec nojump = model;
    nojump.chars.intensity_eta = PiecewiseConstant(0.0);
    nojump.measure = MeasureLabel::forward(fixing + delta);
    const RatePathSet fwd = simulate(nojump, config, {fixing});
    const CapletPrice pf = caplet_price_mc(fwd, model.grid, model.curve, strike, fixing, delta);
    const double reference = black_caplet_reference(
        strike, strike, black_total_vol(model, fixing), model.curve(fixing + delta), delta);
    const double z_black = pf.std_error == 0.0
                               ? (pf.price == reference ? 0.0 : 1e300)
                               : std::abs(pf.price - reference) / pf.std_error;
    add("black_reduction", z_black, 3.0, z_black <= 3.0, timer.elapsed(),
        "zero-jump ATM caplet Monte Carlo vs the closed-form lognormal value");

    nojump.measure = MeasureLabel::spot();
    const RatePathSet spot_nj = simulate(nojump, config, {fixing});
    const CapletPrice ps =
        caplet_price_mc(spot_nj, model.grid, model.curve, strike, fixing, delta);
    const double combined = std::sqrt(pf.std_error * pf.std_error + ps.std_error * ps.std_error);
    const double z_eq = combined == 0.0 ? (pf.price == ps.price ? 0.0 : 1e300)
                                        : std::abs(pf.price - ps.price) / combined;
    add("measure_equivalence", z_eq, 3.0, z_eq <= 3.0, timer.elapsed(),
        "spot-numeraire deflated price vs forward-measure price, zero-jump model");
  }

  // (e) tenor extension: constant extended rate, no feedback on prior rates
  {
    CheckTimer timer;
    ModelSpec base = model;
    base.measure = MeasureLabel::spot();
    const RatePathSet before = simulate(base, config, grid_fixings(base));
    const ModelSpec extended = extend_tenor(base, PiecewiseConstant(0.0), 0.05);
    std::vector<double> fixings = grid_fixings(extended);
    const RatePathSet after = simulate(extended, config, fixings);
    const double new_fixing = model.grid.terminal();
    const double const_gap = (after.rate(new_fixing) - 0.05).abs().maxCoeff();
    double feedback_gap = 0.0;
    for (int s = 1; s <= n; ++s) {
      const Eigen::ArrayXXd& a = before.rate(model.fixing(s));
      const Eigen::ArrayXXd& b = after.rate(model.fixing(s));
      feedback_gap = std::max(
          feedback_gap,
          (a - b.leftCols(a.cols())).abs().maxCoeff());
    }
    add("extension_constant_rate", const_gap, 0.0, const_gap == 0.0, timer.elapsed(),
        "lambda = 0 extension leaves the new rate at its initial value exactly");
    add("extension_no_feedback", feedback_gap, 0.0, feedback_gap == 0.0, timer.elapsed(),
        "prior rates' paths bit-identical on the shared nodes under the same seed");
  }

  // (f) seed determinism
  {
    CheckTimer timer;
    const RatePathSet again = simulate(spot_model, config, grid_fixings(model));
    double gap = 0.0;
    for (std::size_t r = 0; r < again.values.size(); ++r)
      gap = std::max(gap, (again.values[r] - spot_paths.values[r]).abs().maxCoeff());
    add("seed_determinism", gap, 0.0, gap == 0.0, timer.elapsed(),
        "repeated run with the same seed reproduces every path bit-identically");
  }

  // positive controls: each passes only when the planted defect is detected
  {
    CheckTimer timer;
    const ModelSpec control = control_model(model);
    const double long_fixing = control.fixing(control.rate_count());
    SimConfig control_config = config;
    control_config.n_paths = std::max(config.n_paths, 30000);  // detection power
    const RatePathSet paths = simulate(control, control_config, grid_fixings(control));
    const MartingaleResult mismeasured =
        martingale_test(paths, control.grid,
                        MeasureLabel::forward(long_fixing + control.grid.delta), long_fixing,
                        /*use_density=*/false);
    add("control_mismeasured_martingale_detected", std::abs(mismeasured.z), 3.0,
        std::abs(mismeasured.z) > 3.0, timer.elapsed(),
        "spot paths tested as if forward-measure must fail (|z| > 3)");

    SimConfig corrupted = control_config;
    corrupted.drift_scale = -1.0;
    const RatePathSet bad = simulate(control, corrupted, grid_fixings(control));
    const MartingaleResult detected =
        martingale_test(bad, control.grid,
                        MeasureLabel::forward(long_fixing + control.grid.delta), long_fixing);
    add("control_corrupted_drift_detected", std::abs(detected.z), 3.0,
        std::abs(detected.z) > 3.0, timer.elapsed(),
        "flipped drift sign must be caught by the reweighted martingale test");
  }

  return report;
}

}  // namespace levylmm
