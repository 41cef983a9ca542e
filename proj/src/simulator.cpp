#include "levylmm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "levylmm/quadrature.hpp"

namespace levylmm {

void SimConfig::validate(double delta) const {
  if (!(step > 0.0)) throw std::invalid_argument("config: step must be positive");
  const double ratio = delta / step;
  if (std::abs(ratio - std::round(ratio)) * step > kDateTolerance)
    throw std::invalid_argument("config: step must divide the tenor spacing");
  if (n_paths < 1) throw std::invalid_argument("config: need at least one path");
  if (scheme != "log-euler")
    throw std::invalid_argument("config: unknown scheme `" + scheme + "`");
}

namespace {

struct ModeledRate {
  double fixing;
  int grid_index;  // 1-based; 0 for interpolated maturities
  PiecewiseConstant lambda;
  double initial;
};

Eigen::VectorXd build_step_grid(const ModelSpec& model, const SimConfig& config,
                                const std::vector<double>& fixing_dates,
                                double horizon) {
  std::vector<double> nodes;
  nodes.push_back(0.0);
  nodes.push_back(horizon);
  for (double m : model.grid.maturities)
    if (m < horizon) nodes.push_back(m);
  for (double d : fixing_dates)
    if (d < horizon) nodes.push_back(d);
  auto add_breakpoints = [&](const PiecewiseConstant& f) {
    for (double b : f.breakpoints())
      if (b > 0.0 && b < horizon) nodes.push_back(b);
  };
  add_breakpoints(model.chars.drift_b);
  add_breakpoints(model.chars.variance_c);
  add_breakpoints(model.chars.intensity_eta);
  for (double T : model.vols.maturities()) add_breakpoints(model.vols.raw(T));
  const int n_uniform = static_cast<int>(std::floor(horizon / config.step + 1e-9));
  for (int k = 1; k <= n_uniform; ++k) nodes.push_back(k * config.step);
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> unique_nodes;
  for (double t : nodes)
    if (unique_nodes.empty() || t > unique_nodes.back() + kDateTolerance)
      unique_nodes.push_back(t);
  return Eigen::Map<const Eigen::VectorXd>(unique_nodes.data(),
                                           static_cast<Eigen::Index>(unique_nodes.size()));
}

// Quadrature against the jump-size density with the pdf (or the exact point
// masses) folded into the weights.
QuadratureRule density_quadrature(const JumpDensity& density) {
  QuadratureRule rule;
  if (density.kind == JumpKind::discrete) {
    for (const auto& [x, p] : density.points) {
      rule.nodes.push_back(x);
      rule.weights.push_back(p);
    }
    return rule;
  }
  const auto [lo, hi] = density.coverage_interval(kCorrectionTailMass);
  if (!(hi > lo)) {
    rule.nodes.push_back(lo);
    rule.weights.push_back(1.0);
    return rule;
  }
  rule = gauss_legendre_on(kCorrectionQuadratureOrder, lo, hi);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    rule.weights[q] *= density.pdf(rule.nodes[q]);
  return rule;
}

}  // namespace

RatePathSet simulate(const ModelSpec& model, const SimConfig& config,
                     std::vector<double> maturities) {
  model.validate();
  config.validate(model.grid.delta);
  if (maturities.empty()) throw std::invalid_argument("simulate: no maturities requested");
  std::sort(maturities.begin(), maturities.end());
  maturities.erase(std::unique(maturities.begin(), maturities.end(),
                               [](double a, double b) { return same_date(a, b); }),
                   maturities.end());
  const TenorGrid& grid = model.grid;

  // Resolve the modeled set: requested fixings plus every grid rate the
  // measure algebra can touch (dependence on shorter maturities only).
  int max_grid_index = 0;
  std::vector<double> off_grid;
  for (double T : maturities) {
    if (!(T > 0.0) || T > grid.terminal() - kDateTolerance)
      throw std::invalid_argument("simulate: no rate fixes at " + std::to_string(T));
    if (grid.contains(T)) {
      max_grid_index = std::max(max_grid_index, grid.index_of(T));
    } else {
      off_grid.push_back(T);
      max_grid_index = std::max(max_grid_index, locate_index(grid, T) - 1);
    }
  }
  int numeraire_index = 0;  // 0 marks the rolling spot numeraire
  if (model.measure.is_forward()) {
    if (!off_grid.empty())
      throw std::runtime_error(
          "simulate: interpolated maturities are defined under the spot-LIBOR measure");
    numeraire_index = grid.index_of(model.measure.maturity);
    max_grid_index = std::max(max_grid_index, numeraire_index - 1);
  }
  const double horizon = maturities.back();
  if (model.measure.is_forward() && horizon > model.measure.maturity + kDateTolerance)
    throw std::invalid_argument("simulate: horizon exceeds the forward numeraire maturity");

  const ConditionReport conditions =
      check_conditions(model.chars, model.vols, std::max(horizon, grid.delta));
  if (!conditions.all_pass())
    throw std::runtime_error(
        "simulate: driving process fails the integrability conditions; refusing to run (" +
        conditions.diagnostics[1] + ")");

  std::vector<ModeledRate> rates;
  for (int s = 1; s <= max_grid_index; ++s)
    rates.push_back(ModeledRate{grid.maturity(s), s, model.vols.raw(grid.maturity(s)),
                                model.initial_rate(grid.maturity(s))});
  for (double T : off_grid)
    rates.push_back(ModeledRate{T, 0, model.volatility_for(T), model.initial_rate(T)});
  std::sort(rates.begin(), rates.end(),
            [](const ModeledRate& a, const ModeledRate& b) { return a.fixing < b.fixing; });
  const int R = static_cast<int>(rates.size());
  if (R == 0) throw std::invalid_argument("simulate: nothing to model");
  std::vector<int> pos_of_grid(static_cast<std::size_t>(max_grid_index) + 1, -1);
  for (int r = 0; r < R; ++r)
    if (rates[static_cast<std::size_t>(r)].grid_index > 0)
      pos_of_grid[static_cast<std::size_t>(rates[static_cast<std::size_t>(r)].grid_index)] = r;

  std::vector<double> fixing_dates;
  for (const ModeledRate& r : rates) fixing_dates.push_back(r.fixing);
  const Eigen::VectorXd times = build_step_grid(model, config, fixing_dates, horizon);
  const int K = static_cast<int>(times.size()) - 1;
  const int P = config.n_paths;

  DriverIncrements driver = sample_increments(model.chars, times, P, config.seed);

  std::vector<Eigen::ArrayXXd> values(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    values[static_cast<std::size_t>(r)].resize(P, K + 1);
    values[static_cast<std::size_t>(r)].col(0).setConstant(
        rates[static_cast<std::size_t>(r)].initial);
  }

  const bool jumps_on = model.chars.has_jumps(horizon);
  QuadratureRule quad;
  if (jumps_on) quad = density_quadrature(model.chars.density);

  std::vector<Eigen::ArrayXd> ell(static_cast<std::size_t>(R));
  std::vector<Eigen::ArrayXd> drift_arr(static_cast<std::size_t>(R),
                                        Eigen::ArrayXd::Zero(P));
  std::vector<Eigen::ArrayXd> corr_arr(static_cast<std::size_t>(R),
                                       Eigen::ArrayXd::Zero(P));
  Eigen::ArrayXd tilt(P), beta(P);

  for (int k = 0; k < K; ++k) {
    const double t0 = times[k], t1 = times[k + 1];
    const double dt = t1 - t0;
    // Interval attribution: i(t), lambda and c looked up strictly inside the
    // step, so a rate fixing at t0 stops driving the others from this step on.
    const double t_mid = 0.5 * (t0 + t1);
    const int i_mid = locate_index(grid, t_mid);
    const double c = model.chars.variance_c(t_mid);
    const double eta = model.chars.intensity_eta(t_mid);
    const int m = numeraire_index == 0 ? i_mid : numeraire_index;

    std::vector<double> lambda(static_cast<std::size_t>(R));
    std::vector<char> alive(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
      const ModeledRate& mr = rates[static_cast<std::size_t>(r)];
      alive[static_cast<std::size_t>(r)] = t1 <= mr.fixing + kDateTolerance;
      lambda[static_cast<std::size_t>(r)] = (t_mid > mr.fixing) ? 0.0 : mr.lambda(t_mid);
      const auto col = values[static_cast<std::size_t>(r)].col(k);
      ell[static_cast<std::size_t>(r)] = grid.delta * col / (1.0 + grid.delta * col);
      if (alive[static_cast<std::size_t>(r)]) {
        drift_arr[static_cast<std::size_t>(r)].setZero();
        corr_arr[static_cast<std::size_t>(r)].setZero();
      }
    }
    auto lam_of = [&](int j) { return lambda[static_cast<std::size_t>(pos_of_grid[static_cast<std::size_t>(j)])]; };
    auto ell_of = [&](int j) -> const Eigen::ArrayXd& {
      return ell[static_cast<std::size_t>(pos_of_grid[static_cast<std::size_t>(j)])];
    };

    // Brownian drift terms.
    for (int r = 0; r < R; ++r) {
      if (!alive[static_cast<std::size_t>(r)]) continue;
      const ModeledRate& mr = rates[static_cast<std::size_t>(r)];
      const double lam_s = lambda[static_cast<std::size_t>(r)];
      if (lam_s == 0.0 || c == 0.0) continue;
      Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(P);
      if (mr.grid_index > 0) {
        const int s = mr.grid_index;
        if (m <= s) {
          for (int j = std::max(i_mid, m); j <= s; ++j) sum += lam_of(j) * ell_of(j);
          drift_arr[static_cast<std::size_t>(r)] = c * lam_s * sum;
        } else if (m > s + 1) {
          for (int j = std::max(i_mid, s + 1); j <= m - 1; ++j) sum += lam_of(j) * ell_of(j);
          drift_arr[static_cast<std::size_t>(r)] = -c * lam_s * sum;
        }
      } else {
        const int i_T = locate_index(grid, mr.fixing);
        for (int j = i_mid; j <= i_T - 1; ++j) sum += lam_of(j) * ell_of(j);
        sum += lam_s * ell[static_cast<std::size_t>(r)];
        drift_arr[static_cast<std::size_t>(r)] = c * lam_s * sum;
      }
    }

    // Compensator corrections, one pass over quadrature nodes with shared
    // running beta products across the grid maturities.
    if (jumps_on && eta > 0.0) {
      for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const double x = quad.nodes[q];
        const double wq = quad.weights[q] * eta;
        tilt.setOnes();
        for (int j = std::max(i_mid, m); j <= max_grid_index; ++j) {
          const double lam_j = lam_of(j);
          beta = ell_of(j) * std::expm1(lam_j * x) + 1.0;
          tilt /= beta;
          if (lam_j != 0.0)
            corr_arr[static_cast<std::size_t>(pos_of_grid[static_cast<std::size_t>(j)])] +=
                (wq * std::expm1(lam_j * x)) * (1.0 - tilt);
        }
        if (numeraire_index > 0) {
          // rates shorter than the numeraire carry direct beta products
          Eigen::ArrayXd suffix = Eigen::ArrayXd::Ones(P);
          for (int s = numeraire_index - 2; s >= i_mid; --s) {
            suffix *= ell_of(s + 1) * std::expm1(lam_of(s + 1) * x) + 1.0;
            const double lam_s = lam_of(s);
            if (lam_s != 0.0)
              corr_arr[static_cast<std::size_t>(pos_of_grid[static_cast<std::size_t>(s)])] +=
                  (wq * std::expm1(lam_s * x)) * (1.0 - suffix);
          }
        }
        for (int r = 0; r < R; ++r) {
          const ModeledRate& mr = rates[static_cast<std::size_t>(r)];
          if (mr.grid_index > 0 || !alive[static_cast<std::size_t>(r)]) continue;
          const double lam_T = lambda[static_cast<std::size_t>(r)];
          if (lam_T == 0.0) continue;
          const int i_T = locate_index(grid, mr.fixing);
          Eigen::ArrayXd grid_tilt = Eigen::ArrayXd::Ones(P);
          for (int j = i_mid; j <= i_T - 1; ++j)
            grid_tilt /= ell_of(j) * std::expm1(lam_of(j) * x) + 1.0;
          beta = ell[static_cast<std::size_t>(r)] * std::expm1(lam_T * x) + 1.0;
          corr_arr[static_cast<std::size_t>(r)] +=
              (wq * std::expm1(lam_T * x)) *
              ((1.0 - grid_tilt) + grid_tilt * (1.0 - 1.0 / beta));
        }
      }
    }

    // Log-Euler advance; fixed rates carry their values forward.
    for (int r = 0; r < R; ++r) {
      auto& vals = values[static_cast<std::size_t>(r)];
      if (!alive[static_cast<std::size_t>(r)]) {
        vals.col(k + 1) = vals.col(k);
        continue;
      }
      const double lam_s = lambda[static_cast<std::size_t>(r)];
      const double var_term = 0.5 * lam_s * lam_s * c;
      const double jump_comp = (jumps_on && eta > 0.0 && lam_s != 0.0)
                                   ? eta * (model.chars.density.mgf(lam_s) - 1.0)
                                   : 0.0;
      vals.col(k + 1) =
          vals.col(k) *
          (((config.drift_scale * drift_arr[static_cast<std::size_t>(r)] +
             corr_arr[static_cast<std::size_t>(r)] - var_term - jump_comp) *
                dt +
            lam_s * driver.brownian.col(k) + lam_s * driver.jump_sum.col(k))
               .exp());
    }
  }

  for (const auto& v : values)
    if (!v.allFinite())
      throw std::runtime_error("simulate: non-finite rate produced (check inputs)");

  RatePathSet out;
  out.times = times;
  for (const ModeledRate& r : rates) {
    out.maturities.push_back(r.fixing);
    out.grid_index.push_back(r.grid_index);
  }
  out.values = std::move(values);
  out.driver = std::move(driver);
  out.seed = config.seed;
  out.measure = model.measure;
  return out;
}

CapletPrice caplet_price_mc(const RatePathSet& paths, const TenorGrid& grid,
                            const DiscountCurve& curve, double strike,
                            double fixing, double delta) {
  const double pay = fixing + delta;
  const Eigen::ArrayXd payoff = (paths.fixing(fixing) - strike).max(0.0);
  Eigen::ArrayXd deflated(payoff.size());
  if (paths.measure.is_forward()) {
    if (!same_date(paths.measure.maturity, pay))
      throw std::runtime_error("caplet: paths are under " + paths.measure.name() +
                               " but the payoff settles at " + std::to_string(pay) +
                               " (measure mismatch)");
    deflated = curve(pay) * delta * payoff;
  } else {
    const int m = grid.index_of(pay);
    Eigen::ArrayXd bstar =
        Eigen::ArrayXd::Constant(payoff.size(), 1.0 / curve(grid.maturity(1)));
    for (int j = 1; j < m; ++j)
      bstar *= 1.0 + grid.delta * paths.fixing(grid.maturity(j));
    deflated = delta * payoff / bstar;
  }
  return CapletPrice{sample_mean(deflated), sample_std_error(deflated)};
}

void write_paths_csv(const RatePathSet& paths, std::ostream& out) {
  out << "path,time,maturity,rate\n";
  char buf[128];
  for (int p = 0; p < paths.paths(); ++p)
    for (int k = 0; k < paths.nodes(); ++k)
      for (std::size_t r = 0; r < paths.maturities.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", p, paths.times[k],
                      paths.maturities[r], paths.values[r](p, k));
        out << buf;
      }
}

double sample_mean(const Eigen::ArrayXd& x) { return x.mean(); }

double sample_std_error(const Eigen::ArrayXd& x) {
  const double m = x.mean();
  const double var = (x - m).square().sum() / std::max<int>(1, static_cast<int>(x.size()) - 1);
  return std::sqrt(var / static_cast<double>(x.size()));
}

}  // namespace levylmm
