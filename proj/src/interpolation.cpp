#include "levylmm/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace levylmm {

int SpotNumerairePath::date_index(double T) const {
  for (int k = 0; k < static_cast<int>(dates.size()); ++k)
    if (same_date(dates[k], T)) return k;
  throw std::invalid_argument("numeraire: no value stored at date " + std::to_string(T));
}

SpotNumerairePath spot_numeraire_path(const RatePathSet& paths, const TenorGrid& grid,
                                      const DiscountCurve& curve) {
  const double horizon = paths.times[paths.nodes() - 1];
  SpotNumerairePath out;
  std::vector<double> dates{0.0};
  std::vector<Eigen::ArrayXd> cols;
  cols.push_back(Eigen::ArrayXd::Ones(paths.paths()));

  Eigen::ArrayXd roll =
      Eigen::ArrayXd::Constant(paths.paths(), 1.0 / curve(grid.maturity(1)));
  for (int k = 1; k <= grid.count(); ++k) {
    // B*(T_k) needs the fixings of all rates settling before T_k
    if (k >= 2) {
      const double prev = grid.maturity(k - 1);
      if (!paths.has_rate(prev) || prev > horizon + kDateTolerance) break;
      roll *= 1.0 + grid.delta * paths.fixing(prev);
    }
    dates.push_back(grid.maturity(k));
    cols.push_back(roll);
  }
  out.dates = Eigen::Map<const Eigen::VectorXd>(dates.data(),
                                                static_cast<Eigen::Index>(dates.size()));
  out.values.resize(paths.paths(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    out.values.col(static_cast<Eigen::Index>(k)) = cols[k];
  return out;
}

GammaSolve solve_gamma(const Eigen::ArrayXd& log_bstar_left,
                       const Eigen::ArrayXd& log_bstar_right, double target,
                       double tol) {
  if (log_bstar_left.size() != log_bstar_right.size() || log_bstar_left.size() == 0)
    throw std::invalid_argument("solve_gamma: sample sets must be non-empty and paired");
  if (((log_bstar_right - log_bstar_left) < -1e-12).any())
    throw std::invalid_argument("solve_gamma: B* must be pathwise nondecreasing");
  const auto mean_inverse = [&](double g) {
    return (-(1.0 - g) * log_bstar_left - g * log_bstar_right).exp().mean();
  };
  const double at0 = mean_inverse(0.0), at1 = mean_inverse(1.0);
  if (target > at0 + tol || target < at1 - tol)
    throw std::runtime_error(
        "solve_gamma: target discount is outside the attainable range of the sample "
        "set (infeasible curve)");
  double lo = 0.0, hi = 1.0;
  // monotone decreasing in gamma, so plain bisection; run the bracket down to
  // machine width before reading off the residual
  for (int it = 0; it < 60 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_inverse(mid) > target ? lo : hi) = mid;
  }
  const double gamma = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
  const double residual = std::abs(mean_inverse(gamma) - target);
  if (residual > tol)
    throw std::runtime_error("solve_gamma: bisection residual " + std::to_string(residual) +
                             " exceeds tolerance");
  return GammaSolve{gamma, residual};
}

double GammaInterpolation::gamma(double T) const {
  for (const auto& [date, g] : points)
    if (same_date(date, T)) return g;
  throw std::invalid_argument("gamma: date was not part of the construction");
}

GammaConstruction interpolate_numeraire(const ModelSpec& model, const SimConfig& config,
                                        std::vector<double> dates, double tol) {
  std::sort(dates.begin(), dates.end());
  for (double T : dates)
    if (!(T > 0.0) || T > model.grid.terminal() + kDateTolerance)
      throw std::invalid_argument("interpolate: date outside the tenor span");

  ModelSpec spot_model = model;
  spot_model.measure = MeasureLabel::spot();
  std::vector<double> fixings;
  for (int s = 1; s <= model.rate_count(); ++s) fixings.push_back(model.fixing(s));
  const RatePathSet paths = simulate(spot_model, config, fixings);

  GammaConstruction out;
  out.numeraire = spot_numeraire_path(paths, model.grid, model.curve);
  // interval k covers [T_k, T_{k+1}]; index 0 is the stub [0, T_1]
  out.intervals.resize(static_cast<std::size_t>(model.grid.count()));
  for (int k = 0; k < model.grid.count(); ++k) {
    out.intervals[static_cast<std::size_t>(k)].left = k == 0 ? 0.0 : model.grid.maturity(k);
    out.intervals[static_cast<std::size_t>(k)].right =
        model.grid.maturity(std::min(k + 1, model.grid.count()));
  }

  std::vector<std::pair<double, Eigen::ArrayXd>> extra_columns;
  for (double T : dates) {
    GammaResult res;
    res.maturity = T;
    res.target = model.curve(T);
    if (model.grid.contains(T)) {
      // tenor dates pin gamma exactly; nothing is solved
      const int i = model.grid.index_of(T);
      const bool terminal = i == model.grid.count();
      res.gamma = terminal ? 1.0 : 0.0;
      res.residual = 0.0;
      out.intervals[static_cast<std::size_t>(terminal ? i - 1 : i)].points.emplace_back(
          T, res.gamma);
      out.results.push_back(res);
      continue;
    }
    const int i = locate_index(model.grid, T);
    const double left_date = i == 1 ? 0.0 : model.grid.maturity(i - 1);
    const double right_date = model.grid.maturity(i);
    const Eigen::ArrayXd log_left = out.numeraire.at(left_date).log();
    const Eigen::ArrayXd log_right = out.numeraire.at(right_date).log();
    const GammaSolve solved = solve_gamma(log_left, log_right, res.target, tol);
    res.gamma = solved.gamma;
    res.residual = solved.residual;
    out.results.push_back(res);
    out.intervals[static_cast<std::size_t>(i - 1)].points.emplace_back(T, res.gamma);
    extra_columns.emplace_back(
        T, ((1.0 - res.gamma) * log_left + res.gamma * log_right).exp());
  }

  if (!extra_columns.empty()) {
    std::vector<double> dates_all(out.numeraire.dates.data(),
                                  out.numeraire.dates.data() + out.numeraire.dates.size());
    std::vector<Eigen::ArrayXd> cols;
    for (int k = 0; k < out.numeraire.values.cols(); ++k)
      cols.push_back(out.numeraire.values.col(k));
    for (auto& [T, col] : extra_columns) {
      const auto pos = std::upper_bound(dates_all.begin(), dates_all.end(), T);
      const auto idx = pos - dates_all.begin();
      dates_all.insert(pos, T);
      cols.insert(cols.begin() + idx, std::move(col));
    }
    out.numeraire.dates = Eigen::Map<const Eigen::VectorXd>(
        dates_all.data(), static_cast<Eigen::Index>(dates_all.size()));
    out.numeraire.values.resize(paths.paths(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
      out.numeraire.values.col(static_cast<Eigen::Index>(k)) = cols[k];
  }
  return out;
}

double ForwardProcessCoefficients::beta(double x) const {
  double prod = 1.0;
  for (const auto& [ell, lambda] : loadings) prod *= ell * std::expm1(lambda * x) + 1.0;
  return prod;
}

ForwardProcessCoefficients forward_process_coefficients(
    const ModelSpec& model, double U, double S, double t,
    std::span<const double> grid_state,
    std::span<const std::pair<double, double>> interpolated_rates) {
  if (!(U < S)) throw std::invalid_argument("forward process: need U < S");
  const double span_ratio = (S - U) / model.grid.delta;
  const int n_intervals = static_cast<int>(std::round(span_ratio));
  if (std::abs(span_ratio - n_intervals) > 1e-9 || n_intervals < 1)
    throw std::invalid_argument(
        "forward process: maturities are not a whole number of tenor periods apart "
        "(uncovered)");
  const auto rate_value = [&](double V) {
    if (model.grid.contains(V)) {
      const int j = model.grid.index_of(V);
      if (j > static_cast<int>(grid_state.size()))
        throw std::runtime_error("forward process: state is missing grid rate " +
                                 std::to_string(V));
      return grid_state[static_cast<std::size_t>(j - 1)];
    }
    for (const auto& [maturity, value] : interpolated_rates)
      if (same_date(maturity, V)) return value;
    throw std::invalid_argument("forward process: no modeled rate at " + std::to_string(V) +
                                " (uncovered maturity)");
  };
  ForwardProcessCoefficients out;
  for (int j = 0; j < n_intervals; ++j) {
    const double V = U + j * model.grid.delta;
    const double lambda = t > V + kDateTolerance ? 0.0 : model.volatility_for(V)(t);
    const AccrualWeight ell = accrual_weight(model.grid.delta, rate_value(V));
    out.loadings.emplace_back(ell.value, lambda);
    out.alpha += ell.value * lambda;
  }
  return out;
}

Eigen::ArrayXd bond_price(const RatePathSet& paths, const ModelSpec& model,
                          double T, double t) {
  if (t > T + kDateTolerance)
    throw std::invalid_argument("bond_price: bond has matured (t > T)");
  if (same_date(t, T)) return Eigen::ArrayXd::Ones(paths.paths());
  if (same_date(t, 0.0))
    return Eigen::ArrayXd::Constant(paths.paths(), model.curve(T));
  const double span_ratio = (T - t) / model.grid.delta;
  const int n_intervals = static_cast<int>(std::round(span_ratio));
  if (std::abs(span_ratio - n_intervals) > 1e-9 || n_intervals < 1)
    throw std::invalid_argument(
        "bond_price: maturity is off the delta-lattice through t (uncovered)");
  Eigen::ArrayXd price = Eigen::ArrayXd::Ones(paths.paths());
  for (int j = 0; j < n_intervals; ++j) {
    const double V = t + j * model.grid.delta;
    price /= 1.0 + model.grid.delta * paths.rate_at(V, t);
  }
  return price;
}

}  // namespace levylmm
