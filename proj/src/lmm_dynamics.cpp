#include "levylmm/lmm_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "levylmm/quadrature.hpp"

namespace levylmm {

namespace {

// int g(x) f(x) dx: exact sum for discrete sizes, truncated Gauss-Legendre
// covering all but kCorrectionTailMass of the jump mass otherwise.
double integrate_against_density(const JumpDensity& f,
                                 const std::function<double(double)>& g) {
  if (f.kind == JumpKind::discrete) {
    double sum = 0.0;
    for (const auto& [x, p] : f.points) sum += p * g(x);
    return sum;
  }
  const auto [lo, hi] = f.coverage_interval(kCorrectionTailMass);
  if (!(hi > lo)) return g(lo);  // degenerate (point-mass gaussian)
  const QuadratureRule rule = gauss_legendre_on(kCorrectionQuadratureOrder, lo, hi);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    sum += rule.weights[q] * g(rule.nodes[q]) * f.pdf(rule.nodes[q]);
  return sum;
}

double state_rate(std::span<const double> state, int j) {
  if (j < 1 || static_cast<std::size_t>(j) > state.size())
    throw std::runtime_error(
        "coefficients: state is missing the rate with grid index " + std::to_string(j) +
        " (rates depend on all shorter modeled maturities)");
  return state[static_cast<std::size_t>(j - 1)];
}

}  // namespace

double ModelSpec::initial_rate(double fixing_date) const {
  for (const auto& [T, L0] : initial_rate_overrides)
    if (same_date(T, fixing_date)) return L0;
  return initial_forward_libor(curve, fixing_date + grid.delta, grid.delta);
}

PiecewiseConstant ModelSpec::volatility_for(double T) const {
  if (vols.has(T)) return vols.raw(T);
  if (grid.contains(T))
    throw std::invalid_argument("model: no loading configured for grid maturity " +
                                std::to_string(T));
  if (!(T > 0.0) || T > grid.terminal() + kDateTolerance)
    throw std::invalid_argument("model: maturity " + std::to_string(T) +
                                " outside the tenor span");
  const int i_T = locate_index(grid, T);
  const bool have_left = i_T >= 2 && vols.has(grid.maturity(i_T - 1));
  const bool have_right = i_T <= rate_count() && vols.has(grid.maturity(i_T));
  if (!have_left && !have_right)
    throw std::invalid_argument(
        "model: no bracketing grid loadings to interpolate lambda(.,T) at T = " +
        std::to_string(T));
  if (!have_left) return vols.raw(grid.maturity(i_T));
  if (!have_right) return vols.raw(grid.maturity(i_T - 1));

  const PiecewiseConstant& left = vols.raw(grid.maturity(i_T - 1));
  const PiecewiseConstant& right = vols.raw(grid.maturity(i_T));
  const double w = (T - grid.maturity(i_T - 1)) / grid.delta;
  std::vector<double> times = left.breakpoints();
  times.insert(times.end(), right.breakpoints().begin(), right.breakpoints().end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return same_date(a, b); }),
              times.end());
  std::vector<double> values(times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    values[k] = (1.0 - w) * left(times[k]) + w * right(times[k]);
  return PiecewiseConstant(std::move(times), std::move(values));
}

void ModelSpec::validate() const {
  grid.validate();
  chars.validate();
  for (int s = 1; s <= rate_count(); ++s)
    if (!vols.has(fixing(s)))
      throw std::invalid_argument("model: grid rate fixing at " +
                                  std::to_string(fixing(s)) + " has no loading");
  for (double T : vols.maturities())
    if (!grid.contains(T) && (T <= 0.0 || T >= grid.terminal()))
      throw std::invalid_argument("model: loading maturity " + std::to_string(T) +
                                  " neither on the grid nor an interpolated date");
  for (const auto& [T, L0] : initial_rate_overrides) {
    if (T <= 0.0 || T > grid.terminal() + kDateTolerance)
      throw std::invalid_argument("model: initial-rate override outside the tenor span");
    if (!(1.0 + grid.delta * L0 > 0.0))
      throw std::invalid_argument("model: initial-rate override violates 1 + delta L > 0");
  }
  if (measure.is_forward() && !grid.contains(measure.maturity))
    throw std::invalid_argument("model: forward measure date must be a tenor maturity");
  // initial rates resolvable (curve coverage)
  for (int s = 1; s <= rate_count(); ++s) (void)initial_rate(fixing(s));
}

SdeCoefficients numeraire_relative_coefficients(const ModelSpec& model, int s,
                                                int m, double t,
                                                std::span<const double> state) {
  const TenorGrid& grid = model.grid;
  if (s < 1 || s > model.rate_count())
    throw std::invalid_argument("coefficients: rate index outside grid");
  if (m < 1 || m > grid.count())
    throw std::invalid_argument("coefficients: numeraire index outside grid");
  const double T_s = grid.maturity(s);
  if (t > T_s + kDateTolerance)
    throw std::invalid_argument("coefficients: rate has already fixed at t");

  SdeCoefficients out;
  out.reference = MeasureLabel::forward(grid.maturity(m));
  const double lambda_s = model.vols.value(t, T_s);
  const double c = model.chars.variance_c(t);
  const double eta = model.chars.intensity_eta(t);
  out.lambda = lambda_s;
  out.diffusion_loading = lambda_s * std::sqrt(c);
  if (lambda_s == 0.0) return SdeCoefficients{0.0, 0.0, 0.0, 0.0, out.reference};

  const int i_t = locate_index(grid, t);
  const bool below = m <= s;  // numeraire shorter than the rate's own settlement
  const int jlo = below ? std::max(i_t, m) : std::max(i_t, s + 1);
  const int jhi = below ? s : m - 1;

  std::vector<std::pair<double, double>> loadings;  // (ell_j, lambda_j)
  double drift_sum = 0.0;
  for (int j = jlo; j <= jhi; ++j) {
    const double lambda_j = model.vols.value(t, grid.maturity(j));
    const AccrualWeight ell = accrual_weight(grid.delta, state_rate(state, j));
    loadings.emplace_back(ell.value, lambda_j);
    drift_sum += ell.value * lambda_j;
  }
  out.drift = (below ? 1.0 : -1.0) * c * lambda_s * drift_sum;

  if (eta > 0.0 && !loadings.empty()) {
    out.compensator_correction =
        eta * integrate_against_density(model.chars.density, [&](double x) {
          double tilt = 1.0;
          for (const auto& [ell, lambda_j] : loadings) {
            const double b = jump_beta(AccrualWeight{ell}, lambda_j, x);
            tilt = below ? tilt / b : tilt * b;
          }
          return std::expm1(lambda_s * x) * (1.0 - tilt);
        });
  }
  return out;
}

SdeCoefficients forward_sde_coefficients(const ModelSpec& model, int s, double t,
                                         std::span<const double> state) {
  (void)state;  // m = s+1: drift and correction vanish structurally
  return numeraire_relative_coefficients(model, s, s + 1, t, {});
}

SdeCoefficients spot_sde_coefficients(const ModelSpec& model, int s, double t,
                                      std::span<const double> state) {
  SdeCoefficients out =
      numeraire_relative_coefficients(model, s, locate_index(model.grid, t), t, state);
  out.reference = MeasureLabel::spot();
  return out;
}

SdeCoefficients interpolated_sde_coefficients(const ModelSpec& model, double T,
                                              double t,
                                              std::span<const double> state,
                                              double own_rate) {
  const TenorGrid& grid = model.grid;
  if (!(T > 0.0) || T > grid.terminal() + kDateTolerance)
    throw std::invalid_argument("coefficients: maturity outside the tenor span");
  if (t > T + kDateTolerance)
    throw std::invalid_argument("coefficients: rate has already fixed at t");

  SdeCoefficients out;
  out.reference = MeasureLabel::spot();
  const PiecewiseConstant lambda_fn = model.volatility_for(T);
  const double lambda_T = lambda_fn(t);
  const double c = model.chars.variance_c(t);
  const double eta = model.chars.intensity_eta(t);
  out.lambda = lambda_T;
  out.diffusion_loading = lambda_T * std::sqrt(c);
  if (lambda_T == 0.0) return SdeCoefficients{0.0, 0.0, 0.0, 0.0, out.reference};

  const int i_t = locate_index(grid, t);
  const int i_T = locate_index(grid, T);
  const AccrualWeight ell_T = accrual_weight(grid.delta, own_rate);

  std::vector<std::pair<double, double>> loadings;  // grid (ell_j, lambda_j)
  double drift_sum = 0.0;
  for (int j = i_t; j <= i_T - 1; ++j) {
    const double lambda_j = model.vols.value(t, grid.maturity(j));
    const AccrualWeight ell = accrual_weight(grid.delta, state_rate(state, j));
    loadings.emplace_back(ell.value, lambda_j);
    drift_sum += ell.value * lambda_j;
  }
  out.drift = c * lambda_T * (drift_sum + ell_T.value * lambda_T);

  if (eta > 0.0) {
    out.compensator_correction =
        eta * integrate_against_density(model.chars.density, [&](double x) {
          double grid_tilt = 1.0;
          for (const auto& [ell, lambda_j] : loadings)
            grid_tilt /= jump_beta(AccrualWeight{ell}, lambda_j, x);
          const double beta_frac = jump_beta(ell_T, lambda_T, x);
          // grid product against nu^{i(t)}, fractional factor against nu^{i(T)}
          return std::expm1(lambda_T * x) *
                 ((1.0 - grid_tilt) + grid_tilt * (1.0 - 1.0 / beta_frac));
        });
  }
  return out;
}

ModelSpec extend_tenor(const ModelSpec& model, PiecewiseConstant lambda_new,
                       double initial_rate_new) {
  if (!lambda_new.nonnegative() || !lambda_new.all_finite())
    throw std::invalid_argument("extend_tenor: lambda must be bounded and nonnegative");
  if (!(1.0 + model.grid.delta * initial_rate_new > 0.0))
    throw std::invalid_argument("extend_tenor: initial rate violates 1 + delta L > 0");
  ModelSpec out = model;
  const double new_fixing = model.grid.terminal();
  out.grid = model.grid.extended();
  out.vols = model.vols.with_entry(new_fixing, std::move(lambda_new));
  out.initial_rate_overrides.emplace_back(new_fixing, initial_rate_new);
  return out;
}

}  // namespace levylmm
