#include "levylmm/measure_engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levylmm/lmm_dynamics.hpp"
#include "levylmm/rate_paths.hpp"

namespace levylmm {

AccrualWeight accrual_weight(double delta, double rate) {
  const double denom = 1.0 + delta * rate;
  if (!(denom > 0.0))
    throw std::runtime_error("accrual_weight: 1 + delta L is not positive (degenerate rate)");
  return AccrualWeight{delta * rate / denom};
}

double jump_beta(AccrualWeight ell, double lambda, double x) {
  return ell.value * std::expm1(lambda * x) + 1.0;
}

double brownian_drift_adjustment(std::span<const std::pair<double, double>> terms,
                                 double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("drift adjustment: c must be nonnegative");
  double sum = 0.0;
  for (const auto& [lambda, ell] : terms) sum += lambda * ell;
  return sum * std::sqrt(c);
}

double compensator_factor(std::span<const double> betas) {
  double prod = 1.0;
  for (double b : betas) {
    if (!(b > 0.0)) throw std::runtime_error("compensator_factor: non-positive beta");
    prod /= b;
  }
  return prod;
}

std::string MeasureLabel::name() const {
  if (!is_forward()) return "spot-libor";
  std::ostringstream os;
  os << "forward(" << maturity << ")";
  return os.str();
}

namespace {

// Numeraire value divided by the common factor B(t, T_{i(t)}): makes every
// supported numeraire a pure function of the simulated rates.
Eigen::ArrayXd reduced_numeraire(const RatePathSet& paths, const TenorGrid& grid,
                                 const MeasureLabel& label, double t) {
  const int i = locate_index(grid, t);
  Eigen::ArrayXd r = Eigen::ArrayXd::Ones(paths.paths());
  if (label.is_forward()) {
    const int m = grid.index_of(label.maturity);
    if (i <= m) {
      for (int j = i; j < m; ++j)
        r /= 1.0 + grid.delta * paths.rate_at(grid.maturity(j), t);
    } else {
      // bond extended past its maturity by rolling at the fixed rates
      for (int j = m; j < i; ++j)
        r *= 1.0 + grid.delta * paths.fixing(grid.maturity(j));
    }
    return r;
  }
  for (int j = 1; j < i; ++j)
    r *= 1.0 + grid.delta * paths.fixing(grid.maturity(j));
  return r;
}

}  // namespace

DensityPath density_path(const RatePathSet& paths, const TenorGrid& grid,
                         const MeasurePair& pair) {
  for (const MeasureLabel& label : {pair.source, pair.target})
    if (label.is_forward() && !grid.contains(label.maturity))
      throw std::invalid_argument("density_path: " + label.name() +
                                  " is outside the tenor grid");
  DensityPath d;
  d.times = paths.times;
  d.values.resize(paths.paths(), paths.nodes());
  Eigen::ArrayXd src0, tgt0;
  for (int k = 0; k < paths.nodes(); ++k) {
    const double t = paths.times[k];
    const Eigen::ArrayXd tgt = reduced_numeraire(paths, grid, pair.target, t);
    const Eigen::ArrayXd src = reduced_numeraire(paths, grid, pair.source, t);
    if (k == 0) {
      src0 = src;
      tgt0 = tgt;
    }
    d.values.col(k) = (tgt / tgt0) / (src / src0);
  }
  return d;
}

DensityPath density_path_stochastic_exponential(const ModelSpec& model,
                                                const RatePathSet& paths,
                                                int s) {
  const TenorGrid& grid = model.grid;
  if (s < 1 || s > grid.count() - 1)
    throw std::invalid_argument("density_se: rate index outside grid");
  const MeasureLabel ref = MeasureLabel::forward(grid.maturity(s + 1));
  if (!(paths.measure == ref))
    throw std::invalid_argument("density_se: paths must be simulated under " + ref.name());
  const double T_s = grid.maturity(s);

  DensityPath d;
  d.times = paths.times;
  d.values.resize(paths.paths(), paths.nodes());
  d.values.col(0).setOnes();
  const Eigen::ArrayXXd& rate = paths.rate(T_s);
  for (int k = 0; k + 1 < paths.nodes(); ++k) {
    const double t0 = paths.times[k], t1 = paths.times[k + 1];
    const double dt = t1 - t0;
    const double t_mid = 0.5 * (t0 + t1);
    const double lambda = model.vols.value(t_mid, T_s);
    const double c = model.chars.variance_c(t_mid);
    const double eta = model.chars.intensity_eta(t_mid);
    if (lambda == 0.0) {
      d.values.col(k + 1) = d.values.col(k);
      continue;
    }
    const double mgf_gap = model.chars.density.mgf(lambda) - 1.0;
    for (int p = 0; p < paths.paths(); ++p) {
      const AccrualWeight ell = accrual_weight(grid.delta, rate(p, k));
      const double alpha = ell.value * lambda;
      double log_inc = alpha * paths.driver.brownian(p, k) -
                       0.5 * alpha * alpha * c * dt - eta * ell.value * mgf_gap * dt;
      double jump_mult = 1.0;
      for (const JumpEvent& ev : paths.driver.jumps[static_cast<std::size_t>(p)]) {
        if (ev.time >= t0 && ev.time < t1) jump_mult *= jump_beta(ell, lambda, ev.size);
      }
      d.values(p, k + 1) = d.values(p, k) * std::exp(log_inc) * jump_mult;
    }
  }
  return d;
}

}  // namespace levylmm
