#include "levylmm/stochastic_driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace levylmm {

JumpDensity JumpDensity::gaussian(double mean, double sd) {
  JumpDensity d;
  d.kind = JumpKind::gaussian;
  d.mean = mean;
  d.sd = sd;
  d.validate();
  return d;
}

JumpDensity JumpDensity::two_sided_exponential(double rate) {
  JumpDensity d;
  d.kind = JumpKind::two_sided_exponential;
  d.rate = rate;
  d.validate();
  return d;
}

JumpDensity JumpDensity::discrete(std::vector<std::pair<double, double>> points) {
  JumpDensity d;
  d.kind = JumpKind::discrete;
  d.points = std::move(points);
  d.validate();
  return d;
}

void JumpDensity::validate() const {
  switch (kind) {
    case JumpKind::gaussian:
      if (!(sd >= 0.0) || !std::isfinite(mean) || !std::isfinite(sd))
        throw std::invalid_argument("jump density: gaussian needs finite mean and sd >= 0");
      return;
    case JumpKind::two_sided_exponential:
      if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("jump density: exponential decay rate must be positive");
      return;
    case JumpKind::discrete: {
      if (points.empty()) throw std::invalid_argument("jump density: no discrete points");
      double total = 0.0;
      for (const auto& [x, p] : points) {
        if (!std::isfinite(x) || !(p >= 0.0))
          throw std::invalid_argument("jump density: bad discrete point");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-10)
        throw std::invalid_argument("jump density: discrete probabilities must sum to 1");
      return;
    }
  }
  throw std::logic_error("jump density: unknown family");
}

bool JumpDensity::mgf_finite(double u) const {
  if (kind == JumpKind::two_sided_exponential) return std::abs(u) < rate;
  return true;
}

double JumpDensity::mgf(double u) const {
  switch (kind) {
    case JumpKind::gaussian:
      return std::exp(u * mean + 0.5 * u * u * sd * sd);
    case JumpKind::two_sided_exponential:
      if (!mgf_finite(u)) return std::numeric_limits<double>::infinity();
      return rate * rate / (rate * rate - u * u);
    case JumpKind::discrete: {
      double m = 0.0;
      for (const auto& [x, p] : points) m += p * std::exp(u * x);
      return m;
    }
  }
  throw std::logic_error("jump density: unknown family");
}

double JumpDensity::pdf(double x) const {
  switch (kind) {
    case JumpKind::gaussian: {
      if (sd == 0.0) throw std::invalid_argument("jump density: degenerate gaussian has no pdf");
      const double z = (x - mean) / sd;
      return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
    }
    case JumpKind::two_sided_exponential:
      return 0.5 * rate * std::exp(-rate * std::abs(x));
    case JumpKind::discrete:
      throw std::invalid_argument("jump density: discrete family has no pdf");
  }
  throw std::logic_error("jump density: unknown family");
}

double JumpDensity::sample(std::mt19937_64& eng) const {
  switch (kind) {
    case JumpKind::gaussian: {
      if (sd == 0.0) return mean;
      std::normal_distribution<double> n(mean, sd);
      return n(eng);
    }
    case JumpKind::two_sided_exponential: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double v = u(eng);
      return v < 0.5 ? std::log(2.0 * std::max(v, 1e-300)) / rate
                     : -std::log(2.0 * std::max(1.0 - v, 1e-300)) / rate;
    }
    case JumpKind::discrete: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double v = u(eng);
      double acc = 0.0;
      for (const auto& [x, p] : points) {
        acc += p;
        if (v <= acc) return x;
      }
      return points.back().first;
    }
  }
  throw std::logic_error("jump density: unknown family");
}

std::pair<double, double> JumpDensity::coverage_interval(double tail_mass) const {
  switch (kind) {
    case JumpKind::gaussian: {
      if (sd == 0.0) return {mean, mean};
      // z with P(|Z| > z) = tail_mass, by bisection on the complementary cdf
      double lo = 0.0, hi = 40.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::erfc(mid / std::sqrt(2.0)) > tail_mass ? lo : hi) = mid;
      }
      const double z = 0.5 * (lo + hi);
      return {mean - z * sd, mean + z * sd};
    }
    case JumpKind::two_sided_exponential: {
      const double x = std::log(1.0 / tail_mass) / rate;
      return {-x, x};
    }
    case JumpKind::discrete: {
      double lo = points.front().first, hi = points.front().first;
      for (const auto& [x, p] : points) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      return {lo, hi};
    }
  }
  throw std::logic_error("jump density: unknown family");
}

std::string JumpDensity::family_name() const {
  switch (kind) {
    case JumpKind::gaussian: return "gaussian";
    case JumpKind::two_sided_exponential: return "two-sided-exponential";
    case JumpKind::discrete: return "discrete";
  }
  return "unknown";
}

void LevyCharacteristics::validate() const {
  if (!drift_b.all_finite()) throw std::invalid_argument("characteristics: drift must be finite");
  if (!variance_c.all_finite() || !variance_c.nonnegative())
    throw std::invalid_argument("characteristics: variance rate must be finite and nonnegative");
  if (!intensity_eta.all_finite() || !intensity_eta.nonnegative())
    throw std::invalid_argument("characteristics: jump intensity must be finite and nonnegative");
  density.validate();
}

bool LevyCharacteristics::has_jumps(double horizon) const {
  return intensity_eta.integral(0.0, horizon) > 0.0;
}

ConditionReport check_conditions(const LevyCharacteristics& chars,
                                 const VolatilitySpec& vols, double horizon,
                                 std::optional<double> cap_M) {
  if (!(horizon > 0.0)) throw std::invalid_argument("check_conditions: horizon must be positive");
  chars.validate();
  ConditionReport report;
  report.capped_M = cap_M.has_value();
  report.bound_M = cap_M.value_or(vols.sum_sup());

  // (1) integrability of |b| + c on [0, horizon]
  const bool finite_bc = chars.drift_b.all_finite() && chars.variance_c.all_finite();
  double int_bc = 0.0;
  {
    const PiecewiseConstant& b = chars.drift_b;
    for (std::size_t k = 0; k < b.breakpoints().size(); ++k) {
      const double lo = std::max(0.0, b.breakpoints()[k]);
      const double hi = (k + 1 < b.breakpoints().size())
                            ? std::min(horizon, b.breakpoints()[k + 1])
                            : horizon;
      if (hi > lo) int_bc += std::abs(b.values()[k]) * (hi - lo);
    }
    int_bc += chars.variance_c.integral(0.0, horizon);
  }
  report.cond1_pass = finite_bc && std::isfinite(int_bc);
  {
    std::ostringstream os;
    os << "int_0^" << horizon << " (|b|+c) ds = " << int_bc
       << (report.cond1_pass ? " < inf" : " (not finite)");
    report.diagnostics[0] = os.str();
  }

  // (2) exponential moments of the jump measure for all |u| <= M
  const double eta_mass = chars.intensity_eta.integral(0.0, horizon);
  std::ostringstream os2;
  if (eta_mass == 0.0) {
    report.cond2_pass = true;
    os2 << "jump measure empty on [0," << horizon << "]; exponential moments trivially finite";
  } else {
    const bool finite_at_M = chars.density.mgf_finite(report.bound_M) &&
                             chars.density.mgf_finite(-report.bound_M);
    report.cond2_pass = finite_at_M && std::isfinite(eta_mass);
    os2 << chars.density.family_name() << " jump sizes: exp moment "
        << (finite_at_M ? "finite" : "divergent") << " for all |u| <= M = " << report.bound_M;
    if (chars.density.kind == JumpKind::two_sided_exponential)
      os2 << " (finite iff |u| < decay rate " << chars.density.rate << ")";
    if (report.capped_M) os2 << " [caller-supplied cap]";
  }
  report.diagnostics[1] = os2.str();

  // (3) int (x^2 ^ 1) F(dx) along the horizon; finite for every supported
  // family since each has a finite second moment and finite activity
  report.cond3_pass = std::isfinite(eta_mass);
  {
    std::ostringstream os3;
    os3 << "finite-activity " << chars.density.family_name()
        << " jumps with finite second moment; int eta ds = " << eta_mass;
    report.diagnostics[2] = os3.str();
  }
  return report;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DriverIncrements sample_increments(const LevyCharacteristics& chars,
                                   const Eigen::VectorXd& step_grid,
                                   int n_paths, std::uint64_t seed) {
  chars.validate();
  if (n_paths < 1) throw std::invalid_argument("sample_increments: need at least one path");
  const int K = static_cast<int>(step_grid.size()) - 1;
  if (K < 1) throw std::invalid_argument("sample_increments: need at least one step");
  if (step_grid[0] != 0.0)
    throw std::invalid_argument("sample_increments: step grid must start at 0");
  for (int k = 0; k < K; ++k)
    if (!(step_grid[k + 1] > step_grid[k]))
      throw std::invalid_argument("sample_increments: step grid must be strictly increasing");

  DriverIncrements out;
  out.times = step_grid;
  out.seed = seed;
  out.brownian = Eigen::ArrayXXd::Zero(n_paths, K);
  out.jump_sum = Eigen::ArrayXXd::Zero(n_paths, K);
  out.jumps.resize(static_cast<std::size_t>(n_paths));

  std::vector<double> step_var(static_cast<std::size_t>(K));
  std::vector<double> step_mean_jumps(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    step_var[static_cast<std::size_t>(k)] = chars.variance_c.integral(step_grid[k], step_grid[k + 1]);
    step_mean_jumps[static_cast<std::size_t>(k)] =
        chars.intensity_eta.integral(step_grid[k], step_grid[k + 1]);
  }

  for (int p = 0; p < n_paths; ++p) {
    std::mt19937_64 eng(mix_seed(seed, static_cast<std::uint64_t>(p)));
    auto& events = out.jumps[static_cast<std::size_t>(p)];
    for (int k = 0; k < K; ++k) {
      const double var = step_var[static_cast<std::size_t>(k)];
      if (var > 0.0) {
        std::normal_distribution<double> n(0.0, std::sqrt(var));
        out.brownian(p, k) = n(eng);
      }
      const double mean_jumps = step_mean_jumps[static_cast<std::size_t>(k)];
      if (mean_jumps > 0.0) {
        std::poisson_distribution<int> pois(mean_jumps);
        const int count = pois(eng);
        if (count > 0) {
          std::uniform_real_distribution<double> u(step_grid[k], step_grid[k + 1]);
          std::vector<JumpEvent> batch(static_cast<std::size_t>(count));
          double sum = 0.0;
          for (int j = 0; j < count; ++j) {
            batch[static_cast<std::size_t>(j)].time = u(eng);
            batch[static_cast<std::size_t>(j)].size = chars.density.sample(eng);
            sum += batch[static_cast<std::size_t>(j)].size;
          }
          std::sort(batch.begin(), batch.end(),
                    [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
          events.insert(events.end(), batch.begin(), batch.end());
          out.jump_sum(p, k) = sum;
        }
      }
    }
  }
  return out;
}

}  // namespace levylmm
