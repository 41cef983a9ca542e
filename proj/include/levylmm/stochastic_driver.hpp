#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "levylmm/piecewise.hpp"
#include "levylmm/volatility.hpp"

namespace levylmm {

enum class JumpKind { gaussian, two_sided_exponential, discrete };

// Jump-size distribution of the compound-Poisson part. Closed-form moment
// generating functions per family; sampling is inverse-transform based so
// that draws are a pure function of the engine state.
struct JumpDensity {
  JumpKind kind = JumpKind::gaussian;
  double mean = 0.0;
  double sd = 1.0;
  double rate = 1.0;  // two-sided exponential decay, density (rate/2) e^{-rate|x|}
  std::vector<std::pair<double, double>> points;  // (size, probability)

  static JumpDensity gaussian(double mean, double sd);
  static JumpDensity two_sided_exponential(double rate);
  static JumpDensity discrete(std::vector<std::pair<double, double>> points);

  void validate() const;
  bool mgf_finite(double u) const;
  double mgf(double u) const;  // +inf when divergent
  double pdf(double x) const;  // continuous families only
  double sample(std::mt19937_64& eng) const;
  // Interval carrying at least 1 - tail_mass of the distribution.
  std::pair<double, double> coverage_interval(double tail_mass) const;
  std::string family_name() const;
};

// Driving-process triplet: drift b, diffusion variance c, jump intensity eta
// (all piecewise-constant in time) and the jump-size density. The compensator
// is nu_t(dx) = eta_t * density(dx); finite activity by construction.
struct LevyCharacteristics {
  PiecewiseConstant drift_b{0.0};
  PiecewiseConstant variance_c{0.0};
  PiecewiseConstant intensity_eta{0.0};
  JumpDensity density = JumpDensity::gaussian(0.0, 1.0);

  void validate() const;
  bool has_jumps(double horizon) const;
};

// Result of the integrability checks on the driving process.
struct ConditionReport {
  bool cond1_pass = false;  // local integrability of |b| + c
  bool cond2_pass = false;  // exponential moments up to the bound M
  bool cond3_pass = false;  // square-integrability near 0 of the jump measure
  double bound_M = 0.0;
  bool capped_M = false;  // M supplied by the caller rather than computed
  std::array<std::string, 3> diagnostics;

  bool all_pass() const { return cond1_pass && cond2_pass && cond3_pass; }
};

// Checks the three admissibility conditions on [0, horizon]. M defaults to
// the sum of sup-norms of the configured loadings; cap_M overrides it.
ConditionReport check_conditions(const LevyCharacteristics& chars,
                                 const VolatilitySpec& vols, double horizon,
                                 std::optional<double> cap_M = std::nullopt);

struct JumpEvent {
  double time;
  double size;
};

// Raw driver noise on a step grid: increments of the c-scaled Brownian part
// and compound-Poisson events, one deterministic substream per path.
struct DriverIncrements {
  Eigen::VectorXd times;     // K+1 nodes, times[0] = 0
  Eigen::ArrayXXd brownian;  // paths x K, variance of column k is c * dt_k
  Eigen::ArrayXXd jump_sum;  // paths x K, sum of jump sizes within the step
  std::vector<std::vector<JumpEvent>> jumps;  // per path, time-ordered
  std::uint64_t seed = 0;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  int paths() const { return static_cast<int>(brownian.rows()); }
};

DriverIncrements sample_increments(const LevyCharacteristics& chars,
                                   const Eigen::VectorXd& step_grid,
                                   int n_paths, std::uint64_t seed);

// splitmix64-style mix used to derive per-path substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace levylmm
