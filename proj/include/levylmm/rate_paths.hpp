#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "levylmm/measure_engine.hpp"
#include "levylmm/stochastic_driver.hpp"
#include "levylmm/termstructure.hpp"

namespace levylmm {

// Joint simulated paths of all modeled rates. Each rate is keyed by its
// fixing date; columns at nodes past the fixing carry the frozen fixing
// value, so L(t ^ T, T) reads are direct.
struct RatePathSet {
  Eigen::VectorXd times;            // K+1 nodes, times[0] = 0
  std::vector<double> maturities;   // fixing dates, ascending
  std::vector<int> grid_index;      // 1-based tenor index, 0 for interpolated
  std::vector<Eigen::ArrayXXd> values;  // per maturity: paths x (K+1)
  DriverIncrements driver;
  std::uint64_t seed = 0;
  MeasureLabel measure = MeasureLabel::spot();

  int paths() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
  int nodes() const { return static_cast<int>(times.size()); }

  int node_index(double t) const;       // exact node lookup (date tolerance)
  int maturity_index(double T) const;   // position in `maturities`, -1 if absent
  bool has_rate(double T) const { return maturity_index(T) >= 0; }
  const Eigen::ArrayXXd& rate(double T) const;
  // Column of L(t, T) values (frozen at the fixing once t >= T).
  Eigen::ArrayXd rate_at(double T, double t) const;
  Eigen::ArrayXd fixing(double T) const { return rate_at(T, T); }
  double initial(double T) const { return rate(T)(0, 0); }
};

}  // namespace levylmm
