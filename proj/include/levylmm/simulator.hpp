#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "levylmm/lmm_dynamics.hpp"
#include "levylmm/rate_paths.hpp"

namespace levylmm {

// Discretization settings. The step must divide the tenor spacing so that
// tenor dates fall on simulation nodes; additional nodes are inserted at
// characteristic breakpoints and requested maturities.
struct SimConfig {
  double step = 0.0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  std::string scheme = "log-euler";
  // Validation knob: scales the assembled drift term (the corrupted-drift
  // positive control runs with -1). Leave at 1 for pricing.
  double drift_scale = 1.0;

  void validate(double delta) const;
};

// Pathwise log-Euler solution of the assembled SDEs for the requested fixing
// maturities (grid rates needed by the measure algebra are always included).
RatePathSet simulate(const ModelSpec& model, const SimConfig& config,
                     std::vector<double> maturities);

struct CapletPrice {
  double price = 0.0;
  double std_error = 0.0;
};

// delta (L(T_fix,T_fix) - K)^+ paid at T_fix + delta, priced under the
// paths' measure: forward-measure discounting or spot-numeraire deflation.
CapletPrice caplet_price_mc(const RatePathSet& paths, const TenorGrid& grid,
                            const DiscountCurve& curve, double strike,
                            double fixing, double delta);

// `path,time,maturity,rate` rows for every path, node and modeled maturity.
void write_paths_csv(const RatePathSet& paths, std::ostream& out);

double sample_mean(const Eigen::ArrayXd& x);
double sample_std_error(const Eigen::ArrayXd& x);

}  // namespace levylmm
