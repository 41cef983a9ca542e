#pragma once

#include <optional>
#include <vector>

#include "levylmm/piecewise.hpp"

namespace levylmm {

// Deterministic loading functions lambda(.,T): one bounded nonnegative
// piecewise-constant function of time per configured maturity, a declared
// sup cap, and a running-sum budget M >= sum_i sup_t lambda(t,T_i).
class VolatilitySpec {
 public:
  struct Entry {
    double maturity;
    PiecewiseConstant lambda;
  };

  VolatilitySpec() = default;
  VolatilitySpec(std::vector<Entry> entries, double lambda_max,
                 std::optional<double> sum_bound = std::nullopt);

  // lambda(t, T) for a configured maturity; 0 once the rate has fixed (t > T).
  double value(double t, double T) const;
  const PiecewiseConstant& raw(double T) const;
  bool has(double T) const;
  double sup(double T) const;  // sup_t lambda(t,T) over [0, T]
  double sum_sup() const;      // over all configured maturities
  double lambda_max() const { return lambda_max_; }
  double sum_bound() const { return sum_bound_; }
  std::vector<double> maturities() const;

  // Extension: adds lambda(.,T); fails if the sum budget would be exceeded.
  VolatilitySpec with_entry(double maturity, PiecewiseConstant lambda) const;

 private:
  const Entry* find(double T) const;
  std::vector<Entry> entries_;
  double lambda_max_ = 0.0;
  double sum_bound_ = 0.0;
};

}  // namespace levylmm
