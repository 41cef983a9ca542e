#pragma once

#include <vector>

namespace levylmm {

// Right-open piecewise-constant function of time on [0, inf).
// value(t) = values[k] for t in [times[k], times[k+1]); the last value
// extends to infinity. Breakpoints start at 0 and are strictly increasing.
class PiecewiseConstant {
 public:
  PiecewiseConstant();
  explicit PiecewiseConstant(double constant);
  PiecewiseConstant(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  double integral(double a, double b) const;
  double sup(double a, double b) const;  // over [a, b]
  bool all_finite() const;
  bool nonnegative() const;
  bool is_zero() const;

  const std::vector<double>& breakpoints() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace levylmm
