#include "levylmm/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylmm {

PiecewiseConstant::PiecewiseConstant() : times_{0.0}, values_{0.0} {}

PiecewiseConstant::PiecewiseConstant(double constant)
    : times_{0.0}, values_{constant} {}

PiecewiseConstant::PiecewiseConstant(std::vector<double> times,
                                     std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size())
    throw std::invalid_argument(
        "piecewise: breakpoints and values must be non-empty and match");
  if (times_.front() != 0.0)
    throw std::invalid_argument("piecewise: first breakpoint must be 0");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument(
          "piecewise: breakpoints must be strictly increasing");
}

double PiecewiseConstant::operator()(double t) const {
  if (t < 0.0) throw std::invalid_argument("piecewise: negative time");
  // last breakpoint <= t
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double PiecewiseConstant::integral(double a, double b) const {
  if (a < 0.0 || b < a) throw std::invalid_argument("piecewise: bad interval");
  double total = 0.0;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    const double lo = std::max(a, times_[k]);
    const double hi =
        (k + 1 < times_.size()) ? std::min(b, times_[k + 1]) : b;
    if (hi > lo) total += values_[k] * (hi - lo);
  }
  return total;
}

double PiecewiseConstant::sup(double a, double b) const {
  if (a < 0.0 || b < a) throw std::invalid_argument("piecewise: bad interval");
  double m = (*this)(a);
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] > a && times_[k] <= b) m = std::max(m, values_[k]);
  }
  return m;
}

bool PiecewiseConstant::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool PiecewiseConstant::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v >= 0.0; });
}

bool PiecewiseConstant::is_zero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

}  // namespace levylmm
