#include "levylmm/volatility.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "levylmm/termstructure.hpp"

namespace levylmm {

VolatilitySpec::VolatilitySpec(std::vector<Entry> entries, double lambda_max,
                               std::optional<double> sum_bound)
    : entries_(std::move(entries)), lambda_max_(lambda_max) {
  if (!(lambda_max_ >= 0.0))
    throw std::invalid_argument("volatility: lambda cap must be nonnegative");
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.maturity < b.maturity; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (!(e.maturity > 0.0))
      throw std::invalid_argument("volatility: maturity must be positive");
    if (i > 0 && same_date(e.maturity, entries_[i - 1].maturity))
      throw std::invalid_argument("volatility: duplicate maturity entry");
    for (double v : e.lambda.values()) {
      if (!(v >= 0.0))
        throw std::invalid_argument("volatility: lambda must be nonnegative (maturity " +
                                    std::to_string(e.maturity) + ")");
      if (v > lambda_max_)
        throw std::invalid_argument("volatility: lambda exceeds declared cap (maturity " +
                                    std::to_string(e.maturity) + ")");
    }
  }
  const double total = sum_sup();
  sum_bound_ = sum_bound.value_or(total);
  if (total > sum_bound_ + 1e-12)
    throw std::invalid_argument("volatility: sum of sup lambda exceeds declared bound M");
}

const VolatilitySpec::Entry* VolatilitySpec::find(double T) const {
  for (const Entry& e : entries_)
    if (same_date(e.maturity, T)) return &e;
  return nullptr;
}

bool VolatilitySpec::has(double T) const { return find(T) != nullptr; }

const PiecewiseConstant& VolatilitySpec::raw(double T) const {
  const Entry* e = find(T);
  if (!e) throw std::invalid_argument("volatility: no lambda configured for maturity " +
                                      std::to_string(T));
  return e->lambda;
}

double VolatilitySpec::value(double t, double T) const {
  if (t > T + kDateTolerance) return 0.0;  // rate has fixed
  return raw(T)(t);
}

double VolatilitySpec::sup(double T) const { return raw(T).sup(0.0, T); }

double VolatilitySpec::sum_sup() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.lambda.sup(0.0, e.maturity);
  return total;
}

std::vector<double> VolatilitySpec::maturities() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.maturity);
  return out;
}

VolatilitySpec VolatilitySpec::with_entry(double maturity, PiecewiseConstant lambda) const {
  const double add = lambda.sup(0.0, maturity);
  if (sum_sup() + add > sum_bound_ + 1e-12)
    throw std::runtime_error(
        "volatility: extension would exceed the sum bound M (integrability budget)");
  std::vector<Entry> entries = entries_;
  entries.push_back(Entry{maturity, std::move(lambda)});
  return VolatilitySpec(std::move(entries), lambda_max_, sum_bound_);
}

}  // namespace levylmm
