#include "levylmm/rate_paths.hpp"

#include <stdexcept>
#include <string>

namespace levylmm {

int RatePathSet::node_index(double t) const {
  for (int k = 0; k < nodes(); ++k)
    if (same_date(times[k], t)) return k;
  throw std::invalid_argument("paths: time " + std::to_string(t) +
                              " is not a simulation node");
}

int RatePathSet::maturity_index(double T) const {
  for (std::size_t i = 0; i < maturities.size(); ++i)
    if (same_date(maturities[i], T)) return static_cast<int>(i);
  return -1;
}

const Eigen::ArrayXXd& RatePathSet::rate(double T) const {
  const int i = maturity_index(T);
  if (i < 0)
    throw std::invalid_argument("paths: no modeled rate fixing at " + std::to_string(T));
  return values[static_cast<std::size_t>(i)];
}

Eigen::ArrayXd RatePathSet::rate_at(double T, double t) const {
  return rate(T).col(node_index(t));
}

}  // namespace levylmm
