#include "levylmm/termstructure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace levylmm {

bool same_date(double a, double b) { return std::abs(a - b) <= kDateTolerance; }

TenorGrid TenorGrid::equidistant(double first_maturity, double delta, int count) {
  if (first_maturity <= 0.0) throw std::invalid_argument("grid: first maturity must be positive");
  if (delta <= 0.0) throw std::invalid_argument("grid: spacing must be positive");
  if (count < 2) throw std::invalid_argument("grid: need at least two maturities");
  TenorGrid g;
  g.delta = delta;
  g.maturities.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g.maturities[static_cast<std::size_t>(i)] = first_maturity + i * delta;
  g.validate();
  return g;
}

TenorGrid TenorGrid::from_maturities(std::vector<double> maturities) {
  if (maturities.size() < 2) throw std::invalid_argument("grid: need at least two maturities");
  TenorGrid g;
  g.maturities = std::move(maturities);
  g.delta = g.maturities[1] - g.maturities[0];
  g.validate();
  return g;
}

double TenorGrid::maturity(int i) const {
  if (i < 1 || i > count()) throw std::out_of_range("grid: index outside tenor structure");
  return maturities[static_cast<std::size_t>(i - 1)];
}

bool TenorGrid::contains(double T) const {
  return std::any_of(maturities.begin(), maturities.end(),
                     [T](double m) { return same_date(m, T); });
}

int TenorGrid::index_of(double T) const {
  for (int i = 1; i <= count(); ++i)
    if (same_date(maturity(i), T)) return i;
  throw std::invalid_argument("grid: date is not a tenor maturity");
}

TenorGrid TenorGrid::extended() const {
  TenorGrid g = *this;
  g.maturities.push_back(terminal() + delta);
  g.validate();
  return g;
}

void TenorGrid::validate() const {
  if (maturities.size() < 2) throw std::invalid_argument("grid: need at least two maturities");
  if (!(maturities.front() > 0.0)) throw std::invalid_argument("grid: T_1 must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  for (std::size_t i = 1; i < maturities.size(); ++i) {
    if (!(maturities[i] > maturities[i - 1]))
      throw std::invalid_argument("grid: maturities must be strictly increasing");
    if (std::abs(maturities[i] - maturities[i - 1] - delta) > kDateTolerance)
      throw std::invalid_argument("grid: maturities must be equidistant with spacing delta");
  }
}

int locate_index(const TenorGrid& grid, double t) {
  if (t < 0.0) throw std::invalid_argument("locate_index: negative time");
  if (t > grid.terminal() + kDateTolerance)
    throw std::out_of_range("locate_index: time beyond terminal maturity; extend the grid first");
  for (int i = 1; i <= grid.count(); ++i)
    if (t <= grid.maturity(i) + kDateTolerance) return i;
  return grid.count();
}

DiscountCurve DiscountCurve::from_pillars(std::vector<std::pair<double, double>> pillars) {
  if (pillars.empty()) throw std::invalid_argument("curve: no pillars");
  std::sort(pillars.begin(), pillars.end());
  // A maturity-0 pillar is implicit and pinned to 1.
  if (same_date(pillars.front().first, 0.0)) {
    if (std::abs(pillars.front().second - 1.0) > 1e-14)
      throw std::invalid_argument("curve: price at maturity 0 must be 1");
    pillars.erase(pillars.begin());
    if (pillars.empty()) throw std::invalid_argument("curve: no pillars beyond maturity 0");
  }
  double prev_t = 0.0, prev_p = 1.0;
  for (std::size_t i = 0; i < pillars.size(); ++i) {
    const auto& [t, p] = pillars[i];
    if (!(t > prev_t))
      throw std::invalid_argument("curve: pillar " + std::to_string(i) +
                                  " maturity not strictly increasing");
    if (!(p > 0.0) || !(p <= 1.0))
      throw std::invalid_argument("curve: pillar " + std::to_string(i) +
                                  " price must lie in (0,1]");
    if (!(p < prev_p))
      throw std::invalid_argument("curve: pillar " + std::to_string(i) +
                                  " breaks strict decrease");
    prev_t = t;
    prev_p = p;
  }
  DiscountCurve c;
  c.pillars_ = std::move(pillars);
  return c;
}

DiscountCurve DiscountCurve::from_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("curve: cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("curve: empty file " + file.string());
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char ch) { return std::isspace(ch); }),
            s.end());
    return s;
  };
  if (strip(line) != "maturity,discount")
    throw std::runtime_error("curve: expected header `maturity,discount` in " + file.string());
  std::vector<std::pair<double, double>> pillars;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (strip(line).empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw std::runtime_error("curve: malformed row " + std::to_string(row));
    try {
      pillars.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw std::runtime_error("curve: non-numeric row " + std::to_string(row));
    }
  }
  return from_pillars(std::move(pillars));
}

double DiscountCurve::operator()(double T) const {
  if (T < 0.0) throw std::invalid_argument("curve: negative maturity");
  if (same_date(T, 0.0)) return 1.0;
  if (T > last_maturity() + kDateTolerance)
    throw std::out_of_range("curve: maturity beyond last pillar (no extrapolation)");
  double t0 = 0.0, p0 = 1.0;
  for (const auto& [t, p] : pillars_) {
    if (same_date(T, t)) return p;
    if (T < t) {
      const double w = (T - t0) / (t - t0);
      return std::exp((1.0 - w) * std::log(p0) + w * std::log(p));
    }
    t0 = t;
    p0 = p;
  }
  return pillars_.back().second;
}

double initial_forward_libor(const DiscountCurve& curve, double settlement, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("initial_forward_libor: delta must be positive");
  if (settlement - delta < -kDateTolerance)
    throw std::invalid_argument("initial_forward_libor: fixing date before 0");
  const double fix = std::max(settlement - delta, 0.0);
  return (curve(fix) / curve(settlement) - 1.0) / delta;
}

}  // namespace levylmm
