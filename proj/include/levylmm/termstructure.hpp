#pragma once

#include <filesystem>
#include <utility>
#include <vector>

namespace levylmm {

// Tolerance for treating two year-fractions as the same date.
inline constexpr double kDateTolerance = 1e-12;

bool same_date(double a, double b);

// Equidistant maturity grid T_1 < ... < T_{n+1} with spacing delta.
struct TenorGrid {
  std::vector<double> maturities;
  double delta = 0.0;

  static TenorGrid equidistant(double first_maturity, double delta, int count);
  static TenorGrid from_maturities(std::vector<double> maturities);

  int count() const { return static_cast<int>(maturities.size()); }
  double maturity(int i) const;  // 1-based, T_i
  double terminal() const { return maturities.back(); }
  bool contains(double T) const;
  int index_of(double T) const;  // 1-based, exact date; throws if absent
  TenorGrid extended() const;    // appends T_{n+2} = T_{n+1} + delta

  void validate() const;
};

// i(t) = min{ i : t <= T_i }, 1-based, inclusive at grid dates.
int locate_index(const TenorGrid& grid, double t);

// Initial discount curve B(0,T): positive, strictly decreasing pillars,
// log-linear between them, pinned to 1 at T = 0.
class DiscountCurve {
 public:
  static DiscountCurve from_pillars(std::vector<std::pair<double, double>> pillars);
  // CSV with header `maturity,discount`, ascending maturities.
  static DiscountCurve from_csv(const std::filesystem::path& file);

  double operator()(double T) const;
  double last_maturity() const { return pillars_.back().first; }
  bool covers(double T) const { return T >= 0.0 && T <= last_maturity() + kDateTolerance; }
  const std::vector<std::pair<double, double>>& pillars() const { return pillars_; }
  const char* interpolation() const { return "log-linear"; }

 private:
  std::vector<std::pair<double, double>> pillars_;
};

// L(0, T - delta) = (B(0,T-delta)/B(0,T) - 1) / delta; T is the settlement date.
double initial_forward_libor(const DiscountCurve& curve, double settlement,
                             double delta);

}  // namespace levylmm
