#pragma once

// Shared model fixtures for the test suites.

#include "levylmm/lmm_dynamics.hpp"

namespace levylmm::testing {

inline VolatilitySpec flat_grid_vols(const TenorGrid& grid, double lam,
                                     double cap = 1.0) {
  std::vector<VolatilitySpec::Entry> entries;
  for (int s = 1; s <= grid.count() - 1; ++s)
    entries.push_back(VolatilitySpec::Entry{grid.maturity(s), PiecewiseConstant(lam)});
  return VolatilitySpec(std::move(entries), cap);
}

// 4-tenor jump-diffusion reference: lambda = 0.2, c = 1, eta = 1,
// Gaussian(0, 0.1) jump sizes, spot-LIBOR measure.
inline ModelSpec reference_model() {
  ModelSpec m;
  m.grid = TenorGrid::equidistant(0.5, 0.5, 4);
  m.curve = DiscountCurve::from_pillars(
      {{0.5, 0.98}, {1.0, 0.955}, {1.5, 0.93}, {2.0, 0.90}});
  m.vols = flat_grid_vols(m.grid, 0.2);
  m.chars.variance_c = PiecewiseConstant(1.0);
  m.chars.intensity_eta = PiecewiseConstant(1.0);
  m.chars.density = JumpDensity::gaussian(0.0, 0.1);
  m.measure = MeasureLabel::spot();
  return m;
}

inline ModelSpec zero_vol_model() {
  ModelSpec m = reference_model();
  m.vols = flat_grid_vols(m.grid, 0.0);
  m.chars.variance_c = PiecewiseConstant(0.0);
  m.chars.intensity_eta = PiecewiseConstant(0.0);
  return m;
}

inline ModelSpec diffusion_only_model() {
  ModelSpec m = reference_model();
  m.chars.intensity_eta = PiecewiseConstant(0.0);
  return m;
}

inline std::vector<double> all_fixings(const ModelSpec& m) {
  std::vector<double> out;
  for (int s = 1; s <= m.rate_count(); ++s) out.push_back(m.fixing(s));
  return out;
}

}  // namespace levylmm::testing
