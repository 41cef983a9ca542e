#pragma once

#include <span>
#include <utility>
#include <vector>

#include "levylmm/measure_engine.hpp"
#include "levylmm/stochastic_driver.hpp"
#include "levylmm/termstructure.hpp"
#include "levylmm/volatility.hpp"

namespace levylmm {

// Assembled coefficients of one rate's SDE under one measure:
//   dL/L_- = (drift + compensator_correction) dt
//            + diffusion_loading dW + int (e^{lambda x} - 1)(mu - nu_ref).
// compensator_correction is int (e^{lambda x}-1)(1 - tilt(x)) nu_ref(dx),
// where tilt carries the product of beta factors between nu_ref and the
// rate's own forward compensator.
struct SdeCoefficients {
  double drift = 0.0;
  double lambda = 0.0;             // jump transform is x -> e^{lambda x} - 1
  double diffusion_loading = 0.0;  // lambda c^{1/2}
  double compensator_correction = 0.0;
  MeasureLabel reference = MeasureLabel::spot();

  bool all_zero() const {
    return drift == 0.0 && lambda == 0.0 && diffusion_loading == 0.0 &&
           compensator_correction == 0.0;
  }
};

// Full model description: grid, initial curve, loadings, driving process and
// the measure the simulation runs under.
struct ModelSpec {
  TenorGrid grid;
  DiscountCurve curve;
  VolatilitySpec vols;
  LevyCharacteristics chars;
  MeasureLabel measure = MeasureLabel::spot();
  // Optional per-fixing-date initial rates; curve-implied otherwise.
  std::vector<std::pair<double, double>> initial_rate_overrides;

  int rate_count() const { return grid.count() - 1; }
  double fixing(int s) const { return grid.maturity(s); }  // 1-based, s <= n
  double initial_rate(double fixing_date) const;
  // lambda(.,T) for any maturity: configured entry, or linear blend in T of
  // the bracketing grid loadings (flat beyond the last configured one).
  PiecewiseConstant volatility_for(double T) const;
  void validate() const;
};

// Number of quadrature nodes used for compensator-correction integrals of
// continuous jump-size families (discrete families are summed exactly).
inline constexpr int kCorrectionQuadratureOrder = 64;
// Jump mass allowed outside the truncated quadrature domain.
inline constexpr double kCorrectionTailMass = 1e-10;

// Rate s under its own forward measure P_{T_{s+1}}: driftless.
SdeCoefficients forward_sde_coefficients(const ModelSpec& model, int s, double t,
                                         std::span<const double> state);

// Rate s under the spot-LIBOR measure: drift sum_{j=i(t)}^{s} ell_j lambda_j
// lambda_s c and compensator tilt prod_{j=i(t)}^{s} 1/beta_j against nu^{i(t)}.
SdeCoefficients spot_sde_coefficients(const ModelSpec& model, int s, double t,
                                      std::span<const double> state);

// Rate s under the forward measure of grid date T_m (general measure-relative
// assembly; m = s+1 reduces to the driftless case, m = i(t) to the spot one).
SdeCoefficients numeraire_relative_coefficients(const ModelSpec& model, int s,
                                                int m, double t,
                                                std::span<const double> state);

// Off-grid maturity T under the spot-LIBOR measure: the continuous-tenor
// dynamics with the grid beta product against nu^{i(t)} and the fractional
// factor 1/beta(t,x,T_{i(T)},T+delta) against nu^{i(T)}.
SdeCoefficients interpolated_sde_coefficients(const ModelSpec& model, double T,
                                              double t,
                                              std::span<const double> state,
                                              double own_rate);

// Appends T_{n+2} = T_{n+1} + delta with loading lambda_new and initial rate
// L(0, T_{n+1}) = initial_rate_new; existing rates' dynamics are unchanged.
ModelSpec extend_tenor(const ModelSpec& model, PiecewiseConstant lambda_new,
                       double initial_rate_new);

}  // namespace levylmm
