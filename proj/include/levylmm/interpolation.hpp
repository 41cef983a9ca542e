#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "levylmm/lmm_dynamics.hpp"
#include "levylmm/rate_paths.hpp"
#include "levylmm/simulator.hpp"

namespace levylmm {

// Pathwise rolled-over bond numeraire B*(t), defined at tenor dates by
// reinvesting at the realized fixings and at interpolated dates by the
// log-linear gamma blend; B*(0) = 1.
struct SpotNumerairePath {
  Eigen::VectorXd dates;    // ascending, dates[0] = 0
  Eigen::ArrayXXd values;   // paths x dates

  int date_index(double T) const;
  Eigen::ArrayXd at(double T) const { return values.col(date_index(T)); }
};

// B* at 0 and every tenor date whose roll-over fixings the paths contain.
SpotNumerairePath spot_numeraire_path(const RatePathSet& paths, const TenorGrid& grid,
                                      const DiscountCurve& curve);

struct GammaSolve {
  double gamma = 0.0;
  double residual = 0.0;  // |sample mean of 1/B*(T) - B(0,T)| at the solution
};

// Solves mean( B*_left^{-(1-g)} B*_right^{-g} ) = target for g in [0,1] by
// bisection on the pathwise-paired samples; the mean is strictly decreasing
// in g. Fails loudly if the target is outside the attainable range.
GammaSolve solve_gamma(const Eigen::ArrayXd& log_bstar_left,
                       const Eigen::ArrayXd& log_bstar_right, double target,
                       double tol);

struct GammaInterpolation {
  double left = 0.0, right = 0.0;                 // interval endpoints
  std::vector<std::pair<double, double>> points;  // (T, gamma(T)), ascending
  double gamma(double T) const;
};

struct GammaResult {
  double maturity = 0.0;
  double gamma = 0.0;
  double residual = 0.0;
  double target = 0.0;  // B(0,T)
};

// The backward construction: simulates the grid rates under the spot-LIBOR
// measure on a fixed seeded sample set, solves gamma for every requested
// date (one sample set per construction pass) and augments B* with the
// interpolated dates.
struct GammaConstruction {
  SpotNumerairePath numeraire;
  std::vector<GammaResult> results;
  std::vector<GammaInterpolation> intervals;
};

GammaConstruction interpolate_numeraire(const ModelSpec& model, const SimConfig& config,
                                        std::vector<double> dates, double tol = 1e-10);

// Volatility loading and jump factor of the forward process F(., U, S) as the
// composition over the delta-spaced chain of rates from U to S: alpha adds,
// beta multiplies.
struct ForwardProcessCoefficients {
  double alpha = 0.0;
  std::vector<std::pair<double, double>> loadings;  // (ell_V, lambda_V) per interval
  double beta(double x) const;
};

ForwardProcessCoefficients forward_process_coefficients(
    const ModelSpec& model, double U, double S, double t,
    std::span<const double> grid_state,
    std::span<const std::pair<double, double>> interpolated_rates = {});

// Pathwise reconstructed B(t,T) = F(t,T,t): telescoped from the modeled rates
// on the delta-lattice through t; curve value at t = 0.
Eigen::ArrayXd bond_price(const RatePathSet& paths, const ModelSpec& model,
                          double T, double t);

}  // namespace levylmm
