#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>

#include "levylmm/termstructure.hpp"

namespace levylmm {

struct RatePathSet;  // rate_paths.hpp
struct ModelSpec;    // lmm_dynamics.hpp

// delta L / (1 + delta L): the Girsanov loading tying one rate to the next
// shorter-maturity measure.
struct AccrualWeight {
  double value = 0.0;
};

AccrualWeight accrual_weight(double delta, double rate);

// beta(t,x,T,T+delta) = ell (e^{lambda x} - 1) + 1, the jump-size-dependent
// density ratio between adjacent forward measures.
double jump_beta(AccrualWeight ell, double lambda, double x);

// Integrand of the Girsanov shift between forward measures:
// sum_j ell_j lambda_j c^{1/2}; terms are (lambda_j, ell_j) pairs.
double brownian_drift_adjustment(std::span<const std::pair<double, double>> terms,
                                 double c);

// prod_j 1/beta_j: multiplies a source-measure compensator density into the
// target-measure one.
double compensator_factor(std::span<const double> betas);

struct MeasureLabel {
  enum class Kind { forward, spot_libor };
  Kind kind = Kind::spot_libor;
  double maturity = 0.0;  // forward only

  static MeasureLabel forward(double T) { return {Kind::forward, T}; }
  static MeasureLabel spot() { return {Kind::spot_libor, 0.0}; }
  bool is_forward() const { return kind == Kind::forward; }
  bool operator==(const MeasureLabel& o) const {
    return kind == o.kind && (!is_forward() || same_date(maturity, o.maturity));
  }
  std::string name() const;
};

struct MeasurePair {
  MeasureLabel source;
  MeasureLabel target;
};

// Pathwise Radon-Nikodym derivative process (dP_target / dP_source)_t on the
// simulation nodes, in telescoping forward-bond-ratio form; exactly 1 at t=0.
struct DensityPath {
  Eigen::VectorXd times;
  Eigen::ArrayXXd values;  // paths x nodes
};

DensityPath density_path(const RatePathSet& paths, const TenorGrid& grid,
                         const MeasurePair& pair);

// Cross-check representation of (dP_{T_s} / dP_{T_{s+1}})_t as a discretized
// stochastic exponential driven by the alpha/beta loadings. Agrees with the
// bond-ratio form up to the scheme's step error; paths must have been
// simulated under Forward(T_{s+1}).
DensityPath density_path_stochastic_exponential(const ModelSpec& model,
                                                const RatePathSet& paths,
                                                int s);

}  // namespace levylmm
