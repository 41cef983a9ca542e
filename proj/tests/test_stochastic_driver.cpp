#include <doctest.h>

#include <cmath>

#include "levylmm/quadrature.hpp"
#include "levylmm/stochastic_driver.hpp"

using namespace levylmm;

namespace {

VolatilitySpec flat_vols(double lam, std::vector<double> maturities,
                         double cap = 1.0) {
  std::vector<VolatilitySpec::Entry> entries;
  for (double T : maturities)
    entries.push_back(VolatilitySpec::Entry{T, PiecewiseConstant(lam)});
  return VolatilitySpec(std::move(entries), cap);
}

// brute-force check of the closed-form moment generating functions; the
// domain is split at 0 so the kink of the two-sided exponential stays on a
// panel boundary
double mgf_by_quadrature(const JumpDensity& d, double u) {
  const auto [lo, hi] = d.coverage_interval(1e-14);
  double sum = 0.0;
  for (const auto& [a, b] : {std::pair{lo, 0.0}, std::pair{0.0, hi}}) {
    const QuadratureRule rule = gauss_legendre_on(200, a, b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      sum += rule.weights[q] * std::exp(u * rule.nodes[q]) * d.pdf(rule.nodes[q]);
  }
  return sum;
}

}  // namespace

TEST_CASE("piecewise constant functions") {
  const PiecewiseConstant f({0.0, 0.5, 1.0}, {1.0, 2.0, 0.5});
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.49) == 1.0);
  CHECK(f(0.5) == 2.0);
  CHECK(f(3.0) == 0.5);
  CHECK(f.integral(0.0, 2.0) == doctest::Approx(0.5 + 1.0 + 0.5).epsilon(1e-15));
  CHECK(f.integral(0.25, 0.75) == doctest::Approx(0.25 + 0.5).epsilon(1e-15));
  CHECK(f.sup(0.0, 2.0) == 2.0);
  CHECK(f.sup(0.6, 0.7) == 2.0);
  CHECK_THROWS_AS(PiecewiseConstant({0.5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseConstant({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("gauss-legendre rule sanity") {
  const QuadratureRule& rule = gauss_legendre(64);
  double wsum = 0.0, x3 = 0.0, x8 = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    wsum += rule.weights[q];
    x3 += rule.weights[q] * std::pow(rule.nodes[q], 3);
    x8 += rule.weights[q] * std::pow(rule.nodes[q], 8);
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x3 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("jump density families") {
  const JumpDensity g = JumpDensity::gaussian(0.1, 0.2);
  CHECK(g.mgf(1.5) == doctest::Approx(mgf_by_quadrature(g, 1.5)).epsilon(1e-10));
  CHECK(g.mgf_finite(100.0));

  const JumpDensity l = JumpDensity::two_sided_exponential(3.0);
  CHECK(l.mgf(1.5) == doctest::Approx(9.0 / (9.0 - 2.25)).epsilon(1e-14));
  // truncated-domain oracle: the clipped integrand tail caps accuracy ~1e-7
  CHECK(l.mgf(1.5) == doctest::Approx(mgf_by_quadrature(l, 1.5)).epsilon(1e-6));
  CHECK(!l.mgf_finite(3.0));
  CHECK(!l.mgf_finite(-3.5));
  CHECK(std::isinf(l.mgf(3.0)));

  const JumpDensity d = JumpDensity::discrete({{-0.1, 0.25}, {0.2, 0.75}});
  CHECK(d.mgf(2.0) ==
        doctest::Approx(0.25 * std::exp(-0.2) + 0.75 * std::exp(0.4)).epsilon(1e-15));

  CHECK_THROWS_AS(JumpDensity::gaussian(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(JumpDensity::two_sided_exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(JumpDensity::discrete({{0.1, 0.5}}), std::invalid_argument);

  // coverage intervals actually carry the promised mass
  const auto [glo, ghi] = g.coverage_interval(1e-10);
  CHECK(ghi - 0.1 == doctest::Approx(0.2 * 6.46695).epsilon(1e-4));
  CHECK(0.1 - glo == doctest::Approx(0.2 * 6.46695).epsilon(1e-4));
  const auto [llo, lhi] = l.coverage_interval(1e-10);
  CHECK(std::exp(-3.0 * lhi) == doctest::Approx(1e-10).epsilon(1e-6));
}

TEST_CASE("condition checker") {
  LevyCharacteristics chars;
  chars.variance_c = PiecewiseConstant(1.0);
  chars.drift_b = PiecewiseConstant(0.01);

  SUBCASE("zero jumps pass everything") {
    chars.intensity_eta = PiecewiseConstant(0.0);
    const ConditionReport r = check_conditions(chars, flat_vols(0.2, {0.5, 1.0}), 2.0);
    CHECK(r.cond1_pass);
    CHECK(r.cond2_pass);
    CHECK(r.cond3_pass);
    CHECK(r.all_pass());
    CHECK(r.bound_M == doctest::Approx(0.4).epsilon(1e-15));
  }

  SUBCASE("gaussian jumps pass for any finite M") {
    chars.intensity_eta = PiecewiseConstant(1.0);
    chars.density = JumpDensity::gaussian(0.0, 0.1);
    const ConditionReport r =
        check_conditions(chars, flat_vols(0.2, {0.5, 1.0}), 2.0, 1e6);
    CHECK(r.all_pass());
    CHECK(r.capped_M);
  }

  SUBCASE("two-sided exponential fails once M reaches the decay rate") {
    chars.intensity_eta = PiecewiseConstant(1.0);
    chars.density = JumpDensity::two_sided_exponential(3.0);
    const ConditionReport fail5 =
        check_conditions(chars, flat_vols(2.5, {0.5, 1.0}, 5.0), 2.0);
    CHECK(fail5.bound_M == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(!fail5.cond2_pass);
    CHECK(fail5.cond1_pass);
    CHECK(fail5.cond3_pass);

    const ConditionReport pass2 =
        check_conditions(chars, flat_vols(1.0, {0.5, 1.0}, 5.0), 2.0);
    CHECK(pass2.cond2_pass);

    // monotone in M: enlarging the bound can only break cond2
    const ConditionReport boundary =
        check_conditions(chars, flat_vols(1.0, {0.5, 1.0}, 5.0), 2.0, 3.0);
    CHECK(!boundary.cond2_pass);
  }
}

TEST_CASE("driver increment sampling") {
  LevyCharacteristics chars;
  chars.variance_c = PiecewiseConstant(1.0);
  chars.intensity_eta = PiecewiseConstant(0.8);
  chars.density = JumpDensity::gaussian(0.0, 0.1);

  Eigen::VectorXd times(11);
  for (int k = 0; k <= 10; ++k) times[k] = 0.01 * k;

  SUBCASE("determinism and seed sensitivity") {
    const DriverIncrements a = sample_increments(chars, times, 64, 42);
    const DriverIncrements b = sample_increments(chars, times, 64, 42);
    const DriverIncrements c = sample_increments(chars, times, 64, 43);
    CHECK((a.brownian - b.brownian).abs().maxCoeff() == 0.0);
    CHECK((a.jump_sum - b.jump_sum).abs().maxCoeff() == 0.0);
    CHECK((a.brownian - c.brownian).abs().maxCoeff() > 0.0);
  }

  SUBCASE("zero intensity produces no jumps") {
    chars.intensity_eta = PiecewiseConstant(0.0);
    const DriverIncrements d = sample_increments(chars, times, 32, 1);
    CHECK(d.jump_sum.abs().maxCoeff() == 0.0);
    for (const auto& path : d.jumps) CHECK(path.empty());
  }

  SUBCASE("moments at Monte Carlo scale") {
    const int paths = 100000;
    const DriverIncrements d = sample_increments(chars, times, paths, 7);
    const Eigen::ArrayXd first = d.brownian.col(0);
    const double mean = first.mean();
    const double var = (first - mean).square().sum() / (paths - 1);
    // variance of one step is int c = 0.01; both moments within 3 SE
    const double se_mean = std::sqrt(0.01 / paths);
    const double se_var = 0.01 * std::sqrt(2.0 / (paths - 1));
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    CHECK(std::abs(var - 0.01) <= 3.0 * se_var);

    double total_jumps = 0.0;
    for (const auto& path : d.jumps) total_jumps += static_cast<double>(path.size());
    const double mean_jumps = total_jumps / paths;
    const double expected = 0.8 * 0.1;  // int eta over [0, 0.1]
    const double se_jumps = std::sqrt(expected / paths);
    CHECK(std::abs(mean_jumps - expected) <= 3.0 * se_jumps);

    // jump times live inside the grid and are sorted per path
    for (int p = 0; p < 100; ++p) {
      double prev = 0.0;
      for (const JumpEvent& ev : d.jumps[static_cast<std::size_t>(p)]) {
        CHECK(ev.time >= prev);
        CHECK(ev.time <= 0.1);
        prev = ev.time;
      }
    }
  }

  SUBCASE("input validation") {
    Eigen::VectorXd bad(2);
    bad << 0.1, 0.2;
    CHECK_THROWS_AS(sample_increments(chars, bad, 8, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_increments(chars, times, 0, 1), std::invalid_argument);
  }
}
