#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "levylmm/termstructure.hpp"

using namespace levylmm;

namespace {

DiscountCurve sample_curve() {
  return DiscountCurve::from_pillars({{0.5, 0.98}, {1.0, 0.955}, {1.5, 0.93}});
}

}  // namespace

TEST_CASE("equidistant grid construction") {
  const TenorGrid g = TenorGrid::equidistant(0.5, 0.5, 4);
  CHECK(g.count() == 4);
  CHECK(g.maturity(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.maturity(4) == doctest::Approx(2.0).epsilon(1e-15));

  const TenorGrid two = TenorGrid::equidistant(0.5, 0.5, 2);
  CHECK(two.maturities == std::vector<double>{0.5, 1.0});

  const TenorGrid q = TenorGrid::equidistant(1.0, 0.25, 3);
  CHECK(q.maturities == std::vector<double>{1.0, 1.25, 1.5});

  CHECK_THROWS_AS(TenorGrid::equidistant(-0.5, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(TenorGrid::equidistant(0.5, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(TenorGrid::equidistant(0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(TenorGrid::from_maturities({0.5, 1.0, 1.7}), std::invalid_argument);
}

TEST_CASE("index function i(t)") {
  const TenorGrid g = TenorGrid::equidistant(0.5, 0.5, 4);
  CHECK(locate_index(g, 0.2) == 1);
  CHECK(locate_index(g, 0.5) == 1);  // inclusive at grid dates
  CHECK(locate_index(g, 0.51) == 2);
  CHECK(locate_index(g, 0.0) == 1);
  CHECK(locate_index(g, 2.0) == 4);
  CHECK_THROWS_AS(locate_index(g, 2.5), std::out_of_range);

  // monotone nondecreasing in t
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng), b = u(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(locate_index(g, lo) <= locate_index(g, hi));
  }
}

TEST_CASE("discount curve evaluation") {
  const DiscountCurve c = sample_curve();
  CHECK(c(0.5) == doctest::Approx(0.98).epsilon(1e-15));
  CHECK(c(0.0) == 1.0);
  // log-linear midpoint equals the geometric mean of the pillars
  const double oracle = std::sqrt(0.98 * 0.955);
  CHECK(c(0.75) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(c(0.75) == doctest::Approx(0.967419).epsilon(1e-6));
  CHECK_THROWS_AS(c(2.0), std::out_of_range);

  // strictly decreasing wherever probed
  double prev = c(0.0);
  for (double T = 0.01; T <= 1.5; T += 0.01) {
    const double cur = c(T);
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS(DiscountCurve::from_pillars({{0.5, 0.955}, {1.0, 0.98}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscountCurve::from_pillars({{0.5, 1.2}}), std::invalid_argument);
  CHECK_THROWS_AS(DiscountCurve::from_pillars({{0.5, 0.98}, {0.5, 0.97}}),
                  std::invalid_argument);
}

TEST_CASE("initial forward libor") {
  const DiscountCurve c = sample_curve();
  CHECK(initial_forward_libor(c, 1.0, 0.5) ==
        doctest::Approx(0.05235602094240832).epsilon(1e-12));
  CHECK(initial_forward_libor(c, 1.0, 0.5) == doctest::Approx(0.05235602).epsilon(1e-6));
  CHECK(initial_forward_libor(c, 1.5, 0.5) ==
        doctest::Approx(0.05376344086021501).epsilon(1e-12));

  // equal discounts across the period give a zero rate
  CHECK((0.97 / 0.97 - 1.0) / 0.5 == 0.0);

  // telescoping identity B(0,T-d)/B(0,T) = 1 + d L(0,T-d)
  for (double T : {0.6, 0.75, 1.0, 1.2, 1.5}) {
    const double L = initial_forward_libor(c, T, 0.5);
    CHECK(c(T - 0.5) / c(T) == doctest::Approx(1.0 + 0.5 * L).epsilon(1e-14));
  }

  CHECK_THROWS_AS(initial_forward_libor(c, 2.0, 0.5), std::out_of_range);
  CHECK_THROWS_AS(initial_forward_libor(c, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("curve csv ingestion") {
  const std::filesystem::path file =
      std::filesystem::temp_directory_path() / "levylmm_curve_test.csv";
  {
    std::ofstream out(file);
    out << "maturity,discount\n0.5,0.98\n1.0,0.955\n1.5,0.93\n";
  }
  const DiscountCurve c = DiscountCurve::from_csv(file);
  CHECK(c(1.0) == doctest::Approx(0.955).epsilon(1e-15));
  CHECK(c.pillars().size() == 3);

  {
    std::ofstream out(file);
    out << "tenor,df\n0.5,0.98\n";
  }
  CHECK_THROWS(DiscountCurve::from_csv(file));
  {
    std::ofstream out(file);
    out << "maturity,discount\n0.5,abc\n";
  }
  CHECK_THROWS(DiscountCurve::from_csv(file));
  std::filesystem::remove(file);
}
