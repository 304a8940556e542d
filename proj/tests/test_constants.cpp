#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "reserve/constants.hpp"

using namespace reserve;

// Reference values computed with a 30-digit independent implementation
// (golden-section inner maximum, bisection on the fixed point).
namespace {
constexpr double kRStar = 0.32076784895946766;
constexpr double kZStar = 0.42088626485195223;
constexpr double kLsRatio = 0.31606027941427884;
constexpr double kHZero = 0.43233235838169365;  // h(z, 0) for every z
}  // namespace

TEST_CASE("h matches the reference surface") {
  CHECK(h(0.42, 0.321) == doctest::Approx(0.32056917233471918).epsilon(1e-12));
  // at r = 0 the z terms cancel and h is constant
  CHECK(h(0.3, 0.0) == doctest::Approx(kHZero).epsilon(1e-12));
  CHECK(h(0.7, 0.0) == doctest::Approx(kHZero).epsilon(1e-12));
  CHECK(h(0.05, 0.0) == doctest::Approx(kHZero).epsilon(1e-12));
}

TEST_CASE("h rejects out-of-domain arguments") {
  CHECK_THROWS_AS(h(0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(h(1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(h(0.4, 0.5), std::domain_error);
  CHECK_THROWS_AS(h(0.4, -0.01), std::domain_error);
  CHECK_THROWS_AS(h(0.7, 0.3), std::domain_error);  // z + r >= 1
}

TEST_CASE("fixed point constants") {
  RlsConstants c = solve_rls_constants(1e-9);
  CHECK(c.r_star == doctest::Approx(kRStar).epsilon(1e-7));
  CHECK(c.z_star == doctest::Approx(kZStar).epsilon(1e-5));
  CHECK(c.h_at_opt >= c.r_star - 1e-7);
  // the headline bands
  CHECK(std::fabs(c.r_star - 0.321) <= 0.003);
  CHECK(std::fabs(c.z_star - 0.42) <= 0.01);

  // feasibility flips between r = 0.30 (max h > r) and r = 0.40 (max h < r),
  // so the fixed point lies between them
  CHECK(c.r_star > 0.30);
  CHECK(c.r_star < 0.40);

  RlsConstants coarse = solve_rls_constants(1e-4);
  CHECK(coarse.r_star == doctest::Approx(c.r_star).epsilon(1e-3));
  CHECK_THROWS_AS(solve_rls_constants(1e-11), std::invalid_argument);
  CHECK_THROWS_AS(solve_rls_constants(1e-2), std::invalid_argument);
}

TEST_CASE("basic reservation ratio") {
  CHECK(ls_ratio() == doctest::Approx(kLsRatio).epsilon(1e-15));
  CHECK(std::fabs(ls_ratio() - 0.31606) <= 1e-5);
}

TEST_CASE("threshold-variant ratios match the reference") {
  MlsRatios r = mls_ratios(2, 0.8, 0.2, 1.0, 1.0);
  CHECK(r.ratio_L == doctest::Approx(0.53361366850886166).epsilon(1e-10));
  CHECK(r.ratio_S == doctest::Approx(0.19102991538517709).epsilon(1e-10));
  CHECK(r.ratio_all == doctest::Approx(kHZero).epsilon(1e-10));

  MlsRatios balanced = mls_ratios(2, 0.5, 0.5, 1.0, 1.0);
  CHECK(balanced.ratio_L == doctest::Approx(0.40634814649349853).epsilon(1e-10));
  CHECK(balanced.ratio_S == doctest::Approx(balanced.ratio_L).epsilon(1e-12));

  MlsRatios off = mls_ratios(3, 0.4, 0.3, 0.9, 1.2);
  CHECK(off.ratio_L == doctest::Approx(0.31799357919922557).epsilon(1e-10));
  CHECK(off.ratio_S == doctest::Approx(0.24416576838926681).epsilon(1e-10));
  CHECK(off.ratio_all == doctest::Approx(0.43776616454017007).epsilon(1e-10));

  CHECK_THROWS_AS(mls_ratios(1, 0.5, 0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mls_ratios(2, 0.5, 0.5, 1.2, 1.0), std::invalid_argument);
}

TEST_CASE("set ratio grows with its own load") {
  double prev = -1;
  for (double load = 0.05; load <= 1.0 + 1e-12; load += 0.05) {
    MlsRatios r = mls_ratios(2, load, 0.0, 1.0, 1.0);
    CHECK(r.ratio_L > prev);
    prev = r.ratio_L;
  }
}

TEST_CASE("full-load ratio grows with the threshold parameter") {
  double prev = -1;
  for (int d = 2; d <= 20; ++d) {
    MlsRatios r = mls_ratios(d, 0.5, 0.5, 1.0, 1.0);
    CHECK(r.ratio_all > prev);
    prev = r.ratio_all;
  }
}

TEST_CASE("closed-form full-load lower bound") {
  CHECK(corollary1_bound(2) == doctest::Approx(0.22932943352677462).epsilon(1e-12));
  CHECK(corollary1_bound(5) == doctest::Approx(0.62453263023214929).epsilon(1e-12));
  // Stirling regime: approaches 1 - 1/sqrt(2 pi d)
  double d4 = corollary1_bound(10000);
  CHECK(d4 == doctest::Approx(0.99591061044103717).epsilon(1e-10));
  CHECK(std::fabs(d4 - (1.0 - 1.0 / std::sqrt(2 * 3.14159265358979323846 * 1e4))) < 2e-4);
  // the bound never exceeds the exact full-load ratio
  for (int d = 2; d <= 20; ++d)
    CHECK(corollary1_bound(d) < mls_ratios(d, 0.5, 0.5, 1.0, 1.0).ratio_all);
  CHECK_THROWS_AS(corollary1_bound(1), std::invalid_argument);
}

TEST_CASE("compound Poisson tail bound") {
  CHECK(compound_poisson_tail_bound(0.5, 0.5, 2) == doctest::Approx(kLsRatio).epsilon(1e-12));
  CHECK(compound_poisson_tail_bound(0.3, 0.2, 2) ==
        doctest::Approx(0.25016857696722224).epsilon(1e-12));
  CHECK(compound_poisson_tail_bound(1.0, 0.25, 4) ==
        doctest::Approx(0.66300071527851264).epsilon(1e-12));
  // degenerate beta = 0 is allowed and keeps the cap at 1
  CHECK(compound_poisson_tail_bound(0.5, 0.0, 2) <= 1.0);
  CHECK(compound_poisson_tail_bound(0.0, 0.2, 3) == 0.0);
  CHECK_THROWS_AS(compound_poisson_tail_bound(0.5, 0.6, 2), std::domain_error);
  CHECK_THROWS_AS(compound_poisson_tail_bound(0.5, 0.3, 4), std::domain_error);
  CHECK_THROWS_AS(compound_poisson_tail_bound(-0.1, 0.3, 2), std::domain_error);
  CHECK_THROWS_AS(compound_poisson_tail_bound(1.5, 0.3, 2), std::domain_error);
  CHECK_THROWS_AS(compound_poisson_tail_bound(0.5, 0.4, 1), std::invalid_argument);
}
