#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "reserve/instance.hpp"
#include "reserve/lp.hpp"

using namespace reserve;

namespace {

Instance one_by_one(double cap, double u, double lambda) {
  Instance inst;
  inst.horizon = 1.0;
  inst.resources = {{0, cap}};
  CustomerType t;
  t.id = 0;
  t.utilization = {u};
  t.rate.segments = {{0.0, 1.0, lambda}};
  t.lambda_total = lambda;
  inst.types = {std::move(t)};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("single cell routing") {
  SUBCASE("demand binds") {
    FractionalRouting r = solve_routing_lp(one_by_one(1.0, 0.5, 1.0));
    CHECK(r.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.objective == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("capacity binds") {
    FractionalRouting r = solve_routing_lp(one_by_one(1.0, 0.5, 4.0));
    CHECK(r.at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero utilization stays unrouted") {
    FractionalRouting r = solve_routing_lp(one_by_one(1.0, 0.0, 4.0));
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.objective == 0.0);
  }
}

TEST_CASE("adversarial family optima") {
  // the single full-capacity type dominates: objective 2 epsilon
  Instance prop1 = make_prop1_instance(0.05, 1000);
  FractionalRouting r1 = solve_routing_lp(prop1);
  CHECK(r1.objective == doctest::Approx(0.1).epsilon(1e-10));
  check_routing(prop1, r1);

  // markdown construction: unique optimum routes everything to resource 0
  double eps = 0.01;
  Instance tight = make_ls_tightness_instance(eps, 4);
  FractionalRouting r2 = solve_routing_lp(tight);
  CHECK(r2.objective == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r2.at(0, 0) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r2.at(1, 0) == doctest::Approx(0.5 / (0.5 + eps)).epsilon(1e-9));
  for (int j = 1; j < 4; ++j) {
    CHECK(r2.at(0, j) == doctest::Approx(0.0));
    CHECK(r2.at(1, j) == doctest::Approx(0.0));
  }
  check_routing(tight, r2);
}

TEST_CASE("simplex matches the vertex-enumeration oracle") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = testutil::random_small_instance(rng, 3, 2);
    FractionalRouting r = solve_routing_lp(inst);
    check_routing(inst, r);
    double oracle = testutil::vertex_enumeration_lp(inst);
    CHECK(r.objective ==
          doctest::Approx(oracle).epsilon(1e-6).scale(std::max(1.0, oracle)));
  }
}

TEST_CASE("layered packing solves scheduling scenarios") {
  SUBCASE("single day fills to capacity") {
    Instance inst = make_hospital_scenario(1, 1, 60, 0, 1.0,
                                           {0.3, 0.0, 0.0, 0.5, 0.2, 0.0});
    FractionalRouting greedy = solve_layered_greedy(inst);
    CHECK(greedy.objective == doctest::Approx(60.0).epsilon(1e-10));
    FractionalRouting simplex = solve_routing_lp(inst);
    CHECK(simplex.objective == doctest::Approx(greedy.objective).epsilon(1e-10));
    check_routing(inst, greedy);
  }
  SUBCASE("urgent demand is never displaced by regulars") {
    // tight day 0 with urgent mass; regulars can wait a day
    Instance inst = make_hospital_scenario(4, 1, 60, 2, 0.8,
                                           {0.4, 0.1, 0.0, 0.3, 0.2, 0.0});
    FractionalRouting greedy = solve_layered_greedy(inst);
    check_routing(inst, greedy);
    for (int i = 0; i < inst.n(); ++i) {
      int k = inst.scheduling->type_category[i];
      if (!is_urgent_category(k)) continue;
      double routed = 0;
      for (int j = 0; j < inst.m(); ++j) routed += greedy.at(i, j);
      double lambda = inst.types[i].lambda_total;
      // urgent types route fully unless their day is exhausted by urgents
      double day_urgent = 0;
      int d = inst.scheduling->type_day[i];
      for (int i2 = 0; i2 < inst.n(); ++i2)
        if (inst.scheduling->type_day[i2] == d &&
            is_urgent_category(inst.scheduling->type_category[i2]))
          day_urgent += inst.types[i2].lambda_total *
                        kCategoryMinutes[inst.scheduling->type_category[i2]];
      if (day_urgent <= 60.0 + 1e-9) CHECK(routed == doctest::Approx(lambda).epsilon(1e-9));
    }
  }
  SUBCASE("matches simplex on varied scenarios") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      HospitalParams p;
      p.days = 4 + trial;
      p.sessions_per_day = 1 + trial % 2;
      p.session_minutes = 50 + 20 * (trial % 3);
      p.deadline_days = trial % 4;
      p.scale = 0.6 + 0.1 * trial;
      p.monday_only_regular = trial % 2 == 1;
      std::array<double, 6> mix{};
      double total = 0;
      for (int k = 0; k < 6; ++k) {
        mix[k] = -std::log(1.0 - unit(rng));
        total += mix[k];
      }
      for (int k = 0; k < 6; ++k) mix[k] /= total;
      mix[5] = 1.0 - mix[0] - mix[1] - mix[2] - mix[3] - mix[4];
      p.category_mix = mix;
      Instance inst = make_hospital_scenario(p);
      FractionalRouting greedy = solve_layered_greedy(inst);
      FractionalRouting simplex = solve_routing_lp(inst);
      check_routing(inst, greedy);
      CHECK(greedy.objective ==
            doctest::Approx(simplex.objective).epsilon(1e-7).scale(std::max(1.0, simplex.objective)));
    }
  }
  SUBCASE("abundant capacity serves all demand") {
    Instance inst = make_hospital_scenario(10, 2, 60, 5, 1.4,
                                           HospitalParams{}.category_mix);
    double demand = 0;
    for (int i = 0; i < inst.n(); ++i)
      demand += inst.types[i].lambda_total *
                kCategoryMinutes[inst.scheduling->type_category[i]];
    FractionalRouting greedy = solve_layered_greedy(inst);
    CHECK(greedy.objective == doctest::Approx(demand).epsilon(1e-7));
  }
  SUBCASE("rejects generic instances") {
    CHECK_THROWS_AS(solve_layered_greedy(make_prop1_instance(0.05, 1000)),
                    std::invalid_argument);
  }
}

TEST_CASE("routing invariant checks") {
  Instance inst = one_by_one(1.0, 0.5, 4.0);
  FractionalRouting r = solve_routing_lp(inst);

  SUBCASE("dimension mismatch") {
    FractionalRouting bad = r;
    bad.m = 2;
    CHECK_THROWS_AS(check_routing(inst, bad), std::invalid_argument);
  }
  SUBCASE("negative mass") {
    FractionalRouting bad = r;
    bad.at(0, 0) = -0.5;
    CHECK_THROWS_AS(check_routing(inst, bad), std::invalid_argument);
  }
  SUBCASE("overloaded resource") {
    FractionalRouting bad = r;
    bad.at(0, 0) = 3.0;  // load 1.5 > capacity 1
    bad.objective = 1.5;
    CHECK_THROWS_AS(check_routing(inst, bad), std::invalid_argument);
  }
  SUBCASE("demand overflow") {
    Instance wide = one_by_one(10.0, 0.5, 1.0);
    FractionalRouting bad = solve_routing_lp(wide);
    bad.at(0, 0) = 2.0;  // exceeds Lambda = 1
    bad.objective = 1.0;
    CHECK_THROWS_AS(check_routing(wide, bad), std::invalid_argument);
  }
  SUBCASE("objective mismatch") {
    FractionalRouting bad = r;
    bad.objective += 0.25;
    CHECK_THROWS_AS(check_routing(inst, bad), std::invalid_argument);
  }
}

TEST_CASE("upper bound sanity gate") {
  Instance inst = one_by_one(1.0, 0.5, 4.0);
  FractionalRouting r = solve_routing_lp(inst);
  CHECK(upper_bound_check(inst, r, 0.9, 0.01));
  CHECK(upper_bound_check(inst, r, 1.0, 0.0));
  CHECK(upper_bound_check(inst, r, 1.02, 0.01));   // within 3 se
  CHECK(!upper_bound_check(inst, r, 1.1, 0.01));  // 10 se above the bound
}

TEST_CASE("routing serialization") {
  Instance inst = make_ls_tightness_instance(0.05, 3);
  FractionalRouting r = solve_routing_lp(inst);
  nlohmann::json doc = nlohmann::json::parse(routing_to_json(r));
  CHECK(doc.at("n").get<int>() == 2);
  CHECK(doc.at("m").get<int>() == 3);
  CHECK(doc.at("objective").get<double>() == doctest::Approx(r.objective));
  REQUIRE(doc.at("x").size() == 2);
  REQUIRE(doc.at("x")[0].size() == 3);
  CHECK(doc.at("x")[0][0].get<double>() == doctest::Approx(r.at(0, 0)));
}
