#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace reserve {

struct RateSegment {
  double t0 = 0;
  double t1 = 0;
  double rate = 0;  // arrivals per unit time, constant on [t0, t1)
};

// piecewise-constant arrival rate; segments partition [0, horizon]
struct RateFunction {
  std::vector<RateSegment> segments;

  double integral() const;
};

struct CustomerType {
  int id = 0;
  std::vector<double> utilization;  // one entry per resource; 0 = infeasible
  RateFunction rate;
  double lambda_total = 0;  // integral of rate over the horizon
};

struct Resource {
  int id = 0;
  double capacity = 0;
};

// Appointment categories for scheduling scenarios. Index order is also the
// reservation priority order: urgent above regular, shorter above longer.
enum Category : int {
  urgent15 = 0,
  urgent30 = 1,
  urgent45 = 2,
  regular15 = 3,
  regular30 = 4,
  regular45 = 5,
};

constexpr std::array<double, 6> kCategoryMinutes{15, 30, 45, 15, 30, 45};

constexpr bool is_urgent_category(int k) { return k < 3; }

// Extra structure carried by scheduling scenarios: resources are (day,
// session) pairs and types are (arrival day, category) pairs.
struct SchedulingInfo {
  int days = 0;
  int sessions_per_day = 0;
  int deadline_days = 0;
  bool monday_only_regular = false;
  std::vector<int> resource_day;   // length m
  std::vector<int> type_day;       // length n
  std::vector<int> type_category;  // length n
};

struct Instance {
  double horizon = 0;
  std::vector<Resource> resources;
  std::vector<CustomerType> types;
  std::optional<SchedulingInfo> scheduling;

  int m() const { return static_cast<int>(resources.size()); }
  int n() const { return static_cast<int>(types.size()); }
  double u(int i, int j) const { return types[i].utilization[j]; }

  // throws std::invalid_argument naming the first violated invariant
  void validate() const;
};

// Two-type single-resource adversarial construction: type 1 brings many tiny
// customers on the first half of the horizon, type 2 brings a single
// full-capacity customer with probability about epsilon on the second half.
Instance make_prop1_instance(double epsilon, double lambda1_total);

// Two-type many-resource construction on which the basic reservation policy
// attains its guarantee: resource 1 carries full values, every other
// resource a (1-epsilon) markdown.
Instance make_ls_tightness_instance(double epsilon, int m);

struct HospitalParams {
  int days = 50;
  int sessions_per_day = 4;
  double session_minutes = 60;
  int deadline_days = 20;
  double scale = 1.0;  // total capacity / total expected demand
  // clinic proportions 27:1:0:45:14:9, normalized to a probability vector
  std::array<double, 6> category_mix{27.0 / 96, 1.0 / 96, 0.0,
                                     45.0 / 96, 14.0 / 96, 9.0 / 96};
  // relative Mon..Fri arrival weights; Thursday runs 60% above Wednesday
  std::array<double, 5> weekday_weights{1.00, 0.95, 0.80, 1.28, 0.97};
  // variant where regulars arrive Mondays only and urgents Tuesday-Friday
  bool monday_only_regular = false;
};

Instance make_hospital_scenario(const HospitalParams& params);
Instance make_hospital_scenario(int days, int sessions_per_day,
                                double session_minutes, int deadline_days,
                                double scale,
                                const std::array<double, 6>& category_mix);

// Deterministic in seed: category mix uniform on the simplex, deadline
// uniform in [5,30] days, session capacity uniform in [45,150] minutes,
// scale uniform in [0.7,1.3]; desk-scale dimensions (40 days, 2 sessions).
Instance make_random_setting(std::uint64_t seed);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace reserve
