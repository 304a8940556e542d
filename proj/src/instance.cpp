#include "reserve/instance.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "reserve/rng.hpp"

namespace reserve {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

std::string idx(const std::string& name, int i) {
  return name + "[" + std::to_string(i) + "]";
}

}  // namespace

double RateFunction::integral() const {
  double total = 0;
  for (const auto& seg : segments) total += seg.rate * (seg.t1 - seg.t0);
  return total;
}

void Instance::validate() const {
  if (!(horizon > 0) || !std::isfinite(horizon)) fail("horizon must be positive and finite");
  const double tol = 1e-9 * std::max(1.0, horizon);
  for (int j = 0; j < m(); ++j) {
    if (resources[j].id != j) fail(idx("resources", j) + ": id must equal its position");
    if (!(resources[j].capacity > 0) || !std::isfinite(resources[j].capacity))
      fail(idx("resources", j) + ": capacity must be positive and finite");
  }
  for (int i = 0; i < n(); ++i) {
    const CustomerType& ct = types[i];
    if (ct.id != i) fail(idx("types", i) + ": id must equal its position");
    if (static_cast<int>(ct.utilization.size()) != m())
      fail(idx("types", i) + ": utilization must have one entry per resource");
    for (int j = 0; j < m(); ++j) {
      double u = ct.utilization[j];
      if (!(u >= 0) || !std::isfinite(u))
        fail(idx("types", i) + "." + idx("utilization", j) + ": must be finite and >= 0");
      if (u > resources[j].capacity * (1 + 1e-12))
        fail(idx("types", i) + "." + idx("utilization", j) + ": exceeds capacity of " +
             idx("resources", j));
    }
    if (ct.rate.segments.empty()) fail(idx("types", i) + ".rate: must have segments");
    double cursor = 0;
    for (int s = 0; s < static_cast<int>(ct.rate.segments.size()); ++s) {
      const RateSegment& seg = ct.rate.segments[s];
      const std::string where = idx("types", i) + ".rate" + idx("", s);
      if (!(seg.rate >= 0) || !std::isfinite(seg.rate))
        fail(where + ": rate must be finite and >= 0");
      if (std::abs(seg.t0 - cursor) > tol)
        fail(where + ": segments must partition [0, horizon] without gaps or overlaps");
      if (seg.t1 < seg.t0 - tol) fail(where + ": t1 must be >= t0");
      cursor = seg.t1;
    }
    if (std::abs(cursor - horizon) > tol)
      fail(idx("types", i) + ".rate: segments must end at the horizon");
    double integral = ct.rate.integral();
    double rel = std::abs(ct.lambda_total - integral) / std::max(1.0, std::abs(integral));
    if (rel > 1e-12)
      fail(idx("types", i) + ": lambda_total disagrees with the rate integral");
  }
  if (scheduling) {
    const SchedulingInfo& s = *scheduling;
    if (s.days <= 0 || s.sessions_per_day <= 0) fail("scheduling: days and sessions_per_day must be positive");
    if (s.deadline_days < 0) fail("scheduling: deadline_days must be >= 0");
    if (static_cast<int>(s.resource_day.size()) != m()) fail("scheduling.resource_day: wrong length");
    if (static_cast<int>(s.type_day.size()) != n()) fail("scheduling.type_day: wrong length");
    if (static_cast<int>(s.type_category.size()) != n()) fail("scheduling.type_category: wrong length");
    for (int j = 0; j < m(); ++j)
      if (s.resource_day[j] < 0 || s.resource_day[j] >= s.days)
        fail("scheduling." + idx("resource_day", j) + ": out of range");
    for (int i = 0; i < n(); ++i) {
      if (s.type_day[i] < 0 || s.type_day[i] >= s.days)
        fail("scheduling." + idx("type_day", i) + ": out of range");
      if (s.type_category[i] < 0 || s.type_category[i] >= 6)
        fail("scheduling." + idx("type_category", i) + ": out of range");
    }
  }
}

Instance make_prop1_instance(double epsilon, double lambda1_total) {
  if (!(epsilon > 0) || epsilon >= 1)
    fail("make_prop1_instance: epsilon must be in (0, 1)");
  if (!(lambda1_total >= 100))
    fail("make_prop1_instance: lambda1_total must be >= 100");
  Instance inst;
  inst.horizon = 1.0;
  inst.resources = {{0, 1.0}};
  CustomerType t1;
  t1.id = 0;
  t1.utilization = {epsilon / lambda1_total};
  t1.rate.segments = {{0.0, 0.5, lambda1_total / 0.5}, {0.5, 1.0, 0.0}};
  t1.lambda_total = t1.rate.integral();
  CustomerType t2;
  t2.id = 1;
  t2.utilization = {1.0};
  t2.rate.segments = {{0.0, 0.5, 0.0}, {0.5, 1.0, epsilon / 0.5}};
  t2.lambda_total = t2.rate.integral();
  inst.types = {std::move(t1), std::move(t2)};
  inst.validate();
  return inst;
}

Instance make_ls_tightness_instance(double epsilon, int m) {
  if (!(epsilon > 0) || epsilon >= 0.1)
    fail("make_ls_tightness_instance: epsilon must be in (0, 0.1)");
  if (m < 2) fail("make_ls_tightness_instance: requires m >= 2");
  Instance inst;
  inst.horizon = 1.0;
  inst.resources.resize(m);
  for (int j = 0; j < m; ++j) inst.resources[j] = {j, 1.0};
  CustomerType t1;
  t1.id = 0;
  t1.utilization.assign(m, 0.1 * (1 - epsilon));
  t1.utilization[0] = 0.1;
  t1.rate.segments = {{0.0, 1.0, 5.0}};
  t1.lambda_total = 5.0;
  CustomerType t2;
  t2.id = 1;
  t2.utilization.assign(m, (0.5 + epsilon) * (1 - epsilon));
  t2.utilization[0] = 0.5 + epsilon;
  double lambda2 = 0.5 / (0.5 + epsilon);
  t2.rate.segments = {{0.0, 1.0, lambda2}};
  t2.lambda_total = lambda2;
  inst.types = {std::move(t1), std::move(t2)};
  inst.validate();
  return inst;
}

Instance make_hospital_scenario(const HospitalParams& p) {
  if (p.days <= 0) fail("make_hospital_scenario: days must be positive");
  if (p.sessions_per_day <= 0) fail("make_hospital_scenario: sessions_per_day must be positive");
  if (!(p.session_minutes > 0)) fail("make_hospital_scenario: session_minutes must be positive");
  if (p.deadline_days < 0) fail("make_hospital_scenario: deadline_days must be >= 0");
  if (!(p.scale > 0)) fail("make_hospital_scenario: scale must be positive");
  double mix_sum = 0;
  for (int k = 0; k < 6; ++k) {
    if (p.category_mix[k] < 0) fail("make_hospital_scenario: category mix entries must be >= 0");
    mix_sum += p.category_mix[k];
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) fail("make_hospital_scenario: category mix must sum to 1");
  for (double w : p.weekday_weights)
    if (!(w >= 0)) fail("make_hospital_scenario: weekday weights must be >= 0");

  const int S = p.sessions_per_day;
  Instance inst;
  inst.horizon = p.days;
  inst.resources.resize(static_cast<std::size_t>(p.days) * S);
  SchedulingInfo info;
  info.days = p.days;
  info.sessions_per_day = S;
  info.deadline_days = p.deadline_days;
  info.monday_only_regular = p.monday_only_regular;
  info.resource_day.resize(inst.resources.size());
  for (int d = 0; d < p.days; ++d)
    for (int s = 0; s < S; ++s) {
      int j = d * S + s;
      inst.resources[j] = {j, p.session_minutes};
      info.resource_day[j] = d;
    }

  // Class-specific day weights. Standard: the weekly pattern for both
  // classes. Monday variant: regulars on Mondays only, urgents on the other
  // four weekdays with the weekly pattern.
  std::array<std::vector<double>, 2> day_weight;  // [0]=urgent, [1]=regular
  for (int cls = 0; cls < 2; ++cls) day_weight[cls].assign(p.days, 0.0);
  for (int d = 0; d < p.days; ++d) {
    int wd = d % 5;
    if (!p.monday_only_regular) {
      day_weight[0][d] = p.weekday_weights[wd];
      day_weight[1][d] = p.weekday_weights[wd];
    } else {
      day_weight[0][d] = wd == 0 ? 0.0 : p.weekday_weights[wd];
      day_weight[1][d] = wd == 0 ? 1.0 : 0.0;
    }
  }
  std::array<double, 2> weight_sum{};
  for (int cls = 0; cls < 2; ++cls)
    weight_sum[cls] = std::accumulate(day_weight[cls].begin(), day_weight[cls].end(), 0.0);

  double mean_minutes = 0;
  for (int k = 0; k < 6; ++k) mean_minutes += p.category_mix[k] * kCategoryMinutes[k];
  if (!(mean_minutes > 0)) fail("make_hospital_scenario: category mix has zero expected duration");
  double total_capacity = p.session_minutes * S * p.days;
  // total expected arrivals so that expected demand minutes = capacity/scale
  double total_arrivals = total_capacity / (p.scale * mean_minutes);

  double class_mass[2] = {0, 0};
  for (int k = 0; k < 6; ++k) class_mass[is_urgent_category(k) ? 0 : 1] += p.category_mix[k];
  for (int cls = 0; cls < 2; ++cls)
    if (class_mass[cls] > 0 && weight_sum[cls] <= 0)
      fail("make_hospital_scenario: no arrival days available for a class with positive mix");

  inst.types.reserve(static_cast<std::size_t>(p.days) * 6);
  info.type_day.reserve(inst.types.capacity());
  info.type_category.reserve(inst.types.capacity());
  for (int d = 0; d < p.days; ++d) {
    for (int k = 0; k < 6; ++k) {
      int cls = is_urgent_category(k) ? 0 : 1;
      CustomerType ct;
      ct.id = static_cast<int>(inst.types.size());
      ct.utilization.assign(inst.resources.size(), 0.0);
      int last_day = is_urgent_category(k) ? d : std::min(d + p.deadline_days, p.days - 1);
      for (int dd = d; dd <= last_day; ++dd)
        for (int s = 0; s < S; ++s) ct.utilization[dd * S + s] = kCategoryMinutes[k];
      double lambda = weight_sum[cls] > 0
                          ? total_arrivals * p.category_mix[k] * day_weight[cls][d] / weight_sum[cls]
                          : 0.0;
      // arrivals spike at the start of the day: one active segment of width
      // one day, zero elsewhere
      if (d > 0) ct.rate.segments.push_back({0.0, static_cast<double>(d), 0.0});
      ct.rate.segments.push_back({static_cast<double>(d), static_cast<double>(d + 1), lambda});
      if (d + 1 < p.days)
        ct.rate.segments.push_back({static_cast<double>(d + 1), static_cast<double>(p.days), 0.0});
      ct.lambda_total = ct.rate.integral();
      inst.types.push_back(std::move(ct));
      info.type_day.push_back(d);
      info.type_category.push_back(k);
    }
  }
  inst.scheduling = std::move(info);
  inst.validate();
  return inst;
}

Instance make_hospital_scenario(int days, int sessions_per_day, double session_minutes,
                                int deadline_days, double scale,
                                const std::array<double, 6>& category_mix) {
  HospitalParams p;
  p.days = days;
  p.sessions_per_day = sessions_per_day;
  p.session_minutes = session_minutes;
  p.deadline_days = deadline_days;
  p.scale = scale;
  p.category_mix = category_mix;
  return make_hospital_scenario(p);
}

Instance make_random_setting(std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0, StreamPurpose::bench));
  HospitalParams p;
  p.days = 40;
  p.sessions_per_day = 2;
  // uniform on the simplex via normalized exponential spacings
  std::array<double, 6> mix{};
  double total = 0;
  for (int k = 0; k < 6; ++k) {
    mix[k] = -std::log(1.0 - std::uniform_real_distribution<double>(0, 1)(rng));
    total += mix[k];
  }
  for (int k = 0; k < 6; ++k) mix[k] /= total;
  // renormalize exactly so the generator precondition holds
  double s5 = mix[0] + mix[1] + mix[2] + mix[3] + mix[4];
  mix[5] = 1.0 - s5;
  p.category_mix = mix;
  p.deadline_days = std::uniform_int_distribution<int>(5, 30)(rng);
  p.session_minutes = std::uniform_real_distribution<double>(45, 150)(rng);
  p.scale = std::uniform_real_distribution<double>(0.7, 1.3)(rng);
  return make_hospital_scenario(p);
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["horizon"] = inst.horizon;
  doc["resources"] = json::array();
  for (const auto& r : inst.resources)
    doc["resources"].push_back({{"id", r.id}, {"capacity", r.capacity}});
  doc["types"] = json::array();
  for (const auto& t : inst.types) {
    json jt;
    jt["id"] = t.id;
    jt["utilization"] = t.utilization;
    jt["rate"] = json::array();
    for (const auto& seg : t.rate.segments)
      jt["rate"].push_back({{"t0", seg.t0}, {"t1", seg.t1}, {"rate", seg.rate}});
    doc["types"].push_back(std::move(jt));
  }
  if (inst.scheduling) {
    const SchedulingInfo& s = *inst.scheduling;
    doc["scheduling"] = {{"days", s.days},
                         {"sessions_per_day", s.sessions_per_day},
                         {"deadline_days", s.deadline_days},
                         {"monday_only_regular", s.monday_only_regular},
                         {"resource_day", s.resource_day},
                         {"type_day", s.type_day},
                         {"type_category", s.type_category}};
  }
  return doc.dump(2);
}

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("instance parse error: ") + e.what());
  }
  Instance inst;
  try {
    inst.horizon = doc.at("horizon").get<double>();
    for (const auto& jr : doc.at("resources")) {
      Resource r;
      r.id = jr.at("id").get<int>();
      r.capacity = jr.at("capacity").get<double>();
      inst.resources.push_back(r);
    }
    for (const auto& jt : doc.at("types")) {
      CustomerType t;
      t.id = jt.at("id").get<int>();
      t.utilization = jt.at("utilization").get<std::vector<double>>();
      for (const auto& js : jt.at("rate")) {
        RateSegment seg;
        seg.t0 = js.at("t0").get<double>();
        seg.t1 = js.at("t1").get<double>();
        seg.rate = js.at("rate").get<double>();
        t.rate.segments.push_back(seg);
      }
      t.lambda_total = t.rate.integral();
      inst.types.push_back(std::move(t));
    }
    if (doc.contains("scheduling")) {
      const json& js = doc.at("scheduling");
      SchedulingInfo s;
      s.days = js.at("days").get<int>();
      s.sessions_per_day = js.at("sessions_per_day").get<int>();
      s.deadline_days = js.at("deadline_days").get<int>();
      s.monday_only_regular = js.value("monday_only_regular", false);
      s.resource_day = js.at("resource_day").get<std::vector<int>>();
      s.type_day = js.at("type_day").get<std::vector<int>>();
      s.type_category = js.at("type_category").get<std::vector<int>>();
      inst.scheduling = std::move(s);
    }
  } catch (const json::exception& e) {
    fail(std::string("instance schema error: ") + e.what());
  }
  inst.validate();
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open for writing: " + path);
  out << instance_to_json(inst) << "\n";
  if (!out) fail("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace reserve
