#include "reserve/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "reserve/lp.hpp"
#include "reserve/policies.hpp"
#include "reserve/rng.hpp"

namespace reserve {

std::vector<ArrivalEvent> sample_path(const Instance& inst, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // (time, tie key, type): the tie key randomizes the order of coincident
  // arrivals independently of type enumeration order
  std::vector<std::tuple<double, double, int>> events;
  for (int i = 0; i < inst.n(); ++i) {
    for (const RateSegment& seg : inst.types[i].rate.segments) {
      double mass = seg.rate * (seg.t1 - seg.t0);
      if (!(mass > 0)) continue;
      long long count = std::poisson_distribution<long long>(mass)(rng);
      for (long long k = 0; k < count; ++k) {
        double t = seg.t0 + (seg.t1 - seg.t0) * unit(rng);
        events.emplace_back(t, unit(rng), i);
      }
    }
  }
  std::sort(events.begin(), events.end());
  std::vector<ArrivalEvent> out;
  out.reserve(events.size());
  for (const auto& [t, tie, i] : events) out.push_back({t, i});
  return out;
}

ReplicateResult run_policy(const PolicyConfig& config, const std::vector<ArrivalEvent>& path,
                           std::mt19937_64& rng) {
  const Instance& inst = *config.inst;
  PolicyRun run(config);
  ReplicateResult res;
  res.per_resource_used.assign(inst.m(), 0.0);
  const bool sched = inst.scheduling.has_value();
  for (const ArrivalEvent& ev : path) {
    int j = run.decide(ev.type_id, rng);
    if (j >= 0) {
      double u = inst.u(ev.type_id, j);
      res.total_reward += u;
      res.per_resource_used[j] += u;
      res.accepted += 1;
      if (sched) {
        const SchedulingInfo& s = *inst.scheduling;
        if (!is_urgent_category(s.type_category[ev.type_id]))
          res.regular_wait_days.push_back(
              static_cast<double>(s.resource_day[j] - s.type_day[ev.type_id]));
      }
    } else {
      res.rejected += 1;
    }
  }
  return res;
}

ReplicateResult run_policy(const Instance& inst, const FractionalRouting& routing, PolicyName name,
                           const std::vector<ArrivalEvent>& path, std::uint64_t rng_seed,
                           const PolicyOptions& options) {
  if (routing.n != inst.n() || routing.m != inst.m())
    throw std::invalid_argument("routing dimensions do not match the instance");
  PolicyConfig config = make_policy_config(inst, routing, name, options);
  std::mt19937_64 rng(rng_seed);
  return run_policy(config, path, rng);
}

OfflineOracle parse_offline_oracle(const std::string& name) {
  if (name == "prop1_exact") return OfflineOracle::prop1_exact;
  if (name == "tightness_exact") return OfflineOracle::tightness_exact;
  if (name == "lp_bound") return OfflineOracle::lp_bound;
  throw std::invalid_argument("unknown offline oracle: " + name);
}

namespace {

struct MeanAccumulator {
  long long count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double v) {
    ++count;
    double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }

  double se() const {
    if (count < 2) return 0;
    return std::sqrt(m2 / (count - 1) / count);
  }
};

}  // namespace

OfflineEstimate estimate_offline(const Instance& inst, OfflineOracle oracle, long long n_paths,
                                 std::uint64_t rng_seed) {
  if (oracle == OfflineOracle::lp_bound) {
    FractionalRouting r = inst.scheduling ? solve_layered_greedy(inst) : solve_routing_lp(inst);
    return {r.objective, 0.0};
  }
  if (n_paths <= 0) throw std::invalid_argument("estimate_offline: n_paths must be positive");
  std::mt19937_64 rng = make_stream(rng_seed, 0, StreamPurpose::oracle);
  MeanAccumulator acc;
  if (oracle == OfflineOracle::prop1_exact) {
    if (inst.n() != 2 || inst.m() != 1)
      throw std::invalid_argument("prop1_exact requires the single-resource two-type family");
    double cap = inst.resources[0].capacity;
    double u1 = inst.u(0, 0), u2 = inst.u(1, 0);
    if (std::abs(u2 - cap) > 1e-9 * cap || !(u1 <= u2))
      throw std::invalid_argument("prop1_exact requires the high type to fill the resource");
    std::poisson_distribution<long long> n1(inst.types[0].lambda_total);
    std::poisson_distribution<long long> n2(inst.types[1].lambda_total);
    for (long long p = 0; p < n_paths; ++p) {
      long long k1 = n1(rng), k2 = n2(rng);
      // one high arrival fills the resource; otherwise pack small arrivals
      acc.add(k2 >= 1 ? cap : std::min(static_cast<double>(k1) * u1, cap));
    }
  } else {
    if (inst.n() != 2 || inst.m() < 2)
      throw std::invalid_argument("tightness_exact requires the two-type multi-resource family");
    double u1 = inst.u(0, 1), u2 = inst.u(1, 1);
    if (!(u2 >= u1) || !(u1 > 0))
      throw std::invalid_argument("tightness_exact requires ordered positive side utilizations");
    // offline benchmark: spread arrivals one per side resource, high type first
    long long budget = inst.m() - 1;
    std::poisson_distribution<long long> n1(inst.types[0].lambda_total);
    std::poisson_distribution<long long> n2(inst.types[1].lambda_total);
    for (long long p = 0; p < n_paths; ++p) {
      long long k1 = n1(rng), k2 = n2(rng);
      long long take2 = std::min(k2, budget);
      long long take1 = std::min(k1, budget - take2);
      acc.add(static_cast<double>(take2) * u2 + static_cast<double>(take1) * u1);
    }
  }
  return {acc.mean, acc.se()};
}

}  // namespace reserve
