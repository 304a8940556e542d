#pragma once

#include <cstdint>
#include <vector>

#include "reserve/instance.hpp"
#include "reserve/lp.hpp"
#include "reserve/policies.hpp"

namespace reserve {

struct ArrivalEvent {
  double time = 0;
  int type_id = 0;
};

struct ReplicateResult {
  double total_reward = 0;
  std::vector<double> per_resource_used;  // length m
  long long accepted = 0;
  long long rejected = 0;
  // per admitted regular patient: assigned day - arrival day
  // (scheduling instances only)
  std::vector<double> regular_wait_days;
};

// Per-type, per-segment Poisson counts with uniform times inside each
// segment, merged into one time-sorted stream. Simultaneous times are
// ordered by an independent uniform jitter drawn at generation time.
// Deterministic in rng_seed.
std::vector<ArrivalEvent> sample_path(const Instance& inst,
                                      std::uint64_t rng_seed);

// Feeds the path to a fresh policy instance; decisions are immediate and
// irrevocable. Throws std::invalid_argument on dimension mismatch.
ReplicateResult run_policy(const Instance& inst,
                           const FractionalRouting& routing, PolicyName name,
                           const std::vector<ArrivalEvent>& path,
                           std::uint64_t rng_seed,
                           const PolicyOptions& options = {});

// Fast path for replicate loops: the config is built once by the caller.
ReplicateResult run_policy(const PolicyConfig& config,
                           const std::vector<ArrivalEvent>& path,
                           std::mt19937_64& rng);

enum class OfflineOracle { prop1_exact, tightness_exact, lp_bound };

OfflineOracle parse_offline_oracle(const std::string& name);

struct OfflineEstimate {
  double mean = 0;
  double se = 0;
};

// prop1_exact and tightness_exact are the closed-form offline rules for
// their respective instance families (Monte Carlo over n_paths sample
// paths); lp_bound returns the LP optimum with zero error as the tractable
// surrogate. Throws std::invalid_argument on an oracle/instance mismatch.
OfflineEstimate estimate_offline(const Instance& inst, OfflineOracle oracle,
                                 long long n_paths, std::uint64_t rng_seed);

}  // namespace reserve
