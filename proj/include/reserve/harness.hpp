#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reserve/instance.hpp"
#include "reserve/lp.hpp"
#include "reserve/policies.hpp"
#include "reserve/sim.hpp"

namespace reserve {

enum class Denominator { lp_bound, prop1_exact, tightness_exact };

struct ExperimentSpec {
  const Instance* instance = nullptr;
  std::vector<PolicyName> policies;
  int replicates = 200;
  std::uint64_t master_seed = 1;
  Denominator denominator = Denominator::lp_bound;
  long long oracle_paths = 100000;  // offline-oracle denominators only
  PolicyOptions policy_options;
  int threads = 0;  // 0 = RESERVE_BENCH_THREADS, then hardware
};

struct WaitStats {
  double mean = 0;
  long long count = 0;
  double p90 = 0;
  double max = 0;
};

struct PolicyReport {
  PolicyName policy = PolicyName::ls;
  double mean_reward = 0;
  double se = 0;
  double ratio = 0;     // mean_reward / denominator
  double ratio_se = 0;  // se / denominator
  std::optional<WaitStats> wait;  // absent for non-scheduling instances
  std::vector<double> mean_resource_used;
  double mean_accepted = 0;
  double mean_rejected = 0;
};

struct RunReport {
  double denominator_value = 0;
  double denominator_se = 0;
  // hash over the shared arrival paths; every policy in a replicate
  // consumes the identical path (common random numbers)
  std::uint64_t path_checksum = 0;
  std::vector<PolicyReport> policies;
};

// Runs all (policy x replicate) cells; replicates fan out across threads,
// results are reduced in replicate order so the report is a deterministic
// function of the spec.
RunReport run_experiment(const ExperimentSpec& spec);

// Pooled over admitted regular patients; nullopt for non-scheduling
// instances (the metric is absent, not zero).
std::optional<WaitStats> waiting_time_stats(
    const Instance& inst, const std::vector<ReplicateResult>& results);

struct BenchOptions {
  std::uint64_t seed = 1;
  int replicates = 200;        // tables grid
  int settings = 100;          // random-settings grid
  int setting_replicates = 50; // per random setting
  int threads = 0;
  bool full_scale = false;    // 200 days and 1000 replicates
};

// Desk-scale grid over (variant, sessions, session length, scale); writes
// tables.csv and tables_long.csv into out_dir.
void bench_tables(const std::string& out_dir, const BenchOptions& options);

// Randomized settings; writes random_settings.csv, random_settings_long.csv
// and random_settings_summary.csv (worst and mean rows) into out_dir.
void bench_random_settings(const std::string& out_dir,
                           const BenchOptions& options);

// '.' decimal separator, 6 significant digits
std::string format_csv_number(double value);

}  // namespace reserve
