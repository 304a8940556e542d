#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "reserve/instance.hpp"
#include "reserve/lp.hpp"

namespace reserve {

// capacity comparisons use this absolute slack
inline constexpr double kCapacityEps = 1e-9;

enum class PolicyName { ls, mls, rls, grd, rsrv, pd };

PolicyName parse_policy_name(const std::string& name);
std::string policy_name_str(PolicyName name);

struct PolicyOptions {
  // mls threshold parameter; 0 picks the largest d with u_ij <= c_j/d
  int mls_d = 0;
  // rls constants; 0 uses the solved defaults
  double r_star = 0;
  double z_star = 0;
};

enum class ClassifyVariant { ls, mls, rls };

// Per-resource split of feasible types: L (large, u > threshold) against S,
// with the rls subsplit of S into M (u >= z* c) and T. Loads U* are LP mass,
// mu* are expected routed counts.
struct TypeClassification {
  ClassifyVariant variant = ClassifyVariant::ls;
  int d = 0;            // mls threshold parameter
  double z_star = 0;    // rls split point
  int n = 0;
  int m = 0;
  std::vector<std::uint8_t> feasible;  // n x m, u_ij > 0
  std::vector<std::uint8_t> in_L;      // n x m
  std::vector<std::uint8_t> in_M;      // n x m, rls only
  std::vector<double> U, UL, US, UM, UT, muL, muM;  // per resource

  bool large(int i, int j) const { return in_L[static_cast<std::size_t>(i) * m + j] != 0; }
  bool medium(int i, int j) const { return in_M[static_cast<std::size_t>(i) * m + j] != 0; }
  bool feas(int i, int j) const { return feasible[static_cast<std::size_t>(i) * m + j] != 0; }
};

// d is the mls parameter (0 = auto), z_star the rls split (0 = solved
// default); each is ignored for the other variants. Boundary conventions:
// L uses strict >, M uses >=.
TypeClassification classify_types(const Instance& inst,
                                  const FractionalRouting& routing,
                                  ClassifyVariant variant, int d = 0,
                                  double z_star = 0);

enum class ReservedChoice { large, small, all };

// Immutable per-(instance, routing, policy) setup shared across replicates.
struct PolicyConfig {
  PolicyName name = PolicyName::ls;
  const Instance* inst = nullptr;
  const FractionalRouting* routing = nullptr;

  TypeClassification cls;                      // ls / mls / rls
  std::vector<ReservedChoice> reserve_choice;  // per resource, ls / mls
  std::vector<std::uint8_t> admit;             // n x m acceptance gate
  std::vector<std::uint8_t> type_a;            // per resource, rls
  double r_star = 0;
  double z_star = 0;
  int mls_d = 0;

  // per type: (cumulative probability, resource) for the routing draw;
  // residual mass beyond the last entry means immediate rejection
  std::vector<std::vector<std::pair<double, int>>> route;

  // per type: feasible resources ordered by assignment preference
  // (soonest day then index for scheduling instances, index otherwise)
  std::vector<std::vector<int>> feasible_order;

  std::vector<std::array<double, 6>> tranche;  // rsrv, per resource
  double pd_c_minus_1 = 0;                     // pd dual update constant

  bool admits(int i, int j) const {
    return admit[static_cast<std::size_t>(i) * inst->m() + j] != 0;
  }
};

PolicyConfig make_policy_config(const Instance& inst,
                                const FractionalRouting& routing,
                                PolicyName name,
                                const PolicyOptions& options = {});

// Mutable per-replicate state.
struct PolicyRun {
  const PolicyConfig* cfg = nullptr;
  std::vector<double> remaining;                     // per resource
  std::vector<double> duals;                         // pd
  std::vector<std::array<double, 6>> tranche_rem;    // rsrv

  explicit PolicyRun(const PolicyConfig& config);

  // returns the chosen resource (capacity already decremented) or -1
  int decide(int type_id, std::mt19937_64& rng);
};

// Individual deciders, exposed for targeted tests. Routing-based policies
// consume exactly one uniform draw per arrival.
int ls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng);
int mls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng);
int rls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng);
int grd_decide(PolicyRun& run, int type_id);
int rsrv_decide(PolicyRun& run, int type_id);
int pd_decide(PolicyRun& run, int type_id);

}  // namespace reserve
