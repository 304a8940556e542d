#pragma once

#include <string>
#include <vector>

#include "reserve/instance.hpp"

namespace reserve {

// Optimal solution of the static routing LP
//   max sum_ij x_ij u_ij
//   s.t. sum_i x_ij u_ij <= c_j, sum_j x_ij <= Lambda_i, x >= 0.
struct FractionalRouting {
  int n = 0;
  int m = 0;
  std::vector<double> x;  // row-major n x m, expected customers routed
  double objective = 0;

  double at(int i, int j) const { return x[static_cast<std::size_t>(i) * m + j]; }
  double& at(int i, int j) { return x[static_cast<std::size_t>(i) * m + j]; }
};

// Dense tableau simplex with Bland's rule (lowest-index entering variable,
// lowest-index basic variable on ratio ties). Variables with u_ij = 0 or
// Lambda_i = 0 are dropped before solving, so x_ij = 0 wherever u_ij = 0.
// Throws std::runtime_error if the pivot count limit is hit.
FractionalRouting solve_routing_lp(const Instance& inst);

// Specialized solver for scheduling scenarios: packs urgent types into
// same-day sessions first, then packs regular types day by day into the
// earliest available sessions. Matches solve_routing_lp on the layered
// structure. Rejects instances without scheduling metadata.
FractionalRouting solve_layered_greedy(const Instance& inst);

// Throws std::invalid_argument describing the first violated invariant:
// per-resource load <= capacity, per-type mass <= Lambda, objective
// consistent with x, all within rel_tol.
void check_routing(const Instance& inst, const FractionalRouting& routing,
                   double rel_tol = 1e-9);

// true iff offline_mean <= objective + 3 * offline_se; the LP value upper
// bounds the expected offline optimum, so failures indicate a bug.
bool upper_bound_check(const Instance& inst, const FractionalRouting& routing,
                       double offline_mean, double offline_se);

std::string routing_to_json(const FractionalRouting& routing);

}  // namespace reserve
