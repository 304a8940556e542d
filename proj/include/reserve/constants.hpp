#pragma once

namespace reserve {

// Analytic constants and closed-form bounds behind the policies.

// h(z,r) = z - [z - (1 - e^-2/(1-2r))/2] (1-2r) ((1-z)/(1-z-r))^(2(1-z)).
// Domain: z in (0,1), r in [0,0.5), z + r < 1; throws std::domain_error.
double h(double z, double r);

struct RlsConstants {
  double r_star = 0;   // largest r in (0,0.5) with max_z h(z,r) >= r
  double z_star = 0;   // the maximizer of h(., r_star)
  double h_at_opt = 0; // h(z_star, r_star), >= r_star up to solver tolerance
};

// Bisection on r (feasibility: max_z h(z,r) >= r) with a golden-section
// inner maximum; both capped at 200 iterations. tolerance in [1e-10, 1e-3].
RlsConstants solve_rls_constants(double tolerance = 1e-9);

// (1 - 1/e) / 2, the basic reservation policy's per-resource guarantee.
double ls_ratio();

struct MlsRatios {
  double ratio_L = 0;
  double ratio_S = 0;
  double ratio_all = 0;
};

// The three reservation ratios for threshold parameter d >= 2 and loads
// UjL + UjS <= Uj <= cj. Poisson series are truncated once the analytic
// remainder bound drops below series_tol.
MlsRatios mls_ratios(int d, double UjL, double UjS, double Uj, double cj,
                     double series_tol = 1e-12);

// 1 - e^-d d^d/d! - 1/d, the closed-form lower bound on ratio_all at full
// load; evaluated through log-gamma so large d does not overflow.
double corollary1_bound(int d);

// Lower bound on E[min(sum_{k<=N} X_k, 1-beta)] for i.i.d. X_k in [0,beta],
// N Poisson with E[sum X_k] = alpha: (1-beta)/(l-1) E[min(N', l-1)] with
// N' ~ Poisson(alpha (l-1)/(1-beta)). Requires beta in [0, 1/l], l >= 2.
double compound_poisson_tail_bound(double alpha, double beta, int l);

}  // namespace reserve
