#include "reserve/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace reserve {

namespace {

// sum_{k=k0}^inf w(k) pmf(k) for N ~ Poisson(lambda), where w is nonneg and
// grows at most linearly in k. Truncated once a geometric bound on the
// remainder drops below tol: past k > lambda the pmf decays by at least
// q = lambda/(k+2) per term, so the remainder is at most
// pmf(k+1) * w_max(k) / (1-q)^2 with w_max a linear envelope of w.
template <typename W>
double poisson_series(double lambda, int k0, double tol, W w) {
  if (lambda <= 0) return k0 == 0 ? w(0) : 0.0;
  double pmf = std::exp(-lambda);
  double sum = 0;
  for (int k = 0;; ++k) {
    if (k >= k0) sum += w(k) * pmf;
    double pmf_next = pmf * lambda / (k + 1);
    if (k + 1 > k0 && k + 1 > lambda) {
      double q = lambda / (k + 2);
      if (q < 0.9) {
        double envelope = std::abs(w(k + 1)) + std::abs(w(k + 2)) + 1.0;
        if (pmf_next * envelope / ((1 - q) * (1 - q)) < tol) break;
      }
    }
    pmf = pmf_next;
    if (k > 2000000) throw std::runtime_error("poisson series failed to converge");
  }
  return sum;
}

double max_h_over_z(double r, double& z_at_max) {
  // golden-section on z in (0, 0.5); the inner function is unimodal there
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-9, hi = 0.5 - 1e-9;
  double a = hi - invphi * (hi - lo);
  double b = lo + invphi * (hi - lo);
  double fa = h(a, r), fb = h(b, r);
  for (int it = 0; it < 200; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + invphi * (hi - lo);
      fb = h(b, r);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - invphi * (hi - lo);
      fa = h(a, r);
    }
  }
  z_at_max = (lo + hi) / 2;
  return h(z_at_max, r);
}

}  // namespace

double h(double z, double r) {
  if (!(r >= 0) || r >= 0.5) throw std::domain_error("h: requires r in [0, 0.5)");
  if (!(z > 0) || z >= 1) throw std::domain_error("h: requires z in (0, 1)");
  if (z + r >= 1) throw std::domain_error("h: requires z + r < 1");
  double bracket = z - 0.5 * (1.0 - std::exp(-2.0) / (1.0 - 2.0 * r));
  double base = (1.0 - z) / (1.0 - z - r);
  return z - bracket * (1.0 - 2.0 * r) * std::pow(base, 2.0 * (1.0 - z));
}

RlsConstants solve_rls_constants(double tolerance) {
  if (!(tolerance >= 1e-10 && tolerance <= 1e-3))
    throw std::invalid_argument("solve_rls_constants: tolerance must be in [1e-10, 1e-3]");
  double z_ignore = 0;
  // feasible(r): max_z h(z, r) >= r; feasibility is monotone decreasing in r
  double lo = 1e-9;
  if (max_h_over_z(lo, z_ignore) < lo)
    throw std::runtime_error("solve_rls_constants: no feasible r found");
  double hi = 0.5 - 1e-9;
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    double mid = (lo + hi) / 2;
    if (max_h_over_z(mid, z_ignore) >= mid)
      lo = mid;
    else
      hi = mid;
  }
  RlsConstants out;
  out.r_star = lo;
  out.h_at_opt = max_h_over_z(lo, out.z_star);
  return out;
}

double ls_ratio() { return 0.5 * (1.0 - std::exp(-1.0)); }

MlsRatios mls_ratios(int d, double UjL, double UjS, double Uj, double cj,
                     double series_tol) {
  if (d < 2) throw std::invalid_argument("mls_ratios: requires d >= 2");
  if (!(series_tol > 0)) throw std::invalid_argument("mls_ratios: series_tol must be positive");
  if (!(cj > 0)) throw std::invalid_argument("mls_ratios: requires cj > 0");
  double slack = 1e-9 * cj;
  if (UjL < 0 || UjS < 0 || UjL + UjS > Uj + slack || Uj > cj + slack)
    throw std::invalid_argument("mls_ratios: requires 0 <= UjL, UjS with UjL + UjS <= Uj <= cj");

  // ratio for a reserved set with load U: (1/(d+1)) [ sum_{k=1}^d e^-a a^k/(k-1)!
  // + sum_{k>d} d e^-a a^k/k! ] with a = (d+1) U / cj; the first summand is
  // k * pmf(k), the second d * pmf(k)
  auto set_ratio = [&](double U) {
    double a = (d + 1) * U / cj;
    double s = poisson_series(a, 1, series_tol, [&](int k) {
      return k <= d ? static_cast<double>(k) : static_cast<double>(d);
    });
    return s / (d + 1);
  };

  MlsRatios out;
  out.ratio_L = set_ratio(UjL);
  out.ratio_S = set_ratio(UjS);
  // ratio_all = (Uj/cj)(1 - e^-d sum_{i>=d} (i-d+1) d^{i-1}/i!); the summand
  // equals (i-d+1) pmf(i) / d for N ~ Poisson(d)
  double tail = poisson_series(static_cast<double>(d), d, series_tol,
                               [&](int i) { return (i - d + 1) / static_cast<double>(d); });
  out.ratio_all = Uj / cj * (1.0 - tail);
  return out;
}

double corollary1_bound(int d) {
  if (d < 2) throw std::invalid_argument("corollary1_bound: requires d >= 2");
  double dd = static_cast<double>(d);
  double log_term = -dd + dd * std::log(dd) - std::lgamma(dd + 1.0);
  return 1.0 - std::exp(log_term) - 1.0 / dd;
}

double compound_poisson_tail_bound(double alpha, double beta, int l) {
  if (l < 2) throw std::invalid_argument("compound_poisson_tail_bound: requires l >= 2");
  if (!(beta >= 0) || beta > 1.0 / l + 1e-12)
    throw std::domain_error("compound_poisson_tail_bound: requires beta in [0, 1/l]");
  if (!(alpha >= 0) || alpha > 1 + 1e-12)
    throw std::domain_error("compound_poisson_tail_bound: requires alpha in [0, 1]");
  if (alpha == 0) return 0;
  double lambda = alpha * (l - 1) / (1.0 - beta);
  // E[min(N', l-1)] = sum_{k=0}^{l-2} P(N' > k), a finite sum
  double pmf = std::exp(-lambda);
  double cdf = 0;
  double expected_min = 0;
  for (int k = 0; k <= l - 2; ++k) {
    cdf += pmf;  // P(N' <= k)
    expected_min += 1.0 - cdf;
    pmf *= lambda / (k + 1);
  }
  return (1.0 - beta) / (l - 1) * expected_min;
}

}  // namespace reserve
