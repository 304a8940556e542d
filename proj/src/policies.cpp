#include "reserve/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reserve/constants.hpp"

namespace reserve {

namespace {

const RlsConstants& default_rls_constants() {
  static const RlsConstants k = solve_rls_constants(1e-9);
  return k;
}

// choice ties resolve toward the earlier option at relative slack
bool at_least(double lhs, double rhs, double scale) {
  return lhs >= rhs - 1e-9 * std::max(1.0, scale);
}

int route_pick(const PolicyConfig& cfg, int type_id, std::mt19937_64& rng) {
  // one uniform draw per arrival keeps replicate streams aligned across
  // the routing policies under common random numbers
  double v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (const auto& [cum, j] : cfg.route[type_id])
    if (v < cum) return j;
  return -1;  // residual routing mass: immediate rejection
}

bool fits(const PolicyRun& run, int type_id, int j) {
  return run.remaining[j] >= run.cfg->inst->u(type_id, j) - kCapacityEps;
}

int accept(PolicyRun& run, int type_id, int j) {
  run.remaining[j] -= run.cfg->inst->u(type_id, j);
  return j;
}

int reserved_route_decide(PolicyRun& run, int type_id, std::mt19937_64& rng) {
  const PolicyConfig& cfg = *run.cfg;
  int j = route_pick(cfg, type_id, rng);
  if (j < 0) return -1;
  if (!cfg.admits(type_id, j) || !fits(run, type_id, j)) return -1;
  return accept(run, type_id, j);
}

}  // namespace

PolicyName parse_policy_name(const std::string& name) {
  if (name == "ls") return PolicyName::ls;
  if (name == "mls") return PolicyName::mls;
  if (name == "rls") return PolicyName::rls;
  if (name == "grd") return PolicyName::grd;
  if (name == "rsrv") return PolicyName::rsrv;
  if (name == "pd") return PolicyName::pd;
  throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_name_str(PolicyName name) {
  switch (name) {
    case PolicyName::ls: return "ls";
    case PolicyName::mls: return "mls";
    case PolicyName::rls: return "rls";
    case PolicyName::grd: return "grd";
    case PolicyName::rsrv: return "rsrv";
    case PolicyName::pd: return "pd";
  }
  throw std::invalid_argument("unknown policy enum value");
}

TypeClassification classify_types(const Instance& inst, const FractionalRouting& routing,
                                  ClassifyVariant variant, int d, double z_star) {
  if (routing.n != inst.n() || routing.m != inst.m())
    throw std::invalid_argument("classification requires matching routing dimensions");
  TypeClassification c;
  c.variant = variant;
  c.n = inst.n();
  c.m = inst.m();
  if (variant == ClassifyVariant::mls) {
    if (d < 2) throw std::invalid_argument("mls threshold parameter must be at least 2");
    c.d = d;
  }
  if (variant == ClassifyVariant::rls)
    c.z_star = z_star > 0 ? z_star : default_rls_constants().z_star;

  std::size_t cells = static_cast<std::size_t>(c.n) * c.m;
  c.feasible.assign(cells, 0);
  c.in_L.assign(cells, 0);
  c.in_M.assign(cells, 0);
  c.U.assign(c.m, 0.0);
  c.UL.assign(c.m, 0.0);
  c.US.assign(c.m, 0.0);
  c.UM.assign(c.m, 0.0);
  c.UT.assign(c.m, 0.0);
  c.muL.assign(c.m, 0.0);
  c.muM.assign(c.m, 0.0);

  for (int j = 0; j < c.m; ++j) {
    double cap = inst.resources[j].capacity;
    double threshold = variant == ClassifyVariant::mls ? cap / (c.d + 1) : cap / 2;
    for (int i = 0; i < c.n; ++i) {
      double u = inst.u(i, j);
      std::size_t cell = static_cast<std::size_t>(i) * c.m + j;
      if (u > 0) c.feasible[cell] = 1;
      if (variant == ClassifyVariant::mls && u > cap / c.d * (1 + 1e-12))
        throw std::invalid_argument("types[" + std::to_string(i) + "].utilization[" +
                                    std::to_string(j) + "] exceeds capacity/d, so the threshold " +
                                    "policy with d = " + std::to_string(c.d) + " does not apply");
      bool large = u > threshold;
      if (large) c.in_L[cell] = 1;
      bool medium = variant == ClassifyVariant::rls && !large && u >= c.z_star * cap;
      if (medium) c.in_M[cell] = 1;
      double x = std::max(0.0, routing.at(i, j));
      double mass = x * u;
      c.U[j] += mass;
      if (large) {
        c.UL[j] += mass;
        c.muL[j] += x;
      } else {
        c.US[j] += mass;
        if (medium) {
          c.UM[j] += mass;
          c.muM[j] += x;
        } else {
          c.UT[j] += mass;
        }
      }
    }
  }
  return c;
}

PolicyConfig make_policy_config(const Instance& inst, const FractionalRouting& routing,
                                PolicyName name, const PolicyOptions& options) {
  if (routing.n != inst.n() || routing.m != inst.m())
    throw std::invalid_argument("routing dimensions do not match the instance");
  const int n = inst.n();
  const int m = inst.m();
  PolicyConfig cfg;
  cfg.name = name;
  cfg.inst = &inst;
  cfg.routing = &routing;

  const bool uses_routing =
      name == PolicyName::ls || name == PolicyName::mls || name == PolicyName::rls;
  if (uses_routing) {
    cfg.route.resize(n);
    for (int i = 0; i < n; ++i) {
      double lambda = inst.types[i].lambda_total;
      if (!(lambda > 0)) continue;
      double cum = 0;
      for (int j = 0; j < m; ++j) {
        double x = routing.at(i, j);
        if (x <= 0) continue;
        cum += x / lambda;
        cfg.route[i].emplace_back(std::min(cum, 1.0), j);
      }
    }
  }

  // assignment preference: soonest day then index; index alone otherwise
  cfg.feasible_order.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j)
      if (inst.u(i, j) > 0) cfg.feasible_order[i].push_back(j);
    if (inst.scheduling) {
      const std::vector<int>& day = inst.scheduling->resource_day;
      std::sort(cfg.feasible_order[i].begin(), cfg.feasible_order[i].end(),
                [&day](int a, int b) { return day[a] != day[b] ? day[a] < day[b] : a < b; });
    }
  }

  std::size_t cells = static_cast<std::size_t>(n) * m;
  auto feasible_only = [&](auto&& keep) {
    cfg.admit.assign(cells, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (inst.u(i, j) > 0 && keep(i, j))
          cfg.admit[static_cast<std::size_t>(i) * m + j] = 1;
  };

  switch (name) {
    case PolicyName::ls: {
      cfg.cls = classify_types(inst, routing, ClassifyVariant::ls);
      cfg.reserve_choice.resize(m);
      for (int j = 0; j < m; ++j)
        cfg.reserve_choice[j] = at_least(cfg.cls.UL[j], cfg.cls.US[j], cfg.cls.U[j])
                                    ? ReservedChoice::large
                                    : ReservedChoice::small;
      feasible_only([&](int i, int j) {
        bool large = cfg.cls.large(i, j);
        return cfg.reserve_choice[j] == ReservedChoice::large ? large : !large;
      });
      break;
    }
    case PolicyName::mls: {
      int d = options.mls_d;
      if (d == 0) {
        double worst = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < m; ++j)
            worst = std::max(worst, inst.u(i, j) / inst.resources[j].capacity);
        if (worst > 0.5 * (1 + 1e-12))
          throw std::invalid_argument(
              "threshold policy needs every utilization at most half the capacity");
        // cap keeps the reservation series cheap on near-zero utilizations
        d = worst > 0 ? std::min(100, static_cast<int>((1 + 1e-12) / worst)) : 100;
      }
      if (d < 2) throw std::invalid_argument("mls threshold parameter must be at least 2");
      cfg.mls_d = d;
      cfg.cls = classify_types(inst, routing, ClassifyVariant::mls, d);
      cfg.reserve_choice.resize(m);
      for (int j = 0; j < m; ++j) {
        MlsRatios r = mls_ratios(d, cfg.cls.UL[j], cfg.cls.US[j], cfg.cls.U[j],
                                 inst.resources[j].capacity);
        double best = std::max({r.ratio_L, r.ratio_S, r.ratio_all});
        if (at_least(r.ratio_L, best, 1.0))
          cfg.reserve_choice[j] = ReservedChoice::large;
        else if (at_least(r.ratio_S, best, 1.0))
          cfg.reserve_choice[j] = ReservedChoice::small;
        else
          cfg.reserve_choice[j] = ReservedChoice::all;
      }
      feasible_only([&](int i, int j) {
        switch (cfg.reserve_choice[j]) {
          case ReservedChoice::large: return cfg.cls.large(i, j);
          case ReservedChoice::small: return !cfg.cls.large(i, j);
          case ReservedChoice::all: return true;
        }
        return false;
      });
      break;
    }
    case PolicyName::rls: {
      const RlsConstants& defaults = default_rls_constants();
      cfg.r_star = options.r_star > 0 ? options.r_star : defaults.r_star;
      cfg.z_star = options.z_star > 0 ? options.z_star : defaults.z_star;
      cfg.cls = classify_types(inst, routing, ClassifyVariant::rls, 0, cfg.z_star);
      cfg.type_a.resize(m);
      for (int j = 0; j < m; ++j) {
        double cap = inst.resources[j].capacity;
        double load = std::min(cfg.cls.U[j], cap);
        double arg_s = std::max(1e-12, 1 - 2 * cfg.r_star * load / cap);
        double arg_t = std::max(1e-12, 1 - cfg.r_star * load / (cap * (1 - cfg.z_star)));
        bool a = cfg.cls.US[j] >= -0.5 * cap * std::log(arg_s) ||
                 cfg.cls.UT[j] >= -(1 - cfg.z_star) * cap * std::log(arg_t);
        cfg.type_a[j] = a ? 1 : 0;
      }
      feasible_only([&](int i, int j) {
        return cfg.type_a[j] != 0 || cfg.cls.large(i, j) || cfg.cls.medium(i, j);
      });
      break;
    }
    case PolicyName::grd: {
      feasible_only([](int, int) { return true; });
      break;
    }
    case PolicyName::rsrv: {
      if (!inst.scheduling)
        throw std::invalid_argument("nested reservation needs scheduling metadata");
      feasible_only([](int, int) { return true; });
      cfg.tranche.assign(m, {});
      for (int i = 0; i < n; ++i) {
        int k = inst.scheduling->type_category[i];
        for (int j = 0; j < m; ++j)
          cfg.tranche[j][k] += std::max(0.0, routing.at(i, j)) * inst.u(i, j);
      }
      for (int j = 0; j < m; ++j) {
        double cap = inst.resources[j].capacity;
        double total = 0;
        for (double t : cfg.tranche[j]) total += t;
        if (total > kCapacityEps) {
          for (double& t : cfg.tranche[j]) t *= cap / total;
        } else {
          for (double& t : cfg.tranche[j]) t = cap / 6;
        }
      }
      break;
    }
    case PolicyName::pd: {
      feasible_only([](int, int) { return true; });
      double r_max = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
          if (inst.u(i, j) > 0)
            r_max = std::max(r_max, inst.u(i, j) / inst.resources[j].capacity);
      // C = (1 + r)^(1/r) falls from e toward 2 as the largest request grows
      cfg.pd_c_minus_1 = r_max > 0 ? std::pow(1 + r_max, 1 / r_max) - 1 : std::exp(1.0) - 1;
      break;
    }
  }

  // masks for policies that classify nothing still need valid dimensions
  if (cfg.cls.feasible.empty()) {
    cfg.cls.n = n;
    cfg.cls.m = m;
    cfg.cls.feasible.assign(cells, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (inst.u(i, j) > 0) cfg.cls.feasible[static_cast<std::size_t>(i) * m + j] = 1;
  }
  return cfg;
}

PolicyRun::PolicyRun(const PolicyConfig& config) : cfg(&config) {
  const Instance& inst = *config.inst;
  remaining.resize(inst.m());
  for (int j = 0; j < inst.m(); ++j) remaining[j] = inst.resources[j].capacity;
  if (config.name == PolicyName::pd) duals.assign(inst.m(), 0.0);
  if (config.name == PolicyName::rsrv) tranche_rem = config.tranche;
}

int ls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng) {
  return reserved_route_decide(run, type_id, rng);
}

int mls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng) {
  return reserved_route_decide(run, type_id, rng);
}

int rls_decide(PolicyRun& run, int type_id, std::mt19937_64& rng) {
  const PolicyConfig& cfg = *run.cfg;
  int j = route_pick(cfg, type_id, rng);
  if (j < 0) return -1;  // routing residual skips the sharing step
  if (cfg.admits(type_id, j) && fits(run, type_id, j)) return accept(run, type_id, j);
  // admission-step rejection: fall back to the admissible resource with the
  // largest remaining capacity, lowest index on ties
  int best = -1;
  for (int other = 0; other < cfg.inst->m(); ++other) {
    if (other == j || !cfg.admits(type_id, other) || !fits(run, type_id, other)) continue;
    if (best < 0 || run.remaining[other] > run.remaining[best]) best = other;
  }
  if (best < 0) return -1;
  return accept(run, type_id, best);
}

int grd_decide(PolicyRun& run, int type_id) {
  for (int j : run.cfg->feasible_order[type_id])
    if (fits(run, type_id, j)) return accept(run, type_id, j);
  return -1;
}

int rsrv_decide(PolicyRun& run, int type_id) {
  const PolicyConfig& cfg = *run.cfg;
  int k = cfg.inst->scheduling->type_category[type_id];
  for (int j : cfg.feasible_order[type_id]) {
    double u = cfg.inst->u(type_id, j);
    if (run.remaining[j] < u - kCapacityEps) continue;
    // nested access: a category may spend its own tranche plus every
    // lower-priority tranche
    double avail = 0;
    for (int kk = k; kk < 6; ++kk) avail += run.tranche_rem[j][kk];
    if (avail < u - kCapacityEps) continue;
    double need = u;
    for (int kk = k; kk < 6 && need > 0; ++kk) {
      double take = std::min(need, run.tranche_rem[j][kk]);
      run.tranche_rem[j][kk] -= take;
      need -= take;
    }
    return accept(run, type_id, j);
  }
  return -1;
}

int pd_decide(PolicyRun& run, int type_id) {
  const PolicyConfig& cfg = *run.cfg;
  const Instance& inst = *cfg.inst;
  int best = -1;
  double best_value = 0;
  for (int j = 0; j < inst.m(); ++j) {
    double u = inst.u(type_id, j);
    if (!(u > 0) || !fits(run, type_id, j)) continue;
    double value = u * (1 - run.duals[j]);
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  if (best < 0) return -1;
  double u = inst.u(type_id, best);
  double cap = inst.resources[best].capacity;
  run.duals[best] = run.duals[best] * (1 + u / cap) + u / (cfg.pd_c_minus_1 * cap);
  return accept(run, type_id, best);
}

int PolicyRun::decide(int type_id, std::mt19937_64& rng) {
  switch (cfg->name) {
    case PolicyName::ls: return ls_decide(*this, type_id, rng);
    case PolicyName::mls: return mls_decide(*this, type_id, rng);
    case PolicyName::rls: return rls_decide(*this, type_id, rng);
    case PolicyName::grd: return grd_decide(*this, type_id);
    case PolicyName::rsrv: return rsrv_decide(*this, type_id);
    case PolicyName::pd: return pd_decide(*this, type_id);
  }
  throw std::invalid_argument("unknown policy enum value");
}

}  // namespace reserve
