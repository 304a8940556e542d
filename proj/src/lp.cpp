#include "reserve/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace reserve {

namespace {

// Dense tableau simplex for max c^T x s.t. A x <= b, x >= 0 with b >= 0.
// Bland's rule throughout: entering = lowest-index column with a negative
// reduced cost, leaving = among minimum-ratio rows the one whose basic
// variable has the lowest index. Guarantees termination without cycling.
struct SimplexTableau {
  int rows = 0;
  int cols = 0;  // structural + slack columns, excluding rhs
  std::vector<double> a;  // (rows + 1) x (cols + 1), last row = reduced costs
  std::vector<int> basis;

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }

  void pivot(int pr, int pc) {
    double piv = at(pr, pc);
    for (int c = 0; c <= cols; ++c) at(pr, c) /= piv;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0;
    }
    basis[pr] = pc;
  }

  void solve(double cost_scale) {
    const double enter_tol = 1e-9 * cost_scale;
    const long max_iters = 1000 + 50L * (rows + cols);
    for (long iter = 0;; ++iter) {
      if (iter > max_iters) throw std::runtime_error("lp solver exceeded iteration limit");
      int pc = -1;
      for (int c = 0; c < cols; ++c)
        if (at(rows, c) < -enter_tol) {
          pc = c;
          break;
        }
      if (pc < 0) return;
      int pr = -1;
      double best = 0;
      for (int r = 0; r < rows; ++r) {
        double arc = at(r, pc);
        if (arc <= 1e-11) continue;
        double ratio = at(r, cols) / arc;
        if (pr < 0 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis[r] < basis[pr]))
          pr = r, best = ratio;
      }
      if (pr < 0) throw std::runtime_error("lp solver found an unbounded direction");
      pivot(pr, pc);
    }
  }
};

[[noreturn]] void check_fail(const std::string& message) {
  throw std::invalid_argument("routing check failed: " + message);
}

}  // namespace

FractionalRouting solve_routing_lp(const Instance& inst) {
  const int n = inst.n();
  const int m = inst.m();
  // structural columns only for variables that can carry value
  std::vector<std::pair<int, int>> col_var;
  for (int i = 0; i < n; ++i) {
    if (!(inst.types[i].lambda_total > 0)) continue;
    for (int j = 0; j < m; ++j)
      if (inst.u(i, j) > 0) col_var.emplace_back(i, j);
  }
  const int ns = static_cast<int>(col_var.size());

  SimplexTableau t;
  t.rows = m + n;
  t.cols = ns + t.rows;
  t.a.assign(static_cast<std::size_t>(t.rows + 1) * (t.cols + 1), 0.0);
  t.basis.resize(t.rows);
  double cost_scale = 1.0;
  for (int c = 0; c < ns; ++c) {
    auto [i, j] = col_var[c];
    double u = inst.u(i, j);
    t.at(j, c) = u;
    t.at(m + i, c) = 1.0;
    t.at(t.rows, c) = -u;
    cost_scale = std::max(cost_scale, u);
  }
  for (int r = 0; r < t.rows; ++r) {
    t.at(r, ns + r) = 1.0;
    t.basis[r] = ns + r;
  }
  for (int j = 0; j < m; ++j) t.at(j, t.cols) = inst.resources[j].capacity;
  for (int i = 0; i < n; ++i) t.at(m + i, t.cols) = inst.types[i].lambda_total;

  t.solve(cost_scale);

  FractionalRouting out;
  out.n = n;
  out.m = m;
  out.x.assign(static_cast<std::size_t>(n) * m, 0.0);
  for (int r = 0; r < t.rows; ++r) {
    int b = t.basis[r];
    if (b >= ns) continue;
    auto [i, j] = col_var[b];
    out.at(i, j) = std::max(0.0, t.at(r, t.cols));
  }
  double obj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) obj += out.at(i, j) * inst.u(i, j);
  out.objective = obj;
  return out;
}

FractionalRouting solve_layered_greedy(const Instance& inst) {
  if (!inst.scheduling)
    throw std::invalid_argument("layered greedy requires scheduling metadata");
  const SchedulingInfo& s = *inst.scheduling;
  const int n = inst.n();
  const int m = inst.m();
  const int S = s.sessions_per_day;

  FractionalRouting out;
  out.n = n;
  out.m = m;
  out.x.assign(static_cast<std::size_t>(n) * m, 0.0);
  std::vector<double> room(m);
  for (int j = 0; j < m; ++j) room[j] = inst.resources[j].capacity;

  // type lookup by (day, category); generator emits all six per day
  std::vector<int> type_of(static_cast<std::size_t>(s.days) * 6, -1);
  for (int i = 0; i < n; ++i) type_of[s.type_day[i] * 6 + s.type_category[i]] = i;

  auto fill = [&](int i, int first_day, int last_day) {
    const double dur = kCategoryMinutes[s.type_category[i]];
    double mass = inst.types[i].lambda_total * dur;
    for (int j = first_day * S; j < (last_day + 1) * S && mass > 0; ++j) {
      double take = std::min(mass, room[j]);
      if (take <= 0) continue;
      out.at(i, j) += take / dur;
      room[j] -= take;
      mass -= take;
    }
  };

  // urgent demand first: it can only use its own day
  for (int d = 0; d < s.days; ++d)
    for (int k = 0; k < 3; ++k) {
      int i = type_of[d * 6 + k];
      if (i >= 0) fill(i, d, d);
    }
  // regulars by arrival day, packed into the earliest open session of the
  // booking window; identical windows make the category order immaterial
  for (int d = 0; d < s.days; ++d)
    for (int k = 3; k < 6; ++k) {
      int i = type_of[d * 6 + k];
      if (i >= 0) fill(i, d, std::min(d + s.deadline_days, s.days - 1));
    }

  double obj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) obj += out.at(i, j) * inst.u(i, j);
  out.objective = obj;
  return out;
}

void check_routing(const Instance& inst, const FractionalRouting& r, double rel_tol) {
  if (r.n != inst.n() || r.m != inst.m()) check_fail("dimension mismatch with instance");
  if (r.x.size() != static_cast<std::size_t>(r.n) * r.m) check_fail("x has wrong size");
  for (double v : r.x)
    if (!std::isfinite(v)) check_fail("x has a non-finite entry");
  if (!std::isfinite(r.objective)) check_fail("objective is not finite");
  for (int i = 0; i < r.n; ++i) {
    double row = 0;
    for (int j = 0; j < r.m; ++j) {
      double v = r.at(i, j);
      if (v < -rel_tol * std::max(1.0, inst.types[i].lambda_total))
        check_fail("x[" + std::to_string(i) + "][" + std::to_string(j) + "] is negative");
      row += v;
    }
    double cap = inst.types[i].lambda_total;
    if (row > cap + rel_tol * std::max(1.0, cap))
      check_fail("type " + std::to_string(i) + " is routed more than its arrival mass");
  }
  for (int j = 0; j < r.m; ++j) {
    double load = 0;
    for (int i = 0; i < r.n; ++i) load += r.at(i, j) * inst.u(i, j);
    double cap = inst.resources[j].capacity;
    if (load > cap * (1 + rel_tol) + rel_tol)
      check_fail("resource " + std::to_string(j) + " is loaded beyond capacity");
  }
  double obj = 0;
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.m; ++j) obj += r.at(i, j) * inst.u(i, j);
  if (std::abs(obj - r.objective) > rel_tol * std::max(1.0, std::abs(obj)))
    check_fail("objective disagrees with x");
}

bool upper_bound_check(const Instance& inst, const FractionalRouting& r, double offline_mean,
                       double offline_se) {
  (void)inst;
  return offline_mean <= r.objective + 3 * offline_se + 1e-9 * std::max(1.0, std::abs(r.objective));
}

std::string routing_to_json(const FractionalRouting& r) {
  nlohmann::json doc;
  doc["n"] = r.n;
  doc["m"] = r.m;
  doc["objective"] = r.objective;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < r.n; ++i) {
    auto row = nlohmann::json::array();
    for (int j = 0; j < r.m; ++j) row.push_back(r.at(i, j));
    rows.push_back(std::move(row));
  }
  doc["x"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace reserve
