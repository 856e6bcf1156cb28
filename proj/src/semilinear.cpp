#include "pta/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pta {

namespace {

using I128 = __int128;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw std::overflow_error("vector addition overflow");
  return out;
}

}  // namespace

Vec::Vec(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("zero-dimensional vector");
  for (std::int64_t e : entries_)
    if (e < 0) throw std::invalid_argument("negative vector entry");
}

Vec Vec::zero(int dim) {
  return Vec(std::vector<std::int64_t>(static_cast<size_t>(dim), 0));
}

Vec Vec::operator+(const Vec& other) const {
  if (dim() != other.dim())
    throw std::invalid_argument("dimension mismatch in vector addition");
  std::vector<std::int64_t> out(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i)
    out[i] = checked_add(entries_[i], other.entries_[i]);
  return Vec(std::move(out));
}

bool Vec::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](std::int64_t e) { return e == 0; });
}

std::string Vec::to_string() const {
  std::string out;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(entries_[i]);
  }
  return out;
}

LinearSet::LinearSet(Vec base, std::vector<Vec> periods)
    : base_(std::move(base)) {
  for (Vec& p : periods) {
    if (p.dim() != base_.dim())
      throw std::invalid_argument("period dimension mismatch");
    if (!p.is_zero()) periods_.push_back(std::move(p));
  }
}

SemilinearSet::SemilinearSet(int dim, std::vector<LinearSet> components)
    : dim_(dim), components_(std::move(components)) {
  if (dim < 1) throw std::invalid_argument("semilinear dimension must be >= 1");
  for (const LinearSet& c : components_)
    if (c.dim() != dim)
      throw std::invalid_argument("component dimension mismatch");
}

namespace {

// Depth-first search over period coefficients. Periods are nonnegative and
// nonzero, so each coefficient is bounded by the residual. Fills `coeffs`
// with a witness on success.
bool match_periods(const std::vector<Vec>& periods, size_t index,
                   std::vector<std::int64_t>& residual,
                   std::vector<std::int64_t>& coeffs) {
  if (index == periods.size()) {
    return std::all_of(residual.begin(), residual.end(),
                       [](std::int64_t r) { return r == 0; });
  }
  const Vec& p = periods[index];
  std::int64_t max_coeff = -1;
  for (int c = 0; c < p.dim(); ++c) {
    if (p[c] == 0) continue;
    std::int64_t bound = residual[c] / p[c];
    if (max_coeff < 0 || bound < max_coeff) max_coeff = bound;
  }
  for (std::int64_t m = 0; m <= max_coeff; ++m) {
    coeffs[index] = m;
    if (match_periods(periods, index + 1, residual, coeffs)) return true;
    for (int c = 0; c < p.dim(); ++c) residual[c] -= p[c];
  }
  for (int c = 0; c < p.dim(); ++c)
    residual[c] += (max_coeff + 1) * p[c];
  coeffs[index] = 0;
  return false;
}

std::optional<std::vector<std::int64_t>> linear_member(const LinearSet& set,
                                                       const Vec& d) {
  std::vector<std::int64_t> residual(d.dim());
  for (int c = 0; c < d.dim(); ++c) {
    residual[c] = d[c] - set.base()[c];
    if (residual[c] < 0) return std::nullopt;
  }
  std::vector<std::int64_t> coeffs(set.periods().size(), 0);
  if (match_periods(set.periods(), 0, residual, coeffs)) return coeffs;
  return std::nullopt;
}

}  // namespace

bool member(const SemilinearSet& set, const Vec& d) {
  return membership_witness(set, d).has_value();
}

std::optional<MembershipWitness> membership_witness(const SemilinearSet& set,
                                                    const Vec& d) {
  if (d.dim() != set.dim())
    throw std::invalid_argument("dimension mismatch in semilinear membership");
  for (size_t i = 0; i < set.components().size(); ++i) {
    if (auto coeffs = linear_member(set.components()[i], d))
      return MembershipWitness{static_cast<int>(i), std::move(*coeffs)};
  }
  return std::nullopt;
}

namespace {

constexpr std::int64_t kCapLimit = 1'000'000'000'000'000LL;  // 1e15
constexpr long long kNodeBudget = 50'000'000;

struct Row {
  std::vector<std::int64_t> coeffs;
  std::int64_t rhs;
};

// Reduces a row by the gcd of its coefficients. Returns false when the row
// is unsatisfiable over the integers (0 = c, or gcd does not divide rhs).
bool normalize_row(Row& row) {
  std::int64_t g = 0;
  for (std::int64_t c : row.coeffs) g = std::gcd(g, c < 0 ? -c : c);
  if (g == 0) return row.rhs == 0;
  if (row.rhs % g != 0) return false;
  for (std::int64_t& c : row.coeffs) c /= g;
  row.rhs /= g;
  return true;
}

enum class EchelonStatus { Ok, Infeasible, Overflow };

// Integer Gauss-Jordan reduction along the given column order: each pivot
// column is eliminated from every other row. The reduced rows are
// consequences of the input rows, so they can be added to the system for
// pruning; single-variable rows and gcd conflicts (e.g. 2x - 2y = 1)
// surface directly instead of being rediscovered by value search.
EchelonStatus echelon_rows(const std::vector<Row>& rows, int num_vars,
                           const std::vector<int>& column_order,
                           std::vector<Row>& derived) {
  std::vector<Row> work = rows;
  for (Row& row : work)
    if (!normalize_row(row)) return EchelonStatus::Infeasible;
  size_t top = 0;
  for (int col : column_order) {
    if (top >= work.size()) break;
    size_t pivot = top;
    while (pivot < work.size() && work[pivot].coeffs[col] == 0) ++pivot;
    if (pivot == work.size()) continue;
    std::swap(work[top], work[pivot]);
    std::int64_t p = work[top].coeffs[col];
    for (size_t r = 0; r < work.size(); ++r) {
      if (r == top) continue;
      std::int64_t a = work[r].coeffs[col];
      if (a == 0) continue;
      std::int64_t g = std::gcd(p < 0 ? -p : p, a < 0 ? -a : a);
      I128 mul_r = p / g;
      I128 mul_p = a / g;
      for (int c = 0; c <= num_vars; ++c) {
        std::int64_t& slot =
            (c == num_vars) ? work[r].rhs : work[r].coeffs[c];
        std::int64_t other = (c == num_vars) ? work[top].rhs : work[top].coeffs[c];
        I128 v = mul_r * (I128)slot - mul_p * (I128)other;
        if (v > kCapLimit || v < -kCapLimit) return EchelonStatus::Overflow;
        slot = (std::int64_t)v;
      }
      if (!normalize_row(work[r])) return EchelonStatus::Infeasible;
    }
    ++top;
  }
  for (const Row& row : work) {
    bool zero = std::all_of(row.coeffs.begin(), row.coeffs.end(),
                            [](std::int64_t c) { return c == 0; });
    if (zero && row.rhs != 0) return EchelonStatus::Infeasible;
    if (!zero) derived.push_back(row);
  }
  return EchelonStatus::Ok;
}

// Fourier-Motzkin elimination on { rows hold with equality, x >= lb }.
// Every produced inequality is a nonnegative combination of the inputs,
// with bounds floored after gcd scaling, so any integer solution of the
// system satisfies it; a contradiction therefore certifies integer
// infeasibility. Inequalities are deduplicated with the tightest bound per
// coefficient vector, variables are eliminated cheapest-first, and the
// check gives up (returns false) when the system grows too large anyway.
bool rationally_infeasible(const std::vector<Row>& rows,
                           const std::vector<std::int64_t>& lb, int n) {
  constexpr size_t kRowLimit = 6000;
  constexpr size_t kComboLimit = 20000;

  std::map<std::vector<std::int64_t>, std::int64_t> ineqs;  // coeffs.x <= bound
  bool contradiction = false;
  auto add = [&](std::vector<std::int64_t> coeffs, std::int64_t bound) {
    std::int64_t g = 0;
    for (std::int64_t c : coeffs) g = std::gcd(g, c < 0 ? -c : c);
    if (g == 0) {
      if (bound < 0) contradiction = true;
      return;
    }
    for (std::int64_t& c : coeffs) c /= g;
    bound = bound >= 0 ? bound / g : -((-bound + g - 1) / g);
    auto it = ineqs.find(coeffs);
    if (it == ineqs.end())
      ineqs.emplace(std::move(coeffs), bound);
    else
      it->second = std::min(it->second, bound);
  };

  for (const Row& row : rows) {
    std::vector<std::int64_t> neg(row.coeffs.size());
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -row.coeffs[i];
    add(row.coeffs, row.rhs);
    add(std::move(neg), -row.rhs);
    if (contradiction) return true;
  }
  for (int v = 0; v < n; ++v) {
    std::vector<std::int64_t> coeffs(n, 0);
    coeffs[v] = -1;
    add(std::move(coeffs), -lb[v]);
  }

  std::vector<bool> eliminated(n, false);
  for (int round = 0; round < n; ++round) {
    int best = -1;
    size_t best_cost = 0;
    for (int v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      size_t pos = 0, negc = 0;
      for (const auto& [c, b] : ineqs) {
        if (c[v] > 0) ++pos;
        else if (c[v] < 0) ++negc;
      }
      size_t cost = pos * negc;
      if (best < 0 || cost < best_cost) {
        best = v;
        best_cost = cost;
      }
    }
    int v = best;
    eliminated[v] = true;
    std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> pos, neg;
    std::map<std::vector<std::int64_t>, std::int64_t> rest;
    for (auto& [c, b] : ineqs) {
      if (c[v] > 0) pos.emplace_back(c, b);
      else if (c[v] < 0) neg.emplace_back(c, b);
      else rest.emplace(c, b);
    }
    ineqs = std::move(rest);
    if (pos.size() * neg.size() > kComboLimit) return false;
    for (const auto& [pc, pb] : pos) {
      for (const auto& [mc, mb] : neg) {
        I128 a = pc[v];
        I128 b2 = -mc[v];
        std::vector<std::int64_t> combined(n);
        bool overflow = false;
        for (int c = 0; c < n; ++c) {
          I128 val = b2 * pc[c] + a * mc[c];
          if (val > kCapLimit || val < -kCapLimit) overflow = true;
          combined[c] = (std::int64_t)val;
        }
        I128 bound = b2 * pb + a * mb;
        if (bound > kCapLimit || bound < -kCapLimit) overflow = true;
        if (overflow) return false;
        add(std::move(combined), (std::int64_t)bound);
        if (contradiction) return true;
        if (ineqs.size() > kRowLimit) return false;
      }
    }
  }
  return false;
}

struct NonnegSolver {
  int n;
  std::vector<Row> rows;
  std::vector<std::int64_t> lb;
  std::int64_t cap;
  std::vector<std::int64_t> value;
  std::vector<bool> fixed;
  std::vector<int> order;  // negative-bearing variables first
  long long nodes = 0;

  // Variables that occur with a negative coefficient block the single-sign
  // value caps of every row they appear in, so they are fixed first; once
  // they are gone the remaining rows bound their variables tightly.
  void pick_order() {
    order.clear();
    std::vector<bool> negative(n, false);
    for (const Row& row : rows)
      for (int v = 0; v < n; ++v)
        if (row.coeffs[v] < 0) negative[v] = true;
    for (int v = 0; v < n; ++v)
      if (negative[v]) order.push_back(v);
    for (int v = 0; v < n; ++v)
      if (!negative[v]) order.push_back(v);
  }

  bool in_any_equation(int var) const {
    for (const Row& row : rows)
      if (row.coeffs[var] != 0) return true;
    return false;
  }

  // Residual of a row over its unfixed variables.
  I128 residual(const Row& row) const {
    I128 r = row.rhs;
    for (int v = 0; v < n; ++v)
      if (fixed[v] && row.coeffs[v] != 0) r -= (I128)row.coeffs[v] * value[v];
    return r;
  }

  void unfixed_range(const Row& row, int skip, I128& lo, I128& hi) const {
    lo = 0;
    hi = 0;
    for (int v = 0; v < n; ++v) {
      if (fixed[v] || v == skip || row.coeffs[v] == 0) continue;
      I128 a = row.coeffs[v];
      if (a > 0) {
        lo += a * (I128)lb[v];
        hi += a * (I128)cap;
      } else {
        lo += a * (I128)cap;
        hi += a * (I128)lb[v];
      }
    }
  }

  bool rows_feasible() const {
    for (const Row& row : rows) {
      I128 r = residual(row);
      I128 lo, hi;
      unfixed_range(row, -1, lo, hi);
      if (r < lo || r > hi) return false;
    }
    return true;
  }

  // Fixes every variable forced by a row with a single unfixed variable.
  // Returns false on contradiction; appends fixed vars to the trail.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Row& row : rows) {
        int unfixed = -1;
        int count = 0;
        for (int v = 0; v < n && count < 2; ++v) {
          if (!fixed[v] && row.coeffs[v] != 0) {
            unfixed = v;
            ++count;
          }
        }
        if (count == 1) {
          I128 r = residual(row);
          std::int64_t a = row.coeffs[unfixed];
          if (r % a != 0) return false;
          I128 x = r / a;
          if (x < lb[unfixed] || x > cap) return false;
          value[unfixed] = (std::int64_t)x;
          fixed[unfixed] = true;
          trail.push_back(unfixed);
          changed = true;
        } else if (count == 0) {
          if (residual(row) != 0) return false;
        }
      }
    }
    return rows_feasible();
  }

  void undo(const std::vector<int>& trail) {
    for (int v : trail) fixed[v] = false;
  }

  // Folds the fixed variables into the right-hand sides; the result speaks
  // only about the unfixed ones.
  std::vector<Row> residual_rows() const {
    std::vector<Row> out;
    out.reserve(rows.size());
    for (const Row& row : rows) {
      Row folded{std::vector<std::int64_t>(n, 0), row.rhs};
      for (int v = 0; v < n; ++v) {
        if (row.coeffs[v] == 0) continue;
        if (fixed[v])
          folded.rhs -= row.coeffs[v] * value[v];
        else
          folded.coeffs[v] = row.coeffs[v];
      }
      out.push_back(std::move(folded));
    }
    return out;
  }

  // Lattice (gcd) and elimination infeasibility of the residual system.
  // Both are needed to keep the value loops finite: fixing a variable can
  // introduce divisibility conflicts as well as sign conflicts that the
  // per-row interval checks cannot see. Weighted against the node budget
  // because one call costs as much as many plain nodes.
  bool residual_dead() {
    nodes += 64;
    std::vector<Row> residual = residual_rows();
    std::vector<int> natural(n);
    std::iota(natural.begin(), natural.end(), 0);
    std::vector<Row> derived;
    if (echelon_rows(residual, n, natural, derived) ==
        EchelonStatus::Infeasible)
      return true;
    return rationally_infeasible(residual, lb, n);
  }

  // Largest value worth trying for an unfixed variable, from rows where
  // every other unfixed coefficient has a single sign; nullopt when some
  // row already excludes even the lower bound.
  std::optional<I128> loop_limit(int var) const {
    I128 vmax = cap;
    for (const Row& row : rows) {
      std::int64_t a = row.coeffs[var];
      if (a == 0) continue;
      bool others_nonneg = true;
      bool others_nonpos = true;
      I128 others_at_lb = 0;
      for (int v = 0; v < n; ++v) {
        if (fixed[v] || v == var || row.coeffs[v] == 0) continue;
        if (row.coeffs[v] < 0) others_nonneg = false;
        if (row.coeffs[v] > 0) others_nonpos = false;
        others_at_lb += (I128)row.coeffs[v] * lb[v];
      }
      I128 r = residual(row);
      if (a > 0 && others_nonneg) {
        I128 room = r - others_at_lb;
        if (room < (I128)a * lb[var]) return std::nullopt;
        vmax = std::min(vmax, room / a);
      } else if (a < 0 && others_nonpos) {
        I128 room = others_at_lb - r;
        if (room < (I128)(-a) * lb[var]) return std::nullopt;
        vmax = std::min(vmax, room / (-a));
      }
    }
    return vmax;
  }

  bool search() {
    if (++nodes > kNodeBudget)
      throw std::runtime_error("solve_nonneg: search budget exceeded");
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      return false;
    }
    // Branch on the variable with the narrowest value range (ties broken
    // by the precomputed order); enumerating a forced window first exposes
    // conflicts that every wider sibling would merely rediscover.
    int var = -1;
    I128 best_range = 0;
    for (int candidate : order) {
      if (fixed[candidate]) continue;
      if (!in_any_equation(candidate)) {
        // Unconstrained variable; its lower bound is always optimal.
        value[candidate] = lb[candidate];
        fixed[candidate] = true;
        trail.push_back(candidate);
        continue;
      }
      auto limit = loop_limit(candidate);
      if (!limit) {
        undo(trail);
        return false;
      }
      I128 range = *limit - lb[candidate];
      if (var < 0 || range < best_range) {
        var = candidate;
        best_range = range;
      }
    }
    if (var < 0) {
      bool ok = true;
      for (const Row& row : rows)
        if (residual(row) != 0) ok = false;
      if (ok) return true;
      undo(trail);
      return false;
    }

    I128 vmax = lb[var] + best_range;

    // A wide value loop is only entered once lattice and elimination checks
    // on the residual system fail to rule the whole branch out; narrow
    // loops are cheaper to enumerate than to analyze.
    if (vmax - lb[var] > 64 && residual_dead()) {
      undo(trail);
      return false;
    }

    for (I128 v = lb[var]; v <= vmax; ++v) {
      value[var] = (std::int64_t)v;
      fixed[var] = true;
      bool feasible = true;
      bool hopeless = false;  // no larger v can work either
      for (const Row& row : rows) {
        if (row.coeffs[var] == 0) continue;
        I128 r = residual(row);
        I128 lo, hi;
        unfixed_range(row, -1, lo, hi);
        if (r < lo || r > hi) {
          feasible = false;
          if ((row.coeffs[var] > 0 && r < lo) ||
              (row.coeffs[var] < 0 && r > hi))
            hopeless = true;
          break;
        }
      }
      if (feasible && search()) return true;
      fixed[var] = false;
      if (hopeless) break;
    }
    undo(trail);
    return false;
  }
};

// Search bound for minimal solutions (Borosh-Treybig): when an integer
// linear system has a nonnegative solution, it has one bounded by the
// largest absolute minor of the augmented matrix. Hadamard's inequality
// caps every minor by the product of the euclidean row norms (each norm
// taken as at least 1, so dropping rows from a minor never increases the
// product). Saturates at 1e15.
std::int64_t search_cap(const std::vector<Row>& rows, int num_vars,
                        std::int64_t max_lb) {
  (void)num_vars;
  long double product = 1.0L;
  for (const Row& row : rows) {
    long double sq = (long double)row.rhs * row.rhs;
    for (std::int64_t c : row.coeffs) sq += (long double)c * c;
    long double norm = sqrtl(sq);
    product *= std::max(norm, 1.0L);
    if (product > (long double)kCapLimit) return kCapLimit;
  }
  // Round up and keep a safety factor of 2 for the float arithmetic.
  I128 bound = (I128)(product * 2.0L) + 1;
  I128 cap = bound + max_lb;
  return cap > kCapLimit ? kCapLimit : (std::int64_t)cap;
}

}  // namespace

std::optional<std::vector<std::int64_t>> solve_nonneg(const LinearSystem& sys) {
  if (sys.num_vars < 0) throw std::invalid_argument("negative variable count");
  if (static_cast<int>(sys.lower_bounds.size()) != sys.num_vars)
    throw std::invalid_argument("lower bound count mismatch");
  for (std::int64_t b : sys.lower_bounds)
    if (b < 0) throw std::invalid_argument("negative lower bound");

  std::vector<Row> rows;
  rows.reserve(sys.equations.size());
  for (const LinearEquation& eq : sys.equations) {
    if (static_cast<int>(eq.coefficients.size()) != sys.num_vars)
      throw std::invalid_argument("equation width mismatch");
    rows.push_back(Row{eq.coefficients, eq.rhs});
  }

  if (sys.num_vars == 0) {
    for (const Row& row : rows)
      if (row.rhs != 0) return std::nullopt;
    return std::vector<std::int64_t>{};
  }

  std::int64_t max_lb = 0;
  for (std::int64_t b : sys.lower_bounds) max_lb = std::max(max_lb, b);
  // The search bound is computed from the input rows; the reduced rows are
  // consequences and only added for propagation and pruning.
  std::int64_t cap = search_cap(rows, sys.num_vars, max_lb);

  // Two elimination passes: one in natural column order and one pivoting
  // the negative-bearing columns first, which produces rows free of those
  // variables (interval pruning is basis-dependent, so both help).
  std::vector<int> natural(sys.num_vars);
  std::iota(natural.begin(), natural.end(), 0);
  std::vector<int> negatives_first;
  {
    std::vector<bool> negative(sys.num_vars, false);
    for (const Row& row : rows)
      for (int v = 0; v < sys.num_vars; ++v)
        if (row.coeffs[v] < 0) negative[v] = true;
    for (int v = 0; v < sys.num_vars; ++v)
      if (negative[v]) negatives_first.push_back(v);
    for (int v = 0; v < sys.num_vars; ++v)
      if (!negative[v]) negatives_first.push_back(v);
  }
  if (rationally_infeasible(rows, sys.lower_bounds, sys.num_vars))
    return std::nullopt;

  for (const std::vector<int>& order : {natural, negatives_first}) {
    std::vector<Row> derived;
    EchelonStatus status = echelon_rows(rows, sys.num_vars, order, derived);
    if (status == EchelonStatus::Infeasible) return std::nullopt;
    if (status == EchelonStatus::Ok)
      rows.insert(rows.end(), derived.begin(), derived.end());
  }

  NonnegSolver solver;
  solver.n = sys.num_vars;
  solver.rows = std::move(rows);
  solver.lb = sys.lower_bounds;
  solver.cap = cap;
  solver.value.assign(sys.num_vars, 0);
  solver.fixed.assign(sys.num_vars, false);
  solver.pick_order();

  if (!solver.search()) return std::nullopt;
  return solver.value;
}

}  // namespace pta
