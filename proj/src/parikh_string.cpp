#include "pta/parikh_string.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace pta {

Pa::Pa(std::vector<std::string> states, int initial, std::vector<int> finals,
       std::vector<PaTransition> transitions, SemilinearSet constraint)
    : states_(std::move(states)),
      initial_(initial),
      finals_(std::move(finals)),
      transitions_(std::move(transitions)),
      constraint_(std::move(constraint)) {
  auto check_state = [&](int q) {
    if (q < 0 || q >= num_states())
      throw std::invalid_argument("state index out of range");
  };
  check_state(initial_);
  for (int f : finals_) check_state(f);
  for (const PaTransition& t : transitions_) {
    check_state(t.src);
    check_state(t.dst);
    if (t.delta.dim() != constraint_.dim())
      throw std::invalid_argument("transition vector dimension mismatch");
  }
}

bool Pa::is_final(int q) const {
  return std::find(finals_.begin(), finals_.end(), q) != finals_.end();
}

std::string word_of(const Pa& pa, const PaRun& run) {
  std::string out;
  for (int t : run.transitions) out += pa.transitions()[t].symbol;
  return out;
}

Vec sum_of(const Pa& pa, const PaRun& run) {
  Vec sum = Vec::zero(pa.dim());
  for (int t : run.transitions) sum = sum + pa.transitions()[t].delta;
  return sum;
}

bool run_valid(const Pa& pa, const PaRun& run) {
  int state = pa.initial();
  for (int t : run.transitions) {
    if (t < 0 || t >= static_cast<int>(pa.transitions().size())) return false;
    if (pa.transitions()[t].src != state) return false;
    state = pa.transitions()[t].dst;
  }
  if (!pa.is_final(state)) return false;
  return member(pa.constraint(), sum_of(pa, run));
}

namespace {

// Eulerian path through a multigraph given by transition multiplicities,
// by the standard cycle-splicing construction. Edge choices follow
// declaration order, so witnesses are deterministic.
PaRun eulerian_path(const Pa& pa, const std::vector<std::int64_t>& counts,
                    int start) {
  std::vector<std::vector<int>> out_edges(pa.num_states());
  for (size_t t = 0; t < counts.size(); ++t)
    for (std::int64_t c = 0; c < counts[t]; ++c)
      out_edges[pa.transitions()[t].src].push_back(static_cast<int>(t));
  std::vector<size_t> next(pa.num_states(), 0);

  std::vector<std::pair<int, int>> stack;  // (state, edge used to reach it)
  stack.emplace_back(start, -1);
  std::vector<int> reversed;
  while (!stack.empty()) {
    auto [v, via] = stack.back();
    if (next[v] < out_edges[v].size()) {
      int edge = out_edges[v][next[v]++];
      stack.emplace_back(pa.transitions()[edge].dst, edge);
    } else {
      stack.pop_back();
      if (via >= 0) reversed.push_back(via);
    }
  }
  std::reverse(reversed.begin(), reversed.end());
  return PaRun{std::move(reversed)};
}

// Flow conservation plus vector-sum system for one support, final state,
// and constraint component. Variables: one count per support transition
// (each >= 1) followed by one coefficient per period of the component.
std::optional<std::vector<std::int64_t>> solve_support(
    const Pa& pa, const std::vector<int>& support, const LinearSet& component,
    int final_state) {
  int n = static_cast<int>(support.size());
  int periods = static_cast<int>(component.periods().size());
  LinearSystem sys;
  sys.num_vars = n + periods;
  sys.lower_bounds.assign(n, 1);
  sys.lower_bounds.resize(n + periods, 0);

  for (int q = 0; q < pa.num_states(); ++q) {
    LinearEquation eq;
    eq.coefficients.assign(sys.num_vars, 0);
    for (int i = 0; i < n; ++i) {
      const PaTransition& t = pa.transitions()[support[i]];
      if (t.src == q) eq.coefficients[i] += 1;
      if (t.dst == q) eq.coefficients[i] -= 1;
    }
    eq.rhs = 0;
    if (q == pa.initial()) eq.rhs += 1;
    if (q == final_state) eq.rhs -= 1;
    bool nonzero = std::any_of(eq.coefficients.begin(), eq.coefficients.end(),
                               [](std::int64_t c) { return c != 0; });
    if (nonzero || eq.rhs != 0) sys.equations.push_back(std::move(eq));
  }

  for (int c = 0; c < pa.dim(); ++c) {
    LinearEquation eq;
    eq.coefficients.assign(sys.num_vars, 0);
    for (int i = 0; i < n; ++i)
      eq.coefficients[i] = pa.transitions()[support[i]].delta[c];
    for (int j = 0; j < periods; ++j)
      eq.coefficients[n + j] = -component.periods()[j][c];
    eq.rhs = component.base()[c];
    sys.equations.push_back(std::move(eq));
  }

  return solve_nonneg(sys);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// The support must form one weakly connected component containing both the
// initial and the final state; otherwise no single run can use every
// support transition.
bool support_connected(const Pa& pa, const std::vector<int>& support,
                       int final_state) {
  UnionFind uf(pa.num_states());
  for (int t : support)
    uf.unite(pa.transitions()[t].src, pa.transitions()[t].dst);
  int root = uf.find(pa.initial());
  if (uf.find(final_state) != root) return false;
  for (int t : support)
    if (uf.find(pa.transitions()[t].src) != root) return false;
  return true;
}

}  // namespace

PaEmptinessResult is_empty(const Pa& pa) {
  // The empty run first.
  if (pa.is_final(pa.initial()) &&
      member(pa.constraint(), Vec::zero(pa.dim())))
    return PaEmptinessResult{false, PaRun{}};

  int m = static_cast<int>(pa.transitions().size());
  if (m > 24)
    throw std::invalid_argument(
        "emptiness check enumerates transition subsets; refusing more than "
        "24 transitions");

  for (const LinearSet& component : pa.constraint().components()) {
    for (int final_state : pa.finals()) {
      for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> support;
        for (int t = 0; t < m; ++t)
          if (mask & (1u << t)) support.push_back(t);
        if (!support_connected(pa, support, final_state)) continue;
        auto solution = solve_support(pa, support, component, final_state);
        if (!solution) continue;
        std::vector<std::int64_t> counts(m, 0);
        for (size_t i = 0; i < support.size(); ++i)
          counts[support[i]] = (*solution)[i];
        PaRun witness = eulerian_path(pa, counts, pa.initial());
        if (!run_valid(pa, witness))
          throw std::logic_error("internal error: extracted run is invalid");
        return PaEmptinessResult{false, std::move(witness)};
      }
    }
  }
  return PaEmptinessResult{true, std::nullopt};
}

std::optional<PaRun> brute_force_nonempty(const Pa& pa, int max_len) {
  if (max_len < 0) throw std::invalid_argument("negative length bound");
  struct Node {
    int state;
    Vec sum;
    int parent;      // index into `seen`
    int transition;  // edge into this node, -1 at the root
  };
  std::vector<Node> seen;
  std::map<std::pair<int, Vec>, bool> visited;

  auto reconstruct = [&](int index) {
    std::vector<int> out;
    while (seen[index].transition >= 0) {
      out.push_back(seen[index].transition);
      index = seen[index].parent;
    }
    std::reverse(out.begin(), out.end());
    return PaRun{std::move(out)};
  };

  seen.push_back(Node{pa.initial(), Vec::zero(pa.dim()), -1, -1});
  visited[{pa.initial(), seen[0].sum}] = true;
  size_t frontier_begin = 0;
  size_t frontier_end = 1;
  for (int len = 0; len <= max_len; ++len) {
    for (size_t i = frontier_begin; i < frontier_end; ++i) {
      if (pa.is_final(seen[i].state) && member(pa.constraint(), seen[i].sum))
        return reconstruct(static_cast<int>(i));
    }
    if (len == max_len) break;
    for (size_t i = frontier_begin; i < frontier_end; ++i) {
      for (size_t t = 0; t < pa.transitions().size(); ++t) {
        const PaTransition& tr = pa.transitions()[t];
        if (tr.src != seen[i].state) continue;
        Vec sum = seen[i].sum + tr.delta;
        auto key = std::make_pair(tr.dst, sum);
        if (visited.count(key)) continue;
        visited[key] = true;
        seen.push_back(Node{tr.dst, std::move(sum), static_cast<int>(i),
                            static_cast<int>(t)});
      }
    }
    frontier_begin = frontier_end;
    frontier_end = seen.size();
  }
  return std::nullopt;
}

}  // namespace pta
