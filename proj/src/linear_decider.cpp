#include "pta/linear_decider.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pta {

HatAutomaton hat_automaton(const Ptar& a) {
  if (!is_linear(a))
    throw std::invalid_argument("hat automaton requires a linear automaton");
  int n = a.num_states();
  std::vector<std::string> states = a.states();
  for (int q = 0; q < n; ++q) states.push_back(a.state_name(q) + "^");

  std::vector<PtarTransition> transitions;
  transitions.reserve(a.transitions().size());
  for (const PtarTransition& t : a.transitions()) {
    PtarTransition ht{t.src + n, t.symbol, t.successors};
    for (PtarSuccessor& s : ht.successors)
      if (!s.action.is_reset()) s.state += n;
    transitions.push_back(std::move(ht));
  }
  Ptar hat(std::move(states), a.alphabet(), a.initial() + n,
           std::move(transitions), a.constraint());
  return HatAutomaton{std::move(hat), n};
}

int SpinalComputationTree::height() const {
  int h = 0;
  for (const SpinalComputationTree& c : children) h = std::max(h, c.height());
  return h + 1;
}

Tree spinal_tree_value(const SpinalComputationTree& d) {
  if (d.children.size() != d.spine.statepos.size())
    throw std::invalid_argument("spinal tree child count mismatch");
  PartialTree result = d.spine.result;
  for (size_t i = 0; i < d.children.size(); ++i) {
    Tree sub = spinal_tree_value(d.children[i]);
    result = result.replaced(d.spine.statepos[i],
                             PartialTree::from_tree(sub));
  }
  auto tree = result.to_tree();
  if (!tree)
    throw std::logic_error("spinal value left unresolved configurations");
  return *tree;
}

namespace {

// Runs the listed transitions on the hat automaton from the hatted start
// state, tracking the unique counter-carrying position. Throws when the
// sequence is not a spine computation.
SpineComputation replay_spine(const HatAutomaton& hat, int start,
                              const std::vector<int>& transitions) {
  if (transitions.empty())
    throw std::invalid_argument("spine computations have positive length");
  const Ptar& h = hat.automaton;
  PartialTree current = PartialTree::config(
      Configuration{hat.hat(start), Vec::zero(h.dim())});
  std::optional<Position> head = Position{};
  for (int t : transitions) {
    if (!head)
      throw std::invalid_argument("spine continues after its ending step");
    current = step(h, current, *head, t);
    const PtarTransition& ht = h.transitions()[t];
    std::optional<Position> next;
    for (size_t i = 0; i < ht.successors.size(); ++i) {
      if (hat.is_hat(ht.successors[i].state)) {
        Position p = *head;
        p.push_back(static_cast<int>(i) + 1);
        next = std::move(p);
        break;
      }
    }
    head = std::move(next);
  }
  if (head)
    throw std::invalid_argument("spine did not end in a leaf or all-reset step");

  std::vector<Position> statepos = current.config_positions();
  std::vector<int> stateseq;
  for (const Position& p : statepos) {
    const Configuration& c = current.at(p).configuration();
    if (!c.counters.is_zero())
      throw std::logic_error("residual configuration carries counters");
    stateseq.push_back(c.state);
  }
  return SpineComputation{start, transitions, std::move(current),
                          std::move(statepos), std::move(stateseq)};
}

}  // namespace

bool spine_valid(const Ptar& a, const SpineComputation& s) {
  try {
    HatAutomaton hat = hat_automaton(a);
    SpineComputation replayed = replay_spine(hat, s.start_state, s.transitions);
    return replayed.result == s.result && replayed.statepos == s.statepos &&
           replayed.stateseq == s.stateseq;
  } catch (const std::exception&) {
    return false;
  }
}

namespace {

// Breadth-first search for one spine computation from `state` whose
// residual states all lie in `allowed`. Counter values are bounded by the
// length bound, so the search space is finite.
std::optional<std::vector<int>> find_spine(const Ptar& a, int state,
                                           const std::vector<bool>& allowed,
                                           int max_spine_length) {
  struct Node {
    int state;
    Vec counters;
    int parent;
    int transition;
  };
  std::vector<Node> seen;
  std::set<std::pair<int, Vec>> visited;
  seen.push_back(Node{state, Vec::zero(a.dim()), -1, -1});
  visited.insert({state, seen[0].counters});

  auto path_of = [&](int index, int ending) {
    std::vector<int> out{ending};
    while (seen[index].transition >= 0) {
      out.push_back(seen[index].transition);
      index = seen[index].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  size_t begin = 0, end = 1;
  for (int len = 0; len < max_spine_length; ++len) {
    for (size_t i = begin; i < end; ++i) {
      for (size_t ti = 0; ti < a.transitions().size(); ++ti) {
        const PtarTransition& t = a.transitions()[ti];
        if (t.src != seen[i].state) continue;
        if (t.successors.empty()) {
          if (member(a.constraint(), seen[i].counters))
            return path_of(static_cast<int>(i), static_cast<int>(ti));
          continue;
        }
        int add_child = -1;
        bool residuals_ok = true;
        for (size_t c = 0; c < t.successors.size(); ++c) {
          if (t.successors[c].action.is_reset()) {
            if (!allowed[t.successors[c].state]) residuals_ok = false;
          } else {
            add_child = static_cast<int>(c);
          }
        }
        if (!residuals_ok) continue;
        if (add_child < 0)
          return path_of(static_cast<int>(i), static_cast<int>(ti));
        Vec w = seen[i].counters + *t.successors[add_child].action.add;
        auto key = std::make_pair(t.successors[add_child].state, w);
        if (visited.count(key)) continue;
        visited.insert(key);
        seen.push_back(Node{key.first, std::move(w), static_cast<int>(i),
                            static_cast<int>(ti)});
      }
    }
    begin = end;
    end = seen.size();
    if (begin == end) break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SpinalComputationTree> spinal_search(const Ptar& a, int state,
                                                   int max_height,
                                                   int max_spine_length) {
  if (!is_linear(a))
    throw std::invalid_argument("spinal search requires a linear automaton");
  HatAutomaton hat = hat_automaton(a);
  int n = a.num_states();
  std::vector<int> level(n, -1);
  std::vector<std::vector<int>> spine_of(n);

  for (int lvl = 1; lvl <= max_height; ++lvl) {
    std::vector<bool> allowed(n, false);
    for (int q = 0; q < n; ++q) allowed[q] = level[q] >= 0;
    bool changed = false;
    for (int q = 0; q < n; ++q) {
      if (level[q] >= 0) continue;
      if (auto spine = find_spine(a, q, allowed, max_spine_length)) {
        level[q] = lvl;
        spine_of[q] = std::move(*spine);
        changed = true;
      }
    }
    if (!changed) break;
  }

  if (level[state] < 0 || level[state] > max_height) return std::nullopt;

  struct Builder {
    const HatAutomaton& hat;
    const std::vector<std::vector<int>>& spine_of;
    SpinalComputationTree build(int q) const {
      SpinalComputationTree d{replay_spine(hat, q, spine_of[q]), {}};
      for (int child : d.spine.stateseq) d.children.push_back(build(child));
      return d;
    }
  } builder{hat, spine_of};
  return builder.build(state);
}

namespace {

struct SpinalMember {
  const Ptar& a;
  const HatAutomaton& hat;
  const Tree& subject;
  // Memoized answers per (state, subtree position).
  std::map<std::pair<int, Position>, std::optional<SpinalComputationTree>> memo;

  std::optional<SpinalComputationTree> solve(int state, const Position& pos) {
    auto key = std::make_pair(state, pos);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<int> spine;
    std::vector<std::pair<int, Position>> residuals;
    std::optional<SpinalComputationTree> result =
        search_spine(state, pos, state, pos, subtree_at(subject, pos),
                     Vec::zero(a.dim()), spine, residuals);
    memo[key] = result;
    return result;
  }

  // Walks the counter-carrying path inside the subject, matching its
  // labels. Residual children are solved eagerly, so a failing branch is
  // abandoned before the spine grows.
  std::optional<SpinalComputationTree> search_spine(
      int start_state, const Position& base, int head_state,
      const Position& abs, const Tree& node, const Vec& w,
      std::vector<int>& spine, std::vector<std::pair<int, Position>>& residuals) {
    for (size_t ti = 0; ti < a.transitions().size(); ++ti) {
      const PtarTransition& t = a.transitions()[ti];
      if (t.src != head_state || t.symbol != node.label()) continue;
      if (t.successors.size() != node.children().size()) continue;

      if (t.successors.empty()) {
        if (!member(a.constraint(), w)) continue;
        spine.push_back(static_cast<int>(ti));
        auto done = finish(start_state, base, spine, residuals);
        spine.pop_back();
        if (done) return done;
        continue;
      }

      int add_child = -1;
      for (size_t c = 0; c < t.successors.size(); ++c)
        if (!t.successors[c].action.is_reset()) add_child = static_cast<int>(c);

      bool ok = true;
      size_t pushed = 0;
      for (size_t c = 0; c < t.successors.size() && ok; ++c) {
        if (static_cast<int>(c) == add_child) continue;
        Position child = abs;
        child.push_back(static_cast<int>(c) + 1);
        if (!solve(t.successors[c].state, child)) {
          ok = false;
        } else {
          residuals.emplace_back(t.successors[c].state, std::move(child));
          ++pushed;
        }
      }
      if (ok) {
        spine.push_back(static_cast<int>(ti));
        std::optional<SpinalComputationTree> done;
        if (add_child < 0) {
          done = finish(start_state, base, spine, residuals);
        } else {
          Position child = abs;
          child.push_back(add_child + 1);
          done = search_spine(start_state, base,
                              t.successors[add_child].state, child,
                              node.children()[add_child],
                              w + *t.successors[add_child].action.add, spine,
                              residuals);
        }
        spine.pop_back();
        if (done) return done;
      }
      residuals.resize(residuals.size() - pushed);
    }
    return std::nullopt;
  }

  std::optional<SpinalComputationTree> finish(
      int start_state, const Position& base, const std::vector<int>& spine,
      const std::vector<std::pair<int, Position>>& residuals) {
    SpinalComputationTree d{replay_spine(hat, start_state, spine), {}};
    // Residuals arrive in spine order; children follow statepos order.
    std::map<Position, int> by_pos;
    for (const auto& [state, pos] : residuals) {
      Position rel(pos.begin() + base.size(), pos.end());
      by_pos[rel] = state;
    }
    if (by_pos.size() != d.spine.statepos.size())
      throw std::logic_error("residuals do not match the spine's positions");
    for (size_t i = 0; i < d.spine.statepos.size(); ++i) {
      const Position& rel = d.spine.statepos[i];
      auto it = by_pos.find(rel);
      if (it == by_pos.end() || it->second != d.spine.stateseq[i])
        throw std::logic_error("residuals do not match the spine's states");
      Position abs = base;
      abs.insert(abs.end(), rel.begin(), rel.end());
      auto child = solve(it->second, abs);
      if (!child) throw std::logic_error("residual lost its witness");
      d.children.push_back(std::move(*child));
    }
    return d;
  }
};

}  // namespace

std::optional<SpinalComputationTree> spinal_member(const Ptar& a, int state,
                                                   const Tree& t) {
  if (!is_linear(a))
    throw std::invalid_argument("spinal membership requires a linear automaton");
  validate_ranked(t, a.alphabet());
  HatAutomaton hat = hat_automaton(a);
  SpinalMember sm{a, hat, t, {}};
  return sm.solve(state, Position{});
}

LinearizationPa linearization_pa(const Ptar& a, const std::vector<int>& allowed,
                                 int state) {
  if (!is_linear(a))
    throw std::invalid_argument("linearization requires a linear automaton");
  int n = a.num_states();
  int m = a.dim();
  std::vector<bool> in_allowed(n, false);
  for (int q : allowed) in_allowed[q] = true;

  std::vector<std::string> states = a.states();
  std::string sink_name = "sink";
  while (std::find(states.begin(), states.end(), sink_name) != states.end())
    sink_name += "_";
  states.push_back(sink_name);
  int sink = n;

  auto extend = [m](const Vec& v, std::int64_t last) {
    std::vector<std::int64_t> e = v.entries();
    e.push_back(last);
    return Vec(std::move(e));
  };

  std::vector<PaTransition> transitions;
  std::vector<LinearizationOrigin> origins;
  std::vector<int> finals;
  for (size_t ti = 0; ti < a.transitions().size(); ++ti) {
    const PtarTransition& t = a.transitions()[ti];
    if (t.successors.empty()) {
      if (std::find(finals.begin(), finals.end(), t.src) == finals.end())
        finals.push_back(t.src);
      continue;
    }
    int add_child = -1;
    for (size_t c = 0; c < t.successors.size(); ++c)
      if (!t.successors[c].action.is_reset()) add_child = static_cast<int>(c);
    bool rest_allowed = true;
    for (size_t c = 0; c < t.successors.size(); ++c)
      if (static_cast<int>(c) != add_child && !in_allowed[t.successors[c].state])
        rest_allowed = false;
    if (!rest_allowed) continue;
    if (add_child >= 0) {
      transitions.push_back(PaTransition{
          t.src, t.symbol, extend(*t.successors[add_child].action.add, 0),
          t.successors[add_child].state});
      origins.push_back(LinearizationOrigin{static_cast<int>(ti), add_child + 1});
    } else {
      transitions.push_back(
          PaTransition{t.src, t.symbol, extend(Vec::zero(m), 1), sink});
      origins.push_back(LinearizationOrigin{static_cast<int>(ti), 0});
    }
  }
  finals.push_back(sink);

  std::vector<LinearSet> components;
  for (const LinearSet& c : a.constraint().components()) {
    std::vector<Vec> periods;
    for (const Vec& p : c.periods()) periods.push_back(extend(p, 0));
    components.emplace_back(extend(c.base(), 0), std::move(periods));
  }
  {
    std::vector<Vec> units;
    for (int c = 0; c < m; ++c) {
      std::vector<std::int64_t> e(m + 1, 0);
      e[c] = 1;
      units.emplace_back(std::move(e));
    }
    components.emplace_back(extend(Vec::zero(m), 1), std::move(units));
  }

  Pa pa(std::move(states), state, std::move(finals), std::move(transitions),
        SemilinearSet(m + 1, std::move(components)));
  return LinearizationPa{std::move(pa), std::move(origins), sink};
}

namespace {

SpineComputation spine_from_run(const Ptar& a, const HatAutomaton& hat,
                                const LinearizationPa& lin, int start,
                                const PaRun& run) {
  std::vector<int> transitions;
  bool sink_ended = false;
  for (int r : run.transitions) {
    transitions.push_back(lin.origins[r].transition);
    sink_ended = lin.origins[r].add_child == 0;
  }
  if (!sink_ended) {
    int final_state = run.transitions.empty()
                          ? start
                          : lin.pa.transitions()[run.transitions.back()].dst;
    int leaf = -1;
    for (size_t ti = 0; ti < a.transitions().size() && leaf < 0; ++ti)
      if (a.transitions()[ti].src == final_state &&
          a.transitions()[ti].successors.empty())
        leaf = static_cast<int>(ti);
    if (leaf < 0)
      throw std::logic_error("accepting word state has no leaf transition");
    transitions.push_back(leaf);
  }
  return replay_spine(hat, start, transitions);
}

}  // namespace

EmptinessResult is_empty_linear(const Ptar& a) {
  if (classify(a) != AutomatonClass::LinearPtar)
    throw std::invalid_argument(
        "nonemptiness is only decided for linear automata");
  HatAutomaton hat = hat_automaton(a);
  int n = a.num_states();

  std::vector<int> current;  // sorted ascending = declaration order
  std::vector<std::vector<int>> chain{current};
  std::vector<std::optional<SpineComputation>> spine_of(n);

  for (int round = 0; round <= n; ++round) {
    std::vector<int> next = current;
    for (int q = 0; q < n; ++q) {
      if (std::find(current.begin(), current.end(), q) != current.end())
        continue;
      LinearizationPa lin = linearization_pa(a, current, q);
      PaEmptinessResult res = is_empty(lin.pa);
      if (!res.empty) {
        next.insert(std::lower_bound(next.begin(), next.end(), q), q);
        spine_of[q] = spine_from_run(a, hat, lin, q, *res.witness);
      }
    }
    chain.push_back(next);
    if (next == current) break;
    current = std::move(next);
  }

  bool initial_in =
      std::find(current.begin(), current.end(), a.initial()) != current.end();
  if (!initial_in)
    return EmptinessResult{true, std::nullopt, std::nullopt, std::move(chain)};

  struct Builder {
    const std::vector<std::optional<SpineComputation>>& spine_of;
    SpinalComputationTree build(int q) const {
      if (!spine_of[q]) throw std::logic_error("missing witness spine");
      SpinalComputationTree d{*spine_of[q], {}};
      for (int child : d.spine.stateseq) d.children.push_back(build(child));
      return d;
    }
  } builder{spine_of};

  SpinalComputationTree spinal = builder.build(a.initial());
  Tree witness = spinal_tree_value(spinal);
  if (!member(a, witness))
    throw std::logic_error("assembled witness rejected by membership");
  return EmptinessResult{false, std::move(witness), std::move(spinal),
                         std::move(chain)};
}

}  // namespace pta
