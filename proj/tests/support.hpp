#pragma once

// Shared fixtures, generators, and independent oracles for the test suites.

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pta/format.hpp"
#include "pta/gpta.hpp"
#include "pta/linear_decider.hpp"
#include "pta/parikh_string.hpp"
#include "pta/ptar.hpp"
#include "pta/semilinear.hpp"
#include "pta/terms.hpp"
#include "pta/twocm.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(PTA_FIXTURE_DIR) + "/" + name;
}

inline pta::AutomatonFile load_fixture(const std::string& name) {
  return pta::load_automaton(fixture_path(name));
}

// ---------------------------------------------------------------------------
// Independent oracles.

/// Every complete path spells a^n b^n # for some n >= 1.
inline bool lab_path_oracle(const pta::Tree& t) {
  for (const pta::CompletePath& p : pta::complete_paths(t)) {
    const std::vector<std::string>& w = p.word;
    size_t i = 0;
    while (i < w.size() && w[i] == "a") ++i;
    size_t as = i;
    while (i < w.size() && w[i] == "b") ++i;
    size_t bs = i - as;
    if (as < 1 || as != bs || i + 1 != w.size() || w[i] != "#") return false;
  }
  return true;
}

/// Membership by trying every transition sequence in lexicographic position
/// order, with no memoization: the naive guess-and-check procedure.
inline bool naive_ptar_member(const pta::Ptar& a, const pta::Tree& t) {
  std::vector<pta::Position> order = pta::positions(t);
  std::map<pta::Position, pta::Configuration> pending;
  pending.emplace(pta::Position{},
                  pta::Configuration{a.initial(), pta::Vec::zero(a.dim())});

  struct Search {
    const pta::Ptar& a;
    const pta::Tree& t;
    const std::vector<pta::Position>& order;
    std::map<pta::Position, pta::Configuration>& pending;

    bool walk(size_t index) {
      if (index == order.size()) return true;
      const pta::Position& pos = order[index];
      pta::Configuration here = pending.at(pos);
      pta::Tree node = pta::subtree_at(t, pos);
      for (const pta::PtarTransition& tr : a.transitions()) {
        if (tr.src != here.state || tr.symbol != node.label()) continue;
        if (tr.successors.size() != node.children().size()) continue;
        if (tr.successors.empty()) {
          if (!pta::member(a.constraint(), here.counters)) continue;
          if (walk(index + 1)) return true;
          continue;
        }
        for (size_t c = 0; c < tr.successors.size(); ++c) {
          pta::Position child = pos;
          child.push_back(static_cast<int>(c) + 1);
          const pta::PtarSuccessor& s = tr.successors[c];
          pta::Vec w = s.action.is_reset() ? pta::Vec::zero(a.dim())
                                           : here.counters + *s.action.add;
          pending.insert_or_assign(child,
                                   pta::Configuration{s.state, std::move(w)});
        }
        if (walk(index + 1)) return true;
      }
      return false;
    }
  } search{a, t, order, pending};
  return search.walk(0);
}

/// Full enumeration of every (label vector, state) assignment per position.
inline bool enumerated_gpta_member(const pta::Gpta& g, const pta::Tree& t) {
  // Flatten the tree once: per position, its label and child indices.
  std::vector<pta::Position> order = pta::positions(t);
  size_t n = order.size();
  std::vector<std::string> labels(n);
  std::vector<std::vector<size_t>> child_index(n);
  for (size_t i = 0; i < n; ++i) {
    labels[i] = pta::label_at(t, order[i]);
    pta::Tree sub = pta::subtree_at(t, order[i]);
    for (size_t c = 0; c < sub.children().size(); ++c) {
      pta::Position child = order[i];
      child.push_back(static_cast<int>(c) + 1);
      for (size_t j = 0; j < n; ++j)
        if (order[j] == child) child_index[i].push_back(j);
    }
  }

  size_t choices = g.dvecs().size() * g.num_states();
  std::vector<size_t> pick(n, 0);
  std::vector<int> label(n), state(n);
  while (true) {
    for (size_t i = 0; i < n; ++i) {
      label[i] = static_cast<int>(pick[i] % g.dvecs().size());
      state[i] = static_cast<int>(pick[i] / g.dvecs().size());
    }
    bool ok = state[0] == g.initial();
    for (size_t i = 0; i < n && ok; ++i) {
      bool found = false;
      for (const pta::GptaTransition& tr : g.transitions()) {
        if (tr.src != state[i] || tr.dvec != label[i] || tr.symbol != labels[i])
          continue;
        if (tr.successors.size() != child_index[i].size()) continue;
        bool match = true;
        for (size_t c = 0; c < tr.successors.size(); ++c)
          if (state[child_index[i][c]] != tr.successors[c]) match = false;
        if (match) {
          found = true;
          break;
        }
      }
      ok = found;
    }
    if (ok) {
      pta::Vec sum = pta::Vec::zero(g.dim());
      for (size_t i = 0; i < n; ++i) sum = sum + g.dvecs()[label[i]];
      if (pta::member(g.constraint(), sum)) return true;
    }

    size_t i = 0;
    while (i < n && ++pick[i] == choices) pick[i++] = 0;
    if (i == n) return false;
  }
}

/// Can a gadget configuration of an encoded counter machine reach a plain
/// leaf through its unary self-loops? Breadth-first over counter triples,
/// bounded by a per-coordinate cap and a step bound.
inline bool gadget_reaches_leaf(const pta::Ptar& a, int state, pta::Vec start,
                                int max_steps, std::int64_t coord_cap) {
  std::set<pta::Vec> frontier{start};
  std::set<pta::Vec> visited = frontier;
  for (int len = 0; len <= max_steps; ++len) {
    std::set<pta::Vec> next;
    for (const pta::Vec& w : frontier) {
      for (const pta::PtarTransition& t : a.transitions()) {
        if (t.src != state) continue;
        if (t.successors.empty()) {
          if (pta::member(a.constraint(), w)) return true;
          continue;
        }
        if (t.successors.size() != 1 || t.successors[0].state != state)
          continue;  // only the unary self-loops belong to the gadget
        pta::Vec w2 = w + *t.successors[0].action.add;
        bool big = false;
        for (int c = 0; c < w2.dim(); ++c)
          if (w2[c] > coord_cap) big = true;
        if (!big && visited.insert(w2).second) next.insert(w2);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return false;
}

/// Does the automaton accept any tree of height <= max_height? Searches the
/// configuration space directly. Success at a budget implies success at any
/// larger one and failure at any smaller one, so the memo stores one
/// threshold pair per configuration.
inline bool accepts_tree_of_height(const pta::Ptar& a, int max_height) {
  struct Thresholds {
    int min_true = std::numeric_limits<int>::max();
    int max_false = -1;
  };
  std::map<std::pair<int, pta::Vec>, Thresholds> memo;
  struct Search {
    const pta::Ptar& a;
    std::map<std::pair<int, pta::Vec>, Thresholds>& memo;
    // Recursion is well-founded (the budget strictly decreases), so the
    // thresholds are only consulted and updated with completed results.
    bool can(int state, const pta::Vec& w, int budget) {
      auto key = std::make_pair(state, w);
      {
        const Thresholds& t = memo[key];
        if (budget >= t.min_true) return true;
        if (budget <= t.max_false) return false;
      }
      bool ok = false;
      for (const pta::PtarTransition& tr : a.transitions()) {
        if (tr.src != state) continue;
        if (tr.successors.empty()) {
          if (pta::member(a.constraint(), w)) {
            ok = true;
            break;
          }
          continue;
        }
        if (budget == 0) continue;
        bool all = true;
        for (const pta::PtarSuccessor& s : tr.successors) {
          pta::Vec cw = s.action.is_reset() ? pta::Vec::zero(a.dim())
                                            : w + *s.action.add;
          if (!can(s.state, cw, budget - 1)) {
            all = false;
            break;
          }
        }
        if (all) {
          ok = true;
          break;
        }
      }
      Thresholds& t = memo[key];
      if (ok)
        t.min_true = std::min(t.min_true, budget);
      else
        t.max_false = std::max(t.max_false, budget);
      return ok;
    }
  } search{a, memo};
  return search.can(a.initial(), pta::Vec::zero(a.dim()), max_height);
}

/// All trees over the alphabet with at most max_size nodes.
inline std::vector<pta::Tree> enumerate_trees(const pta::RankedAlphabet& alphabet,
                                              int max_size) {
  std::vector<std::vector<pta::Tree>> by_size(max_size + 1);
  for (int size = 1; size <= max_size; ++size) {
    for (const auto& [symbol, rank] : alphabet.symbols()) {
      if (rank == 0) {
        if (size == 1) by_size[size].emplace_back(symbol);
        continue;
      }
      // Distribute size-1 nodes over `rank` children.
      struct Gen {
        const std::vector<std::vector<pta::Tree>>& by_size;
        std::vector<pta::Tree>& out;
        const std::string& symbol;
        int rank;
        void walk(int remaining, int child, std::vector<pta::Tree>& chosen) {
          if (child == rank) {
            if (remaining == 0) out.emplace_back(symbol, chosen);
            return;
          }
          int reserve = rank - child - 1;  // at least one node per child
          for (int s = 1; s + reserve <= remaining; ++s) {
            for (const pta::Tree& sub : by_size[s]) {
              chosen.push_back(sub);
              walk(remaining - s, child + 1, chosen);
              chosen.pop_back();
            }
          }
        }
      } gen{by_size, by_size[size], symbol, rank};
      std::vector<pta::Tree> chosen;
      gen.walk(size - 1, 0, chosen);
    }
  }
  std::vector<pta::Tree> all;
  for (const auto& bucket : by_size)
    all.insert(all.end(), bucket.begin(), bucket.end());
  return all;
}

// ---------------------------------------------------------------------------
// Random instance generators. All take an explicitly seeded engine so every
// run sees the same corpus.

inline pta::Vec random_vec(std::mt19937& rng, int dim, int max_entry) {
  std::vector<std::int64_t> e(dim);
  std::uniform_int_distribution<int> entry(0, max_entry);
  for (auto& x : e) x = entry(rng);
  return pta::Vec(std::move(e));
}

inline pta::SemilinearSet random_constraint(std::mt19937& rng, int dim,
                                            int max_components, int max_entry) {
  // The empty set occasionally; otherwise one or two components with small
  // bases, so reachable sums hit the set often enough to matter.
  std::uniform_int_distribution<int> comp_count(1, max_components);
  std::uniform_int_distribution<int> period_count(0, 2);
  int comps = std::uniform_int_distribution<int>(0, 9)(rng) == 0
                  ? 0
                  : comp_count(rng);
  std::vector<pta::LinearSet> components;
  for (int i = 0; i < comps; ++i) {
    std::vector<pta::Vec> periods;
    int pc = period_count(rng);
    for (int j = 0; j < pc; ++j) periods.push_back(random_vec(rng, dim, max_entry));
    int base_cap = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : max_entry;
    components.emplace_back(random_vec(rng, dim, base_cap), std::move(periods));
  }
  return pta::SemilinearSet(dim, std::move(components));
}

inline pta::Pa random_pa(std::mt19937& rng) {
  std::uniform_int_distribution<int> state_count(1, 3);
  std::uniform_int_distribution<int> trans_count(0, 5);
  std::uniform_int_distribution<int> dim_pick(1, 2);
  int n = state_count(rng);
  int dim = dim_pick(rng);
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<int> state_pick(0, n - 1);
  std::uniform_int_distribution<int> letter_pick(0, 1);
  std::vector<pta::PaTransition> transitions;
  int tc = trans_count(rng);
  for (int i = 0; i < tc; ++i)
    transitions.push_back(pta::PaTransition{
        state_pick(rng), letter_pick(rng) == 0 ? "a" : "b",
        random_vec(rng, dim, 2), state_pick(rng)});
  std::vector<int> finals;
  for (int q = 0; q < n; ++q)
    if (std::uniform_int_distribution<int>(0, 2)(rng) <= 1) finals.push_back(q);
  pta::SemilinearSet constraint = random_constraint(rng, dim, 2, 3);

  // Half the time, swap in a constraint component anchored at the sum of an
  // actual random walk, so long accepting runs occur in the corpus.
  if (!transitions.empty() && std::uniform_int_distribution<int>(0, 1)(rng)) {
    int state = 0;
    pta::Vec sum = pta::Vec::zero(dim);
    int steps = std::uniform_int_distribution<int>(1, 8)(rng);
    bool moved = false;
    for (int s = 0; s < steps; ++s) {
      std::vector<int> outgoing;
      for (size_t t = 0; t < transitions.size(); ++t)
        if (transitions[t].src == state) outgoing.push_back(static_cast<int>(t));
      if (outgoing.empty()) break;
      int pick = outgoing[std::uniform_int_distribution<size_t>(
          0, outgoing.size() - 1)(rng)];
      sum = sum + transitions[pick].delta;
      state = transitions[pick].dst;
      moved = true;
    }
    if (moved) {
      bool capped = true;
      for (int c = 0; c < dim; ++c)
        if (sum[c] > 3) capped = false;  // stay within the corpus bounds
      if (capped) {
        std::vector<pta::LinearSet> comps = constraint.components();
        if (!comps.empty()) comps.pop_back();
        std::vector<pta::Vec> periods;
        if (std::uniform_int_distribution<int>(0, 1)(rng))
          periods.push_back(random_vec(rng, dim, 2));
        comps.emplace_back(sum, std::move(periods));
        constraint = pta::SemilinearSet(dim, std::move(comps));
        if (std::find(finals.begin(), finals.end(), state) == finals.end())
          finals.push_back(state);
      }
    }
  }
  std::sort(finals.begin(), finals.end());
  return pta::Pa(std::move(states), 0, std::move(finals), std::move(transitions),
                 std::move(constraint));
}

inline pta::RankedAlphabet small_tree_alphabet() {
  return pta::RankedAlphabet({{"f", 2}, {"g", 1}, {"a", 0}});
}

inline pta::Ptar random_linear_ptar(std::mt19937& rng, int max_add_entry = 2,
                                    int max_constraint_entry = 3) {
  std::uniform_int_distribution<int> state_count(1, 3);
  std::uniform_int_distribution<int> trans_count(1, 6);
  std::uniform_int_distribution<int> dim_pick(1, 2);
  int n = state_count(rng);
  int dim = dim_pick(rng);
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<int> state_pick(0, n - 1);
  std::uniform_int_distribution<int> symbol_pick(0, 2);
  pta::RankedAlphabet alphabet = small_tree_alphabet();

  // A fifth of the corpus is built around a reset chain q0 -> q1 -> ...,
  // whose spinal trees are forced to grow one level per state.
  if (n >= 2 && std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    std::vector<pta::PtarTransition> transitions;
    for (int i = 0; i + 1 < n; ++i)
      transitions.push_back(pta::PtarTransition{
          i, "g", {{i + 1, pta::CounterAction::reset()}}});
    transitions.push_back(pta::PtarTransition{n - 1, "a", {}});
    int extras = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < extras; ++i) {
      int src = state_pick(rng);
      transitions.push_back(pta::PtarTransition{
          src,
          "g",
          {{state_pick(rng),
            pta::CounterAction::adding(random_vec(rng, dim, max_add_entry))}}});
    }
    std::vector<pta::LinearSet> comps;
    std::vector<pta::Vec> periods;
    if (std::uniform_int_distribution<int>(0, 1)(rng))
      periods.push_back(random_vec(rng, dim, max_constraint_entry));
    comps.emplace_back(pta::Vec::zero(dim), std::move(periods));
    return pta::Ptar(std::move(states), std::move(alphabet), 0,
                     std::move(transitions),
                     pta::SemilinearSet(dim, std::move(comps)));
  }

  std::vector<pta::PtarTransition> transitions;
  int tc = trans_count(rng);
  for (int i = 0; i < tc; ++i) {
    int sym = symbol_pick(rng);
    if (sym == 2) {
      transitions.push_back(pta::PtarTransition{state_pick(rng), "a", {}});
      continue;
    }
    int rank = sym == 0 ? 2 : 1;
    std::uniform_int_distribution<int> add_pick(0, rank);  // 0 = all reset
    int add_child = add_pick(rng);
    std::vector<pta::PtarSuccessor> successors;
    for (int c = 1; c <= rank; ++c) {
      pta::CounterAction action =
          c == add_child
              ? pta::CounterAction::adding(random_vec(rng, dim, max_add_entry))
              : pta::CounterAction::reset();
      successors.push_back(pta::PtarSuccessor{state_pick(rng), std::move(action)});
    }
    transitions.push_back(pta::PtarTransition{
        state_pick(rng), sym == 0 ? "f" : "g", std::move(successors)});
  }
  // Leafless automata are all alike; usually give some state a leaf.
  bool has_leaf = std::any_of(
      transitions.begin(), transitions.end(),
      [](const pta::PtarTransition& t) { return t.successors.empty(); });
  if (!has_leaf && std::uniform_int_distribution<int>(0, 4)(rng) != 0)
    transitions.push_back(pta::PtarTransition{state_pick(rng), "a", {}});
  return pta::Ptar(std::move(states), std::move(alphabet), 0,
                   std::move(transitions),
                   random_constraint(rng, dim, 2, max_constraint_entry));
}

inline pta::Gpta random_gpta(std::mt19937& rng) {
  std::uniform_int_distribution<int> state_count(1, 2);
  std::uniform_int_distribution<int> dvec_count(1, 2);
  std::uniform_int_distribution<int> trans_count(1, 6);
  int n = state_count(rng);
  int dim = 1;
  pta::RankedAlphabet alphabet({{"sigma", 2}, {"gamma", 1}, {"alpha", 0}});
  std::vector<pta::Vec> dvecs;
  int dc = dvec_count(rng);
  for (int i = 0; i < dc; ++i) dvecs.push_back(random_vec(rng, dim, 1));
  std::vector<std::string> states;
  for (int i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
  std::uniform_int_distribution<int> state_pick(0, n - 1);
  std::uniform_int_distribution<int> symbol_pick(0, 2);
  std::uniform_int_distribution<int> dvec_pick(0, dc - 1);
  std::vector<pta::GptaTransition> transitions;
  int tc = trans_count(rng);
  for (int i = 0; i < tc; ++i) {
    int sym = symbol_pick(rng);
    std::string symbol = sym == 0 ? "sigma" : sym == 1 ? "gamma" : "alpha";
    int rank = sym == 0 ? 2 : sym == 1 ? 1 : 0;
    std::vector<int> successors;
    for (int c = 0; c < rank; ++c) successors.push_back(state_pick(rng));
    transitions.push_back(pta::GptaTransition{state_pick(rng), symbol,
                                              dvec_pick(rng),
                                              std::move(successors)});
  }
  return pta::Gpta(std::move(states), std::move(alphabet), std::move(dvecs), 0,
                   std::move(transitions), random_constraint(rng, 1, 2, 3));
}

/// Trees where every complete path spells a^n b^n #, generated from the
/// path grammar directly (not via any automaton).
inline pta::Tree random_lab_tree(std::mt19937& rng, int height_budget) {
  struct Gen {
    std::mt19937& rng;
    // After `as` letters a, still in the a block.
    pta::Tree a_phase(int as, int budget) {
      bool may_a = budget >= 2 * (as + 1);
      bool may_b = as >= 1;
      bool choose_a = may_a && (!may_b || coin());
      if (choose_a)
        return pta::Tree("a", {a_phase(as + 1, budget - 1),
                               a_phase(as + 1, budget - 1)});
      return pta::Tree("b", {b_phase(as - 1), b_phase(as - 1)});
    }
    // Exactly `remaining` more b letters, then #.
    pta::Tree b_phase(int remaining) {
      if (remaining == 0) return pta::Tree("#");
      return pta::Tree("b", {b_phase(remaining - 1), b_phase(remaining - 1)});
    }
    bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; }
  } gen{rng};
  return pta::Tree("a", {gen.a_phase(1, height_budget - 1),
                         gen.a_phase(1, height_budget - 1)});
}

/// Swaps one a for a b (or vice versa) at a random position; every such
/// mutation breaks some path word.
inline pta::Tree mutate_lab_tree(std::mt19937& rng, const pta::Tree& t) {
  std::vector<pta::Position> swappable;
  for (const pta::Position& p : pta::positions(t)) {
    const std::string& l = pta::label_at(t, p);
    if (l == "a" || l == "b") swappable.push_back(p);
  }
  std::uniform_int_distribution<size_t> pick(0, swappable.size() - 1);
  const pta::Position& p = swappable[pick(rng)];
  const std::string& l = pta::label_at(t, p);
  pta::Tree sub = pta::subtree_at(t, p);
  return pta::replace_at(t, p, pta::Tree(l == "a" ? "b" : "a", sub.children()));
}

// ---------------------------------------------------------------------------
// CLI process runner.

struct CliResult {
  int exit_code;
  std::string output;  // stdout only
};

inline CliResult run_cli(const std::string& args) {
  std::string command = std::string(PTA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("failed to spawn " + command);
  std::string output;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0)
    output.append(buffer, got);
  int status = pclose(pipe);
  int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return CliResult{code, std::move(output)};
}

}  // namespace testsupport
