#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pta/parikh_string.hpp"
#include "pta/ptar.hpp"

namespace pta {

/// Companion automaton over the doubled state set: hatted states mark the
/// unique node that inherited the counters, and only hatted states have
/// transitions. States 0..n-1 are the originals, n..2n-1 their hatted
/// copies; transition i mirrors transition i of the source automaton.
struct HatAutomaton {
  Ptar automaton;
  int base_states;

  int hat(int q) const { return q + base_states; }
  bool is_hat(int q) const { return q >= base_states; }
  int unhat(int q) const { return is_hat(q) ? q - base_states : q; }
};

HatAutomaton hat_automaton(const Ptar& a);

/// A maximal computation segment of the hat automaton from a hatted state:
/// a chain of counter-passing steps closed off by a leaf or an all-reset
/// transition. Residual states all carry zero counters.
struct SpineComputation {
  int start_state;
  std::vector<int> transitions;        // indices into the source automaton
  PartialTree result;                  // over the symbols plus (state, 0) leaves
  std::vector<Position> statepos;      // residual positions, lexicographic
  std::vector<int> stateseq;           // residual states, same order
};

/// Recursive arrangement of spine computations; child i continues from
/// stateseq[i] of its parent's spine.
struct SpinalComputationTree {
  SpineComputation spine;
  std::vector<SpinalComputationTree> children;

  /// Counted in spine computations along the deepest path: a single spine
  /// computation has height 1.
  int height() const;
};

/// The tree a spinal computation tree computes: each residual position is
/// replaced by the value of the corresponding child.
Tree spinal_tree_value(const SpinalComputationTree& d);

/// Replays a spine computation of the hat automaton and checks its shape;
/// used by tests and by the witness assembly.
bool spine_valid(const Ptar& a, const SpineComputation& s);

/// Exhaustive search for a spinal computation tree from `state` of height
/// at most max_height, enumerating spine computations up to
/// max_spine_length steps. A bounded oracle: absence proves nothing beyond
/// the bounds.
std::optional<SpinalComputationTree> spinal_search(const Ptar& a, int state,
                                                   int max_height,
                                                   int max_spine_length = 16);

/// Decides whether some spinal computation tree from `state` computes
/// exactly t, by matching spine computations against t's positions. An
/// exact alternative membership procedure for linear automata.
std::optional<SpinalComputationTree> spinal_member(const Ptar& a, int state,
                                                   const Tree& t);

/// The word automaton whose nonemptiness characterizes the existence of a
/// spine computation from `state` whose residual states all lie in
/// `allowed`. One extra dimension separates the two ways a spine can end:
/// a leaf ending keeps the extra coordinate at zero and is tested against
/// C x {0}; an all-reset ending moves to a fresh sink, adds the extra unit
/// once, and is tested against N^m x {1}, which leaves the counters
/// unconstrained exactly like the tree semantics does there.
struct LinearizationOrigin {
  int transition;   // index into the source automaton
  int add_child;    // 1-based counter-passing child, or 0 for the sink move
};

struct LinearizationPa {
  Pa pa;
  std::vector<LinearizationOrigin> origins;  // one per pa transition
  int sink;                                  // pa state index
};

LinearizationPa linearization_pa(const Ptar& a, const std::vector<int>& allowed,
                                 int state);

/// Result of the nonemptiness fixpoint. The chain lists the growing state
/// sets, one entry per completed iteration, starting from the empty set.
struct EmptinessResult {
  bool empty;
  std::optional<Tree> witness;
  std::optional<SpinalComputationTree> spinal;
  std::vector<std::vector<int>> chain;
};

/// Nonemptiness for linear automata: saturates the set of states that admit
/// a spinal computation tree, one word-automaton emptiness check per state
/// and round. On success the witness is reassembled from the word runs,
/// has height at most the number of states, and is re-verified by member.
/// Throws std::invalid_argument when the automaton is not linear.
EmptinessResult is_empty_linear(const Ptar& a);

}  // namespace pta
