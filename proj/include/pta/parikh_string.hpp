#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pta/semilinear.hpp"

namespace pta {

struct PaTransition {
  int src;
  std::string symbol;
  Vec delta;
  int dst;
};

/// Parikh string automaton: a finite automaton whose transitions carry
/// vectors; a run is accepting when it ends in a final state and the sum of
/// its vectors lies in the constraint set.
class Pa {
 public:
  Pa(std::vector<std::string> states, int initial, std::vector<int> finals,
     std::vector<PaTransition> transitions, SemilinearSet constraint);

  int dim() const { return constraint_.dim(); }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int q) const { return states_[q]; }
  int initial() const { return initial_; }
  const std::vector<int>& finals() const { return finals_; }
  bool is_final(int q) const;
  const std::vector<PaTransition>& transitions() const { return transitions_; }
  const SemilinearSet& constraint() const { return constraint_; }

 private:
  std::vector<std::string> states_;
  int initial_;
  std::vector<int> finals_;
  std::vector<PaTransition> transitions_;
  SemilinearSet constraint_;
};

/// A run, stored as the indices of the transitions taken, in order. The
/// empty run is permitted.
struct PaRun {
  std::vector<int> transitions;
};

std::string word_of(const Pa& pa, const PaRun& run);
Vec sum_of(const Pa& pa, const PaRun& run);

/// True iff the run starts in the initial state, chains correctly, ends in
/// a final state, and its vector sum lies in the constraint. The empty run
/// is valid iff the initial state is final and the zero vector is in the
/// constraint.
bool run_valid(const Pa& pa, const PaRun& run);

struct PaEmptinessResult {
  bool empty;
  std::optional<PaRun> witness;  // engaged iff not empty
};

/// Complete emptiness decision. For each constraint component and final
/// state, enumerates connected transition supports (exponential in the
/// transition count; refuses automata with more than 24 transitions) and
/// solves the flow plus vector-sum system; a feasible transition-count
/// vector on a connected support yields an actual run via an Eulerian path.
PaEmptinessResult is_empty(const Pa& pa);

/// Bounded breadth-first oracle: a valid run of length <= max_len if one
/// exists within the bound. Absence proves nothing beyond the bound.
std::optional<PaRun> brute_force_nonempty(const Pa& pa, int max_len);

}  // namespace pta
