#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pta/semilinear.hpp"
#include "pta/terms.hpp"

namespace pta {

/// A per-child counter action: either add a vector to the inherited
/// counters or reset them to zero.
struct CounterAction {
  std::optional<Vec> add;  // nullopt means reset

  bool is_reset() const { return !add.has_value(); }
  static CounterAction reset() { return CounterAction{std::nullopt}; }
  static CounterAction adding(Vec v) { return CounterAction{std::move(v)}; }
};

struct PtarSuccessor {
  int state;
  CounterAction action;
};

struct PtarTransition {
  int src;
  std::string symbol;
  std::vector<PtarSuccessor> successors;  // empty for rank-0 symbols
};

/// Non-global Parikh tree automaton with reset: counters flow from the root
/// towards the leaves, updated per child, and are tested against the
/// constraint at every leaf.
class Ptar {
 public:
  Ptar(std::vector<std::string> states, RankedAlphabet alphabet, int initial,
       std::vector<PtarTransition> transitions, SemilinearSet constraint);

  int dim() const { return constraint_.dim(); }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int q) const { return states_[q]; }
  const RankedAlphabet& alphabet() const { return alphabet_; }
  int initial() const { return initial_; }
  const std::vector<PtarTransition>& transitions() const { return transitions_; }
  const SemilinearSet& constraint() const { return constraint_; }

 private:
  std::vector<std::string> states_;
  RankedAlphabet alphabet_;
  int initial_;
  std::vector<PtarTransition> transitions_;
  SemilinearSet constraint_;
};

struct Configuration {
  int state;
  Vec counters;

  bool operator==(const Configuration& other) const {
    return state == other.state && counters == other.counters;
  }
};

/// A tree over the symbols plus configuration leaves: the intermediate
/// shapes of a computation.
class PartialTree {
 public:
  static PartialTree config(Configuration c);
  static PartialTree node(std::string symbol, std::vector<PartialTree> children);
  static PartialTree from_tree(const Tree& t);

  bool is_config() const;
  const Configuration& configuration() const;  // throws unless is_config
  const std::string& symbol() const;           // throws if is_config
  const std::vector<PartialTree>& children() const;

  const PartialTree& at(const Position& p) const;
  PartialTree replaced(const Position& p, const PartialTree& z) const;

  /// The plain tree, when no configuration leaves remain.
  std::optional<Tree> to_tree() const;

  /// Positions of the configuration leaves, in lexicographic order.
  std::vector<Position> config_positions() const;

  bool operator==(const PartialTree& other) const;
  bool operator!=(const PartialTree& other) const { return !(*this == other); }

  std::string to_string(const Ptar& a) const;

 private:
  struct Node;
  explicit PartialTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class StepErrorKind {
  InapplicableTransition,   // state or symbol mismatch at the position
  LeafConstraintViolated,   // rank-0 transition with counters outside C
};

class StepError : public std::runtime_error {
 public:
  StepError(StepErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  StepErrorKind kind() const { return kind_; }

 private:
  StepErrorKind kind_;
};

/// One application of the computation relation at position p, which must
/// hold a configuration matching the transition's source state.
PartialTree step(const Ptar& a, const PartialTree& partial, const Position& p,
                 int transition);

/// A successful computation, listed as (transition, position) pairs whose
/// replay from the initial configuration produces the subject tree. Its
/// length equals the subject's size.
struct ComputationTrace {
  std::vector<std::pair<int, Position>> steps;
  Tree subject;
};

/// Top-down backtracking membership with memoized failures; the returned
/// trace lists transitions in lexicographic position order.
std::optional<ComputationTrace> member(const Ptar& a, const Tree& t);

bool trace_valid(const Ptar& a, const Tree& t, const ComputationTrace& trace);

enum class AutomatonClass { Pta, Ptar, LinearPtar };

std::string to_string(AutomatonClass c);

bool is_reset_free(const Ptar& a);
bool is_linear(const Ptar& a);

/// LinearPtar when every transition passes the counters to at most one
/// child and resets the rest; otherwise Pta when no reset occurs at all;
/// otherwise Ptar.
AutomatonClass classify(const Ptar& a);

}  // namespace pta
