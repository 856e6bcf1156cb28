#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pta/ptar.hpp"

namespace pta {

enum class CmOpKind { Inc, Dec, ZeroTest };

struct CmOp {
  CmOpKind kind;
  int counter;  // 1 or 2

  std::string to_string() const;
};

struct CmTransition {
  int src;
  CmOp op;
  int dst;
};

/// Two-counter machine with increments, guarded decrements and zero-tests;
/// accepts when a final state is reached with both counters zero.
class TwoCm {
 public:
  TwoCm(std::vector<std::string> states, int initial, std::vector<int> finals,
        std::vector<CmTransition> transitions);

  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int q) const { return states_[q]; }
  int initial() const { return initial_; }
  const std::vector<int>& finals() const { return finals_; }
  bool is_final(int q) const;
  const std::vector<CmTransition>& transitions() const { return transitions_; }

 private:
  std::vector<std::string> states_;
  int initial_;
  std::vector<int> finals_;
  std::vector<CmTransition> transitions_;
};

struct CmConfig {
  int state;
  std::int64_t k1;
  std::int64_t k2;

  bool operator==(const CmConfig& other) const {
    return state == other.state && k1 == other.k1 && k2 == other.k2;
  }
  bool operator<(const CmConfig& other) const {
    if (state != other.state) return state < other.state;
    if (k1 != other.k1) return k1 < other.k1;
    return k2 < other.k2;
  }
};

/// All one-step successors. Decrements block at zero; zero-tests block on a
/// nonzero counter.
std::vector<std::pair<int, CmConfig>> cm_step(const TwoCm& m, const CmConfig& c);

/// Bounded breadth-first acceptance: a transition sequence from the all-zero
/// initial configuration to an all-zero final configuration of length at
/// most max_steps, if one exists within the bound.
std::optional<std::vector<int>> cm_bounded_accepts(const TwoCm& m, int max_steps);

/// The machine encoded as a reset-free tree automaton over {sigma, gamma,
/// alpha} with three counters and constraint {(i,i,i)}. A counter triple
/// (s1, s2, l) stands for the machine value (s1 - l, s2 - l). Increments
/// become unary steps, decrements branch into a gadget checking l <= s_i,
/// zero-tests branch into a gadget checking s_i = l.
struct Encoded2cm {
  Ptar automaton;
  std::vector<int> transition_of;  // machine transition -> automaton transition
  int lt1, lt2, eq1, eq2;          // gadget state indices
};

Encoded2cm encode(const TwoCm& m);

}  // namespace pta
