#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pta/semilinear.hpp"
#include "pta/terms.hpp"

namespace pta {

struct GptaTransition {
  int src;
  std::string symbol;
  int dvec;  // index into the automaton's label vector set D
  std::vector<int> successors;
};

/// Global Parikh tree automaton: runs label every node with a vector from D
/// and accept when the run starts in the initial state and the sum of all
/// labels lies in the constraint.
class Gpta {
 public:
  Gpta(std::vector<std::string> states, RankedAlphabet alphabet,
       std::vector<Vec> dvecs, int initial, std::vector<GptaTransition> transitions,
       SemilinearSet constraint);

  int dim() const { return constraint_.dim(); }
  int num_states() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int q) const { return states_[q]; }
  const RankedAlphabet& alphabet() const { return alphabet_; }
  const std::vector<Vec>& dvecs() const { return dvecs_; }
  int initial() const { return initial_; }
  const std::vector<GptaTransition>& transitions() const { return transitions_; }
  const SemilinearSet& constraint() const { return constraint_; }

 private:
  std::vector<std::string> states_;
  RankedAlphabet alphabet_;
  std::vector<Vec> dvecs_;
  int initial_;
  std::vector<GptaTransition> transitions_;
  SemilinearSet constraint_;
};

/// Labelings and runs assign a D-index / state to every position.
using DLabeling = std::map<Position, int>;
using StateMap = std::map<Position, int>;

/// A tree over Sigma x D, encoded by suffixing each label with '@' and the
/// D-index. These composite trees drive the exchange machinery, which only
/// rearranges subtrees and therefore works uniformly on them.
Tree zip_labeled(const Gpta& g, const Tree& base, const DLabeling& labeling);
std::pair<Tree, DLabeling> unzip_labeled(const Tree& labeled);

/// Sum of the D-components over all positions of a labeled tree.
Vec parikh(const Gpta& g, const Tree& labeled);

bool run_valid(const Gpta& g, const Tree& labeled, const StateMap& run);

struct GptaWitness {
  Tree labeled;  // zipped tree over Sigma x D
  StateMap run;
};

/// Membership by bottom-up dynamic programming over reachable
/// (state, partial sum) pairs, with witness reconstruction.
std::optional<GptaWitness> member(const Gpta& g, const Tree& t);

/// Raised when no pair of independent equal-cycle paths exists; carries the
/// thresholds above which one is guaranteed.
class ExchangeNotFound : public std::runtime_error {
 public:
  ExchangeNotFound(int subtree_threshold, int height_threshold)
      : std::runtime_error(
            "no exchangeable cycle pair found (guaranteed for trees with at "
            "least " +
            std::to_string(subtree_threshold) +
            " independent subtrees of height at least " +
            std::to_string(height_threshold) + ")"),
        subtree_threshold_(subtree_threshold),
        height_threshold_(height_threshold) {}

  int subtree_threshold() const { return subtree_threshold_; }  // l
  int height_threshold() const { return height_threshold_; }    // p

 private:
  int subtree_threshold_;
  int height_threshold_;
};

/// A tree split around two independent occurrences of one spine context:
/// the whole tree is outer[spine(s-fillers) . u1, spine(t-fillers) . u2]
/// where filling keeps the variable `hole_index` open. Both occurrences
/// carry the same spine because the cycle paths agree on transitions and
/// child indices. All pieces are over the composite Sigma x D labels; plain
/// projections are available through the accessors.
struct ExchangeDecomposition {
  Context outer_labeled;                // arity 2
  Context spine_labeled;                // arity k+1
  std::vector<Tree> s_fillers_labeled;  // k trees
  std::vector<Tree> t_fillers_labeled;  // k trees
  Tree u1_labeled;
  Tree u2_labeled;
  int hole_index;  // 1-based variable of the spine continuing the path

  Context outer() const;
  Context spine() const;
  std::vector<Tree> s_fillers() const;
  std::vector<Tree> t_fillers() const;
  Tree u1() const;
  Tree u2() const;

  Tree recompose_labeled() const;  // reproduces the decomposed input
};

/// Searches all pairs of independent positions for two downward paths with
/// identical transition cycles (same transitions and child indices, ending
/// in their shared start state) and returns the induced decomposition.
/// `witness` must be a valid run on t.
ExchangeDecomposition exchange_find(const Gpta& g, const Tree& t,
                                    const GptaWitness& witness);

/// The two reorderings: variant 2 moves the s-side spine copy in front of
/// the t side, variant 3 stacks both copies on the s side.
Tree exchange_reorder_labeled(const ExchangeDecomposition& d, int variant);
Tree exchange_reorder(const ExchangeDecomposition& d, int variant);

}  // namespace pta
