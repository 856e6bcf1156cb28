#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pta/errors.hpp"

namespace pta {

/// A position in a tree: the sequence of 1-based child indices leading to a
/// node. The empty sequence is the root.
using Position = std::vector<int>;

std::string position_to_string(const Position& p);

/// Three-way lexicographic comparison: negative, zero or positive when
/// u < v, u == v or u > v. A proper prefix precedes its extensions.
int lex_compare(const Position& u, const Position& v);

/// True iff p is a (not necessarily proper) prefix of q.
bool is_prefix(const Position& p, const Position& q);

/// Positions are independent iff neither is a prefix of the other.
bool independent(const Position& p, const Position& q);

/// Finite map from symbol names to ranks.
class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  explicit RankedAlphabet(std::vector<std::pair<std::string, int>> symbols);

  void add(const std::string& symbol, int rank);
  bool contains(const std::string& symbol) const;
  int rank(const std::string& symbol) const;  // throws if unknown
  const std::vector<std::pair<std::string, int>>& symbols() const {
    return order_;
  }
  bool has_nullary() const;
  int max_rank() const;

 private:
  std::vector<std::pair<std::string, int>> order_;  // declaration order
  std::map<std::string, int> ranks_;
};

/// An immutable ranked tree. Copies are cheap; rewriting shares all
/// untouched subtrees.
class Tree {
 public:
  Tree() : Tree("") {}
  explicit Tree(std::string label, std::vector<Tree> children = {});

  const std::string& label() const { return node_->label; }
  const std::vector<Tree>& children() const { return node_->children; }
  int size() const { return node_->size; }
  int height() const { return node_->height; }

  bool operator==(const Tree& other) const;
  bool operator!=(const Tree& other) const { return !(*this == other); }
  bool operator<(const Tree& other) const;  // structural, for use in sets

  std::string to_string() const;

 private:
  struct Node {
    std::string label;
    std::vector<Tree> children;
    int size;
    int height;
  };
  std::shared_ptr<const Node> node_;
};

/// All positions of t in lexicographic (= pre-order) order.
std::vector<Position> positions(const Tree& t);

const std::string& label_at(const Tree& t, const Position& p);
Tree subtree_at(const Tree& t, const Position& p);
Tree replace_at(const Tree& t, const Position& p, const Tree& z);

/// One maximal root-to-leaf path together with its label word.
struct CompletePath {
  std::vector<Position> path;
  std::vector<std::string> word;
};

/// All complete paths, ordered by the lexicographic order of their leaves.
std::vector<CompletePath> complete_paths(const Tree& t);

/// A tree with variables x_1..x_k, each occurring exactly once and in
/// lexicographic position order. Variables are represented by reserved
/// labels outside the symbol namespace.
class Context {
 public:
  Context(Tree body, int arity);

  static Tree variable(int index);  // x_index, 1-based
  static std::optional<int> variable_index(const std::string& label);

  const Tree& body() const { return body_; }
  int arity() const { return arity_; }
  const std::vector<Position>& variable_positions() const { return varpos_; }

  /// Substitutes fillers[i-1] for x_i. Throws on arity mismatch.
  Tree compose(const std::vector<Tree>& fillers) const;

  /// Fills every variable except x_keep (1-based) and renames the kept one
  /// to x_1, yielding a context of arity 1. fillers has arity()-1 entries,
  /// in variable order with the kept slot skipped.
  Context fill_except(int keep, const std::vector<Tree>& fillers) const;

  /// Composition of unary contexts: (this . inner), both of arity 1.
  Context chain(const Context& inner) const;

  /// compose({t}) for arity-1 contexts.
  Tree apply(const Tree& t) const;

  bool operator==(const Context& other) const {
    return arity_ == other.arity_ && body_ == other.body_;
  }

 private:
  Tree body_;
  int arity_;
  std::vector<Position> varpos_;  // position of x_i at index i-1
};

/// Decomposition of t along a root-to-somewhere path: t = outer . (spine
/// composed with fillers). The spine contains exactly the path's positions
/// as non-variable nodes; every subtree hanging off the path (including all
/// children of the last path node) becomes a variable, filled by the
/// corresponding entry of fillers.
struct SpineDecomposition {
  Context outer;               // arity 1, hole at the path's first position
  Context spine;               // arity k
  std::vector<Tree> fillers;   // k subtrees, in variable order
  std::vector<Position> filler_positions;  // absolute positions in t

  /// 1-based variable index whose absolute position is p, if any. This is
  /// the hole index used when one filler is treated as the continuation of
  /// the path.
  std::optional<int> variable_index_at(const Position& p) const;
};

/// path must be a chain of parent-child positions of t, starting anywhere.
SpineDecomposition spine_decompose(const Tree& t, const std::vector<Position>& path);

/// Parses the tree syntax `t := SYMBOL | SYMBOL "(" t ("," t)* ")"`.
/// Symbol names are runs of [A-Za-z0-9_#]. A run that is not itself a
/// declared symbol may spell a monadic word: a sequence of unary symbols
/// followed by one nullary symbol, normalized to a nested tree. Arities are
/// checked against the alphabet.
Tree parse_tree(const std::string& text, const RankedAlphabet& alphabet);

/// Checks that every node's child count matches its label's rank.
void validate_ranked(const Tree& t, const RankedAlphabet& alphabet);

}  // namespace pta
