#include "pta/terms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pta {

std::string position_to_string(const Position& p) {
  if (p.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

int lex_compare(const Position& u, const Position& v) {
  size_t n = std::min(u.size(), v.size());
  for (size_t i = 0; i < n; ++i) {
    if (u[i] != v[i]) return u[i] < v[i] ? -1 : 1;
  }
  if (u.size() == v.size()) return 0;
  return u.size() < v.size() ? -1 : 1;
}

bool is_prefix(const Position& p, const Position& q) {
  if (p.size() > q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}

bool independent(const Position& p, const Position& q) {
  return !is_prefix(p, q) && !is_prefix(q, p);
}

RankedAlphabet::RankedAlphabet(std::vector<std::pair<std::string, int>> symbols) {
  for (auto& [name, rank] : symbols) add(name, rank);
}

void RankedAlphabet::add(const std::string& symbol, int rank) {
  if (rank < 0) throw std::invalid_argument("negative rank for " + symbol);
  if (ranks_.count(symbol))
    throw std::invalid_argument("duplicate symbol " + symbol);
  ranks_[symbol] = rank;
  order_.emplace_back(symbol, rank);
}

bool RankedAlphabet::contains(const std::string& symbol) const {
  return ranks_.count(symbol) > 0;
}

int RankedAlphabet::rank(const std::string& symbol) const {
  auto it = ranks_.find(symbol);
  if (it == ranks_.end())
    throw std::invalid_argument("unknown symbol " + symbol);
  return it->second;
}

bool RankedAlphabet::has_nullary() const {
  for (auto& [name, rank] : order_)
    if (rank == 0) return true;
  return false;
}

int RankedAlphabet::max_rank() const {
  int m = 0;
  for (auto& [name, rank] : order_) m = std::max(m, rank);
  return m;
}

Tree::Tree(std::string label, std::vector<Tree> children) {
  int size = 1;
  int height = 0;
  for (const Tree& c : children) {
    size += c.size();
    height = std::max(height, c.height() + 1);
  }
  node_ = std::make_shared<const Node>(
      Node{std::move(label), std::move(children), size, height});
}

bool Tree::operator==(const Tree& other) const {
  if (node_ == other.node_) return true;
  if (node_->size != other.node_->size) return false;
  if (node_->label != other.node_->label) return false;
  return node_->children == other.node_->children;
}

bool Tree::operator<(const Tree& other) const {
  if (node_ == other.node_) return false;
  if (node_->label != other.node_->label) return node_->label < other.node_->label;
  return node_->children < other.node_->children;
}

std::string Tree::to_string() const {
  std::string out = label();
  if (!children().empty()) {
    out += '(';
    for (size_t i = 0; i < children().size(); ++i) {
      if (i > 0) out += ',';
      out += children()[i].to_string();
    }
    out += ')';
  }
  return out;
}

namespace {

void collect_positions(const Tree& t, Position& prefix,
                       std::vector<Position>& out) {
  out.push_back(prefix);
  for (size_t i = 0; i < t.children().size(); ++i) {
    prefix.push_back(static_cast<int>(i) + 1);
    collect_positions(t.children()[i], prefix, out);
    prefix.pop_back();
  }
}

[[noreturn]] void out_of_range(const Position& p) {
  throw std::out_of_range("position " + position_to_string(p) +
                          " is not in the tree");
}

}  // namespace

std::vector<Position> positions(const Tree& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  Position prefix;
  collect_positions(t, prefix, out);
  return out;
}

const std::string& label_at(const Tree& t, const Position& p) {
  const Tree* cur = &t;
  for (int i : p) {
    if (i < 1 || static_cast<size_t>(i) > cur->children().size()) out_of_range(p);
    cur = &cur->children()[i - 1];
  }
  return cur->label();
}

Tree subtree_at(const Tree& t, const Position& p) {
  const Tree* cur = &t;
  for (int i : p) {
    if (i < 1 || static_cast<size_t>(i) > cur->children().size()) out_of_range(p);
    cur = &cur->children()[i - 1];
  }
  return *cur;
}

Tree replace_at(const Tree& t, const Position& p, const Tree& z) {
  if (p.empty()) return z;
  int i = p.front();
  if (i < 1 || static_cast<size_t>(i) > t.children().size()) out_of_range(p);
  std::vector<Tree> children = t.children();
  children[i - 1] =
      replace_at(children[i - 1], Position(p.begin() + 1, p.end()), z);
  return Tree(t.label(), std::move(children));
}

namespace {

void collect_paths(const Tree& t, Position& pos,
                   std::vector<Position>& path, std::vector<std::string>& word,
                   std::vector<CompletePath>& out) {
  path.push_back(pos);
  word.push_back(t.label());
  if (t.children().empty()) {
    out.push_back(CompletePath{path, word});
  } else {
    for (size_t i = 0; i < t.children().size(); ++i) {
      pos.push_back(static_cast<int>(i) + 1);
      collect_paths(t.children()[i], pos, path, word, out);
      pos.pop_back();
    }
  }
  path.pop_back();
  word.pop_back();
}

}  // namespace

std::vector<CompletePath> complete_paths(const Tree& t) {
  std::vector<CompletePath> out;
  Position pos;
  std::vector<Position> path;
  std::vector<std::string> word;
  collect_paths(t, pos, path, word, out);
  return out;
}

// Variables use a reserved '$' prefix, which the symbol charset excludes.
Tree Context::variable(int index) {
  return Tree("$" + std::to_string(index));
}

std::optional<int> Context::variable_index(const std::string& label) {
  if (label.size() < 2 || label[0] != '$') return std::nullopt;
  int value = 0;
  for (size_t i = 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return std::nullopt;
    value = value * 10 + (label[i] - '0');
  }
  return value;
}

Context::Context(Tree body, int arity) : body_(std::move(body)), arity_(arity) {
  if (arity < 0) throw std::invalid_argument("negative context arity");
  std::vector<std::vector<Position>> found(arity);
  for (const Position& p : positions(body_)) {
    auto idx = variable_index(label_at(body_, p));
    if (!idx) continue;
    if (*idx < 1 || *idx > arity)
      throw std::invalid_argument("variable x" + std::to_string(*idx) +
                                  " outside arity " + std::to_string(arity));
    found[*idx - 1].push_back(p);
  }
  varpos_.reserve(arity);
  for (int i = 0; i < arity; ++i) {
    if (found[i].size() != 1)
      throw std::invalid_argument("variable x" + std::to_string(i + 1) +
                                  " must occur exactly once");
    varpos_.push_back(found[i].front());
  }
  for (int i = 0; i + 1 < arity; ++i) {
    if (lex_compare(varpos_[i], varpos_[i + 1]) >= 0)
      throw std::invalid_argument(
          "context variables are not in lexicographic position order");
  }
}

Tree Context::compose(const std::vector<Tree>& fillers) const {
  if (static_cast<int>(fillers.size()) != arity_)
    throw std::invalid_argument("context of arity " + std::to_string(arity_) +
                                " composed with " +
                                std::to_string(fillers.size()) + " trees");
  Tree result = body_;
  for (int i = 0; i < arity_; ++i)
    result = replace_at(result, varpos_[i], fillers[i]);
  return result;
}

Context Context::fill_except(int keep, const std::vector<Tree>& fillers) const {
  if (keep < 1 || keep > arity_)
    throw std::invalid_argument("fill_except: bad hole index");
  if (static_cast<int>(fillers.size()) != arity_ - 1)
    throw std::invalid_argument("fill_except: need arity-1 fillers");
  Tree result = body_;
  size_t next = 0;
  for (int i = 1; i <= arity_; ++i) {
    if (i == keep) {
      result = replace_at(result, varpos_[i - 1], variable(1));
    } else {
      result = replace_at(result, varpos_[i - 1], fillers[next++]);
    }
  }
  return Context(std::move(result), 1);
}

Context Context::chain(const Context& inner) const {
  if (arity_ != 1 || inner.arity() != 1)
    throw std::invalid_argument("chain requires two unary contexts");
  return Context(replace_at(body_, varpos_[0], inner.body()), 1);
}

Tree Context::apply(const Tree& t) const {
  if (arity_ != 1) throw std::invalid_argument("apply requires a unary context");
  return replace_at(body_, varpos_[0], t);
}

std::optional<int> SpineDecomposition::variable_index_at(const Position& p) const {
  for (size_t i = 0; i < filler_positions.size(); ++i)
    if (filler_positions[i] == p) return static_cast<int>(i) + 1;
  return std::nullopt;
}

namespace {

// Rebuilds the subtree rooted at the path's first position, keeping path
// nodes and numbering every hanging subtree as the next variable.
Tree build_spine(const Tree& sub, const Position& rel,
                 const std::vector<Position>& rel_path, const Position& base,
                 int& next_var, std::vector<Position>& filler_positions,
                 std::vector<Tree>& fillers) {
  bool on_path =
      std::find(rel_path.begin(), rel_path.end(), rel) != rel_path.end();
  if (!on_path) {
    Position absolute = base;
    absolute.insert(absolute.end(), rel.begin(), rel.end());
    filler_positions.push_back(absolute);
    fillers.push_back(sub);
    return Context::variable(next_var++);
  }
  std::vector<Tree> children;
  children.reserve(sub.children().size());
  Position child_rel = rel;
  for (size_t i = 0; i < sub.children().size(); ++i) {
    child_rel.push_back(static_cast<int>(i) + 1);
    children.push_back(build_spine(sub.children()[i], child_rel, rel_path, base,
                                   next_var, filler_positions, fillers));
    child_rel.pop_back();
  }
  return Tree(sub.label(), std::move(children));
}

}  // namespace

SpineDecomposition spine_decompose(const Tree& t,
                                   const std::vector<Position>& path) {
  if (path.empty()) throw std::invalid_argument("empty spine path");
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i + 1].size() != path[i].size() + 1 ||
        !is_prefix(path[i], path[i + 1]))
      throw std::invalid_argument("spine path is not a parent-child chain");
  }
  const Position& root = path.front();
  Tree sub = subtree_at(t, root);  // also validates root
  std::vector<Position> rel_path;
  rel_path.reserve(path.size());
  for (const Position& p : path) {
    if (!is_prefix(root, p))
      throw std::invalid_argument("spine path escapes its first position");
    Position rel(p.begin() + root.size(), p.end());
    // Validates that every path position exists.
    (void)label_at(sub, rel);
    rel_path.push_back(std::move(rel));
  }

  int next_var = 1;
  std::vector<Position> filler_positions;
  std::vector<Tree> fillers;
  Tree spine_body = build_spine(sub, Position{}, rel_path, root, next_var,
                                filler_positions, fillers);
  Context spine(std::move(spine_body), next_var - 1);
  Context outer(replace_at(t, root, Context::variable(1)), 1);
  return SpineDecomposition{std::move(outer), std::move(spine),
                            std::move(fillers), std::move(filler_positions)};
}

namespace {

bool symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
}

struct TreeParser {
  const std::string& text;
  const RankedAlphabet& alphabet;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " at offset " + std::to_string(pos));
  }

  std::string read_symbol_run() {
    size_t start = pos;
    while (pos < text.size() && symbol_char(text[pos])) ++pos;
    if (pos == start) fail("expected a symbol");
    return text.substr(start, pos - start);
  }

  // Splits a run like "gammagamma#" into unary symbols plus a final nullary
  // symbol, greedily preferring long matches and backtracking when stuck.
  std::optional<std::vector<std::string>> split_word(const std::string& run,
                                                     size_t from) const {
    for (size_t len = run.size() - from; len >= 1; --len) {
      std::string piece = run.substr(from, len);
      if (!alphabet.contains(piece)) continue;
      int rank = alphabet.rank(piece);
      if (from + len == run.size()) {
        if (rank == 0) return std::vector<std::string>{piece};
        continue;
      }
      if (rank != 1) continue;
      if (auto rest = split_word(run, from + len)) {
        rest->insert(rest->begin(), piece);
        return rest;
      }
    }
    return std::nullopt;
  }

  Tree parse_term() {
    skip_ws();
    std::string run = read_symbol_run();
    skip_ws();
    bool has_args = pos < text.size() && text[pos] == '(';
    if (alphabet.contains(run)) {
      int rank = alphabet.rank(run);
      std::vector<Tree> children;
      if (has_args) {
        ++pos;  // '('
        skip_ws();
        if (pos < text.size() && text[pos] == ')') fail("empty argument list");
        while (true) {
          children.push_back(parse_term());
          skip_ws();
          if (pos >= text.size()) fail("unterminated argument list");
          if (text[pos] == ',') {
            ++pos;
            continue;
          }
          if (text[pos] == ')') {
            ++pos;
            break;
          }
          fail("expected ',' or ')'");
        }
      }
      if (static_cast<int>(children.size()) != rank)
        throw ParseError("symbol " + run + " has rank " + std::to_string(rank) +
                         " but got " + std::to_string(children.size()) +
                         " arguments");
      return Tree(run, std::move(children));
    }
    // Not a declared symbol: try the monadic word shorthand.
    if (has_args)
      throw ParseError("unknown symbol " + run);
    auto pieces = split_word(run, 0);
    if (!pieces)
      throw ParseError("unknown symbol or word " + run);
    Tree result(pieces->back());
    for (size_t i = pieces->size() - 1; i-- > 0;)
      result = Tree((*pieces)[i], {result});
    return result;
  }
};

}  // namespace

Tree parse_tree(const std::string& text, const RankedAlphabet& alphabet) {
  TreeParser parser{text, alphabet};
  Tree result = parser.parse_term();
  parser.skip_ws();
  if (parser.pos != text.size())
    throw ParseError("trailing input after tree at offset " +
                     std::to_string(parser.pos));
  return result;
}

void validate_ranked(const Tree& t, const RankedAlphabet& alphabet) {
  if (!alphabet.contains(t.label()))
    throw std::invalid_argument("unknown symbol " + t.label());
  int rank = alphabet.rank(t.label());
  if (static_cast<int>(t.children().size()) != rank)
    throw std::invalid_argument("symbol " + t.label() + " has rank " +
                                std::to_string(rank) + " but node has " +
                                std::to_string(t.children().size()) +
                                " children");
  for (const Tree& c : t.children()) validate_ranked(c, alphabet);
}

}  // namespace pta
