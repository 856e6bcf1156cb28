#include "pta/ptar.hpp"

#include <algorithm>
#include <map>

namespace pta {

Ptar::Ptar(std::vector<std::string> states, RankedAlphabet alphabet,
           int initial, std::vector<PtarTransition> transitions,
           SemilinearSet constraint)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      initial_(initial),
      transitions_(std::move(transitions)),
      constraint_(std::move(constraint)) {
  if (initial_ < 0 || initial_ >= num_states())
    throw std::invalid_argument("initial state out of range");
  for (const PtarTransition& t : transitions_) {
    if (t.src < 0 || t.src >= num_states())
      throw std::invalid_argument("transition source out of range");
    if (!alphabet_.contains(t.symbol))
      throw std::invalid_argument("transition symbol not in alphabet");
    if (alphabet_.rank(t.symbol) != static_cast<int>(t.successors.size()))
      throw std::invalid_argument("successor count does not match rank of " +
                                  t.symbol);
    for (const PtarSuccessor& s : t.successors) {
      if (s.state < 0 || s.state >= num_states())
        throw std::invalid_argument("successor state out of range");
      if (!s.action.is_reset() && s.action.add->dim() != constraint_.dim())
        throw std::invalid_argument("counter action dimension mismatch");
    }
  }
}

struct PartialTree::Node {
  std::optional<Configuration> config;
  std::string symbol;
  std::vector<PartialTree> children;
};

PartialTree PartialTree::config(Configuration c) {
  return PartialTree(
      std::make_shared<const Node>(Node{std::move(c), "", {}}));
}

PartialTree PartialTree::node(std::string symbol,
                              std::vector<PartialTree> children) {
  return PartialTree(std::make_shared<const Node>(
      Node{std::nullopt, std::move(symbol), std::move(children)}));
}

PartialTree PartialTree::from_tree(const Tree& t) {
  std::vector<PartialTree> children;
  children.reserve(t.children().size());
  for (const Tree& c : t.children()) children.push_back(from_tree(c));
  return node(t.label(), std::move(children));
}

bool PartialTree::is_config() const { return node_->config.has_value(); }

const Configuration& PartialTree::configuration() const {
  if (!is_config()) throw std::logic_error("not a configuration leaf");
  return *node_->config;
}

const std::string& PartialTree::symbol() const {
  if (is_config()) throw std::logic_error("configuration leaves carry no symbol");
  return node_->symbol;
}

const std::vector<PartialTree>& PartialTree::children() const {
  return node_->children;
}

const PartialTree& PartialTree::at(const Position& p) const {
  const PartialTree* cur = this;
  for (int i : p) {
    if (i < 1 || static_cast<size_t>(i) > cur->children().size())
      throw std::out_of_range("position " + position_to_string(p) +
                              " is not in the tree");
    cur = &cur->children()[i - 1];
  }
  return *cur;
}

PartialTree PartialTree::replaced(const Position& p, const PartialTree& z) const {
  if (p.empty()) return z;
  int i = p.front();
  if (i < 1 || static_cast<size_t>(i) > children().size())
    throw std::out_of_range("position " + position_to_string(p) +
                            " is not in the tree");
  std::vector<PartialTree> cs = children();
  cs[i - 1] = cs[i - 1].replaced(Position(p.begin() + 1, p.end()), z);
  return node(symbol(), std::move(cs));
}

std::optional<Tree> PartialTree::to_tree() const {
  if (is_config()) return std::nullopt;
  std::vector<Tree> children;
  children.reserve(node_->children.size());
  for (const PartialTree& c : node_->children) {
    auto sub = c.to_tree();
    if (!sub) return std::nullopt;
    children.push_back(std::move(*sub));
  }
  return Tree(symbol(), std::move(children));
}

namespace {

void collect_configs(const PartialTree& t, Position& pos,
                     std::vector<Position>& out) {
  if (t.is_config()) {
    out.push_back(pos);
    return;
  }
  for (size_t i = 0; i < t.children().size(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    collect_configs(t.children()[i], pos, out);
    pos.pop_back();
  }
}

}  // namespace

std::vector<Position> PartialTree::config_positions() const {
  std::vector<Position> out;
  Position pos;
  collect_configs(*this, pos, out);
  return out;
}

bool PartialTree::operator==(const PartialTree& other) const {
  if (node_ == other.node_) return true;
  if (is_config() != other.is_config()) return false;
  if (is_config()) return configuration() == other.configuration();
  if (symbol() != other.symbol()) return false;
  return children() == other.children();
}

std::string PartialTree::to_string(const Ptar& a) const {
  if (is_config()) {
    const Configuration& c = configuration();
    return "<" + a.state_name(c.state) + ":" + c.counters.to_string() + ">";
  }
  std::string out = symbol();
  if (!children().empty()) {
    out += '(';
    for (size_t i = 0; i < children().size(); ++i) {
      if (i > 0) out += ',';
      out += children()[i].to_string(a);
    }
    out += ')';
  }
  return out;
}

PartialTree step(const Ptar& a, const PartialTree& partial, const Position& p,
                 int transition) {
  if (transition < 0 || transition >= static_cast<int>(a.transitions().size()))
    throw std::invalid_argument("transition index out of range");
  const PtarTransition& t = a.transitions()[transition];
  const PartialTree& target = partial.at(p);
  if (!target.is_config())
    throw StepError(StepErrorKind::InapplicableTransition,
                    "no configuration at position " + position_to_string(p));
  const Configuration& c = target.configuration();
  if (c.state != t.src)
    throw StepError(StepErrorKind::InapplicableTransition,
                    "transition expects state " + a.state_name(t.src) +
                        " but the configuration is in " +
                        a.state_name(c.state));
  if (t.successors.empty()) {
    if (!member(a.constraint(), c.counters))
      throw StepError(StepErrorKind::LeafConstraintViolated,
                      "counters " + c.counters.to_string() +
                          " are not in the constraint at leaf " + t.symbol);
    return partial.replaced(p, PartialTree::node(t.symbol, {}));
  }
  std::vector<PartialTree> children;
  children.reserve(t.successors.size());
  for (const PtarSuccessor& s : t.successors) {
    Vec w = s.action.is_reset() ? Vec::zero(a.dim()) : c.counters + *s.action.add;
    children.push_back(PartialTree::config(Configuration{s.state, std::move(w)}));
  }
  return partial.replaced(p, PartialTree::node(t.symbol, std::move(children)));
}

namespace {

struct MemberSearch {
  const Ptar& a;
  const Tree& subject;
  // Failed (position, state, counters) triples; successes return directly.
  std::map<std::tuple<Position, int, Vec>, bool> failed;

  std::optional<std::vector<std::pair<int, Position>>> search(
      const Tree& node, const Position& pos, int state, const Vec& counters) {
    auto key = std::make_tuple(pos, state, counters);
    if (failed.count(key)) return std::nullopt;
    for (size_t ti = 0; ti < a.transitions().size(); ++ti) {
      const PtarTransition& t = a.transitions()[ti];
      if (t.src != state || t.symbol != node.label()) continue;
      if (t.successors.size() != node.children().size()) continue;
      if (t.successors.empty()) {
        if (!member(a.constraint(), counters)) continue;
        return std::vector<std::pair<int, Position>>{
            {static_cast<int>(ti), pos}};
      }
      std::vector<std::pair<int, Position>> trace{{static_cast<int>(ti), pos}};
      bool ok = true;
      for (size_t i = 0; i < t.successors.size() && ok; ++i) {
        const PtarSuccessor& s = t.successors[i];
        Vec w = s.action.is_reset() ? Vec::zero(a.dim())
                                    : counters + *s.action.add;
        Position child = pos;
        child.push_back(static_cast<int>(i) + 1);
        auto sub = search(node.children()[i], child, s.state, w);
        if (!sub) {
          ok = false;
        } else {
          trace.insert(trace.end(), sub->begin(), sub->end());
        }
      }
      if (ok) return trace;
    }
    failed[key] = true;
    return std::nullopt;
  }
};

}  // namespace

std::optional<ComputationTrace> member(const Ptar& a, const Tree& t) {
  validate_ranked(t, a.alphabet());
  MemberSearch search{a, t, {}};
  auto steps = search.search(t, Position{}, a.initial(), Vec::zero(a.dim()));
  if (!steps) return std::nullopt;
  return ComputationTrace{std::move(*steps), t};
}

bool trace_valid(const Ptar& a, const Tree& t, const ComputationTrace& trace) {
  if (static_cast<int>(trace.steps.size()) != t.size()) return false;
  PartialTree current =
      PartialTree::config(Configuration{a.initial(), Vec::zero(a.dim())});
  for (const auto& [transition, pos] : trace.steps) {
    try {
      current = step(a, current, pos, transition);
    } catch (const StepError&) {
      return false;
    } catch (const std::out_of_range&) {
      return false;
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  auto result = current.to_tree();
  return result && *result == t;
}

std::string to_string(AutomatonClass c) {
  switch (c) {
    case AutomatonClass::Pta:
      return "PTA";
    case AutomatonClass::Ptar:
      return "PTAR";
    case AutomatonClass::LinearPtar:
      return "LINEAR-PTAR";
  }
  return "?";
}

bool is_reset_free(const Ptar& a) {
  for (const PtarTransition& t : a.transitions())
    for (const PtarSuccessor& s : t.successors)
      if (s.action.is_reset()) return false;
  return true;
}

bool is_linear(const Ptar& a) {
  for (const PtarTransition& t : a.transitions()) {
    int adds = 0;
    for (const PtarSuccessor& s : t.successors)
      if (!s.action.is_reset()) ++adds;
    if (adds > 1) return false;
  }
  return true;
}

AutomatonClass classify(const Ptar& a) {
  if (is_linear(a)) return AutomatonClass::LinearPtar;
  if (is_reset_free(a)) return AutomatonClass::Pta;
  return AutomatonClass::Ptar;
}

}  // namespace pta
