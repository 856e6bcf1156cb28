#include "pta/gpta.hpp"

#include <algorithm>
#include <cmath>

namespace pta {

Gpta::Gpta(std::vector<std::string> states, RankedAlphabet alphabet,
           std::vector<Vec> dvecs, int initial,
           std::vector<GptaTransition> transitions, SemilinearSet constraint)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      dvecs_(std::move(dvecs)),
      initial_(initial),
      transitions_(std::move(transitions)),
      constraint_(std::move(constraint)) {
  if (initial_ < 0 || initial_ >= num_states())
    throw std::invalid_argument("initial state out of range");
  for (const Vec& d : dvecs_)
    if (d.dim() != constraint_.dim())
      throw std::invalid_argument("label vector dimension mismatch");
  for (const GptaTransition& t : transitions_) {
    if (t.src < 0 || t.src >= num_states())
      throw std::invalid_argument("transition source out of range");
    if (t.dvec < 0 || t.dvec >= static_cast<int>(dvecs_.size()))
      throw std::invalid_argument("transition label vector out of range");
    if (!alphabet_.contains(t.symbol))
      throw std::invalid_argument("transition symbol not in alphabet");
    if (alphabet_.rank(t.symbol) != static_cast<int>(t.successors.size()))
      throw std::invalid_argument("successor count does not match rank of " +
                                  t.symbol);
    for (int q : t.successors)
      if (q < 0 || q >= num_states())
        throw std::invalid_argument("successor state out of range");
  }
}

namespace {

std::string zip_label(const std::string& symbol, int dvec) {
  return symbol + "@" + std::to_string(dvec);
}

std::pair<std::string, int> unzip_label(const std::string& label) {
  size_t at = label.rfind('@');
  if (at == std::string::npos)
    throw std::invalid_argument("not a labeled-tree node: " + label);
  return {label.substr(0, at), std::stoi(label.substr(at + 1))};
}

Tree zip_rec(const Tree& base, const DLabeling& labeling, Position& pos) {
  auto it = labeling.find(pos);
  if (it == labeling.end())
    throw std::invalid_argument("labeling misses position " +
                                position_to_string(pos));
  std::vector<Tree> children;
  children.reserve(base.children().size());
  for (size_t i = 0; i < base.children().size(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    children.push_back(zip_rec(base.children()[i], labeling, pos));
    pos.pop_back();
  }
  return Tree(zip_label(base.label(), it->second), std::move(children));
}

}  // namespace

Tree zip_labeled(const Gpta& g, const Tree& base, const DLabeling& labeling) {
  if (static_cast<int>(labeling.size()) != base.size())
    throw std::invalid_argument("labeling size does not match tree size");
  for (const auto& [pos, dvec] : labeling)
    if (dvec < 0 || dvec >= static_cast<int>(g.dvecs().size()))
      throw std::invalid_argument("label vector index out of range");
  Position pos;
  return zip_rec(base, labeling, pos);
}

std::pair<Tree, DLabeling> unzip_labeled(const Tree& labeled) {
  DLabeling labeling;
  struct Walker {
    DLabeling& labeling;
    Tree walk(const Tree& t, Position& pos) {
      auto [symbol, dvec] = unzip_label(t.label());
      labeling[pos] = dvec;
      std::vector<Tree> children;
      children.reserve(t.children().size());
      for (size_t i = 0; i < t.children().size(); ++i) {
        pos.push_back(static_cast<int>(i) + 1);
        children.push_back(walk(t.children()[i], pos));
        pos.pop_back();
      }
      return Tree(symbol, std::move(children));
    }
  } walker{labeling};
  Position pos;
  Tree base = walker.walk(labeled, pos);
  return {std::move(base), std::move(labeling)};
}

Vec parikh(const Gpta& g, const Tree& labeled) {
  Vec sum = Vec::zero(g.dim());
  for (const Position& p : positions(labeled)) {
    auto [symbol, dvec] = unzip_label(label_at(labeled, p));
    if (dvec < 0 || dvec >= static_cast<int>(g.dvecs().size()))
      throw std::invalid_argument("label vector index out of range");
    sum = sum + g.dvecs()[dvec];
  }
  return sum;
}

bool run_valid(const Gpta& g, const Tree& labeled, const StateMap& run) {
  std::vector<Position> pos = positions(labeled);
  if (run.size() != pos.size())
    throw std::invalid_argument("run does not cover the tree's positions");
  for (const Position& p : pos) {
    auto it = run.find(p);
    if (it == run.end())
      throw std::invalid_argument("run misses position " + position_to_string(p));
    auto [symbol, dvec] = unzip_label(label_at(labeled, p));
    int rank = static_cast<int>(subtree_at(labeled, p).children().size());
    bool found = false;
    for (const GptaTransition& t : g.transitions()) {
      if (t.src != it->second || t.symbol != symbol || t.dvec != dvec) continue;
      if (static_cast<int>(t.successors.size()) != rank) continue;
      bool match = true;
      for (int i = 0; i < rank; ++i) {
        Position child = p;
        child.push_back(i + 1);
        if (run.at(child) != t.successors[i]) {
          match = false;
          break;
        }
      }
      if (match) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  if (run.at(Position{}) != g.initial()) return false;
  return member(g.constraint(), parikh(g, labeled));
}

namespace {

struct DpChoice {
  int transition;
  std::vector<Vec> child_sums;
};

using DpTable = std::map<std::pair<int, Vec>, DpChoice>;

void enumerate_combinations(const Gpta& g, const GptaTransition& t,
                            int transition_index,
                            const std::vector<DpTable>& child_tables,
                            size_t child, Vec acc, std::vector<Vec>& picks,
                            DpTable& out) {
  if (child == child_tables.size()) {
    Vec total = acc + g.dvecs()[t.dvec];
    auto key = std::make_pair(t.src, std::move(total));
    if (!out.count(key)) out.emplace(key, DpChoice{transition_index, picks});
    return;
  }
  int want = t.successors[child];
  for (const auto& [key, choice] : child_tables[child]) {
    if (key.first != want) continue;
    picks.push_back(key.second);
    enumerate_combinations(g, t, transition_index, child_tables, child + 1,
                           acc + key.second, picks, out);
    picks.pop_back();
  }
}

DpTable dp_node(const Gpta& g, const Tree& t, int tree_size) {
  std::vector<DpTable> child_tables;
  child_tables.reserve(t.children().size());
  for (const Tree& c : t.children()) child_tables.push_back(dp_node(g, c, tree_size));

  DpTable out;
  for (size_t ti = 0; ti < g.transitions().size(); ++ti) {
    const GptaTransition& tr = g.transitions()[ti];
    if (tr.symbol != t.label()) continue;
    if (tr.successors.size() != t.children().size()) continue;
    std::vector<Vec> picks;
    enumerate_combinations(g, tr, static_cast<int>(ti), child_tables, 0,
                           Vec::zero(g.dim()), picks, out);
  }

  // Reachable sums stay within size * max label entry per coordinate, and
  // the table cannot hold more than |Q| * prod_c (size * maxD_c + 1) pairs.
  std::vector<std::int64_t> maxd(g.dim(), 0);
  for (const Vec& d : g.dvecs())
    for (int c = 0; c < d.dim(); ++c) maxd[c] = std::max(maxd[c], d[c]);
  double bound = static_cast<double>(g.num_states());
  for (int c = 0; c < g.dim(); ++c)
    bound *= static_cast<double>(tree_size) * static_cast<double>(maxd[c]) + 1.0;
  if (static_cast<double>(out.size()) > bound)
    throw std::logic_error("membership table exceeded its size bound");
  for (const auto& [key, choice] : out)
    for (int c = 0; c < g.dim(); ++c)
      if (key.second[c] > static_cast<std::int64_t>(tree_size) * maxd[c])
        throw std::logic_error("membership sum exceeded its coordinate bound");
  return out;
}

// Recomputes the table per node during reconstruction; trees at desk scale
// make this cheaper than storing every table.
void reconstruct(const Gpta& g, const Tree& t, int tree_size, int state,
                 const Vec& sum, Position& pos, DLabeling& labeling,
                 StateMap& run) {
  DpTable table = dp_node(g, t, tree_size);
  auto it = table.find(std::make_pair(state, sum));
  if (it == table.end())
    throw std::logic_error("witness reconstruction lost its table entry");
  const DpChoice& choice = it->second;
  const GptaTransition& tr = g.transitions()[choice.transition];
  labeling[pos] = tr.dvec;
  run[pos] = state;
  for (size_t i = 0; i < t.children().size(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    reconstruct(g, t.children()[i], tree_size, tr.successors[i],
                choice.child_sums[i], pos, labeling, run);
    pos.pop_back();
  }
}

}  // namespace

std::optional<GptaWitness> member(const Gpta& g, const Tree& t) {
  validate_ranked(t, g.alphabet());
  DpTable root = dp_node(g, t, t.size());
  for (const auto& [key, choice] : root) {
    if (key.first != g.initial()) continue;
    if (!pta::member(g.constraint(), key.second)) continue;
    DLabeling labeling;
    StateMap run;
    Position pos;
    reconstruct(g, t, t.size(), key.first, key.second, pos, labeling, run);
    return GptaWitness{zip_labeled(g, t, labeling), std::move(run)};
  }
  return std::nullopt;
}

namespace {

// Projects composite labels back to plain symbols; context variables pass
// through unchanged.
Tree unzip_context_body(const Tree& t) {
  if (Context::variable_index(t.label())) return t;
  std::vector<Tree> children;
  children.reserve(t.children().size());
  for (const Tree& c : t.children()) children.push_back(unzip_context_body(c));
  size_t at = t.label().rfind('@');
  if (at == std::string::npos)
    throw std::invalid_argument("not a labeled-tree node: " + t.label());
  return Tree(t.label().substr(0, at), std::move(children));
}

}  // namespace

Context ExchangeDecomposition::outer() const {
  return Context(unzip_context_body(outer_labeled.body()), 2);
}

Context ExchangeDecomposition::spine() const {
  return Context(unzip_context_body(spine_labeled.body()), spine_labeled.arity());
}

std::vector<Tree> ExchangeDecomposition::s_fillers() const {
  std::vector<Tree> out;
  out.reserve(s_fillers_labeled.size());
  for (const Tree& t : s_fillers_labeled) out.push_back(unzip_labeled(t).first);
  return out;
}

std::vector<Tree> ExchangeDecomposition::t_fillers() const {
  std::vector<Tree> out;
  out.reserve(t_fillers_labeled.size());
  for (const Tree& t : t_fillers_labeled) out.push_back(unzip_labeled(t).first);
  return out;
}

Tree ExchangeDecomposition::u1() const { return unzip_labeled(u1_labeled).first; }
Tree ExchangeDecomposition::u2() const { return unzip_labeled(u2_labeled).first; }

namespace {

std::vector<Tree> with_hole_filled(const std::vector<Tree>& fillers, int hole,
                                   const Tree& filling) {
  std::vector<Tree> all = fillers;
  all.insert(all.begin() + (hole - 1), filling);
  return all;
}

}  // namespace

Tree ExchangeDecomposition::recompose_labeled() const {
  Tree left = spine_labeled.compose(
      with_hole_filled(s_fillers_labeled, hole_index, u1_labeled));
  Tree right = spine_labeled.compose(
      with_hole_filled(t_fillers_labeled, hole_index, u2_labeled));
  return outer_labeled.compose({left, right});
}

namespace {

// Number of start-marked simple cycles of length <= max_len in the
// transition graph whose edges are (transition, child index) pairs.
int count_cycles(const Gpta& g, int max_len) {
  struct Edge {
    int from, to;
  };
  std::vector<Edge> edges;
  for (const GptaTransition& t : g.transitions())
    for (size_t i = 0; i < t.successors.size(); ++i)
      edges.push_back(Edge{t.src, t.successors[i]});

  int count = 0;
  std::vector<bool> visited(g.num_states(), false);
  struct Dfs {
    const std::vector<Edge>& edges;
    std::vector<bool>& visited;
    int max_len;
    int& count;
    void walk(int start, int current, int depth) {
      if (depth == max_len) return;
      for (const Edge& e : edges) {
        if (e.from != current) continue;
        if (e.to == start) {
          ++count;
          continue;
        }
        if (visited[e.to]) continue;
        visited[e.to] = true;
        walk(start, e.to, depth + 1);
        visited[e.to] = false;
      }
    }
  } dfs{edges, visited, max_len, count};
  for (int q = 0; q < g.num_states(); ++q) dfs.walk(q, q, 0);
  return count;
}

}  // namespace

ExchangeDecomposition exchange_find(const Gpta& g, const Tree& t,
                                    const GptaWitness& witness) {
  if (unzip_labeled(witness.labeled).first != t)
    throw std::invalid_argument("witness does not label the given tree");
  if (!run_valid(g, witness.labeled, witness.run))
    throw std::invalid_argument("exchange requires a valid run");
  const Tree& zt = witness.labeled;
  const StateMap& run = witness.run;
  const int p = g.num_states() + 1;

  std::vector<Position> all = positions(zt);

  // Transition applied at each position (unique index into the transition
  // list), used to compare cycle words.
  std::map<Position, int> trans_at;
  for (const Position& pos : all) {
    auto [symbol, dvec] = unzip_label(label_at(zt, pos));
    int rank = static_cast<int>(subtree_at(zt, pos).children().size());
    int found = -1;
    for (size_t ti = 0; ti < g.transitions().size() && found < 0; ++ti) {
      const GptaTransition& tr = g.transitions()[ti];
      if (tr.src != run.at(pos) || tr.symbol != symbol || tr.dvec != dvec)
        continue;
      bool match = true;
      for (int i = 0; i < rank; ++i) {
        Position child = pos;
        child.push_back(i + 1);
        if (run.at(child) != tr.successors[i]) {
          match = false;
          break;
        }
      }
      if (match) found = static_cast<int>(ti);
    }
    if (found < 0) throw std::logic_error("valid run without a transition");
    trans_at[pos] = found;
  }

  struct Found {
    std::vector<Position> path_a;
    std::vector<Position> path_b;
  };
  std::optional<Found> found;

  struct Search {
    const Tree& zt;
    const StateMap& run;
    const std::map<Position, int>& trans_at;
    int p;
    std::optional<Found>& found;

    void walk(std::vector<Position>& pa, std::vector<Position>& pb,
              int start_state) {
      if (found) return;
      const Position& a = pa.back();
      const Position& b = pb.back();
      if (pa.size() >= 2 && run.at(a) == start_state) {
        found = Found{pa, pb};
        return;
      }
      if (static_cast<int>(pa.size()) == p) return;
      if (trans_at.at(a) != trans_at.at(b)) return;
      int rank = static_cast<int>(subtree_at(zt, a).children().size());
      for (int i = 1; i <= rank && !found; ++i) {
        Position ca = a;
        ca.push_back(i);
        Position cb = b;
        cb.push_back(i);
        pa.push_back(std::move(ca));
        pb.push_back(std::move(cb));
        walk(pa, pb, start_state);
        pa.pop_back();
        pb.pop_back();
      }
    }
  } search{zt, run, trans_at, p, found};

  for (size_t i = 0; i < all.size() && !found; ++i) {
    for (size_t j = i + 1; j < all.size() && !found; ++j) {
      if (!independent(all[i], all[j])) continue;
      if (run.at(all[i]) != run.at(all[j])) continue;
      std::vector<Position> pa{all[i]};
      std::vector<Position> pb{all[j]};
      search.walk(pa, pb, run.at(all[i]));
    }
  }

  if (!found) throw ExchangeNotFound(count_cycles(g, p) + 1, p);

  const std::vector<Position>& pa = found->path_a;
  const std::vector<Position>& pb = found->path_b;
  size_t h = pa.size();

  Tree outer_body = replace_at(zt, pa.front(), Context::variable(1));
  outer_body = replace_at(outer_body, pb.front(), Context::variable(2));
  Context outer(std::move(outer_body), 2);

  std::vector<Position> prefix_a(pa.begin(), pa.end() - 1);
  std::vector<Position> prefix_b(pb.begin(), pb.end() - 1);
  SpineDecomposition sd_a = spine_decompose(zt, prefix_a);
  SpineDecomposition sd_b = spine_decompose(zt, prefix_b);
  if (!(sd_a.spine == sd_b.spine))
    throw std::logic_error("equal cycles produced different spines");

  auto hole_a = sd_a.variable_index_at(pa[h - 1]);
  auto hole_b = sd_b.variable_index_at(pb[h - 1]);
  if (!hole_a || !hole_b || *hole_a != *hole_b)
    throw std::logic_error("cycle continuation is not a spine variable");

  auto drop_hole = [](const std::vector<Tree>& fillers, int hole) {
    std::vector<Tree> out;
    for (size_t i = 0; i < fillers.size(); ++i)
      if (static_cast<int>(i) + 1 != hole) out.push_back(fillers[i]);
    return out;
  };

  ExchangeDecomposition d{
      std::move(outer),
      sd_a.spine,
      drop_hole(sd_a.fillers, *hole_a),
      drop_hole(sd_b.fillers, *hole_b),
      sd_a.fillers[*hole_a - 1],
      sd_b.fillers[*hole_b - 1],
      *hole_a};

  if (d.recompose_labeled() != zt)
    throw std::logic_error("exchange decomposition does not recompose");
  int spine_height = d.spine_labeled.body().height();
  if (spine_height <= 0 || spine_height >= p)
    throw std::logic_error("spine height outside its guaranteed range");
  return d;
}

Tree exchange_reorder_labeled(const ExchangeDecomposition& d, int variant) {
  if (variant != 2 && variant != 3)
    throw std::invalid_argument("reorder variant must be 2 or 3");
  Context spine_s = d.spine_labeled.fill_except(d.hole_index, d.s_fillers_labeled);
  Context spine_t = d.spine_labeled.fill_except(d.hole_index, d.t_fillers_labeled);
  Context stacked = spine_s.chain(spine_t);
  if (variant == 2)
    return d.outer_labeled.compose({d.u1_labeled, stacked.apply(d.u2_labeled)});
  return d.outer_labeled.compose({stacked.apply(d.u1_labeled), d.u2_labeled});
}

Tree exchange_reorder(const ExchangeDecomposition& d, int variant) {
  return unzip_labeled(exchange_reorder_labeled(d, variant)).first;
}

}  // namespace pta
