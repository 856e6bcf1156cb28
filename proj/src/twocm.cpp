#include "pta/twocm.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pta {

std::string CmOp::to_string() const {
  switch (kind) {
    case CmOpKind::Inc:
      return "inc" + std::to_string(counter);
    case CmOpKind::Dec:
      return "dec" + std::to_string(counter);
    case CmOpKind::ZeroTest:
      return "zero" + std::to_string(counter);
  }
  return "?";
}

TwoCm::TwoCm(std::vector<std::string> states, int initial,
             std::vector<int> finals, std::vector<CmTransition> transitions)
    : states_(std::move(states)),
      initial_(initial),
      finals_(std::move(finals)),
      transitions_(std::move(transitions)) {
  auto check_state = [&](int q) {
    if (q < 0 || q >= num_states())
      throw std::invalid_argument("state index out of range");
  };
  check_state(initial_);
  for (int f : finals_) check_state(f);
  for (const CmTransition& t : transitions_) {
    check_state(t.src);
    check_state(t.dst);
    if (t.op.counter != 1 && t.op.counter != 2)
      throw std::invalid_argument("counter index must be 1 or 2");
  }
}

bool TwoCm::is_final(int q) const {
  return std::find(finals_.begin(), finals_.end(), q) != finals_.end();
}

std::vector<std::pair<int, CmConfig>> cm_step(const TwoCm& m, const CmConfig& c) {
  std::vector<std::pair<int, CmConfig>> out;
  for (size_t ti = 0; ti < m.transitions().size(); ++ti) {
    const CmTransition& t = m.transitions()[ti];
    if (t.src != c.state) continue;
    std::int64_t k1 = c.k1;
    std::int64_t k2 = c.k2;
    std::int64_t& k = t.op.counter == 1 ? k1 : k2;
    switch (t.op.kind) {
      case CmOpKind::Inc:
        ++k;
        break;
      case CmOpKind::Dec:
        if (k == 0) continue;
        --k;
        break;
      case CmOpKind::ZeroTest:
        if (k != 0) continue;
        break;
    }
    out.emplace_back(static_cast<int>(ti), CmConfig{t.dst, k1, k2});
  }
  return out;
}

std::optional<std::vector<int>> cm_bounded_accepts(const TwoCm& m, int max_steps) {
  if (max_steps < 0) throw std::invalid_argument("negative step bound");
  struct Node {
    CmConfig config;
    int parent;
    int transition;
  };
  std::vector<Node> seen;
  std::set<CmConfig> visited;
  CmConfig start{m.initial(), 0, 0};
  seen.push_back(Node{start, -1, -1});
  visited.insert(start);

  auto reconstruct = [&](int index) {
    std::vector<int> out;
    while (seen[index].transition >= 0) {
      out.push_back(seen[index].transition);
      index = seen[index].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  size_t begin = 0, end = 1;
  for (int len = 0; len <= max_steps; ++len) {
    for (size_t i = begin; i < end; ++i) {
      const CmConfig& c = seen[i].config;
      if (m.is_final(c.state) && c.k1 == 0 && c.k2 == 0)
        return reconstruct(static_cast<int>(i));
    }
    if (len == max_steps) break;
    for (size_t i = begin; i < end; ++i) {
      for (const auto& [ti, succ] : cm_step(m, seen[i].config)) {
        if (succ.k1 > max_steps || succ.k2 > max_steps) continue;
        if (visited.count(succ)) continue;
        visited.insert(succ);
        seen.push_back(Node{succ, static_cast<int>(i), ti});
      }
    }
    begin = end;
    end = seen.size();
  }
  return std::nullopt;
}

namespace {

Vec v3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return Vec({a, b, c});
}

std::string fresh_name(std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end())
    base += "_";
  taken.push_back(base);
  return base;
}

}  // namespace

Encoded2cm encode(const TwoCm& m) {
  std::vector<std::string> states = m.states();
  fresh_name(states, "lt1");
  fresh_name(states, "lt2");
  fresh_name(states, "eq1");
  fresh_name(states, "eq2");
  int n = m.num_states();
  int lt1 = n, lt2 = n + 1, eq1 = n + 2, eq2 = n + 3;

  RankedAlphabet alphabet({{"sigma", 2}, {"gamma", 1}, {"alpha", 0}});
  SemilinearSet constraint(3, {LinearSet(v3(0, 0, 0), {v3(1, 1, 1)})});

  auto add = [](Vec v) { return CounterAction::adding(std::move(v)); };

  std::vector<PtarTransition> transitions;
  std::vector<int> transition_of;
  for (const CmTransition& t : m.transitions()) {
    transition_of.push_back(static_cast<int>(transitions.size()));
    switch (t.op.kind) {
      case CmOpKind::Inc: {
        Vec d = t.op.counter == 1 ? v3(2, 1, 1) : v3(1, 2, 1);
        transitions.push_back(
            PtarTransition{t.src, "gamma", {{t.dst, add(d)}}});
        break;
      }
      case CmOpKind::Dec: {
        Vec d = t.op.counter == 1 ? v3(0, 1, 1) : v3(1, 0, 1);
        int gadget = t.op.counter == 1 ? lt1 : lt2;
        transitions.push_back(PtarTransition{
            t.src, "sigma", {{gadget, add(d)}, {t.dst, add(d)}}});
        break;
      }
      case CmOpKind::ZeroTest: {
        int gadget = t.op.counter == 1 ? eq1 : eq2;
        transitions.push_back(PtarTransition{
            t.src,
            "sigma",
            {{gadget, add(v3(0, 0, 0))}, {t.dst, add(v3(0, 0, 0))}}});
        break;
      }
    }
  }
  for (int f : m.finals())
    transitions.push_back(PtarTransition{f, "alpha", {}});

  auto loop = [&](int state, Vec d) {
    transitions.push_back(
        PtarTransition{state, "gamma", {{state, add(std::move(d))}}});
  };
  loop(lt1, v3(0, 1, 0));
  loop(lt1, v3(0, 0, 1));
  loop(lt1, v3(1, 0, 1));
  loop(lt2, v3(1, 0, 0));
  loop(lt2, v3(0, 0, 1));
  loop(lt2, v3(0, 1, 1));
  loop(eq1, v3(1, 0, 1));
  loop(eq1, v3(0, 1, 0));
  loop(eq2, v3(0, 1, 1));
  loop(eq2, v3(1, 0, 0));
  for (int g : {lt1, lt2, eq1, eq2})
    transitions.push_back(PtarTransition{g, "alpha", {}});

  Ptar automaton(std::move(states), std::move(alphabet), m.initial(),
                 std::move(transitions), std::move(constraint));
  return Encoded2cm{std::move(automaton), std::move(transition_of), lt1, lt2,
                    eq1, eq2};
}

}  // namespace pta
