#include <doctest.h>

#include <algorithm>
#include <random>

#include "pta/terms.hpp"
#include "support.hpp"

using namespace pta;

namespace {

RankedAlphabet example_alphabet() {
  return RankedAlphabet({{"sigma", 2}, {"gamma", 1}, {"alpha", 0}, {"u", 0}});
}

// sigma(sigma(gamma(alpha), alpha), gamma(gamma(u)))
Tree example_tree() {
  return parse_tree("sigma(sigma(gamma(alpha),alpha),gamma(gamma(u)))",
                    example_alphabet());
}

Tree random_tree(std::mt19937& rng, int budget) {
  std::uniform_int_distribution<int> pick(0, budget > 1 ? 2 : 0);
  switch (pick(rng)) {
    case 1:
      return Tree("gamma", {random_tree(rng, budget - 1)});
    case 2: {
      int left = std::uniform_int_distribution<int>(1, budget - 1)(rng);
      return Tree("sigma",
                  {random_tree(rng, left), random_tree(rng, budget - left)});
    }
    default:
      return Tree("alpha");
  }
}

}  // namespace

TEST_CASE("positions of the running example") {
  Tree xi = example_tree();
  std::vector<Position> expected = {{},     {1},    {1, 1}, {1, 1, 1},
                                    {1, 2}, {2},    {2, 1}, {2, 1, 1}};
  std::sort(expected.begin(), expected.end(),
            [](const Position& a, const Position& b) {
              return lex_compare(a, b) < 0;
            });
  CHECK(positions(xi) == expected);
  CHECK(xi.size() == 8);

  CHECK(positions(Tree("alpha")) == std::vector<Position>{{}});
  Tree two = parse_tree("sigma(alpha,alpha)", example_alphabet());
  CHECK(positions(two) == std::vector<Position>{{}, {1}, {2}});
}

TEST_CASE("labels, subtrees, and replacement") {
  Tree xi = example_tree();
  CHECK(label_at(xi, {}) == "sigma");
  CHECK(label_at(xi, {2, 1}) == "gamma");
  CHECK(subtree_at(xi, {2}) == parse_tree("gamma(gamma(u))", example_alphabet()));
  CHECK(replace_at(xi, {}, Tree("alpha")) == Tree("alpha"));
  CHECK_THROWS_AS((void)label_at(xi, {3}), std::out_of_range);
  CHECK_THROWS_AS((void)subtree_at(xi, {1, 1, 1, 1}), std::out_of_range);
}

TEST_CASE("height, size, independence") {
  CHECK(Tree("alpha").height() == 0);
  CHECK(Tree("alpha").size() == 1);
  CHECK(independent({1}, {2}));
  CHECK_FALSE(independent({1}, {1, 1}));
  CHECK_FALSE(independent({1, 1}, {1}));
  Tree xi = example_tree();
  CHECK(xi.height() == 3);
  CHECK(xi.size() == 8);
}

TEST_CASE("complete paths and their words") {
  RankedAlphabet ab({{"a", 2}, {"b", 2}, {"#", 0}});
  Tree t = parse_tree("a(b(#,#),b(#,#))", ab);
  auto paths = complete_paths(t);
  REQUIRE(paths.size() == 4);
  for (const CompletePath& p : paths)
    CHECK(p.word == std::vector<std::string>{"a", "b", "#"});
  // Leaves in lexicographic order.
  CHECK(paths[0].path.back() == Position{1, 1});
  CHECK(paths[3].path.back() == Position{2, 2});

  CHECK(complete_paths(Tree("alpha")).size() == 1);
  CHECK(complete_paths(Tree("alpha"))[0].word ==
        std::vector<std::string>{"alpha"});

  Tree s = parse_tree("sigma(gamma(alpha),alpha)", example_alphabet());
  auto sp = complete_paths(s);
  REQUIRE(sp.size() == 2);
  CHECK(sp[0].word == std::vector<std::string>{"sigma", "gamma", "alpha"});
  CHECK(sp[1].word == std::vector<std::string>{"sigma", "alpha"});
}

TEST_CASE("context composition") {
  Tree alpha("alpha");
  Context c(Tree("sigma", {Tree("gamma", {Context::variable(1)}),
                           Context::variable(2)}),
            2);
  CHECK(c.compose({alpha, alpha}) ==
        parse_tree("sigma(gamma(alpha),alpha)", example_alphabet()));

  Context identity(Context::variable(1), 1);
  Tree t = example_tree();
  CHECK(identity.compose({t}) == t);

  Context pair(Tree("sigma", {Context::variable(1), Context::variable(2)}), 2);
  CHECK(pair.compose({Tree("alpha"), Tree("u")}) ==
        Tree("sigma", {Tree("alpha"), Tree("u")}));
  CHECK_THROWS_AS(pair.compose({alpha}), std::invalid_argument);
}

TEST_CASE("context validation") {
  // x2 before x1 violates the ordering condition.
  CHECK_THROWS_AS(Context(Tree("sigma", {Context::variable(2),
                                         Context::variable(1)}),
                          2),
                  std::invalid_argument);
  // Missing variable.
  CHECK_THROWS_AS(Context(Tree("alpha"), 1), std::invalid_argument);
  // Duplicate variable.
  CHECK_THROWS_AS(Context(Tree("sigma", {Context::variable(1),
                                         Context::variable(1)}),
                          1),
                  std::invalid_argument);
}

TEST_CASE("spine of the running example") {
  Tree xi = example_tree();
  SpineDecomposition sd = spine_decompose(xi, {{1}, {1, 1}});
  Context expected(Tree("sigma", {Tree("gamma", {Context::variable(1)}),
                                  Context::variable(2)}),
                   2);
  CHECK(sd.spine == expected);
  CHECK(sd.outer ==
        Context(Tree("sigma", {Context::variable(1),
                               parse_tree("gamma(gamma(u))", example_alphabet())}),
                1));
  CHECK(sd.fillers == std::vector<Tree>{Tree("alpha"), Tree("alpha")});
  CHECK(sd.outer.apply(sd.spine.compose(sd.fillers)) == xi);
  // The variable below position 11 continues the path towards 111.
  CHECK(sd.variable_index_at({1, 1, 1}) == 1);
}

TEST_CASE("spine base cases") {
  RankedAlphabet alphabet = example_alphabet();
  Tree two = parse_tree("sigma(alpha,alpha)", alphabet);
  SpineDecomposition sd = spine_decompose(two, {{}});
  CHECK(sd.spine ==
        Context(Tree("sigma", {Context::variable(1), Context::variable(2)}), 2));
  CHECK(sd.outer == Context(Context::variable(1), 1));

  Tree t = parse_tree("sigma(alpha,gamma(alpha))", alphabet);
  SpineDecomposition sd2 = spine_decompose(t, {{}, {2}});
  CHECK(sd2.spine ==
        Context(Tree("sigma", {Context::variable(1),
                               Tree("gamma", {Context::variable(2)})}),
                2));
  CHECK(sd2.outer.apply(sd2.spine.compose(sd2.fillers)) == t);

  CHECK_THROWS_AS(spine_decompose(t, {{}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(spine_decompose(t, {}), std::invalid_argument);
}

TEST_CASE("lexicographic order") {
  CHECK(lex_compare({1}, {1, 1}) < 0);
  CHECK(lex_compare({1, 2}, {2}) < 0);
  CHECK(lex_compare({}, {}) == 0);
  CHECK(lex_compare({2, 1}, {1, 2}) > 0);
}

TEST_CASE("round trips and order properties on random trees") {
  std::mt19937 rng(1234);
  for (int i = 0; i < 50; ++i) {
    Tree t = random_tree(rng, 12);
    std::vector<Position> pos = positions(t);

    // Sorted by lex_compare equals pre-order emission order.
    std::vector<Position> sorted = pos;
    std::sort(sorted.begin(), sorted.end(),
              [](const Position& a, const Position& b) {
                return lex_compare(a, b) < 0;
              });
    CHECK(sorted == pos);

    std::uniform_int_distribution<size_t> pick(0, pos.size() - 1);
    const Position& p = pos[pick(rng)];
    CHECK(replace_at(t, p, subtree_at(t, p)) == t);

    // Size and height recursions.
    int size = 1, height = 0;
    for (const Tree& c : t.children()) {
      size += c.size();
      height = std::max(height, c.height() + 1);
    }
    CHECK(t.size() == size);
    CHECK(t.height() == height);
    CHECK(static_cast<size_t>(t.size()) == pos.size());
  }
}

TEST_CASE("spine round trip on random trees and paths") {
  std::mt19937 rng(99);
  for (int i = 0; i < 50; ++i) {
    Tree t = random_tree(rng, 10);
    std::vector<Position> pos = positions(t);
    std::uniform_int_distribution<size_t> pick(0, pos.size() - 1);
    Position start = pos[pick(rng)];
    std::vector<Position> path{start};
    Position cur = start;
    while (true) {
      Tree sub = subtree_at(t, cur);
      if (sub.children().empty()) break;
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) break;
      std::uniform_int_distribution<size_t> child(1, sub.children().size());
      cur.push_back(static_cast<int>(child(rng)));
      path.push_back(cur);
    }
    SpineDecomposition sd = spine_decompose(t, path);
    CHECK(sd.outer.apply(sd.spine.compose(sd.fillers)) == t);
    // Non-variable spine positions are exactly the path, relative to start.
    std::vector<Position> nonvar;
    for (const Position& p : positions(sd.spine.body()))
      if (!Context::variable_index(label_at(sd.spine.body(), p))) {
        Position abs = start;
        abs.insert(abs.end(), p.begin(), p.end());
        nonvar.push_back(abs);
      }
    CHECK(nonvar == path);
  }
}

TEST_CASE("tree parsing") {
  RankedAlphabet alphabet = example_alphabet();
  CHECK(parse_tree("  sigma ( alpha , alpha ) ", alphabet) ==
        Tree("sigma", {Tree("alpha"), Tree("alpha")}));
  // Monadic word shorthand.
  CHECK(parse_tree("gammagammau", alphabet) ==
        parse_tree("gamma(gamma(u))", alphabet));
  RankedAlphabet hash({{"gamma", 1}, {"#", 0}});
  CHECK(parse_tree("gammagamma#", hash) == parse_tree("gamma(gamma(#))", hash));

  CHECK_THROWS_AS(parse_tree("sigma(alpha)", alphabet), ParseError);
  CHECK_THROWS_AS(parse_tree("omega", alphabet), ParseError);
  CHECK_THROWS_AS(parse_tree("sigma(alpha,alpha)extra", alphabet), ParseError);
  CHECK_THROWS_AS(parse_tree("gamma()", alphabet), ParseError);
}
