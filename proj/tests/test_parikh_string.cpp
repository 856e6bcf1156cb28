#include <doctest.h>

#include <random>

#include "pta/parikh_string.hpp"
#include "support.hpp"

using namespace pta;

namespace {

SemilinearSet diagonal_from_one() {
  return SemilinearSet(2, {LinearSet(Vec({1, 1}), {Vec({1, 1})})});
}

Pa ab_counter() {
  return Pa({"s"}, 0, {0},
            {PaTransition{0, "a", Vec({1, 0}), 0},
             PaTransition{0, "b", Vec({0, 1}), 0}},
            diagonal_from_one());
}

}  // namespace

TEST_CASE("run validity") {
  SemilinearSet zero_ok(1, {LinearSet(Vec({0}), {})});
  Pa trivial({"q"}, 0, {0}, {}, zero_ok);
  CHECK(run_valid(trivial, PaRun{}));  // empty run: q0 final, 0 in C

  SemilinearSet one(1, {LinearSet(Vec({1}), {})});
  Pa single({"q", "f"}, 0, {1}, {PaTransition{0, "a", Vec({1}), 1}}, one);
  CHECK(run_valid(single, PaRun{{0}}));
  CHECK_FALSE(run_valid(single, PaRun{}));  // q0 not final

  SemilinearSet two(1, {LinearSet(Vec({2}), {})});
  Pa wrong_sum({"q", "f"}, 0, {1}, {PaTransition{0, "a", Vec({1}), 1}}, two);
  CHECK_FALSE(run_valid(wrong_sum, PaRun{{0}}));

  CHECK(word_of(single, PaRun{{0}}) == "a");
  CHECK(sum_of(single, PaRun{{0}}) == Vec({1}));
}

TEST_CASE("emptiness basics") {
  SemilinearSet one(1, {LinearSet(Vec({1}), {})});
  Pa no_finals({"q"}, 0, {}, {PaTransition{0, "a", Vec({1}), 0}}, one);
  CHECK(is_empty(no_finals).empty);

  SemilinearSet zero_ok(1, {LinearSet(Vec({0}), {})});
  Pa trivial({"q"}, 0, {0}, {}, zero_ok);
  PaEmptinessResult r = is_empty(trivial);
  REQUIRE_FALSE(r.empty);
  CHECK(r.witness->transitions.empty());

  // Equal numbers of a and b, at least one each: minimal witness length 2.
  PaEmptinessResult ab = is_empty(ab_counter());
  REQUIRE_FALSE(ab.empty);
  CHECK(run_valid(ab_counter(), *ab.witness));
  auto shortest = brute_force_nonempty(ab_counter(), 4);
  REQUIRE(shortest.has_value());
  CHECK(shortest->transitions.size() == 2);
}

TEST_CASE("emptiness needs a constraint component") {
  Pa empty_c({"q"}, 0, {0}, {PaTransition{0, "a", Vec({1}), 0}},
             SemilinearSet::empty(1));
  CHECK(is_empty(empty_c).empty);
  CHECK_FALSE(brute_force_nonempty(empty_c, 8).has_value());
}

TEST_CASE("brute force replays decider witnesses") {
  PaEmptinessResult r = is_empty(ab_counter());
  REQUIRE_FALSE(r.empty);
  auto replay = brute_force_nonempty(
      ab_counter(), static_cast<int>(r.witness->transitions.size()));
  CHECK(replay.has_value());

  Pa no_finals({"q"}, 0, {}, {PaTransition{0, "a", Vec({1}), 0}},
               SemilinearSet(1, {LinearSet(Vec({0}), {})}));
  CHECK_FALSE(brute_force_nonempty(no_finals, 10).has_value());
}

TEST_CASE("emptiness agrees with bounded search on random automata") {
  std::mt19937 rng(7);
  for (int i = 0; i < 60; ++i) {
    Pa pa = testsupport::random_pa(rng);
    PaEmptinessResult r = is_empty(pa);
    auto bounded = brute_force_nonempty(pa, 12);
    if (!r.empty) {
      CHECK(run_valid(pa, *r.witness));
      CHECK(r.witness->transitions.size() <= 12);
      CHECK(bounded.has_value());
    } else {
      CHECK_FALSE(bounded.has_value());
    }
  }
}

TEST_CASE("acceptance is unchanged by renaming letters") {
  std::mt19937 rng(8);
  for (int i = 0; i < 40; ++i) {
    Pa pa = testsupport::random_pa(rng);
    std::vector<PaTransition> renamed = pa.transitions();
    for (PaTransition& t : renamed)
      t.symbol = t.symbol == "a" ? "left" : "right";
    Pa other(pa.states(), pa.initial(), pa.finals(), std::move(renamed),
             pa.constraint());
    CHECK(is_empty(pa).empty == is_empty(other).empty);
  }
}
