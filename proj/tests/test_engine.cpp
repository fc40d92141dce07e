#include <doctest.h>

#include <random>

#include "cannon/engine.hpp"
#include "cannon/json_io.hpp"
#include "support.hpp"

using namespace cannon;
using namespace cannon::testing;

namespace {

RewritingSystem make_sys(Flavor flavor, const std::vector<std::string>& letters,
                         const std::vector<std::tuple<std::string, std::string, bool, bool>>& rules) {
  RewritingSystem sys;
  sys.flavor = flavor;
  for (const auto& l : letters) sys.alphabet.intern(l);
  sys.input_letter.assign(sys.alphabet.size(), true);
  for (const auto& [lhs, rhs, as, ae] : rules) {
    Rule r;
    for (char c : lhs) r.lhs.push_back(sys.alphabet.require(std::string(1, c)));
    for (char c : rhs) r.rhs.push_back(sys.alphabet.require(std::string(1, c)));
    r.anchor_start = as;
    r.anchor_end = ae;
    sys.rules.push_back(std::move(r));
  }
  return sys;
}

Word w_of(const RewritingSystem& sys, const std::string& s) {
  Word w;
  for (char c : s) w.push_back(sys.alphabet.require(std::string(1, c)));
  return w;
}

std::string s_of(const RewritingSystem& sys, const Word& w) {
  std::string out;
  for (LetterId id : w) out += sys.alphabet.name(id);
  return out;
}

}  // namespace

TEST_CASE("validate: free group system is valid") {
  auto sys = free_group_system(2);
  CHECK(validate_system(sys).empty());
}

TEST_CASE("validate: non-length-decreasing rule flagged") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b", "c"}, {{"ab", "abc", false, false}});
  auto v = validate_system(sys);
  REQUIRE(v.size() == 1);
  CHECK(v[0].code == "non-length-decreasing");
  CHECK(v[0].rule_index == 0);
}

TEST_CASE("validate: duplicate decorated lhs flagged, anchored twin allowed") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b"},
                      {{"ab", "a", true, false}, {"ab", "b", true, false}});
  auto v = validate_system(sys);
  REQUIRE(v.size() == 1);
  CHECK(v[0].code == "duplicate-left-hand-side");

  // ^ab and ab are distinct left-hand sides
  auto ok = make_sys(Flavor::Incremental, {"a", "b"},
                     {{"ab", "a", true, false}, {"ab", "b", false, false}});
  CHECK(validate_system(ok).empty());
}

TEST_CASE("find_redex picks the only occurrence") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b", "c", "x", "y"},
                      {{"ab", "x", false, false}, {"cb", "y", false, false}});
  auto r = find_redex(sys, w_of(sys, "acb"));
  REQUIRE(r.has_value());
  CHECK(r->start == 1);
  CHECK(r->rule_id == 1);
}

TEST_CASE("find_redex: longest wins among same-end occurrences") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b", "x", "z"},
                      {{"ab", "x", false, false}, {"b", "z", false, false}});
  auto r = find_redex(sys, w_of(sys, "ab"));
  REQUIRE(r.has_value());
  CHECK(r->start == 0);
  CHECK(r->lhs_len == 2);
}

TEST_CASE("find_redex: anchored lhs only matches at the start") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b"}, {{"a", "", true, false}});
  CHECK_FALSE(find_redex(sys, w_of(sys, "ba")).has_value());
  auto r = find_redex(sys, w_of(sys, "ab"));
  REQUIRE(r.has_value());
  CHECK(r->start == 0);
}

TEST_CASE("reduce: free group cancellation") {
  auto sys = free_group_system(2);
  CHECK(s_of(sys, reduce(sys, w_of(sys, "aAb"))) == "b");
  CHECK(reduce(sys, w_of(sys, "abBA")).empty());
  CHECK(s_of(sys, reduce(sys, w_of(sys, "ab"))) == "ab");
  CHECK(accepts(sys, w_of(sys, "abBA")));
  CHECK_FALSE(accepts(sys, w_of(sys, "ab")));
}

TEST_CASE("reduce: anchored cascade from the spec example") {
  auto sys = make_sys(Flavor::Incremental, {"a", "b"},
                      {{"aa", "b", false, false}, {"b", "", true, false}});
  // aab -> bb -> b -> eps
  CHECK(reduce(sys, w_of(sys, "aab")).empty());
  auto h = reduce_traced(sys, w_of(sys, "aab"));
  check_history(h, true);
  REQUIRE(h.steps.size() == 3);
  CHECK(s_of(sys, h.words[1]) == "bb");
  CHECK(s_of(sys, h.words[2]) == "b");
  CHECK(h.words[3].empty());
}

TEST_CASE("reduce_traced basics") {
  auto sys = free_group_system(1);
  auto h = reduce_traced(sys, w_of(sys, "aA"));
  CHECK(h.steps.size() == 1);
  CHECK(h.words.back().empty());

  auto h2 = reduce_traced(sys, w_of(sys, "aa"));
  CHECK(h2.steps.empty());
  CHECK(h2.words.size() == 1);
}

TEST_CASE("non-incremental: end anchors") {
  auto sys = make_sys(Flavor::NonIncremental, {"a", "b"},
                      {{"ab", "", false, true}});  // only at the end of the word
  CHECK(reduce(sys, w_of(sys, "ab")).empty());
  CHECK(s_of(sys, reduce(sys, w_of(sys, "aba"))) == "aba");
  // the trailing pair fires first, leaving "ab" which is then itself at the end
  CHECK(reduce(sys, w_of(sys, "abab")).empty());
}

TEST_CASE("non-incremental picks earliest start, then longest") {
  auto sys = make_sys(Flavor::NonIncremental, {"a", "b", "x", "y"},
                      {{"ab", "x", false, false}, {"abb", "y", false, false}});
  auto r = find_redex(sys, w_of(sys, "abb"));
  REQUIRE(r.has_value());
  CHECK(r->lhs_len == 3);
}

TEST_CASE("incremental identity R(uv) = R(R(u)v) on random systems") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    auto sys = random_system(rng, Flavor::Incremental);
    SystemSource src(sys);
    auto u = random_word(rng, 20, sys.alphabet.size());
    auto v = random_word(rng, 20, sys.alphabet.size());
    auto lhs = reduce(src, concat(u, v));
    auto rhs = reduce(src, concat(reduce(src, u), v));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("prefix stability: history of uv starts with the steps of u") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = random_system(rng, Flavor::Incremental);
    SystemSource src(sys);
    auto u = random_word(rng, 12, sys.alphabet.size());
    auto v = random_word(rng, 12, sys.alphabet.size());
    auto hu = reduce_traced(src, u);
    auto huv = reduce_traced(src, concat(u, v));
    REQUIRE(huv.steps.size() >= hu.steps.size());
    for (std::size_t i = 0; i < hu.steps.size(); ++i) {
      CHECK(huv.steps[i].rule_id == hu.steps[i].rule_id);
      CHECK(huv.steps[i].start == hu.steps[i].start);
    }
    CHECK(huv.words[hu.steps.size()] == concat(hu.words.back(), v));
  }
}

TEST_CASE("windowed scanner agrees with naive full rescans") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 300; ++trial) {
    auto flavor = trial % 2 ? Flavor::Incremental : Flavor::NonIncremental;
    auto sys = random_system(rng, flavor);
    SystemSource src(sys);
    auto w = random_word(rng, 30, sys.alphabet.size());
    CHECK(reduce(src, w) == reduce_naive(src, w));
  }
}

TEST_CASE("determinism and substitution bound") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    auto sys = random_system(rng, Flavor::Incremental);
    auto w = random_word(rng, 40, sys.alphabet.size());
    auto h = reduce_traced(sys, w);
    check_history(h, true);
    CHECK(h.steps.size() <= w.size());
    CHECK(reduce(sys, w) == h.words.back());
  }
}

TEST_CASE("accepts rejects non-input letters") {
  auto sys = free_group_system(1);
  auto t = sys.alphabet.intern("t");
  sys.input_letter.push_back(false);
  CHECK_THROWS(accepts(sys, Word{t}));
}

TEST_CASE("system json round trip") {
  auto sys = make_sys(Flavor::NonIncremental, {"a", "b", "c"},
                      {{"ab", "c", false, false}, {"abc", "", true, true}});
  auto text = system_to_json(sys);
  auto back = system_from_json(text);
  CHECK(system_to_json(back) == text);
  CHECK(back.rules.size() == 2);
  CHECK(back.rules[1].anchor_end);
  CHECK(back.flavor == Flavor::NonIncremental);
}
