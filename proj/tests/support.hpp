#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cannon/engine.hpp"
#include "cannon/system.hpp"

namespace cannon::testing {

/// Free group of the given rank: letters a,A,b,B,... rules xX->eps, Xx->eps.
inline RewritingSystem free_group_system(int rank) {
  RewritingSystem sys;
  sys.flavor = Flavor::Incremental;
  for (int i = 0; i < rank; ++i) {
    std::string lo(1, static_cast<char>('a' + i));
    std::string up(1, static_cast<char>('A' + i));
    auto x = sys.alphabet.intern(lo);
    auto X = sys.alphabet.intern(up);
    sys.rules.push_back(Rule{{x, X}, {}, false, false});
    sys.rules.push_back(Rule{{X, x}, {}, false, false});
  }
  sys.input_letter.assign(sys.alphabet.size(), true);
  return sys;
}

inline Word random_word(std::mt19937_64& rng, std::size_t max_len, std::size_t n_letters) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<LetterId> letter_dist(0, static_cast<LetterId>(n_letters) - 1);
  Word w(len_dist(rng));
  for (auto& id : w) id = letter_dist(rng);
  return w;
}

/// Random strict system over a small alphabet, valid by construction.
inline RewritingSystem random_system(std::mt19937_64& rng, Flavor flavor,
                                     int n_letters = 4, int n_rules = 6, int max_lhs = 4) {
  RewritingSystem sys;
  sys.flavor = flavor;
  for (int i = 0; i < n_letters; ++i) sys.alphabet.intern(std::string(1, static_cast<char>('a' + i)));
  sys.input_letter.assign(sys.alphabet.size(), true);
  std::uniform_int_distribution<int> lhs_len(1, max_lhs);
  std::uniform_int_distribution<LetterId> letter(0, n_letters - 1);
  std::uniform_int_distribution<int> anchor(0, 4);
  std::set<std::tuple<Word, bool, bool>> seen;
  int guard = 0;
  while (static_cast<int>(sys.rules.size()) < n_rules && ++guard < 1000) {
    Rule r;
    int ll = lhs_len(rng);
    for (int i = 0; i < ll; ++i) r.lhs.push_back(letter(rng));
    std::uniform_int_distribution<int> rhs_len(0, ll - 1);
    int rl = rhs_len(rng);
    for (int i = 0; i < rl; ++i) r.rhs.push_back(letter(rng));
    r.anchor_start = anchor(rng) == 0;
    if (flavor == Flavor::NonIncremental && anchor(rng) == 0) r.anchor_end = true;
    if (seen.insert({r.lhs, r.anchor_start, r.anchor_end}).second) sys.rules.push_back(std::move(r));
  }
  return sys;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace cannon::testing
