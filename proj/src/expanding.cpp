#include "cannon/expanding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cannon {

using boost::multiprecision::cpp_int;

std::optional<std::string> ExpandingParams::invariant_violation() const {
  if (!(M.den > 0 && M.num > M.den)) return "expansion factor M must exceed 1";
  if (K < 1) return "density radius K must be positive";
  // 3/M + 2/K < 1  <=>  3*den*K + 2*num < num*K
  __int128 lhs = static_cast<__int128>(3) * M.den * K + static_cast<__int128>(2) * M.num;
  __int128 rhs = static_cast<__int128>(M.num) * K;
  if (!(lhs < rhs))
    return "length-decrease condition 3/M + 2/K < 1 fails; take a power of phi to raise M";
  if (N) {
    if (*N < 1) return "N must be positive";
    cpp_int num_pow = 1, den_pow = 1;
    for (int i = 0; i < *N; ++i) {
      num_pow *= M.num;
      den_pow *= 3 * M.den;
    }
    if (!(num_pow > den_pow * K)) return "height-bound condition (M/3)^N > K fails";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ExpandingParams estimate_params(const EndomorphismSpec& endo, int radius,
                                std::uint64_t ball_budget) {
  auto oracle = endo.oracle();
  BallTable ball(oracle, ball_budget);
  ball.ensure_radius(radius);

  int stretch = 1;
  for (int g = 0; g < oracle->generator_count(); ++g)
    stretch = std::max(stretch, static_cast<int>(endo.phi_of_generator(g).size()));

  Ratio m{0, 1};
  bool first = true;
  for (int r = 1; r <= radius; ++r) {
    for (const auto& e : ball.sphere(r)) {
      auto img = endo.apply(e);
      auto d = distance_to(*oracle, img, stretch * r + 2, ball_budget);
      if (!d) throw std::runtime_error("estimate_params: could not measure l(phi(g))");
      Ratio ratio{*d, r};
      if (first || ratio < m) {
        m = ratio;
        first = false;
      }
    }
  }

  int k = 0;
  for (int r = 0; r <= radius; ++r)
    for (const auto& e : ball.sphere(r)) {
      auto dec = coset_decompose(endo, ball, e, radius + 1);
      if (!dec) throw std::runtime_error("estimate_params: no coset decomposition in range");
      k = std::max(k, static_cast<int>(dec->g2.size()));
    }

  ExpandingParams params;
  params.M = m;
  params.K = k;
  params.sample_radius = radius;
  if (auto why = params.invariant_violation()) throw std::runtime_error("estimate_params: " + *why);
  return params;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t fnv_rule_id(const Word& lhs, bool anchored) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(anchored ? 2 : 1);
  for (LetterId id : lhs) mix(static_cast<std::uint64_t>(id) + 0x9e3779b97f4a7c15ull);
  return static_cast<std::int64_t>(h & 0x7fffffffffffffffull);
}

}  // namespace

struct ExpandingSystem::Impl {
  mutable std::mutex mu;
  mutable BallTable ball;
  mutable std::deque<Rule> cache;                               // stable addresses
  mutable std::map<std::pair<Word, bool>, const Rule*> by_lhs;  // decorated lhs -> rule
  mutable std::unordered_map<GroupOracle::Elt, CosetDecomposition> decomp;

  explicit Impl(OraclePtr oracle, std::uint64_t budget) : ball(std::move(oracle), budget) {}
};

ExpandingSystem::ExpandingSystem(EndoPtr endo, ExpandingParams params, ExpandingOptions opts)
    : endo_(std::move(endo)), params_(params), opts_(opts) {
  if (auto why = params_.invariant_violation())
    throw std::invalid_argument("expanding system: " + *why);
  auto oracle = endo_->oracle();
  n_gens_ = oracle->generator_count();
  for (int g = 0; g < n_gens_; ++g)
    alphabet_.intern(oracle->generator_names()[static_cast<std::size_t>(g)]);
  t_ = alphabet_.intern("t");
  tinv_ = alphabet_.intern("t-");
  impl_ = std::make_unique<Impl>(oracle, opts_.ball_budget);
  impl_->ball.ensure_radius(2 * params_.K);
}

ExpandingSystem::~ExpandingSystem() = default;

int ExpandingSystem::window() const {
  int w = 2 * params_.K + 1;
  if (params_.N) {
    int n = *params_.N;
    w = std::max(w, 2 * n + (n + 1) * (2 * params_.K - 1));
  }
  return w;
}

std::uint64_t ExpandingSystem::step_budget(std::span<const LetterId> word) const {
  return word.size();
}

std::optional<GroupOracle::Elt> ExpandingSystem::balanced_value(
    std::span<const LetterId> word) const {
  const auto& oracle = *endo_->oracle();
  std::vector<GroupOracle::Elt> stack;
  GroupOracle::Elt cur = oracle.identity();
  for (LetterId id : word) {
    if (id == t_) {
      stack.push_back(std::move(cur));
      cur = oracle.identity();
    } else if (id == tinv_) {
      if (stack.empty()) return std::nullopt;
      cur = oracle.multiply(stack.back(), endo_->apply(cur));
      stack.pop_back();
    } else {
      cur = oracle.multiply(cur, oracle.generator(id));
    }
  }
  if (!stack.empty()) return std::nullopt;
  return cur;
}

Match ExpandingSystem::intern_rule(Word lhs, Word rhs, bool anchored) const {
  auto key = std::make_pair(lhs, anchored);
  auto it = impl_->by_lhs.find(key);
  const Rule* rule;
  if (it != impl_->by_lhs.end()) {
    rule = it->second;
    if (rule->rhs != rhs) throw std::logic_error("expanding system: conflicting rhs for one lhs");
  } else {
    impl_->cache.push_back(Rule{std::move(lhs), std::move(rhs), anchored, false});
    rule = &impl_->cache.back();
    impl_->by_lhs.emplace(std::make_pair(rule->lhs, anchored), rule);
  }
  return Match{static_cast<std::int32_t>(rule->lhs.size()), fnv_rule_id(rule->lhs, anchored),
               &rule->rhs, anchored, false};
}

std::optional<Match> ExpandingSystem::best_families_1to4(std::span<const LetterId> prefix) const {
  const auto& oracle = *endo_->oracle();
  const int K2 = 2 * params_.K;
  const std::size_t n = prefix.size();

  auto geodesic_word_of = [&](const GroupOracle::Elt& e) -> Word {
    const auto* entry = impl_->ball.lookup(e);
    if (!entry) throw std::logic_error("expanding system: element outside ball");
    return Word(entry->geodesic.begin(), entry->geodesic.end());
  };

  auto decompose = [&](const GroupOracle::Elt& e) -> const CosetDecomposition& {
    auto it = impl_->decomp.find(e);
    if (it != impl_->decomp.end()) return it->second;
    auto dec = coset_decompose(*endo_, impl_->ball, e, params_.K);
    if (!dec)
      throw std::runtime_error("expanding system: no coset decomposition within K; params too weak");
    return impl_->decomp.emplace(e, std::move(*dec)).first->second;
  };

  std::optional<Match> best;
  auto offer = [&](Match m) {
    if (!best || m.len > best->len) best = m;
  };

  // family 4
  if (n >= 2 && prefix[n - 2] == t_ && prefix[n - 1] == tinv_)
    offer(intern_rule(Word{t_, tinv_}, Word{}, false));

  // maximal G-run ending at the last letter (capped at 2K)
  int run = 0;
  while (run < K2 && static_cast<std::size_t>(run) < n &&
         prefix[n - 1 - static_cast<std::size_t>(run)] < n_gens_)
    ++run;

  if (run > 0) {
    std::vector<GroupOracle::Elt> vals(static_cast<std::size_t>(run) + 1);
    vals[0] = oracle.identity();
    for (int L = 1; L <= run; ++L)
      vals[static_cast<std::size_t>(L)] =
          oracle.multiply(oracle.generator(prefix[n - static_cast<std::size_t>(L)]),
                          vals[static_cast<std::size_t>(L) - 1]);
    std::vector<int> dist(static_cast<std::size_t>(run) + 1, 0);
    for (int L = 1; L <= run; ++L) {
      auto d = impl_->ball.distance(vals[static_cast<std::size_t>(L)]);
      if (!d) throw std::logic_error("expanding system: value escaped the 2K ball");
      dist[static_cast<std::size_t>(L)] = *d;
    }

    // family 1: longest non-geodesic suffix
    int pick = 0;
    if (opts_.rule1_scope == Rule1Scope::Full) {
      for (int L = run; L >= 1; --L)
        if (dist[static_cast<std::size_t>(L)] < L) {
          pick = L;
          break;
        }
    } else {
      std::vector<GroupOracle::Elt> hvals(static_cast<std::size_t>(run), oracle.identity());
      for (int j = 1; j < run; ++j)
        hvals[static_cast<std::size_t>(j)] =
            oracle.multiply(oracle.generator(prefix[n - 1 - static_cast<std::size_t>(j)]),
                            hvals[static_cast<std::size_t>(j) - 1]);
      for (int L = run; L >= 2; --L) {
        if (dist[static_cast<std::size_t>(L)] >= L) continue;
        if (dist[static_cast<std::size_t>(L) - 1] != L - 1) continue;  // dropped-first not geodesic
        auto hd = impl_->ball.distance(hvals[static_cast<std::size_t>(L) - 1]);
        if (!hd || *hd != L - 1) continue;  // dropped-last not geodesic
        pick = L;
        break;
      }
    }
    if (pick > 0) {
      Word lhs(prefix.end() - pick, prefix.end());
      offer(intern_rule(std::move(lhs), geodesic_word_of(vals[static_cast<std::size_t>(pick)]),
                        false));
    }

    // family 2 (bare): geodesic of length exactly 2K
    if (run == K2 && dist[static_cast<std::size_t>(K2)] == K2) {
      const auto& dec = decompose(vals[static_cast<std::size_t>(K2)]);
      Word rhs;
      rhs.push_back(t_);
      rhs.insert(rhs.end(), dec.g1.begin(), dec.g1.end());
      rhs.push_back(tinv_);
      rhs.insert(rhs.end(), dec.g2.begin(), dec.g2.end());
      if (rhs.size() >= static_cast<std::size_t>(K2))
        throw std::runtime_error("expanding system: rule 2 not length decreasing; params too weak");
      Word lhs(prefix.end() - K2, prefix.end());
      offer(intern_rule(std::move(lhs), std::move(rhs), false));
    }

    // families 2'/3: t- immediately before the whole run, run geodesic
    if (static_cast<std::size_t>(run) < n &&
        prefix[n - 1 - static_cast<std::size_t>(run)] == tinv_ &&
        dist[static_cast<std::size_t>(run)] == run) {
      bool image = endo_->in_image(vals[static_cast<std::size_t>(run)]);
      if (run == K2 || image) {
        const auto& dec = decompose(vals[static_cast<std::size_t>(run)]);
        if (image && !dec.g2.empty())
          throw std::logic_error("expanding system: image element decomposed with g'' nonempty");
        Word rhs(dec.g1.begin(), dec.g1.end());
        rhs.push_back(tinv_);
        rhs.insert(rhs.end(), dec.g2.begin(), dec.g2.end());
        if (rhs.size() >= static_cast<std::size_t>(run) + 1)
          throw std::runtime_error(
              "expanding system: t- rule not length decreasing; params too weak");
        Word lhs;
        lhs.push_back(tinv_);
        lhs.insert(lhs.end(), prefix.end() - run, prefix.end());
        offer(intern_rule(std::move(lhs), std::move(rhs), false));
      }
    }
  }

  return best;
}

std::optional<Match> ExpandingSystem::rule5_match(std::span<const LetterId> prefix) const {
  // shape: t^h g_h t- g_{h-1} ... t- g_0, 1 <= h <= N
  const std::size_t n = prefix.size();
  std::size_t i = 0;
  while (i < n && prefix[i] == t_) ++i;
  const int h = static_cast<int>(i);
  if (h < 1 || h > *params_.N) return std::nullopt;
  std::vector<Word> digits;
  Word cur;
  int seen_tinv = 0;
  for (; i < n; ++i) {
    if (prefix[i] == t_) return std::nullopt;
    if (prefix[i] == tinv_) {
      digits.push_back(cur);
      cur.clear();
      ++seen_tinv;
    } else {
      cur.push_back(prefix[i]);
    }
  }
  digits.push_back(cur);
  if (seen_tinv != h) return std::nullopt;

  const int K2 = 2 * params_.K;
  const auto& oracle = *endo_->oracle();
  if (digits.front().empty()) return std::nullopt;  // g_h nonempty
  for (std::size_t d = 0; d < digits.size(); ++d) {
    const auto& g = digits[d];
    if (static_cast<int>(g.size()) >= K2) return std::nullopt;
    std::vector<int> gens(g.begin(), g.end());
    auto val = oracle.eval(gens);
    auto dist = impl_->ball.distance(val);
    if (!dist || *dist != static_cast<int>(g.size())) return std::nullopt;  // not geodesic
    if (d + 1 < digits.size() && !g.empty() && endo_->in_image(val)) return std::nullopt;
  }
  // genuinely reduced w.r.t. rules 1-4 (rule 3 can fire on a digit prefix
  // whose value lies in the image even when the whole digit does not)
  for (std::size_t e = 1; e < n; ++e)
    if (best_families_1to4(prefix.subspan(0, e + 1))) return std::nullopt;

  auto value = balanced_value(prefix);
  if (!value) return std::nullopt;
  auto vdist = impl_->ball.distance(*value);
  // condition l_G(w) < l(g_0)/2; a ball miss means l > 2K >= l(g_0)/2
  if (!vdist || 2 * *vdist >= static_cast<int>(digits.back().size())) return std::nullopt;
  const auto* entry = impl_->ball.lookup(*value);
  Word rhs(entry->geodesic.begin(), entry->geodesic.end());
  if (rhs.size() >= n) return std::nullopt;
  return intern_rule(Word(prefix.begin(), prefix.end()), std::move(rhs), true);
}

std::optional<Match> ExpandingSystem::best_ending_at(std::span<const LetterId> prefix) const {
  if (prefix.empty()) return std::nullopt;
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto best = best_families_1to4(prefix);
  if (params_.N && prefix[0] == t_ && prefix.size() >= 2) {
    if (auto m5 = rule5_match(prefix)) {
      // rule 5 spans the whole prefix; longer wins, anchored breaks exact ties
      if (!best || m5->len >= best->len) best = m5;
    }
  }
  return best;
}

std::optional<Match> ExpandingSystem::best_starting_at(std::span<const LetterId>, bool,
                                                       std::size_t) const {
  throw std::logic_error("expanding systems are incremental; no forward scan");
}

// ---------------------------------------------------------------------------

RewritingSystem ExpandingSystem::materialize(std::uint64_t rule_budget) const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  const auto& oracle = *endo_->oracle();
  const int K2 = 2 * params_.K;
  counts_ = FamilyCounts{};

  RewritingSystem sys;
  sys.flavor = Flavor::Incremental;
  sys.alphabet = alphabet_;
  sys.input_letter.assign(alphabet_.size(), false);
  for (int g = 0; g < n_gens_; ++g) sys.input_letter[static_cast<std::size_t>(g)] = true;

  auto budget_check = [&](std::size_t n) {
    if (n > rule_budget)
      throw std::runtime_error("materialize: rule budget (" + std::to_string(rule_budget) +
                               ") exceeded; the generated table is intentionally left lazy");
  };
  std::uint64_t nodes = 0;
  auto node_check = [&] {
    if (++nodes > 64 * rule_budget)
      throw std::runtime_error("materialize: enumeration budget exceeded; table left lazy");
  };

  // enumerate geodesic words of length <= 2K in lex order (geodesic prefixes
  // only; every prefix of a geodesic is geodesic)
  std::vector<std::pair<Word, GroupOracle::Elt>> geodesics;  // excludes the empty word
  {
    Word w;
    auto dfs = [&](auto&& self, const GroupOracle::Elt& val) -> void {
      if (static_cast<int>(w.size()) == K2) return;
      for (int g = 0; g < n_gens_; ++g) {
        node_check();
        auto child = oracle.multiply(val, oracle.generator(g));
        auto d = impl_->ball.distance(child);
        if (!d || *d != static_cast<int>(w.size()) + 1) continue;
        w.push_back(g);
        geodesics.emplace_back(w, child);
        budget_check(geodesics.size());
        self(self, child);
        w.pop_back();
      }
    };
    dfs(dfs, oracle.identity());
  }

  std::vector<Rule> rules;
  auto add = [&](Word lhs, Word rhs, bool anchored, std::uint64_t& counter) {
    rules.push_back(Rule{std::move(lhs), std::move(rhs), anchored, false});
    ++counter;
    budget_check(rules.size());
  };
  auto geodesic_word_of = [&](const GroupOracle::Elt& e) {
    const auto* entry = impl_->ball.lookup(e);
    return Word(entry->geodesic.begin(), entry->geodesic.end());
  };

  // family 1
  if (opts_.rule1_scope == Rule1Scope::Full) {
    Word w;
    auto dfs = [&](auto&& self, const GroupOracle::Elt& val) -> void {
      if (static_cast<int>(w.size()) == K2) return;
      for (int g = 0; g < n_gens_; ++g) {
        node_check();
        auto child = oracle.multiply(val, oracle.generator(g));
        w.push_back(g);
        auto d = impl_->ball.distance(child);
        if (d && *d < static_cast<int>(w.size()))
          add(w, geodesic_word_of(child), false, counts_.rule1);
        self(self, child);
        w.pop_back();
      }
    };
    dfs(dfs, oracle.identity());
  } else {
    for (const auto& [u, uval] : geodesics) {
      for (int g = 0; g < n_gens_; ++g) {
        auto wval = oracle.multiply(uval, oracle.generator(g));
        auto d = impl_->ball.distance(wval);
        if (!d || *d >= static_cast<int>(u.size()) + 1) continue;  // still geodesic
        // dropped-first subword must be geodesic
        Word tail(u.begin() + 1, u.end());
        tail.push_back(g);
        std::vector<int> gens(tail.begin(), tail.end());
        auto tval = oracle.eval(gens);
        auto td = impl_->ball.distance(tval);
        if (!td || *td != static_cast<int>(tail.size())) continue;
        Word lhs = u;
        lhs.push_back(g);
        add(std::move(lhs), geodesic_word_of(wval), false, counts_.rule1);
      }
    }
  }

  // families 2, 2', 3
  auto decompose = [&](const GroupOracle::Elt& e) -> const CosetDecomposition& {
    auto it = impl_->decomp.find(e);
    if (it != impl_->decomp.end()) return it->second;
    auto dec = coset_decompose(*endo_, impl_->ball, e, params_.K);
    if (!dec)
      throw std::runtime_error("expanding system: no coset decomposition within K; params too weak");
    return impl_->decomp.emplace(e, std::move(*dec)).first->second;
  };
  for (const auto& [g_word, val] : geodesics) {
    bool image = endo_->in_image(val);
    if (static_cast<int>(g_word.size()) == K2) {
      const auto& dec = decompose(val);
      Word rhs{t_};
      rhs.insert(rhs.end(), dec.g1.begin(), dec.g1.end());
      rhs.push_back(tinv_);
      rhs.insert(rhs.end(), dec.g2.begin(), dec.g2.end());
      if (rhs.size() >= static_cast<std::size_t>(K2))
        throw std::runtime_error("expanding system: rule 2 not length decreasing; params too weak");
      add(g_word, rhs, false, counts_.rule2);
      Word lhs{tinv_};
      lhs.insert(lhs.end(), g_word.begin(), g_word.end());
      Word rhs2(dec.g1.begin(), dec.g1.end());
      rhs2.push_back(tinv_);
      rhs2.insert(rhs2.end(), dec.g2.begin(), dec.g2.end());
      add(std::move(lhs), std::move(rhs2), false, counts_.rule2);
    } else if (image) {
      const auto& dec = decompose(val);
      Word lhs{tinv_};
      lhs.insert(lhs.end(), g_word.begin(), g_word.end());
      Word rhs(dec.g1.begin(), dec.g1.end());
      rhs.push_back(tinv_);
      add(std::move(lhs), std::move(rhs), false, counts_.rule3);
    }
  }

  // family 4
  add(Word{t_, tinv_}, Word{}, false, counts_.rule4);

  // family 5
  if (params_.N) {
    std::vector<std::pair<Word, GroupOracle::Elt>> digits_any{{Word{}, oracle.identity()}};
    for (const auto& [g_word, val] : geodesics)
      if (static_cast<int>(g_word.size()) < K2) digits_any.emplace_back(g_word, val);
    std::vector<std::pair<Word, GroupOracle::Elt>> digits_top;  // nonempty
    for (const auto& d : digits_any)
      if (!d.first.empty()) digits_top.push_back(d);
    std::vector<std::pair<Word, GroupOracle::Elt>> digits_interior;  // empty or not in image
    for (const auto& d : digits_any)
      if (d.first.empty() || !endo_->in_image(d.second)) digits_interior.push_back(d);

    Word w;
    std::vector<const std::pair<Word, GroupOracle::Elt>*> chosen;
    for (int h = 1; h <= *params_.N; ++h) {
      // digits g_h (top), g_{h-1} .. g_0 (interior/last slots)
      std::vector<std::size_t> idx(static_cast<std::size_t>(h) + 1, 0);
      auto slot_options = [&](std::size_t slot) -> const auto& {
        return slot == 0 ? digits_top : digits_interior;
      };
      bool done = false;
      while (!done) {
        // assemble t^h g_h t- ... t- g_0
        w.clear();
        for (int i = 0; i < h; ++i) w.push_back(t_);
        for (std::size_t slot = 0; slot <= static_cast<std::size_t>(h); ++slot) {
          if (slot) w.push_back(tinv_);
          const auto& opt = slot_options(slot)[idx[slot]];
          w.insert(w.end(), opt.first.begin(), opt.first.end());
        }
        if (auto m5 = rule5_match(w)) {
          add(w, *m5->rhs, true, counts_.rule5);
        }
        // advance the odometer
        std::size_t slot = idx.size();
        while (slot > 0) {
          --slot;
          if (++idx[slot] < slot_options(slot).size()) break;
          idx[slot] = 0;
          if (slot == 0) done = true;
        }
      }
    }
  }

  std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    return std::tie(a.lhs, a.anchor_start, a.anchor_end) <
           std::tie(b.lhs, b.anchor_start, b.anchor_end);
  });
  sys.rules = std::move(rules);
  return sys;
}

// ---------------------------------------------------------------------------

ExpandingSystemPtr build_system(EndoPtr endo, ExpandingParams params, ExpandingOptions opts) {
  return std::make_shared<ExpandingSystem>(std::move(endo), params, opts);
}

NormalForm parse_normal_form(const ExpandingSystem& sys, const Word& w) {
  NormalForm nf;
  const LetterId t = sys.t_letter(), tinv = sys.t_inv_letter();
  std::size_t i = 0;
  while (i < w.size() && w[i] == t) ++i;
  nf.height = static_cast<int>(i);
  Word cur;
  int seen_tinv = 0;
  for (; i < w.size(); ++i) {
    if (w[i] == t) throw std::runtime_error("normal form violation: interior t");
    if (w[i] == tinv) {
      nf.digits.push_back(cur);
      cur.clear();
      ++seen_tinv;
    } else {
      cur.push_back(w[i]);
    }
  }
  nf.digits.push_back(cur);
  if (seen_tinv != nf.height)
    throw std::runtime_error("normal form violation: t / t- count mismatch");
  if (nf.height > 0 && nf.digits.front().empty())
    throw std::runtime_error("normal form violation: empty top digit");
  for (std::size_t d = 0; d < nf.digits.size(); ++d)
    if (static_cast<int>(nf.digits[d].size()) >= 2 * sys.params().K)
      throw std::runtime_error("normal form violation: digit too long");
  return nf;
}

HeightBoundReport check_height_bound(const ExpandingSystem& sys, int samples, std::uint64_t seed,
                                     int max_input_len) {
  HeightBoundReport report;
  std::mt19937_64 rng(seed);
  const auto& oracle = *sys.endo().oracle();
  std::uniform_int_distribution<int> len_dist(1, max_input_len);
  std::uniform_int_distribution<LetterId> gen_dist(0, sys.generator_count() - 1);
  const auto& m = sys.params().M;
  for (int trial = 0; trial < samples; ++trial) {
    Word in(static_cast<std::size_t>(len_dist(rng)));
    for (auto& id : in) id = gen_dist(rng);
    Word red = reduce(sys, in);
    if (red.empty()) continue;
    ++report.samples;
    auto nf = parse_normal_form(sys, red);
    auto value = sys.balanced_value(red);
    if (!value) throw std::logic_error("reduced word is unbalanced");
    // violation iff l(value) < (M/3)^n, i.e. l * (3 den)^n < num^n
    cpp_int num_pow = 1, den_pow = 1;
    for (int i = 0; i < nf.height; ++i) {
      num_pow *= m.num;
      den_pow *= 3 * m.den;
    }
    // largest violating length
    cpp_int limit = (num_pow + den_pow - 1) / den_pow - 1;
    if (limit < 0) continue;
    cpp_int cap = std::min(limit, cpp_int(in.size()));
    auto d = distance_to(oracle, *value, cap.convert_to<int>());
    if (d) {
      ++report.violations;
      if (report.first_witness.empty())
        report.first_witness = print_word(sys.alphabet(), red, true);
    }
  }
  return report;
}

TightReport check_tight(const ExpandingSystem& sys, const RewritingSystem& extra_rules, int n_bound,
                        int samples, std::uint64_t seed) {
  if (extra_rules.alphabet.names() != sys.alphabet().names())
    throw std::invalid_argument("check_tight: extra rules must share the system alphabet");
  for (const auto& r : extra_rules.rules)
    for (LetterId id : r.lhs)
      if (!sys.is_input(id))
        throw std::invalid_argument("check_tight: local geodesic rules must be over G");
  SystemSource extra(extra_rules);
  UnionSource merged(sys, extra);

  TightReport report;
  std::mt19937_64 rng(seed);
  const auto& oracle = *sys.endo().oracle();
  std::uniform_int_distribution<int> len_dist(1, std::max(1, n_bound - 1));
  std::uniform_int_distribution<LetterId> gen_dist(0, sys.generator_count() - 1);
  for (int trial = 0; trial < samples; ++trial) {
    Word in(static_cast<std::size_t>(len_dist(rng)));
    for (auto& id : in) id = gen_dist(rng);
    std::vector<int> gens(in.begin(), in.end());
    auto val = oracle.eval(gens);
    auto d = distance_to(oracle, val, n_bound);
    if (!d || *d >= n_bound) continue;  // sample only l(value) < N
    ++report.samples;
    auto h = reduce_traced(merged, in);
    for (std::size_t s_i = 0; s_i < h.steps.size(); ++s_i) {
      const auto& step = h.steps[s_i];
      Word lhs(h.words[s_i].begin() + step.start, h.words[s_i].begin() + step.start + step.lhs_len);
      for (const auto& r : extra_rules.rules)
        if (r.lhs == lhs) {
          ++report.extra_rule_firings;
          break;
        }
    }
    const Word& out = h.words.back();
    bool has_t = std::any_of(out.begin(), out.end(),
                             [&](LetterId id) { return !sys.is_input(id); });
    auto out_d = distance_to(oracle, val, static_cast<int>(out.size()));
    if (has_t || !out_d || *out_d != static_cast<int>(out.size())) ++report.non_geodesic_outputs;
  }
  return report;
}

// ---------------------------------------------------------------------------

UnionSource::UnionSource(const RuleSource& a, const RuleSource& b) : a_(a), b_(b) {
  if (a.alphabet().names() != b.alphabet().names())
    throw std::invalid_argument("union source: alphabets differ");
  if (a.flavor() != b.flavor()) throw std::invalid_argument("union source: flavors differ");
}

namespace {
std::optional<Match> pick_union(std::optional<Match> x, std::optional<Match> y, TieBreak tb) {
  if (!x) return y;
  if (!y) return x;
  auto rank = [&](const Match& m) {
    bool anchored = m.anchor_start || m.anchor_end;
    if (tb == TieBreak::AnchorFirst) return std::tuple(anchored ? 1 : 0, m.len, anchored ? 1 : 0);
    return std::tuple(0, m.len, anchored ? 1 : 0);
  };
  return rank(*x) >= rank(*y) ? x : y;
}
}  // namespace

std::optional<Match> UnionSource::best_ending_at(std::span<const LetterId> prefix) const {
  auto x = a_.best_ending_at(prefix);
  auto y = b_.best_ending_at(prefix);
  if (y) y->rule_id += kSecondIdOffset;
  return pick_union(x, y, tie_break());
}

std::optional<Match> UnionSource::best_starting_at(std::span<const LetterId> window_letters,
                                                   bool at_start,
                                                   std::size_t total_remaining) const {
  auto x = a_.best_starting_at(window_letters, at_start, total_remaining);
  auto y = b_.best_starting_at(window_letters, at_start, total_remaining);
  if (y) y->rule_id += kSecondIdOffset;
  return pick_union(x, y, tie_break());
}

std::uint64_t UnionSource::step_budget(std::span<const LetterId> word) const {
  return std::max(a_.step_budget(word), b_.step_budget(word));
}

}  // namespace cannon
