#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "cannon/endo.hpp"
#include "cannon/engine.hpp"
#include "cannon/system.hpp"

namespace cannon {

/// Exact nonnegative rational, for expansion factors.
struct Ratio {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
inline bool operator<(const Ratio& a, const Ratio& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

struct ExpandingParams {
  Ratio M;                 // verified expansion lower bound
  int K = 0;               // density radius
  std::optional<int> N;    // height bound for the finite-to-one rules
  bool M_exact = false;    // analytic for the provided oracles, else empirical
  int sample_radius = 0;   // ball radius M and the sampled K were measured on

  /// M > 1, 3/M + 2/K < 1, and (M/3)^N > K when N is set (exact arithmetic).
  std::optional<std::string> invariant_violation() const;
};

/// Which non-geodesic words become Rule 1 left-hand sides.
///   Full: every non-geodesic word of length <= 2K (the paper's rule set).
///   Minimal: only those whose two maximal proper subwords are geodesic;
///   reduced words and the accepted language are unchanged, the rule table
///   shrinks from |G|^2K to roughly the geodesic count.
enum class Rule1Scope { Full, Minimal };

struct ExpandingOptions {
  Rule1Scope rule1_scope = Rule1Scope::Full;
  std::uint64_t ball_budget = 10'000'000;
};

/// M = min over nonidentity ball elements of l(phi(g))/l(g); K = max over the
/// ball of the distance to phi(G).  Throws when the length-decrease condition
/// 3/M + 2/K < 1 fails, suggesting a power of phi.
ExpandingParams estimate_params(const EndomorphismSpec& endo, int radius,
                                std::uint64_t ball_budget = 10'000'000);

/// The generated Cannon's algorithm for an expanding endomorphism: working
/// alphabet G u {t, t-}, rules 1-4 (and 5 when N is set) of the place-value
/// construction.  The rule set is finite but can be huge, so lookups are
/// closed-form against the ball table and rules materialize on demand;
/// materialize() enumerates the full table for export when it fits a budget.
class ExpandingSystem : public RuleSource {
 public:
  ExpandingSystem(EndoPtr endo, ExpandingParams params, ExpandingOptions opts = {});
  ~ExpandingSystem() override;

  const ExpandingParams& params() const { return params_; }
  const EndomorphismSpec& endo() const { return *endo_; }

  LetterId t_letter() const { return t_; }
  LetterId t_inv_letter() const { return tinv_; }
  int generator_count() const { return n_gens_; }

  /// Value of a balanced word in G u {t,t-}: t w t- represents phi(w).
  /// Nullopt for unbalanced words.
  std::optional<GroupOracle::Elt> balanced_value(std::span<const LetterId> word) const;

  /// Enumerates the whole rule table (throws if it would exceed the budget).
  RewritingSystem materialize(std::uint64_t rule_budget = 1'000'000) const;

  /// Number of rules per family from the last materialize call.
  struct FamilyCounts {
    std::uint64_t rule1 = 0, rule2 = 0, rule3 = 0, rule4 = 0, rule5 = 0;
  };
  FamilyCounts materialize_counts() const { return counts_; }

  // RuleSource interface
  const Alphabet& alphabet() const override { return alphabet_; }
  Flavor flavor() const override { return Flavor::Incremental; }
  TieBreak tie_break() const override { return TieBreak::LengthFirst; }
  int window() const override;
  bool is_strict() const override { return true; }
  bool is_input(LetterId id) const override { return id < n_gens_; }
  std::optional<Match> best_ending_at(std::span<const LetterId> prefix) const override;
  std::optional<Match> best_starting_at(std::span<const LetterId> window_letters, bool at_start,
                                        std::size_t total_remaining) const override;
  std::uint64_t step_budget(std::span<const LetterId> word) const override;

 private:
  struct Impl;
  // all private matchers assume impl_->mu is held
  Match intern_rule(Word lhs, Word rhs, bool anchored) const;
  std::optional<Match> best_families_1to4(std::span<const LetterId> prefix) const;
  std::optional<Match> rule5_match(std::span<const LetterId> prefix) const;

  EndoPtr endo_;
  ExpandingParams params_;
  ExpandingOptions opts_;
  Alphabet alphabet_;
  LetterId t_ = -1, tinv_ = -1;
  int n_gens_ = 0;
  std::unique_ptr<Impl> impl_;
  mutable FamilyCounts counts_;
};

using ExpandingSystemPtr = std::shared_ptr<ExpandingSystem>;

/// Builds the generated system, verifying every rule-2 instance is strictly
/// length decreasing (throws "params too weak" otherwise on materialization
/// or lazily on first use).
ExpandingSystemPtr build_system(EndoPtr endo, ExpandingParams params, ExpandingOptions opts = {});

struct NormalForm {
  int height = 0;
  std::vector<Word> digits;  // g_n .. g_0 (height+1 entries)
};

/// Parses a reduced word t^n g_n t- g_{n-1} ... t- g_0 and checks the
/// normal-form clauses; throws std::runtime_error with a shape report on
/// violation (which would indicate an engine or generator bug).
NormalForm parse_normal_form(const ExpandingSystem& sys, const Word& w);

struct HeightBoundReport {
  int samples = 0;
  int violations = 0;
  std::string first_witness;  // printed word, empty if none
};

/// Lemma-style check: sampled reduced nonidentity words of height n satisfy
/// l_G(value) >= (M/3)^n.
HeightBoundReport check_height_bound(const ExpandingSystem& sys, int samples,
                                     std::uint64_t seed, int max_input_len);

struct TightReport {
  int samples = 0;
  int non_geodesic_outputs = 0;
  std::uint64_t extra_rule_firings = 0;
};

/// Merges disjoint local geodesic rules into the system and checks sampled
/// words of oracle length < N reduce to geodesics without the extra rules
/// ever firing.
TightReport check_tight(const ExpandingSystem& sys, const RewritingSystem& extra_rules, int n_bound,
                        int samples, std::uint64_t seed);

/// Union of two rule sources over identical alphabets (first source wins its
/// tie-breaks first; ids of the second are offset by 1e9).
class UnionSource final : public RuleSource {
 public:
  UnionSource(const RuleSource& a, const RuleSource& b);
  const Alphabet& alphabet() const override { return a_.alphabet(); }
  Flavor flavor() const override { return a_.flavor(); }
  TieBreak tie_break() const override { return a_.tie_break(); }
  int window() const override { return std::max(a_.window(), b_.window()); }
  bool is_strict() const override { return a_.is_strict() && b_.is_strict(); }
  bool is_input(LetterId id) const override { return a_.is_input(id); }
  std::optional<Match> best_ending_at(std::span<const LetterId> prefix) const override;
  std::optional<Match> best_starting_at(std::span<const LetterId> window_letters, bool at_start,
                                        std::size_t total_remaining) const override;
  std::uint64_t step_budget(std::span<const LetterId> word) const override;

  static constexpr std::int64_t kSecondIdOffset = 1'000'000'000;

 private:
  const RuleSource& a_;
  const RuleSource& b_;
};

}  // namespace cannon
