#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cannon/system.hpp"

namespace cannon {

/// One selected redex: an occurrence of a rule's lhs plus the replacement.
struct Match {
  std::int32_t len = 0;         // lhs length in letters
  std::int64_t rule_id = -1;    // stable id; rule index for materialized systems
  const Word* rhs = nullptr;    // stable for the lifetime of the source
  bool anchor_start = false;
  bool anchor_end = false;
};

/// Rule lookup abstraction used by the engine.  Materialized systems answer
/// from tries over their rule vectors; generated systems (expanding
/// endomorphisms, strict compression) answer from closed-form match
/// predicates and materialize rules on demand.  Either way the rule set is a
/// fixed finite object and lookups are pure.
class RuleSource {
 public:
  virtual ~RuleSource() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual Flavor flavor() const = 0;
  virtual TieBreak tie_break() const = 0;
  virtual int window() const = 0;
  virtual bool is_strict() const = 0;
  virtual bool is_input(LetterId id) const = 0;

  /// Incremental flavor: best occurrence ending at prefix.back(), where
  /// prefix is the whole word so far (w[0..e]).  Start-anchored lhs's are
  /// eligible only when they cover the entire prefix.
  virtual std::optional<Match> best_ending_at(std::span<const LetterId> prefix) const = 0;

  /// Non-incremental flavor: best occurrence starting at the first letter of
  /// `window_letters` (= w[s..s+k]).  `at_start` means s == 0;
  /// `total_remaining` is the number of letters from s to the end of the
  /// word, so end-anchored lhs's are eligible iff len == total_remaining.
  virtual std::optional<Match> best_starting_at(std::span<const LetterId> window_letters,
                                                bool at_start,
                                                std::size_t total_remaining) const = 0;

  /// Substitution budget guaranteeing termination (from strictness or the
  /// declared potential).
  virtual std::uint64_t step_budget(std::span<const LetterId> word) const = 0;
};

/// RuleSource over an explicit rule vector (trie-backed).
class SystemSource final : public RuleSource {
 public:
  explicit SystemSource(const RewritingSystem& sys);
  ~SystemSource() override;

  const Alphabet& alphabet() const override;
  Flavor flavor() const override;
  TieBreak tie_break() const override;
  int window() const override;
  bool is_strict() const override;
  bool is_input(LetterId id) const override;
  std::optional<Match> best_ending_at(std::span<const LetterId> prefix) const override;
  std::optional<Match> best_starting_at(std::span<const LetterId> window_letters, bool at_start,
                                        std::size_t total_remaining) const override;
  std::uint64_t step_budget(std::span<const LetterId> word) const override;

  const RewritingSystem& system() const { return sys_; }

 private:
  struct Trie;
  const RewritingSystem& sys_;
  std::unique_ptr<Trie> fwd_;  // lhs as written, for the non-incremental scan
  std::unique_ptr<Trie> rev_;  // lhs reversed, for the incremental scan
};

struct ReductionStep {
  std::int64_t rule_id;
  std::int32_t start;    // start index of the replaced occurrence in the previous word
  std::int32_t lhs_len;
  Word rhs;
};

struct ReductionHistory {
  std::vector<Word> words;           // w0 .. wt
  std::vector<ReductionStep> steps;  // steps[i] turns words[i] into words[i+1]
};

/// find one redex per the flavor's selection order; none iff w is reduced.
std::optional<ReductionStep> find_redex(const RuleSource& src, const Word& w);

Word reduce(const RuleSource& src, const Word& w);
ReductionHistory reduce_traced(const RuleSource& src, const Word& w);

/// Reference reducer: full rescans with find_redex.  Quadratic; used for
/// differential tests against the windowed scanner.
Word reduce_naive(const RuleSource& src, const Word& w);

/// true iff reduce(w) is empty.  w must use input letters only.
bool accepts(const RuleSource& src, const Word& w);

// Convenience overloads for materialized systems.
std::optional<ReductionStep> find_redex(const RewritingSystem& sys, const Word& w);
Word reduce(const RewritingSystem& sys, const Word& w);
ReductionHistory reduce_traced(const RewritingSystem& sys, const Word& w);
bool accepts(const RewritingSystem& sys, const Word& w);

/// Checks the ReductionHistory invariants (each step applies at its index and
/// strictly shortens the word for strict systems).  Throws on violation.
void check_history(const ReductionHistory& h, bool strict);

}  // namespace cannon
