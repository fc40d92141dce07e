#include "cannon/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace cannon {

namespace {

int anchor_rank(bool s, bool e) { return (s ? 2 : 0) + (e ? 1 : 0); }

// true if `a` beats `b` under the tie-break policy
bool better(const Match& a, const Match& b, TieBreak tb) {
  if (tb == TieBreak::AnchorFirst) {
    bool aa = a.anchor_start || a.anchor_end;
    bool ba = b.anchor_start || b.anchor_end;
    if (aa != ba) return aa;
  }
  if (a.len != b.len) return a.len > b.len;
  return anchor_rank(a.anchor_start, a.anchor_end) > anchor_rank(b.anchor_start, b.anchor_end);
}

}  // namespace

struct SystemSource::Trie {
  struct Node {
    std::unordered_map<LetterId, std::int32_t> next;
    // rule indices by anchor decoration; -1 = absent
    std::int32_t plain = -1, start = -1, end = -1, both = -1;
  };
  std::vector<Node> nodes;

  Trie() { nodes.emplace_back(); }

  void insert(std::span<const LetterId> key, bool astart, bool aend, std::int32_t rule) {
    std::int32_t cur = 0;
    for (LetterId id : key) {
      auto it = nodes[static_cast<std::size_t>(cur)].next.find(id);
      if (it == nodes[static_cast<std::size_t>(cur)].next.end()) {
        auto fresh = static_cast<std::int32_t>(nodes.size());
        nodes[static_cast<std::size_t>(cur)].next.emplace(id, fresh);
        nodes.emplace_back();
        cur = fresh;
      } else {
        cur = it->second;
      }
    }
    auto& n = nodes[static_cast<std::size_t>(cur)];
    (astart ? (aend ? n.both : n.start) : (aend ? n.end : n.plain)) = rule;
  }
};

SystemSource::SystemSource(const RewritingSystem& sys) : sys_(sys) {
  fwd_ = std::make_unique<Trie>();
  rev_ = std::make_unique<Trie>();
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(sys.rules.size()); ++i) {
    const auto& r = sys.rules[static_cast<std::size_t>(i)];
    fwd_->insert(r.lhs, r.anchor_start, r.anchor_end, i);
    Word rev(r.lhs.rbegin(), r.lhs.rend());
    rev_->insert(rev, r.anchor_start, r.anchor_end, i);
  }
}

SystemSource::~SystemSource() = default;

const Alphabet& SystemSource::alphabet() const { return sys_.alphabet; }
Flavor SystemSource::flavor() const { return sys_.flavor; }
TieBreak SystemSource::tie_break() const { return sys_.tie_break; }
int SystemSource::window() const { return sys_.window(); }
bool SystemSource::is_strict() const { return sys_.strict; }
bool SystemSource::is_input(LetterId id) const { return sys_.is_input(id); }

std::optional<Match> SystemSource::best_ending_at(std::span<const LetterId> prefix) const {
  std::optional<Match> best;
  std::int32_t cur = 0;
  const auto limit = std::min<std::size_t>(prefix.size(), static_cast<std::size_t>(window()));
  for (std::size_t d = 1; d <= limit; ++d) {
    LetterId id = prefix[prefix.size() - d];
    auto it = rev_->nodes[static_cast<std::size_t>(cur)].next.find(id);
    if (it == rev_->nodes[static_cast<std::size_t>(cur)].next.end()) break;
    cur = it->second;
    const auto& node = rev_->nodes[static_cast<std::size_t>(cur)];
    auto consider = [&](std::int32_t ridx, bool astart, bool aend) {
      if (ridx < 0) return;
      if (astart && d != prefix.size()) return;  // must cover the whole prefix
      const auto& rule = sys_.rules[static_cast<std::size_t>(ridx)];
      Match m{static_cast<std::int32_t>(d), ridx, &rule.rhs, astart, aend};
      if (!best || better(m, *best, sys_.tie_break)) best = m;
    };
    consider(node.plain, false, false);
    consider(node.start, true, false);
    // end anchors never appear in incremental systems; validated elsewhere
  }
  return best;
}

std::optional<Match> SystemSource::best_starting_at(std::span<const LetterId> window_letters,
                                                    bool at_start,
                                                    std::size_t total_remaining) const {
  std::optional<Match> best;
  std::int32_t cur = 0;
  for (std::size_t d = 1; d <= window_letters.size(); ++d) {
    LetterId id = window_letters[d - 1];
    auto it = fwd_->nodes[static_cast<std::size_t>(cur)].next.find(id);
    if (it == fwd_->nodes[static_cast<std::size_t>(cur)].next.end()) break;
    cur = it->second;
    const auto& node = fwd_->nodes[static_cast<std::size_t>(cur)];
    auto consider = [&](std::int32_t ridx, bool astart, bool aend) {
      if (ridx < 0) return;
      if (astart && !at_start) return;
      if (aend && d != total_remaining) return;
      const auto& rule = sys_.rules[static_cast<std::size_t>(ridx)];
      Match m{static_cast<std::int32_t>(d), ridx, &rule.rhs, astart, aend};
      if (!best || better(m, *best, sys_.tie_break)) best = m;
    };
    consider(node.plain, false, false);
    consider(node.start, true, false);
    consider(node.end, false, true);
    consider(node.both, true, true);
  }
  return best;
}

std::uint64_t SystemSource::step_budget(std::span<const LetterId> word) const {
  switch (sys_.potential.kind) {
    case Potential::Kind::None:
      return word.size();  // strict: each substitution deletes a letter
    case Potential::Kind::LetterWeights: {
      std::uint64_t total = 0;
      for (LetterId id : word)
        total += static_cast<std::uint64_t>(sys_.potential.weights[static_cast<std::size_t>(id)]);
      return total;
    }
    case Potential::Kind::MimicColor: {
      auto n = static_cast<std::uint64_t>(word.size());
      return (n + 2) * (n + 2);
    }
  }
  return word.size();
}

namespace {

struct StepCallback {
  virtual void on_step(std::size_t start, const Match& m) = 0;
  virtual ~StepCallback() = default;
};

Word run_machine(const RuleSource& src, const Word& input, StepCallback* cb) {
  const std::uint64_t budget = src.step_budget(input);
  std::uint64_t steps = 0;
  auto charge = [&] {
    if (++steps > budget)
      throw std::runtime_error("reduction exceeded its termination budget (" +
                               std::to_string(budget) + " substitutions)");
  };

  if (src.flavor() == Flavor::Incremental) {
    std::vector<LetterId> left;
    left.reserve(input.size());
    std::vector<LetterId> right(input.rbegin(), input.rend());
    while (!right.empty()) {
      left.push_back(right.back());
      right.pop_back();
      // Redexes ending at the fresh prefix top fire before anything to their
      // right.  Letters below a fired occurrence were scanned clean already;
      // only anchored whole-prefix rules can newly apply there, so re-probing
      // the shrunk prefix is both sufficient and necessary.
      while (auto m = src.best_ending_at(left)) {
        charge();
        std::size_t start = left.size() - static_cast<std::size_t>(m->len);
        if (cb) cb->on_step(start, *m);
        left.resize(start);
        for (auto it = m->rhs->rbegin(); it != m->rhs->rend(); ++it) right.push_back(*it);
      }
    }
    return left;
  }

  // non-incremental
  std::vector<LetterId> left;                                  // w[0..s)
  std::vector<LetterId> right(input.rbegin(), input.rend());   // w[s..], reversed
  const auto w = static_cast<std::size_t>(src.window());
  std::vector<LetterId> win;
  while (!right.empty()) {
    win.clear();
    const std::size_t take = std::min(right.size(), w);
    for (std::size_t i = 0; i < take; ++i) win.push_back(right[right.size() - 1 - i]);
    auto m = src.best_starting_at(win, left.empty(), right.size());
    if (!m) {
      left.push_back(right.back());
      right.pop_back();
      continue;
    }
    charge();
    if (cb) cb->on_step(left.size(), *m);
    right.resize(right.size() - static_cast<std::size_t>(m->len));
    for (auto it = m->rhs->rbegin(); it != m->rhs->rend(); ++it) right.push_back(*it);
    // Rescan from max(0, s - W).  Occurrences straddling the replacement
    // start at s-(W-1) or later; an empty rhs at the word end can also
    // re-validate an end-anchored occurrence starting at s-W.
    std::size_t back = std::min(left.size(), w);
    for (std::size_t i = 0; i < back; ++i) {
      right.push_back(left.back());
      left.pop_back();
    }
  }
  return left;
}

}  // namespace

std::optional<ReductionStep> find_redex(const RuleSource& src, const Word& w) {
  for (LetterId id : w)
    if (id < 0 || static_cast<std::size_t>(id) >= src.alphabet().size())
      throw std::invalid_argument("word uses letters outside the working alphabet");
  if (src.flavor() == Flavor::Incremental) {
    for (std::size_t e = 0; e < w.size(); ++e) {
      auto m = src.best_ending_at(std::span(w.data(), e + 1));
      if (m)
        return ReductionStep{m->rule_id, static_cast<std::int32_t>(e + 1 - static_cast<std::size_t>(m->len)),
                             m->len, *m->rhs};
    }
    return std::nullopt;
  }
  for (std::size_t s = 0; s < w.size(); ++s) {
    auto m = src.best_starting_at(std::span(w.data() + s, w.size() - s), s == 0, w.size() - s);
    if (m) return ReductionStep{m->rule_id, static_cast<std::int32_t>(s), m->len, *m->rhs};
  }
  return std::nullopt;
}

Word reduce(const RuleSource& src, const Word& w) { return run_machine(src, w, nullptr); }

ReductionHistory reduce_traced(const RuleSource& src, const Word& w) {
  struct Recorder final : StepCallback {
    ReductionHistory h;
    void on_step(std::size_t start, const Match& m) override {
      const Word& prev = h.words.back();
      Word next;
      next.reserve(prev.size() - static_cast<std::size_t>(m.len) + m.rhs->size());
      next.insert(next.end(), prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(start));
      next.insert(next.end(), m.rhs->begin(), m.rhs->end());
      next.insert(next.end(),
                  prev.begin() + static_cast<std::ptrdiff_t>(start + static_cast<std::size_t>(m.len)),
                  prev.end());
      h.steps.push_back(ReductionStep{m.rule_id, static_cast<std::int32_t>(start), m.len, *m.rhs});
      h.words.push_back(std::move(next));
    }
  } rec;
  rec.h.words.push_back(w);
  Word result = run_machine(src, w, &rec);
  if (rec.h.words.back() != result)
    throw std::logic_error("traced reduction disagrees with the machine result");
  return std::move(rec.h);
}

Word reduce_naive(const RuleSource& src, const Word& w) {
  Word cur = w;
  const std::uint64_t budget = src.step_budget(w);
  std::uint64_t steps = 0;
  while (auto r = find_redex(src, cur)) {
    if (++steps > budget) throw std::runtime_error("naive reduction exceeded budget");
    Word next;
    next.insert(next.end(), cur.begin(), cur.begin() + r->start);
    next.insert(next.end(), r->rhs.begin(), r->rhs.end());
    next.insert(next.end(), cur.begin() + r->start + r->lhs_len, cur.end());
    cur = std::move(next);
  }
  return cur;
}

bool accepts(const RuleSource& src, const Word& w) {
  for (LetterId id : w)
    if (!src.is_input(id))
      throw std::invalid_argument("accepts: word contains non-input letter '" +
                                  src.alphabet().name(id) + "'");
  return reduce(src, w).empty();
}

std::optional<ReductionStep> find_redex(const RewritingSystem& sys, const Word& w) {
  return find_redex(SystemSource(sys), w);
}
Word reduce(const RewritingSystem& sys, const Word& w) { return reduce(SystemSource(sys), w); }
ReductionHistory reduce_traced(const RewritingSystem& sys, const Word& w) {
  return reduce_traced(SystemSource(sys), w);
}
bool accepts(const RewritingSystem& sys, const Word& w) { return accepts(SystemSource(sys), w); }

void check_history(const ReductionHistory& h, bool strict) {
  if (h.words.empty()) throw std::logic_error("history has no words");
  if (h.steps.size() + 1 != h.words.size()) throw std::logic_error("history shape mismatch");
  if (h.steps.size() > h.words.front().size())
    throw std::logic_error("history longer than l(w0)");
  for (std::size_t i = 0; i < h.steps.size(); ++i) {
    const auto& s = h.steps[i];
    const auto& prev = h.words[i];
    const auto& next = h.words[i + 1];
    if (strict && next.size() >= prev.size()) throw std::logic_error("non-decreasing step");
    Word expect;
    expect.insert(expect.end(), prev.begin(), prev.begin() + s.start);
    expect.insert(expect.end(), s.rhs.begin(), s.rhs.end());
    expect.insert(expect.end(), prev.begin() + s.start + s.lhs_len, prev.end());
    if (expect != next) throw std::logic_error("step does not reproduce the next word");
  }
}

}  // namespace cannon
