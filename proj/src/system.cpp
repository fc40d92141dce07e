#include "cannon/system.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cannon {

int RewritingSystem::window() const {
  std::size_t w = 1;
  for (const auto& r : rules) w = std::max(w, r.lhs.size());
  return static_cast<int>(w);
}

std::vector<std::string> RewritingSystem::input_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < input_letter.size(); ++i)
    if (input_letter[i]) out.push_back(alphabet.name(static_cast<LetterId>(i)));
  return out;
}

std::vector<Violation> validate_system(const RewritingSystem& sys) {
  std::vector<Violation> out;
  auto add = [&](int idx, std::string code, std::string msg) {
    out.push_back(Violation{idx, std::move(code), std::move(msg)});
  };

  const auto n_letters = sys.alphabet.size();
  if (sys.input_letter.size() != n_letters)
    add(-1, "alphabet-mismatch", "input_letter mask does not cover the working alphabet");

  for (std::size_t i = 0; i < n_letters; ++i) {
    const auto& nm = sys.alphabet.name(static_cast<LetterId>(i));
    if (!valid_letter_name(nm)) add(-1, "bad-letter-name", "invalid letter name: " + nm);
  }

  auto in_alphabet = [&](const Word& w) {
    return std::all_of(w.begin(), w.end(), [&](LetterId id) {
      return id >= 0 && static_cast<std::size_t>(id) < n_letters;
    });
  };

  // decorated lhs = lhs text plus anchor flags
  std::map<std::tuple<Word, bool, bool>, int> seen;
  for (int i = 0; i < static_cast<int>(sys.rules.size()); ++i) {
    const auto& r = sys.rules[static_cast<std::size_t>(i)];
    if (r.lhs.empty()) add(i, "empty-lhs", "rule has empty left-hand side");
    if (!in_alphabet(r.lhs) || !in_alphabet(r.rhs))
      add(i, "letter-out-of-alphabet", "rule uses letters outside the working alphabet");
    if (sys.strict && r.rhs.size() >= r.lhs.size())
      add(i, "non-length-decreasing", "strict system requires l(lhs) > l(rhs)");
    if (!sys.strict && r.rhs.size() > r.lhs.size())
      add(i, "length-increasing", "rule lengthens the word");
    if (sys.flavor == Flavor::Incremental && r.anchor_end)
      add(i, "end-anchor-in-incremental", "incremental systems admit start anchors only");
    auto key = std::make_tuple(r.lhs, r.anchor_start, r.anchor_end);
    auto [it, fresh] = seen.emplace(key, i);
    if (!fresh)
      add(i, "duplicate-left-hand-side",
          "decorated lhs already used by rule " + std::to_string(it->second));
  }

  if (!sys.strict && sys.potential.kind == Potential::Kind::None)
    add(-1, "missing-potential", "weakly-decreasing system lacks a termination potential");
  if (sys.potential.kind == Potential::Kind::LetterWeights &&
      sys.potential.weights.size() != n_letters)
    add(-1, "bad-potential", "letter-weight potential does not cover the alphabet");

  return out;
}

void require_valid(const RewritingSystem& sys) {
  auto v = validate_system(sys);
  if (v.empty()) return;
  std::string msg = "invalid rewriting system:";
  for (const auto& violation : v) {
    msg += "\n  [" + std::to_string(violation.rule_index) + "] " + violation.code + ": " +
           violation.message;
  }
  throw std::invalid_argument(msg);
}

}  // namespace cannon
