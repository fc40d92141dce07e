#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cannon {

using LetterId = std::int32_t;

/// A word over some alphabet, stored as interned letter ids.
using Word = std::vector<LetterId>;

/// Interning table mapping display names to dense letter ids.
/// Ids are assigned in insertion order and are only meaningful relative to
/// the alphabet that issued them.
class Alphabet {
 public:
  LetterId intern(std::string name);
  std::optional<LetterId> find(std::string_view name) const;
  LetterId require(std::string_view name) const;  // throws if unknown

  const std::string& name(LetterId id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return names_.size(); }

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LetterId> index_;
};

/// Checks the constraints on base letter names: non-empty, no whitespace,
/// none of ^ , [ ].  Compound (bracketed) names are produced internally by
/// the compression constructions and bypass this check.
bool valid_base_letter_name(std::string_view name);

/// Well-formedness for any letter name: non-empty, no whitespace, no '^',
/// no ',', brackets balanced.
bool valid_letter_name(std::string_view name);

/// Dot-separated rendering; empty word renders as "-" when `dash_for_empty`.
std::string print_word(const Alphabet& alphabet, std::span<const LetterId> word,
                       bool dash_for_empty = false);

/// Parses a dot-separated word.  Dots inside brackets do not split.
/// Throws std::invalid_argument on unknown letters.
Word parse_word(const Alphabet& alphabet, std::string_view text);

/// Splits a dot-separated word into letter names (bracket-aware).
std::vector<std::string> split_word_text(std::string_view text);

}  // namespace cannon
