#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cannon/word.hpp"

namespace cannon {

enum class Flavor { Incremental, NonIncremental };

/// Redex tie-breaking between rules of equal footing.  The default prefers
/// longer left-hand sides and uses anchoring only to break exact-length ties;
/// AnchorFirst lets an anchored match beat a longer plain one (experimental).
enum class TieBreak { LengthFirst, AnchorFirst };

struct Rule {
  Word lhs;
  Word rhs;
  bool anchor_start = false;
  bool anchor_end = false;

  bool operator==(const Rule&) const = default;
};

/// Termination witness for weakly length-decreasing systems.  Strict systems
/// need none; every substitution deletes a letter.
struct Potential {
  enum class Kind {
    None,
    LetterWeights,  // sum of per-letter weights strictly decreases (compression)
    MimicColor,     // (length, colored-letter distance from end), lexicographic
  };
  Kind kind = Kind::None;
  std::vector<std::int64_t> weights;  // indexed by LetterId, for LetterWeights

  bool operator==(const Potential&) const = default;
};

/// A deterministic length-reducing rewriting system (A0, A, S).
struct RewritingSystem {
  Flavor flavor = Flavor::Incremental;
  Alphabet alphabet;                // working alphabet
  std::vector<bool> input_letter;   // per letter id: member of the input alphabet
  std::vector<Rule> rules;
  bool strict = true;
  Potential potential;
  TieBreak tie_break = TieBreak::LengthFirst;

  int window() const;  // max lhs length, >= 1 for nonempty rule sets

  bool is_input(LetterId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < input_letter.size() &&
           input_letter[static_cast<std::size_t>(id)];
  }
  std::vector<std::string> input_names() const;
};

struct Violation {
  int rule_index;  // -1 for system-level problems
  std::string code;
  std::string message;
};

/// Checks every structural invariant; valid systems return an empty list.
std::vector<Violation> validate_system(const RewritingSystem& sys);

/// Convenience: throws std::invalid_argument listing all violations.
void require_valid(const RewritingSystem& sys);

}  // namespace cannon
