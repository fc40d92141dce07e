#include "cannon/word.hpp"

#include <cctype>
#include <stdexcept>

namespace cannon {

LetterId Alphabet::intern(std::string name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  auto id = static_cast<LetterId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  return id;
}

std::optional<LetterId> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LetterId Alphabet::require(std::string_view name) const {
  auto id = find(name);
  if (!id) throw std::invalid_argument("unknown letter: " + std::string(name));
  return *id;
}

bool valid_base_letter_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '^' || c == ',' || c == '[' || c == ']') return false;
  }
  return true;
}

bool valid_letter_name(std::string_view name) {
  if (name.empty()) return false;
  int depth = 0;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (c == '^' || c == ',') return false;
    if (c == '[') ++depth;
    if (c == ']') {
      if (--depth < 0) return false;
    }
  }
  return depth == 0;
}

std::string print_word(const Alphabet& alphabet, std::span<const LetterId> word,
                       bool dash_for_empty) {
  if (word.empty()) return dash_for_empty ? "-" : "";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += '.';
    out += alphabet.name(word[i]);
  }
  return out;
}

std::vector<std::string> split_word_text(std::string_view text) {
  std::vector<std::string> parts;
  if (text.empty() || text == "-") return parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == '.' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
  Word w;
  for (const auto& part : split_word_text(text)) w.push_back(alphabet.require(part));
  return w;
}

}  // namespace cannon
