#include "cannon/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cannon {

using nlohmann::ordered_json;

namespace {

ordered_json word_to_json(const Alphabet& a, const Word& w) {
  ordered_json arr = ordered_json::array();
  for (LetterId id : w) arr.push_back(a.name(id));
  return arr;
}

Word word_from_json(const Alphabet& a, const ordered_json& arr) {
  Word w;
  for (const auto& item : arr) w.push_back(a.require(item.get<std::string>()));
  return w;
}

}  // namespace

std::string system_to_json(const RewritingSystem& sys) {
  ordered_json j;
  j["flavor"] = sys.flavor == Flavor::Incremental ? "incremental" : "non-incremental";
  j["input_alphabet"] = sys.input_names();
  j["working_alphabet"] = sys.alphabet.names();
  ordered_json rules = ordered_json::array();
  for (const auto& r : sys.rules) {
    ordered_json jr;
    jr["lhs"] = word_to_json(sys.alphabet, r.lhs);
    jr["rhs"] = word_to_json(sys.alphabet, r.rhs);
    jr["anchor_start"] = r.anchor_start;
    jr["anchor_end"] = r.anchor_end;
    rules.push_back(std::move(jr));
  }
  j["rules"] = std::move(rules);
  if (!sys.strict) {
    j["strictness"] = "weakly-decreasing";
    ordered_json p;
    switch (sys.potential.kind) {
      case Potential::Kind::LetterWeights: {
        p["kind"] = "letter-weights";
        ordered_json w;
        for (std::size_t i = 0; i < sys.potential.weights.size(); ++i)
          w[sys.alphabet.name(static_cast<LetterId>(i))] = sys.potential.weights[i];
        p["weights"] = std::move(w);
        break;
      }
      case Potential::Kind::MimicColor:
        p["kind"] = "mimic-color";
        break;
      case Potential::Kind::None:
        p["kind"] = "none";
        break;
    }
    j["potential"] = std::move(p);
  }
  if (sys.tie_break == TieBreak::AnchorFirst) j["tie_break"] = "anchor-first";
  return j.dump(2) + "\n";
}

RewritingSystem system_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  RewritingSystem sys;
  std::string flavor = j.at("flavor").get<std::string>();
  if (flavor == "incremental")
    sys.flavor = Flavor::Incremental;
  else if (flavor == "non-incremental")
    sys.flavor = Flavor::NonIncremental;
  else
    throw std::invalid_argument("unknown flavor: " + flavor);

  for (const auto& name : j.at("working_alphabet")) sys.alphabet.intern(name.get<std::string>());
  sys.input_letter.assign(sys.alphabet.size(), false);
  for (const auto& name : j.at("input_alphabet")) {
    auto id = sys.alphabet.find(name.get<std::string>());
    if (!id)
      throw std::invalid_argument("input letter not in working alphabet: " +
                                  name.get<std::string>());
    sys.input_letter[static_cast<std::size_t>(*id)] = true;
  }
  for (const auto& jr : j.at("rules")) {
    Rule r;
    r.lhs = word_from_json(sys.alphabet, jr.at("lhs"));
    r.rhs = word_from_json(sys.alphabet, jr.at("rhs"));
    r.anchor_start = jr.value("anchor_start", false);
    r.anchor_end = jr.value("anchor_end", false);
    sys.rules.push_back(std::move(r));
  }
  if (j.value("strictness", "strict") == std::string("weakly-decreasing")) {
    sys.strict = false;
    const auto& p = j.at("potential");
    std::string kind = p.at("kind").get<std::string>();
    if (kind == "letter-weights") {
      sys.potential.kind = Potential::Kind::LetterWeights;
      sys.potential.weights.assign(sys.alphabet.size(), 1);
      for (const auto& [name, value] : p.at("weights").items())
        sys.potential.weights[static_cast<std::size_t>(sys.alphabet.require(name))] =
            value.get<std::int64_t>();
    } else if (kind == "mimic-color") {
      sys.potential.kind = Potential::Kind::MimicColor;
    }
  }
  if (j.value("tie_break", "length-first") == std::string("anchor-first"))
    sys.tie_break = TieBreak::AnchorFirst;
  return sys;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void save_system(const RewritingSystem& sys, const std::string& path) {
  write_file(path, system_to_json(sys));
}

RewritingSystem load_system(const std::string& path) { return system_from_json(read_file(path)); }

}  // namespace cannon
