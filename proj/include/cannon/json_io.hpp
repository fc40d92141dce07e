#pragma once

#include <iosfwd>
#include <string>

#include "cannon/system.hpp"

namespace cannon {

/// Canonical system file format:
/// { "flavor": "incremental"|"non-incremental",
///   "input_alphabet": [...],
///   "working_alphabet": [...],
///   "rules": [ {"lhs": [...], "rhs": [...],
///               "anchor_start": bool, "anchor_end": bool}, ... ] }
/// Weakly-decreasing systems additionally carry "strictness" and "potential";
/// non-default tie-breaking carries "tie_break".  Output is byte-deterministic.
std::string system_to_json(const RewritingSystem& sys);
RewritingSystem system_from_json(const std::string& text);

void save_system(const RewritingSystem& sys, const std::string& path);
RewritingSystem load_system(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cannon
