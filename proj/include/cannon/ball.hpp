#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cannon/oracle.hpp"

namespace cannon {

/// Exact word-metric ball computed by breadth-first search.  The canonical
/// geodesic of an element is the lexicographically least shortest generator
/// word under the declared generator order (BFS discovery order guarantees
/// it).  The table can be extended radius by radius under an element budget.
class BallTable {
 public:
  struct Entry {
    int dist;
    std::vector<int> geodesic;  // generator indices
  };

  BallTable(OraclePtr oracle, std::uint64_t element_budget = 10'000'000);

  void ensure_radius(int r);  // throws if the budget would be exceeded
  int radius() const { return radius_; }

  const GroupOracle& oracle() const { return *oracle_; }

  /// Exact distance if the element lies in the computed ball.  A miss means
  /// dist > radius().
  std::optional<int> distance(const GroupOracle::Elt& e) const;
  /// Distance, extending the table as needed up to max_radius; nullopt if
  /// still unseen at that radius.
  std::optional<int> distance_within(const GroupOracle::Elt& e, int max_radius);

  const Entry* lookup(const GroupOracle::Elt& e) const;

  /// True iff the word is geodesic: its length equals the distance of its
  /// value (the table is extended to the word's length).
  bool is_geodesic(std::span<const int> word);

  std::size_t size() const { return entries_.size(); }
  std::uint64_t sphere_size(int r) const;

  /// All elements at distance exactly r, in canonical (BFS) discovery order.
  const std::vector<GroupOracle::Elt>& sphere(int r) const;

 private:
  OraclePtr oracle_;
  std::uint64_t budget_;
  int radius_ = -1;
  std::unordered_map<GroupOracle::Elt, Entry> entries_;
  std::vector<std::vector<GroupOracle::Elt>> spheres_;
};

/// Distances by an independently coded two-frontier BFS, for differential
/// tests of BallTable.
std::unordered_map<GroupOracle::Elt, int> ball_distances_reference(const GroupOracle& oracle,
                                                                   int radius);

/// Exact distance from the identity to `target` by bidirectional BFS, or
/// nullopt if it exceeds max_dist.  Far cheaper than a full ball when the
/// target is distant (used to measure l(phi(g)) for expansion estimates).
std::optional<int> distance_to(const GroupOracle& oracle, const GroupOracle::Elt& target,
                               int max_dist, std::uint64_t node_budget = 10'000'000);

/// eval_word over a word of oracle generator indices.
GroupOracle::Elt eval_word(const GroupOracle& oracle, std::span<const int> gens);

}  // namespace cannon
