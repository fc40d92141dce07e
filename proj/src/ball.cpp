#include "cannon/ball.hpp"

#include <deque>
#include <stdexcept>

namespace cannon {

BallTable::BallTable(OraclePtr oracle, std::uint64_t element_budget)
    : oracle_(std::move(oracle)), budget_(element_budget) {
  entries_.emplace(oracle_->identity(), Entry{0, {}});
  spheres_.push_back({oracle_->identity()});
  radius_ = 0;
}

void BallTable::ensure_radius(int r) {
  while (radius_ < r) {
    const auto& frontier = spheres_[static_cast<std::size_t>(radius_)];
    std::vector<GroupOracle::Elt> next;
    const int k = oracle_->generator_count();
    for (const auto& e : frontier) {
      const auto& entry = entries_.at(e);
      for (int g = 0; g < k; ++g) {
        auto child = oracle_->multiply(e, oracle_->generator(g));
        auto it = entries_.find(child);
        if (it != entries_.end()) continue;
        if (entries_.size() >= budget_)
          throw std::runtime_error("ball element budget exceeded at radius " +
                                   std::to_string(radius_ + 1));
        Entry ce{radius_ + 1, entry.geodesic};
        ce.geodesic.push_back(g);
        entries_.emplace(child, std::move(ce));
        next.push_back(std::move(child));
      }
    }
    spheres_.push_back(std::move(next));
    ++radius_;
  }
}

std::optional<int> BallTable::distance(const GroupOracle::Elt& e) const {
  auto it = entries_.find(e);
  if (it == entries_.end()) return std::nullopt;
  return it->second.dist;
}

std::optional<int> BallTable::distance_within(const GroupOracle::Elt& e, int max_radius) {
  ensure_radius(max_radius);
  return distance(e);
}

const BallTable::Entry* BallTable::lookup(const GroupOracle::Elt& e) const {
  auto it = entries_.find(e);
  return it == entries_.end() ? nullptr : &it->second;
}

bool BallTable::is_geodesic(std::span<const int> word) {
  ensure_radius(static_cast<int>(word.size()));
  auto d = distance(eval_word(*oracle_, word));
  return d && *d == static_cast<int>(word.size());
}

std::uint64_t BallTable::sphere_size(int r) const {
  return spheres_.at(static_cast<std::size_t>(r)).size();
}

const std::vector<GroupOracle::Elt>& BallTable::sphere(int r) const {
  return spheres_.at(static_cast<std::size_t>(r));
}

std::unordered_map<GroupOracle::Elt, int> ball_distances_reference(const GroupOracle& oracle,
                                                                   int radius) {
  std::unordered_map<GroupOracle::Elt, int> dist;
  std::deque<GroupOracle::Elt> queue{oracle.identity()};
  dist[oracle.identity()] = 0;
  while (!queue.empty()) {
    auto e = queue.front();
    queue.pop_front();
    int d = dist[e];
    if (d == radius) continue;
    for (int g = oracle.generator_count() - 1; g >= 0; --g) {
      auto child = oracle.multiply(e, oracle.generator(g));
      if (dist.emplace(child, d + 1).second) queue.push_back(child);
    }
  }
  return dist;
}

GroupOracle::Elt eval_word(const GroupOracle& oracle, std::span<const int> gens) {
  return oracle.eval(gens);
}

std::optional<int> distance_to(const GroupOracle& oracle, const GroupOracle::Elt& target,
                               int max_dist, std::uint64_t node_budget) {
  if (target == oracle.identity()) return 0;
  using Map = std::unordered_map<GroupOracle::Elt, int>;
  Map from{{oracle.identity(), 0}}, to{{target, 0}};
  std::vector<GroupOracle::Elt> f_frontier{oracle.identity()}, t_frontier{target};
  int f_depth = 0, t_depth = 0;
  int best = max_dist + 1;  // any undetected path has length >= f_depth + t_depth + 1
  const int k = oracle.generator_count();
  while (!f_frontier.empty() && !t_frontier.empty() && f_depth + t_depth + 1 < best) {
    bool expand_from = f_frontier.size() <= t_frontier.size();
    auto& frontier = expand_from ? f_frontier : t_frontier;
    auto& mine = expand_from ? from : to;
    auto& other = expand_from ? to : from;
    int depth = (expand_from ? ++f_depth : ++t_depth);
    std::vector<GroupOracle::Elt> next;
    for (const auto& e : frontier) {
      for (int g = 0; g < k; ++g) {
        auto child = oracle.multiply(e, oracle.generator(g));
        if (!mine.emplace(child, depth).second) continue;
        if (from.size() + to.size() > node_budget)
          throw std::runtime_error("distance_to: node budget exceeded");
        auto hit = other.find(child);
        if (hit != other.end()) best = std::min(best, depth + hit->second);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  if (best <= max_dist) return best;
  return std::nullopt;
}

}  // namespace cannon
