#include "cannon/endo.hpp"

#include <deque>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cannon {

using boost::multiprecision::cpp_int;

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

class ZScalingEndo final : public EndomorphismSpec {
 public:
  ZScalingEndo(OraclePtr oracle, long long mu) : oracle_(std::move(oracle)), mu_(mu) {
    if (mu_ < 2) throw std::invalid_argument("scaling factor must be >= 2");
  }
  OraclePtr oracle() const override { return oracle_; }
  std::string mu_label() const override { return "n -> " + std::to_string(mu_) + "n"; }
  GroupOracle::Elt apply(const GroupOracle::Elt& e) const override {
    return (cpp_int(e) * mu_).str();
  }
  bool in_image(const GroupOracle::Elt& e) const override { return cpp_int(e) % mu_ == 0; }
  GroupOracle::Elt preimage(const GroupOracle::Elt& e) const override {
    return (cpp_int(e) / mu_).str();
  }
  std::vector<int> phi_of_generator(int gen) const override {
    return std::vector<int>(static_cast<std::size_t>(mu_), gen);
  }
  std::optional<int> exact_density() const override {
    // BFS on Z/mu with the generator values
    std::vector<int> dist(static_cast<std::size_t>(mu_), -1);
    std::deque<long long> queue{0};
    dist[0] = 0;
    std::vector<long long> values;
    for (int g = 0; g < oracle_->generator_count(); ++g)
      values.push_back(static_cast<long long>(cpp_int(oracle_->generator(g)).convert_to<long long>()));
    while (!queue.empty()) {
      long long r = queue.front();
      queue.pop_front();
      for (long long v : values) {
        long long next = ((r + v) % mu_ + mu_) % mu_;
        if (dist[static_cast<std::size_t>(next)] < 0) {
          dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(r)] + 1;
          queue.push_back(next);
        }
      }
    }
    int k = 0;
    for (int d : dist) {
      if (d < 0) return std::nullopt;  // generators do not generate Z/mu
      k = std::max(k, d);
    }
    return k;
  }

 private:
  OraclePtr oracle_;
  long long mu_;
};

class U3Endo final : public EndomorphismSpec {
 public:
  U3Endo(OraclePtr oracle, long long mu) : oracle_(std::move(oracle)), mu_(mu) {}
  OraclePtr oracle() const override { return oracle_; }
  std::string mu_label() const override { return "f_mu, mu = " + std::to_string(mu_); }
  GroupOracle::Elt apply(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    return (cpp_int(p[0]) * mu_).str() + "," + (cpp_int(p[1]) * mu_ * mu_).str() + "," +
           (cpp_int(p[2]) * mu_).str();
  }
  bool in_image(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    return cpp_int(p[0]) % mu_ == 0 && cpp_int(p[1]) % (cpp_int(mu_) * mu_) == 0 &&
           cpp_int(p[2]) % mu_ == 0;
  }
  GroupOracle::Elt preimage(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    return (cpp_int(p[0]) / mu_).str() + "," + (cpp_int(p[1]) / (cpp_int(mu_) * mu_)).str() + "," +
           (cpp_int(p[2]) / mu_).str();
  }
  std::vector<int> phi_of_generator(int gen) const override {
    // x -> x^mu, y -> y^mu, z -> z^(mu^2)
    std::size_t reps = (gen / 2 == 2) ? static_cast<std::size_t>(mu_) * static_cast<std::size_t>(mu_)
                                      : static_cast<std::size_t>(mu_);
    return std::vector<int>(reps, gen);
  }
  std::optional<int> exact_density() const override {
    // state (a mod mu^2, b mod mu^2, c mod mu); right multiplication moves
    const long long m2 = mu_ * mu_;
    const long long n_states = m2 * m2 * mu_;
    auto index = [&](long long a, long long b, long long c) {
      return (a * m2 + b) * mu_ + c;
    };
    std::vector<int> dist(static_cast<std::size_t>(n_states), -1);
    std::deque<long long> queue;
    for (long long a = 0; a < m2; a += mu_)
      for (long long c = 0; c < mu_; c += mu_) {
        auto idx = index(a, 0, c);
        dist[static_cast<std::size_t>(idx)] = 0;
        queue.push_back(idx);
      }
    auto push = [&](long long a, long long b, long long c, int d) {
      a = ((a % m2) + m2) % m2;
      b = ((b % m2) + m2) % m2;
      c = ((c % mu_) + mu_) % mu_;
      auto idx = index(a, b, c);
      if (dist[static_cast<std::size_t>(idx)] < 0) {
        dist[static_cast<std::size_t>(idx)] = d;
        queue.push_back(idx);
      }
    };
    while (!queue.empty()) {
      long long idx = queue.front();
      queue.pop_front();
      long long c = idx % mu_, b = (idx / mu_) % m2, a = idx / (mu_ * m2);
      int d = dist[static_cast<std::size_t>(idx)] + 1;
      push(a + 1, b, c, d);
      push(a - 1, b, c, d);
      push(a, b + a, c + 1, d);  // y
      push(a, b - a, c - 1, d);  // Y
      push(a, b + 1, c, d);      // z
      push(a, b - 1, c, d);      // Z
    }
    int k = 0;
    for (int d : dist) {
      if (d < 0) return std::nullopt;
      k = std::max(k, d);
    }
    return k;
  }

 private:
  OraclePtr oracle_;
  long long mu_;
};

class U4Endo final : public EndomorphismSpec {
 public:
  U4Endo(OraclePtr oracle, long long mu) : oracle_(std::move(oracle)), mu_(mu) {}
  OraclePtr oracle() const override { return oracle_; }
  std::string mu_label() const override { return "f_mu, mu = " + std::to_string(mu_); }
  GroupOracle::Elt apply(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    cpp_int m(mu_);
    // p q r scale by mu, s t by mu^2, u by mu^3
    return (cpp_int(p[0]) * m).str() + "," + (cpp_int(p[1]) * m).str() + "," +
           (cpp_int(p[2]) * m).str() + "," + (cpp_int(p[3]) * m * m).str() + "," +
           (cpp_int(p[4]) * m * m).str() + "," + (cpp_int(p[5]) * m * m * m).str();
  }
  bool in_image(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    cpp_int m(mu_);
    return cpp_int(p[0]) % m == 0 && cpp_int(p[1]) % m == 0 && cpp_int(p[2]) % m == 0 &&
           cpp_int(p[3]) % (m * m) == 0 && cpp_int(p[4]) % (m * m) == 0 &&
           cpp_int(p[5]) % (m * m * m) == 0;
  }
  GroupOracle::Elt preimage(const GroupOracle::Elt& e) const override {
    auto p = split_on(e, ',');
    cpp_int m(mu_);
    return (cpp_int(p[0]) / m).str() + "," + (cpp_int(p[1]) / m).str() + "," +
           (cpp_int(p[2]) / m).str() + "," + (cpp_int(p[3]) / (m * m)).str() + "," +
           (cpp_int(p[4]) / (m * m)).str() + "," + (cpp_int(p[5]) / (m * m * m)).str();
  }
  std::vector<int> phi_of_generator(int gen) const override {
    return std::vector<int>(static_cast<std::size_t>(mu_), gen);
  }

 private:
  OraclePtr oracle_;
  long long mu_;
};

}  // namespace

EndoPtr make_z_scaling_endo(OraclePtr z_oracle, long long mu) {
  return std::make_shared<ZScalingEndo>(std::move(z_oracle), mu);
}

EndoPtr make_unitriangular_endo(OraclePtr un_oracle, long long mu, int n) {
  if (n == 3) return std::make_shared<U3Endo>(std::move(un_oracle), mu);
  if (n == 4) return std::make_shared<U4Endo>(std::move(un_oracle), mu);
  throw std::invalid_argument("unitriangular endo: n must be 3 or 4");
}

std::optional<CosetDecomposition> coset_decompose(const EndomorphismSpec& endo, BallTable& ball,
                                                  const GroupOracle::Elt& elt, int max_len) {
  const auto& oracle = *endo.oracle();
  struct Node {
    GroupOracle::Elt h;
    std::vector<int> word;
  };
  std::deque<Node> queue{{oracle.identity(), {}}};
  std::unordered_map<GroupOracle::Elt, bool> seen{{oracle.identity(), true}};
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    auto target = oracle.multiply(elt, oracle.inverse(node.h));
    if (endo.in_image(target)) {
      auto pre = endo.preimage(target);
      const BallTable::Entry* entry = ball.lookup(pre);
      int grow = ball.radius();
      while (!entry && grow < 4 * max_len + 16) {
        ball.ensure_radius(++grow);
        entry = ball.lookup(pre);
      }
      if (!entry)
        throw std::runtime_error("coset_decompose: preimage has no geodesic within radius " +
                                 std::to_string(grow));
      return CosetDecomposition{entry->geodesic, node.word};
    }
    if (static_cast<int>(node.word.size()) == max_len) continue;
    for (int g = 0; g < oracle.generator_count(); ++g) {
      auto h2 = oracle.multiply(node.h, oracle.generator(g));
      if (!seen.emplace(h2, true).second) continue;
      Node child{std::move(h2), node.word};
      child.word.push_back(g);
      queue.push_back(std::move(child));
    }
  }
  return std::nullopt;
}

}  // namespace cannon
