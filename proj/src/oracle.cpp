#include "cannon/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cannon {

using boost::multiprecision::cpp_int;

int GroupOracle::generator_index(std::string_view name) const {
  const auto& names = generator_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

GroupOracle::Elt GroupOracle::eval(std::span<const int> gens) const {
  Elt e = identity();
  for (int g : gens) e = multiply(e, generator(g));
  return e;
}

std::vector<int> GroupOracle::inverse_word(std::span<const int> gens) const {
  std::vector<int> out;
  out.reserve(gens.size());
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) out.push_back(inverse_generator(*it));
  return out;
}

namespace {

std::string enc_int(const cpp_int& v) { return v.str(); }
cpp_int dec_int(std::string_view s) { return cpp_int(std::string(s)); }

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

// ---------------------------------------------------------------- Z

class ZOracle final : public GroupOracle {
 public:
  explicit ZOracle(std::vector<std::pair<std::string, long long>> gens) {
    for (auto& [n, v] : gens) {
      names_.push_back(n);
      values_.push_back(v);
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      int inv = -1;
      for (std::size_t j = 0; j < values_.size(); ++j)
        if (values_[j] == -values_[i]) inv = static_cast<int>(j);
      if (inv < 0) throw std::invalid_argument("Z generators not closed under negation");
      inverses_.push_back(inv);
    }
  }
  std::string name() const override { return "z"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override { return inverses_.at(static_cast<std::size_t>(g)); }
  Elt identity() const override { return "0"; }
  Elt generator(int g) const override {
    return enc_int(values_.at(static_cast<std::size_t>(g)));
  }
  Elt multiply(const Elt& a, const Elt& b) const override { return enc_int(dec_int(a) + dec_int(b)); }
  Elt inverse(const Elt& a) const override { return enc_int(-dec_int(a)); }

  const std::vector<long long>& values() const { return values_; }

 private:
  std::vector<std::string> names_;
  std::vector<long long> values_;
  std::vector<int> inverses_;
};

// ---------------------------------------------------------------- free group

class FreeOracle final : public GroupOracle {
 public:
  explicit FreeOracle(int rank) : rank_(rank) {
    if (rank < 1 || rank > 13) throw std::invalid_argument("free group rank out of range");
    for (int i = 0; i < rank; ++i) {
      names_.push_back(std::string(1, static_cast<char>('a' + i)));
      names_.push_back(std::string(1, static_cast<char>('A' + i)));
    }
  }
  std::string name() const override { return "free-" + std::to_string(rank_); }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override { return g ^ 1; }
  Elt identity() const override { return ""; }
  Elt generator(int g) const override { return std::string(1, code(g)); }
  Elt multiply(const Elt& a, const Elt& b) const override {
    std::string out = a;
    for (char c : b) {
      if (!out.empty() && is_inverse_pair(out.back(), c))
        out.pop_back();
      else
        out += c;
    }
    return out;
  }
  Elt inverse(const Elt& a) const override {
    std::string out;
    for (auto it = a.rbegin(); it != a.rend(); ++it) out += flip(*it);
    return out;
  }

 private:
  static char code(int g) { return static_cast<char>('a' + g); }
  static char flip(char c) { return static_cast<char>('a' + ((c - 'a') ^ 1)); }
  static bool is_inverse_pair(char x, char y) { return flip(x) == y; }
  int rank_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------- U_n(Z)

struct U3 {
  cpp_int a, b, c;  // x12, x13, x23
  static U3 mul(const U3& l, const U3& r) { return U3{l.a + r.a, l.b + r.b + l.a * r.c, l.c + r.c}; }
  U3 inv() const { return U3{-a, a * c - b, -c}; }
  std::string enc() const { return enc_int(a) + "," + enc_int(b) + "," + enc_int(c); }
  static U3 dec(const std::string& s) {
    auto p = split_on(s, ',');
    return U3{dec_int(p[0]), dec_int(p[1]), dec_int(p[2])};
  }
};

class U3Oracle final : public GroupOracle {
 public:
  U3Oracle() : names_{"x", "X", "y", "Y", "z", "Z"} {}
  std::string name() const override { return "heisenberg"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override { return g ^ 1; }
  Elt identity() const override { return U3{0, 0, 0}.enc(); }
  Elt generator(int g) const override {
    static const U3 gens[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1}, {0, 1, 0}, {0, -1, 0}};
    return gens[g].enc();
  }
  Elt multiply(const Elt& a, const Elt& b) const override {
    return U3::mul(U3::dec(a), U3::dec(b)).enc();
  }
  Elt inverse(const Elt& a) const override { return U3::dec(a).inv().enc(); }

 private:
  std::vector<std::string> names_;
};

struct U4 {
  // entries p=x12 q=x23 r=x34 s=x13 t=x24 u=x14
  cpp_int p, q, r, s, t, u;
  static U4 mul(const U4& l, const U4& w) {
    U4 o;
    o.p = l.p + w.p;
    o.q = l.q + w.q;
    o.r = l.r + w.r;
    o.s = l.s + w.s + l.p * w.q;
    o.t = l.t + w.t + l.q * w.r;
    o.u = l.u + w.u + l.p * w.t + l.s * w.r;
    return o;
  }
  U4 inv() const {
    U4 o;
    o.p = -p;
    o.q = -q;
    o.r = -r;
    o.s = -s + p * q;
    o.t = -t + q * r;
    o.u = -u + p * t + s * r - p * q * r;
    return o;
  }
  std::string enc() const {
    return enc_int(p) + "," + enc_int(q) + "," + enc_int(r) + "," + enc_int(s) + "," + enc_int(t) +
           "," + enc_int(u);
  }
  static U4 dec(const std::string& x) {
    auto v = split_on(x, ',');
    return U4{dec_int(v[0]), dec_int(v[1]), dec_int(v[2]), dec_int(v[3]), dec_int(v[4]),
              dec_int(v[5])};
  }
};

class U4Oracle final : public GroupOracle {
 public:
  U4Oracle() : names_{"x1", "X1", "x2", "X2", "x3", "X3"} {}
  std::string name() const override { return "u4"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override { return g ^ 1; }
  Elt identity() const override { return U4{0, 0, 0, 0, 0, 0}.enc(); }
  Elt generator(int g) const override {
    U4 e{0, 0, 0, 0, 0, 0};
    cpp_int v = (g % 2 == 0) ? 1 : -1;
    if (g / 2 == 0) e.p = v;
    if (g / 2 == 1) e.q = v;
    if (g / 2 == 2) e.r = v;
    return e.enc();
  }
  Elt multiply(const Elt& a, const Elt& b) const override {
    return U4::mul(U4::dec(a), U4::dec(b)).enc();
  }
  Elt inverse(const Elt& a) const override { return U4::dec(a).inv().enc(); }

 private:
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------- dihedral

class DihedralOracle final : public GroupOracle {
 public:
  DihedralOracle() : names_{"r", "r-", "s"} {}
  std::string name() const override { return "dihedral-inf"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override { return g == 2 ? 2 : (g ^ 1); }
  Elt identity() const override { return "+,0"; }
  Elt generator(int g) const override {
    if (g == 0) return "+,1";
    if (g == 1) return "+,-1";
    return "-,0";
  }
  Elt multiply(const Elt& a, const Elt& b) const override {
    auto [e1, k1] = dec(a);
    auto [e2, k2] = dec(b);
    return enc(e1 * e2, e1 * k2 + k1);
  }
  Elt inverse(const Elt& a) const override {
    auto [e, k] = dec(a);
    return enc(e, -e * k);  // (e,k)^-1 = (e, -e*k)
  }

 private:
  static std::string enc(int e, const cpp_int& k) {
    return std::string(e > 0 ? "+" : "-") + "," + enc_int(k);
  }
  static std::pair<int, cpp_int> dec(const Elt& s) {
    auto p = split_on(s, ',');
    return {p[0] == "+" ? 1 : -1, dec_int(p[1])};
  }
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------- products

class ProductOracle final : public GroupOracle {
 public:
  explicit ProductOracle(std::vector<OraclePtr> factors) : factors_(std::move(factors)) {
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      for (int g = 0; g < factors_[f]->generator_count(); ++g) {
        const auto& nm = factors_[f]->generator_names()[static_cast<std::size_t>(g)];
        for (const auto& existing : names_)
          if (existing == nm) throw std::invalid_argument("duplicate generator name: " + nm);
        names_.push_back(nm);
        origin_.emplace_back(f, g);
      }
    }
  }
  std::string name() const override { return "direct-product"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override {
    auto [f, fg] = origin_[static_cast<std::size_t>(g)];
    int inv = factors_[f]->inverse_generator(fg);
    for (std::size_t i = 0; i < origin_.size(); ++i)
      if (origin_[i] == std::make_pair(f, inv)) return static_cast<int>(i);
    return -1;
  }
  Elt identity() const override {
    std::string out;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (f) out += '\x1f';
      out += factors_[f]->identity();
    }
    return out;
  }
  Elt generator(int g) const override {
    auto [f, fg] = origin_[static_cast<std::size_t>(g)];
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += '\x1f';
      out += (i == f) ? factors_[i]->generator(fg) : factors_[i]->identity();
    }
    return out;
  }
  Elt multiply(const Elt& a, const Elt& b) const override {
    auto pa = split_on(a, '\x1f');
    auto pb = split_on(b, '\x1f');
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += '\x1f';
      out += factors_[i]->multiply(pa[i], pb[i]);
    }
    return out;
  }
  Elt inverse(const Elt& a) const override {
    auto pa = split_on(a, '\x1f');
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += '\x1f';
      out += factors_[i]->inverse(pa[i]);
    }
    return out;
  }

 private:
  std::vector<OraclePtr> factors_;
  std::vector<std::string> names_;
  std::vector<std::pair<std::size_t, int>> origin_;
};

class FreeProductOracle final : public GroupOracle {
 public:
  explicit FreeProductOracle(std::vector<OraclePtr> factors) : factors_(std::move(factors)) {
    for (std::size_t f = 0; f < factors_.size(); ++f)
      for (int g = 0; g < factors_[f]->generator_count(); ++g) {
        names_.push_back(factors_[f]->generator_names()[static_cast<std::size_t>(g)]);
        origin_.emplace_back(f, g);
      }
  }
  std::string name() const override { return "free-product"; }
  const std::vector<std::string>& generator_names() const override { return names_; }
  int inverse_generator(int g) const override {
    auto [f, fg] = origin_[static_cast<std::size_t>(g)];
    int inv = factors_[f]->inverse_generator(fg);
    for (std::size_t i = 0; i < origin_.size(); ++i)
      if (origin_[i] == std::make_pair(f, inv)) return static_cast<int>(i);
    return -1;
  }
  Elt identity() const override { return ""; }
  Elt generator(int g) const override {
    auto [f, fg] = origin_[static_cast<std::size_t>(g)];
    return normalize({{f, factors_[f]->generator(fg)}});
  }
  Elt multiply(const Elt& a, const Elt& b) const override {
    auto sa = syllables(a);
    auto sb = syllables(b);
    for (const auto& s : sb) {
      if (!sa.empty() && sa.back().first == s.first) {
        auto merged = factors_[sa.back().first]->multiply(sa.back().second, s.second);
        sa.pop_back();
        if (!factors_[s.first]->is_identity(merged)) sa.emplace_back(s.first, merged);
      } else {
        sa.push_back(s);
      }
    }
    return join(sa);
  }
  Elt inverse(const Elt& a) const override {
    auto sa = syllables(a);
    std::reverse(sa.begin(), sa.end());
    for (auto& [f, e] : sa) e = factors_[f]->inverse(e);
    return join(sa);
  }

 private:
  using Syllables = std::vector<std::pair<std::size_t, Elt>>;
  Syllables syllables(const Elt& e) const {
    Syllables out;
    if (e.empty()) return out;
    for (const auto& part : split_on(e, '\x1e')) {
      auto colon = part.find(':');
      out.emplace_back(static_cast<std::size_t>(std::stoul(part.substr(0, colon))),
                       part.substr(colon + 1));
    }
    return out;
  }
  std::string join(const Syllables& s) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += '\x1e';
      out += std::to_string(s[i].first) + ":" + s[i].second;
    }
    return out;
  }
  std::string normalize(Syllables s) const {
    Syllables keep;
    for (auto& x : s)
      if (!factors_[x.first]->is_identity(x.second)) keep.push_back(x);
    return join(keep);
  }
  std::vector<OraclePtr> factors_;
  std::vector<std::string> names_;
  std::vector<std::pair<std::size_t, int>> origin_;
};

}  // namespace

OraclePtr make_z_oracle(const std::vector<std::pair<std::string, long long>>& gens) {
  return std::make_shared<ZOracle>(gens);
}

OraclePtr make_z_unit_oracle() { return make_z_oracle({{"1", 1}, {"1-", -1}}); }

OraclePtr make_free_oracle(int rank) { return std::make_shared<FreeOracle>(rank); }

OraclePtr make_unitriangular_oracle(int n) {
  if (n == 3) return std::make_shared<U3Oracle>();
  if (n == 4) return std::make_shared<U4Oracle>();
  throw std::invalid_argument("unitriangular oracle: n must be 3 or 4");
}

OraclePtr make_dihedral_oracle() { return std::make_shared<DihedralOracle>(); }

OraclePtr make_direct_product_oracle(std::vector<OraclePtr> factors) {
  return std::make_shared<ProductOracle>(std::move(factors));
}

OraclePtr make_free_product_oracle(std::vector<OraclePtr> factors) {
  return std::make_shared<FreeProductOracle>(std::move(factors));
}

OraclePtr make_f2xz_oracle() {
  return make_direct_product_oracle({make_free_oracle(2), make_z_oracle({{"z", 1}, {"Z", -1}})});
}

OraclePtr oracle_by_name(const std::string& name) {
  if (name == "z") return make_z_unit_oracle();
  if (name == "z-units") return make_z_oracle({{"1", 1}, {"1-", -1}, {"2", 2}, {"2-", -2}});
  if (name == "free-1") return make_free_oracle(1);
  if (name == "free-2") return make_free_oracle(2);
  if (name == "heisenberg") return make_unitriangular_oracle(3);
  if (name == "u4") return make_unitriangular_oracle(4);
  if (name == "dihedral-inf") return make_dihedral_oracle();
  if (name == "f2xz") return make_f2xz_oracle();
  throw std::invalid_argument("unknown group oracle: " + name);
}

}  // namespace cannon
