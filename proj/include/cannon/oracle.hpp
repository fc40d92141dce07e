#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cannon/word.hpp"

namespace cannon {

/// Ground-truth evaluator for a finitely generated group.  Elements are
/// opaque canonical strings: equal group elements have equal encodings, so
/// they hash and compare directly.
class GroupOracle {
 public:
  using Elt = std::string;

  virtual ~GroupOracle() = default;

  virtual std::string name() const = 0;

  /// Semigroup generators; inverse_generator gives the involution pairing.
  virtual const std::vector<std::string>& generator_names() const = 0;
  virtual int inverse_generator(int gen) const = 0;

  virtual Elt identity() const = 0;
  virtual Elt generator(int gen) const = 0;
  virtual Elt multiply(const Elt& a, const Elt& b) const = 0;
  virtual Elt inverse(const Elt& a) const = 0;

  bool is_identity(const Elt& e) const { return e == identity(); }
  int generator_count() const { return static_cast<int>(generator_names().size()); }
  int generator_index(std::string_view name) const;  // -1 if unknown

  /// Product of generator images, left to right.
  Elt eval(std::span<const int> gens) const;
  /// Formal inverse word: reversed with letters inverted.
  std::vector<int> inverse_word(std::span<const int> gens) const;
  /// Human-readable form, for reports; defaults to the encoding.
  virtual std::string describe(const Elt& e) const { return e; }
};

using OraclePtr = std::shared_ptr<const GroupOracle>;

/// Z with an arbitrary finite generating set given as (name, value) pairs;
/// the list must be closed under negation.
OraclePtr make_z_oracle(const std::vector<std::pair<std::string, long long>>& gens);
/// Convenience: generators "1" (+1) and "1-" (-1).
OraclePtr make_z_unit_oracle();

/// Free group of the given rank, generators a,A,b,B,...
OraclePtr make_free_oracle(int rank);

/// U_n(Z) for n = 3 or 4.  For n = 3 the generators are x,X,y,Y,z,Z with
/// x = E12, y = E23, z = E13 (so z is central and [x,y] = z); for n = 4 the
/// superdiagonal elementaries x1..x3 and inverses.
OraclePtr make_unitriangular_oracle(int n);

/// Infinite dihedral group: r (translation), r-, s (reflection, involutive).
OraclePtr make_dihedral_oracle();

/// Direct product; generator names of the factors must be disjoint.
OraclePtr make_direct_product_oracle(std::vector<OraclePtr> factors);

/// Free product via alternating normal forms; names must be disjoint.
OraclePtr make_free_product_oracle(std::vector<OraclePtr> factors);

/// F2 x Z with generators a,A,b,B and central z,Z.
OraclePtr make_f2xz_oracle();

/// Look up an oracle by CLI name: z | free-2 | heisenberg | u4 | dihedral-inf
/// | f2xz | z-units (digits +-1, +-2).
OraclePtr oracle_by_name(const std::string& name);

}  // namespace cannon
