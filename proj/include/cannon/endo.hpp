#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cannon/ball.hpp"
#include "cannon/oracle.hpp"

namespace cannon {

/// An expanding endomorphism phi of the oracle's group, with the image
/// membership test and preimage map the §3-style generators need.
class EndomorphismSpec {
 public:
  virtual ~EndomorphismSpec() = default;

  virtual OraclePtr oracle() const = 0;
  virtual std::string mu_label() const = 0;

  virtual GroupOracle::Elt apply(const GroupOracle::Elt& e) const = 0;
  virtual bool in_image(const GroupOracle::Elt& e) const = 0;
  /// Defined exactly when in_image(e).
  virtual GroupOracle::Elt preimage(const GroupOracle::Elt& e) const = 0;

  /// phi of a generator, as a word over the generators (extended
  /// homomorphically to all words).
  virtual std::vector<int> phi_of_generator(int gen) const = 0;

  /// Exact K-density of the image when the subgroup is congruence-defined
  /// (computed by BFS on the finite quotient); nullopt if unavailable.
  virtual std::optional<int> exact_density() const { return std::nullopt; }
};

using EndoPtr = std::shared_ptr<const EndomorphismSpec>;

/// n -> mu * n on Z (any Z oracle from make_z_oracle).
EndoPtr make_z_scaling_endo(OraclePtr z_oracle, long long mu);

/// f_mu on U_n(Z): entry (i,j) scales by mu^(j-i).  n = 3 or 4.
EndoPtr make_unitriangular_endo(OraclePtr un_oracle, long long mu, int n);

/// Shortest g'' with elt * eval(g'')^-1 in phi(G), ties lexicographic, and
/// the canonical geodesic g' of the preimage.  Nullopt when no decomposition
/// exists within max_len (signals a violated K bound).
struct CosetDecomposition {
  std::vector<int> g1;  // canonical geodesic of the preimage
  std::vector<int> g2;  // shortest correction word
};
std::optional<CosetDecomposition> coset_decompose(const EndomorphismSpec& endo, BallTable& ball,
                                                  const GroupOracle::Elt& elt, int max_len);

}  // namespace cannon
