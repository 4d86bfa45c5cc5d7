#pragma once

// Decomposition of lattices: endomorphism rings, idempotents, Krull-Schmidt
// splitting, isomorphism of indecomposables and permutation recognition.

#include "zplat/fp_linalg.hpp"
#include "zplat/lattice.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace zplat {

// ------------------------------------------------------------ endomorphisms

class EndRing {
 public:
  EndRing(const Lattice& module, const PrecisionContext& ctx);

  const Lattice& module() const { return module_; }
  Eigen::Index rank() const { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<IntMatrix>& basis() const { return basis_; }
  /// mult_table()[i][j] = coordinates of basis[i] * basis[j].
  const std::vector<std::vector<IntVector>>& mult_table() const { return table_; }
  const IntVector& identity_coordinates() const { return one_; }

  /// Exact integer coordinates of an endomorphism; nullopt if x is not in the ring.
  std::optional<IntVector> coordinates(const IntMatrix& x) const;
  IntMatrix element(const IntVector& coords) const;
  /// Product in coordinates, reduced modulo m when m > 0.
  IntVector multiply_coords(const IntVector& a, const IntVector& b, const Integer& m = 0) const;

 private:
  Lattice module_;
  std::vector<IntMatrix> basis_;
  IntMatrix flat_;          // n^2 x k, the basis as columns
  IntMatrix left_inverse_;  // k x n^2
  std::vector<std::vector<IntVector>> table_;
  IntVector one_;
};

inline EndRing endomorphism_ring(const Lattice& m, const PrecisionContext& ctx) { return EndRing(m, ctx); }

/// A subalgebra of M_n(F_p) given by a spanning set of matrices.
class FpAlgebra {
 public:
  FpAlgebra(std::vector<FpMatrix> spanning, Eigen::Index n, std::int64_t p);

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_.size()); }
  Eigen::Index degree() const { return n_; }
  std::int64_t p() const { return p_; }
  const std::vector<FpMatrix>& basis() const { return basis_; }
  bool contains(const FpMatrix& x) const;

 private:
  Eigen::Index n_;
  std::int64_t p_;
  std::vector<FpMatrix> basis_;
  fp::Subspace space_;
};

/// Jacobson radical of a matrix algebra over F_p (trace-form method of
/// Cohen, Ivanyos and Wales, valid in every characteristic).
std::vector<FpMatrix> jacobson_radical(const FpAlgebra& a);

struct RadicalAndSimples {
  std::vector<FpMatrix> radical;      // basis of rad(E/pE) as matrices mod p
  std::vector<FpVector> radical_coords;  // the same in E-coordinates
  std::vector<FpMatrix> idempotents;  // complete orthogonal primitive idempotents of E/pE
  std::vector<FpVector> idempotent_coords;
  bool local() const { return idempotents.size() == 1; }
};

/// Radical of E/pE and a complete set of orthogonal primitive idempotents of
/// E/pE (their images in the semisimple quotient are primitive there).
RadicalAndSimples radical_and_simples_mod_p(const EndRing& e, const PrecisionContext& ctx, std::uint64_t seed = 0);
bool end_is_local(const EndRing& e, const PrecisionContext& ctx);

/// Hensel lift of an idempotent mod p (E-coordinates) to one mod p^cap.
IntVector lift_idempotent(const FpVector& e0, const EndRing& e, const PrecisionContext& ctx);

struct SplitPair {
  Sublattice first;   // image of e
  Sublattice second;  // image of 1 - e
};

/// Splits M along a lifted idempotent when an exact idempotent of E over
/// Z_(p) can be recovered from it; doubles the precision up to four times
/// before throwing PrecisionExhausted.
SplitPair split_by_idempotent(const EndRing& e, const FpVector& e0, const PrecisionContext& ctx);

// ---------------------------------------------------------- Krull-Schmidt

struct Decomposition {
  std::vector<Sublattice> summands;  // bases in ambient coordinates
  std::vector<bool> indecomposable;  // End(summand) local mod p
};

/// Splits until every summand has a local endomorphism ring. Throws
/// PrecisionExhausted when a decomposable piece cannot be split exactly.
Decomposition krull_schmidt(const Lattice& m, const PrecisionContext& ctx);

/// Best-effort variant: leaves unsplittable pieces in place, flagged as not
/// indecomposable, instead of throwing.
Decomposition krull_schmidt_partial(const Lattice& m, const PrecisionContext& ctx);

struct IsoResult {
  bool isomorphic = false;
  IntMatrix map;  // X -> Y, invertible over Z_(p), intertwining
};

/// Isomorphism test for lattices with local endomorphism rings.
IsoResult iso_indecomposable(const Lattice& x, const Lattice& y, const PrecisionContext& ctx);

// ---------------------------------------------------------- recognition

struct PermutationCertificate {
  std::vector<Subgroup> classes;     // class representatives in canonical order
  std::vector<int> multiplicities;   // parallel to classes
  IntMatrix change_of_basis;         // columns: the permutation basis

  int multiplicity(const Subgroup& k) const;
  std::map<std::string, int> labelled() const;  // label -> m_K, all classes
};

/// Class representatives sorted by decreasing order, then class order.
std::vector<Subgroup> canonical_classes(const PGroup& g);

/// Block permutation action of the sum of Z[G/K]^{m_K} in canonical order.
std::vector<IntMatrix> canonical_permutation_action(const PGroup& g, const std::vector<Subgroup>& classes,
                                                    const std::vector<int>& multiplicities);

/// det(T) is a p-unit and action(g) T = T P(g) for every g.
bool verify_certificate(const Lattice& m, const PermutationCertificate& cert, const PrecisionContext& ctx);

struct Witness {
  Sublattice summand;       // a direct summand with no permutation summand
  bool indecomposable = false;
  std::vector<int> peeled;  // multiplicities of the permutation summands split off first
};

struct Verdict {
  std::optional<PermutationCertificate> certificate;
  std::optional<Witness> witness;

  bool is_permutation() const { return certificate.has_value(); }
};

/// Exact recognizer. Picks K-fixed vectors spanning the head M/(I_G M + pM)
/// class by class (largest K first) and verifies the resulting permutation
/// basis; a failure proves M is not a permutation lattice.
Verdict recognize_permutation(const Lattice& m, const PrecisionContext& ctx);

/// Independent route: Krull-Schmidt, then match every summand against the
/// coset lattices by rank and iso_indecomposable.
std::optional<std::vector<int>> recognize_by_decomposition(const Lattice& m, const PrecisionContext& ctx);

/// Splits off one copy of Z[G/K] exactly when it is a direct summand of M.
/// Returns (basis of the summand generated by a K-fixed vector, basis of the complement).
std::optional<std::pair<IntMatrix, IntMatrix>> split_coset_summand(const Lattice& m, const Subgroup& k,
                                                                  const PrecisionContext& ctx);

struct CpSplit {
  Sublattice m1;  // trivial part
  Sublattice mp;  // free part over C
  PermutationCertificate certificate;  // over C, in the restricted group
};

/// Splits M restricted to C (|C| = p) into a trivial and a C-free summand;
/// nullopt means the restriction is not a permutation lattice.
std::optional<CpSplit> cp_split(const Lattice& m, const Subgroup& c, const PrecisionContext& ctx);

}  // namespace zplat
