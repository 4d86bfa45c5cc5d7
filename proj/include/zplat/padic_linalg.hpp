#pragma once

// Exact linear algebra over Z_(p), the integers localized at p.
//
// Matrices hold integers; a p-local value with unit denominator is carried as
// (numerator, denominator) only where a solution genuinely needs one. Every
// sublattice basis returned here is saturated over Z itself, which localizes
// to the p-saturation and keeps induced action matrices integral.

#include "zplat/integer.hpp"

#include <optional>
#include <vector>

namespace zplat {

bool is_prime(std::int64_t n);

class PrecisionContext {
 public:
  explicit PrecisionContext(std::int64_t p, int cap = 64);

  std::int64_t p() const { return p_; }
  int cap() const { return cap_; }
  Integer modulus() const { return ipow(p_, cap_); }
  PrecisionContext with_cap(int cap) const { return PrecisionContext(p_, cap); }

 private:
  std::int64_t p_;
  int cap_;
};

struct LocalSmithForm {
  IntMatrix U, V, D;
  std::vector<int> elementary_exponents;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(elementary_exponents.size()); }
};

struct SmithOptions {
  bool want_u = true;
  bool want_v = true;
  bool want_u_inverse = false;
};

/// Smith form with extra products; U_inverse is empty unless requested.
struct SmithDetail {
  LocalSmithForm form;
  IntMatrix U_inverse;
};

/// U A V = D with U, V in GL_n(Z). D has entries p^{a_i} times a positive
/// p-unit, a_1 <= a_2 <= ...; pivots are chosen by minimal valuation, ties in
/// row-major order.
LocalSmithForm local_smith(const IntMatrix& a, const PrecisionContext& ctx);
SmithDetail local_smith(const IntMatrix& a, const PrecisionContext& ctx, SmithOptions opts);

/// x = numerator / denominator, denominator a positive p-unit.
struct LocalSolution {
  IntVector numerator;
  Integer denominator = 1;

  /// Integer vector congruent to x modulo p^cap.
  IntVector approx(const PrecisionContext& ctx) const;
};

std::optional<LocalSolution> solve_local(const IntMatrix& a, const IntVector& b, const PrecisionContext& ctx);

/// Saturated basis (columns) of {x : a x = 0}, in Hermite form.
IntMatrix kernel_local(const IntMatrix& a, const PrecisionContext& ctx);

/// Saturated basis (columns) of the span of the columns of s.
IntMatrix saturate(const IntMatrix& s, Eigen::Index ambient_rank, const PrecisionContext& ctx);

/// Column Hermite normal form of a full-column-rank basis: lower echelon, with
/// the leading entry of every column positive and the entries to its left
/// reduced into [0, leading).
IntMatrix hermite_columns(const IntMatrix& basis);

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix identity_matrix(Eigen::Index n);

Eigen::Index rank_mod_p(const IntMatrix& a, std::int64_t p);
Eigen::Index rank_exact(const IntMatrix& a);
Integer determinant(const IntMatrix& a);
bool det_is_p_unit(const IntMatrix& a, std::int64_t p);

/// Whether the two column systems span the same Z_(p)-module.
bool same_span(const IntMatrix& a, const IntMatrix& b, const PrecisionContext& ctx);
/// Whether every column of inner lies in the Z_(p)-span of outer.
bool contains_span(const IntMatrix& outer, const IntMatrix& inner, const PrecisionContext& ctx);

/// Exact coordinates C with basis * C = x, for a Z-saturated basis of full
/// column rank. Returns nullopt when some column of x is outside the span.
std::optional<IntMatrix> coordinates_in(const IntMatrix& basis, const IntMatrix& x);

/// Integer columns C such that [w C] is unimodular, for a Z-saturated w.
IntMatrix complement_basis(const IntMatrix& w);

/// Inverse of an integer matrix with p-unit determinant, as numerator/denominator.
struct LocalInverse {
  IntMatrix numerator;
  Integer denominator = 1;
};
LocalInverse inverse_local(const IntMatrix& t, const PrecisionContext& ctx);

/// Exact inverse of a unimodular integer matrix.
IntMatrix inverse_unimodular(const IntMatrix& t);

}  // namespace zplat
