#pragma once

// Linear algebra and polynomial arithmetic over the prime field F_p.
// Entries of FpMatrix/FpVector are kept in [0, p); p is small (p^2 * n fits in
// 64 bits for every dimension used here).

#include "zplat/integer.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace zplat::fp {

FpMatrix reduce(const IntMatrix& a, std::int64_t p);
IntMatrix lift(const FpMatrix& a);
FpMatrix multiply(const FpMatrix& a, const FpMatrix& b, std::int64_t p);
FpMatrix identity(Eigen::Index n);

struct Echelon {
  FpMatrix rref;
  std::vector<Eigen::Index> pivots;  // pivot column of each nonzero row
};

Echelon row_echelon(FpMatrix a, std::int64_t p);
Eigen::Index rank(const FpMatrix& a, std::int64_t p);
/// Columns form a basis of {x : a x = 0}.
FpMatrix nullspace(const FpMatrix& a, std::int64_t p);
std::optional<FpVector> solve(const FpMatrix& a, const FpVector& b, std::int64_t p);
std::optional<FpMatrix> inverse(const FpMatrix& a, std::int64_t p);

/// Incrementally built subspace of F_p^dim with coordinates relative to the
/// independent vectors accepted by insert(), in insertion order.
class Subspace {
 public:
  Subspace(Eigen::Index dim, std::int64_t p);

  bool insert(const FpVector& v);
  FpVector reduce(FpVector v) const;
  bool contains(const FpVector& v) const;
  std::optional<FpVector> coordinates(const FpVector& v) const;

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_.size()); }
  Eigen::Index ambient_dimension() const { return dim_; }
  const std::vector<FpVector>& basis() const { return basis_; }

 private:
  Eigen::Index dim_;
  std::int64_t p_;
  std::vector<FpVector> basis_;
  std::vector<FpVector> echelon_;
  std::vector<Eigen::Index> pivot_;
  std::vector<FpVector> combo_;  // echelon_[k] = sum_j combo_[k][j] * basis_[j]
};

/// Coefficients low degree first; the zero polynomial is empty.
using Poly = std::vector<std::int64_t>;

void trim(Poly& f);
int degree(const Poly& f);
Poly monic(Poly f, std::int64_t p);
Poly add(const Poly& a, const Poly& b, std::int64_t p);
Poly sub(const Poly& a, const Poly& b, std::int64_t p);
Poly mul(const Poly& a, const Poly& b, std::int64_t p);
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
/// Returns (g, s, t) with s*a + t*b = g monic.
std::tuple<Poly, Poly, Poly> ext_gcd(const Poly& a, const Poly& b, std::int64_t p);
Poly derivative(const Poly& f, std::int64_t p);
Poly powmod(Poly base, std::int64_t exp, const Poly& mod, std::int64_t p);

/// Characteristic polynomial det(x I - a), monic of degree n.
Poly charpoly(const FpMatrix& a, std::int64_t p);

/// Complete factorization of a monic polynomial into distinct monic
/// irreducibles with multiplicities, sorted by (degree, coefficients).
std::vector<std::pair<Poly, int>> factor(const Poly& f, std::int64_t p);

/// sum_i f_i a^i where a^0 is taken to be `unit`.
FpMatrix evaluate(const Poly& f, const FpMatrix& a, const FpMatrix& unit, std::int64_t p);

}  // namespace zplat::fp
