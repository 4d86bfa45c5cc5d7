#pragma once

// Exact scalar types shared by every module.
//
// Integer is an arbitrary-precision signed integer without expression
// templates (Eigen stores it directly). CheckedInt is a 64-bit integer that
// throws Overflow instead of wrapping; algorithms templated on the scalar run
// on CheckedInt first and are replayed on Integer when that throws.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

// Eigen dense objects expose a const_iterator typedef that is void for
// matrices; keep boost's byte-container detection away from them.
namespace boost::multiprecision::detail {
template <class Derived>
  requires requires { typename Derived::StorageKind; }
struct is_byte_container<Derived> : boost::false_type {};
}  // namespace boost::multiprecision::detail

namespace zplat {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

struct Overflow : std::overflow_error {
  Overflow() : std::overflow_error("64-bit overflow") {}
};

class CheckedInt {
 public:
  constexpr CheckedInt() = default;
  constexpr CheckedInt(std::int64_t v) : v_(v) {}  // NOLINT: implicit by design of a scalar

  constexpr std::int64_t value() const { return v_; }

  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow();
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow();
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow();
    return r;
  }
  friend CheckedInt operator/(CheckedInt a, CheckedInt b) {
    if (a.v_ == std::numeric_limits<std::int64_t>::min() && b.v_ == -1) throw Overflow();
    return a.v_ / b.v_;
  }
  friend CheckedInt operator%(CheckedInt a, CheckedInt b) {
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  CheckedInt operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) throw Overflow();
    return -v_;
  }
  CheckedInt& operator+=(CheckedInt o) { return *this = *this + o; }
  CheckedInt& operator-=(CheckedInt o) { return *this = *this - o; }
  CheckedInt& operator*=(CheckedInt o) { return *this = *this * o; }
  CheckedInt& operator/=(CheckedInt o) { return *this = *this / o; }

  friend constexpr bool operator==(CheckedInt a, CheckedInt b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(CheckedInt a, CheckedInt b) { return a.v_ <=> b.v_; }

 private:
  std::int64_t v_ = 0;
};

inline Integer to_integer(const Integer& x) { return x; }
inline Integer to_integer(CheckedInt x) { return Integer(x.value()); }

template <class Scalar>
Scalar from_integer(const Integer& x);

template <>
inline Integer from_integer<Integer>(const Integer& x) { return x; }

template <>
inline CheckedInt from_integer<CheckedInt>(const Integer& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw Overflow();
  return CheckedInt(static_cast<std::int64_t>(x));
}

inline bool is_zero(const Integer& x) { return x.is_zero(); }
inline bool is_zero(CheckedInt x) { return x.value() == 0; }
inline Integer abs_value(const Integer& x) { return boost::multiprecision::abs(x); }
inline CheckedInt abs_value(CheckedInt x) { return x.value() < 0 ? -x : x; }
inline int sign_of(const Integer& x) { return x.sign(); }
inline int sign_of(CheckedInt x) { return (x.value() > 0) - (x.value() < 0); }

/// Non-negative remainder of x modulo m (m > 0).
inline std::int64_t mod_small(const Integer& x, std::int64_t m) {
  Integer r = x % m;
  auto v = static_cast<std::int64_t>(r);
  return v < 0 ? v + m : v;
}
inline std::int64_t mod_small(CheckedInt x, std::int64_t m) {
  std::int64_t v = x.value() % m;
  return v < 0 ? v + m : v;
}

/// p-adic valuation; the valuation of zero is reported as -1.
template <class Scalar>
int valuation(Scalar x, std::int64_t p) {
  if (is_zero(x)) return -1;
  int v = 0;
  while (mod_small(x, p) == 0) {
    x = x / Scalar(p);
    ++v;
  }
  return v;
}

inline bool is_p_unit(const Integer& x, std::int64_t p) { return mod_small(x, p) != 0; }

/// Extended gcd: returns g >= 0 with s*a + t*b = g.
template <class Scalar>
Scalar extended_gcd(Scalar a, Scalar b, Scalar& s, Scalar& t) {
  Scalar s0(1), s1(0), t0(0), t1(1);
  while (!is_zero(b)) {
    Scalar q = a / b;
    Scalar r = a - q * b;
    a = b;
    b = r;
    Scalar ns = s0 - q * s1;
    s0 = s1;
    s1 = ns;
    Scalar nt = t0 - q * t1;
    t0 = t1;
    t1 = nt;
  }
  if (sign_of(a) < 0) {
    a = -a;
    s0 = -s0;
    t0 = -t0;
  }
  s = s0;
  t = t0;
  return a;
}

inline Integer ipow(std::int64_t base, int exp) {
  Integer r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Inverse of a modulo m (gcd(a, m) = 1 is required).
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  CheckedInt s, t;
  CheckedInt g = extended_gcd(CheckedInt(((a % m) + m) % m), CheckedInt(m), s, t);
  if (g.value() != 1) throw std::domain_error("inverse_mod: not invertible");
  std::int64_t r = s.value() % m;
  return r < 0 ? r + m : r;
}

/// Symmetric residue of x modulo m, in (-m/2, m/2].
inline Integer symmetric_mod(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

inline std::string to_string(const Integer& x) { return x.str(); }

}  // namespace zplat

namespace Eigen {
template <>
struct NumTraits<zplat::CheckedInt> : GenericNumTraits<std::int64_t> {
  using Real = zplat::CheckedInt;
  using NonInteger = zplat::CheckedInt;
  using Nested = zplat::CheckedInt;
  using Literal = zplat::CheckedInt;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 3
  };
};
}  // namespace Eigen

namespace zplat {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
/// Matrices over F_p; entries kept in [0, p).
using FpMatrix = Matrix<std::int64_t>;
using FpVector = Vector<std::int64_t>;

template <class To, class From>
Matrix<To> convert_matrix(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = from_integer<To>(to_integer(m(i, j)));
  return out;
}

}  // namespace zplat
