#include "zplat/padic_linalg.hpp"

#include "zplat/error.hpp"
#include "zplat/fp_linalg.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace zplat {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrecisionContext::PrecisionContext(std::int64_t p, int cap) : p_(p), cap_(cap) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p = " + std::to_string(p) + " is not prime");
  if (cap < 1) throw Error(ErrorCode::InvalidArgument, "precision cap must be positive");
}

namespace {

template <class S>
class SmithEngine {
 public:
  SmithEngine(const IntMatrix& a, std::int64_t p, SmithOptions opts)
      : a_(convert_matrix<S, Integer>(a)), p_(p), opts_(opts) {
    const Eigen::Index m = a.rows(), n = a.cols();
    if (opts_.want_u) u_ = Matrix<S>::Identity(m, m);
    if (opts_.want_u_inverse) uinv_ = Matrix<S>::Identity(m, m);
    if (opts_.want_v) v_ = Matrix<S>::Identity(n, n);
  }

  void run() {
    const Eigen::Index m = a_.rows(), n = a_.cols();
    for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
      if (!place_pivot(t)) break;
      clear_cross(t);
      if (sign_of(a_(t, t)) < 0) negate_row(t);
      exps_.push_back(valuation(a_(t, t), p_));
    }
  }

  SmithDetail result() const {
    SmithDetail out;
    out.form.D = convert_matrix<Integer, S>(a_);
    if (opts_.want_u) out.form.U = convert_matrix<Integer, S>(u_);
    if (opts_.want_v) out.form.V = convert_matrix<Integer, S>(v_);
    if (opts_.want_u_inverse) out.U_inverse = convert_matrix<Integer, S>(uinv_);
    out.form.elementary_exponents = exps_;
    return out;
  }

 private:
  bool place_pivot(Eigen::Index t) {
    const Eigen::Index m = a_.rows(), n = a_.cols();
    // least valuation first, then least absolute value: small pivots keep
    // the entries from growing
    Eigen::Index bi = -1, bj = -1;
    int best = -1;
    S best_abs{};
    for (Eigen::Index i = t; i < m; ++i)
      for (Eigen::Index j = t; j < n; ++j) {
        if (is_zero(a_(i, j))) continue;
        const int v = valuation(a_(i, j), p_);
        const S x = sign_of(a_(i, j)) < 0 ? S(-a_(i, j)) : a_(i, j);
        if (best < 0 || v < best || (v == best && x < best_abs)) {
          best = v;
          best_abs = x;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) return false;
    if (bi != t) swap_rows(t, bi);
    if (bj != t) swap_cols(t, bj);
    return true;
  }

  void clear_cross(Eigen::Index t) {
    const Eigen::Index m = a_.rows(), n = a_.cols();
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (is_zero(a_(i, t))) continue;
        const S q = a_(i, t) / a_(t, t);
        if (is_zero(a_(i, t) - q * a_(t, t)))
          add_row(i, t, -q);
        else
          combine_rows(t, i);
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (is_zero(a_(t, j))) continue;
        const S q = a_(t, j) / a_(t, t);
        if (is_zero(a_(t, j) - q * a_(t, t))) {
          add_col(j, t, -q);
        } else {
          combine_cols(t, j);
          dirty = true;
        }
      }
    }
  }

  void swap_rows(Eigen::Index i, Eigen::Index j) {
    a_.row(i).swap(a_.row(j));
    if (opts_.want_u) u_.row(i).swap(u_.row(j));
    if (opts_.want_u_inverse) uinv_.col(i).swap(uinv_.col(j));
  }

  void swap_cols(Eigen::Index i, Eigen::Index j) {
    a_.col(i).swap(a_.col(j));
    if (opts_.want_v) v_.col(i).swap(v_.col(j));
  }

  void negate_row(Eigen::Index t) {
    for (Eigen::Index c = 0; c < a_.cols(); ++c) a_(t, c) = -a_(t, c);
    if (opts_.want_u)
      for (Eigen::Index c = 0; c < u_.cols(); ++c) u_(t, c) = -u_(t, c);
    if (opts_.want_u_inverse)
      for (Eigen::Index r = 0; r < uinv_.rows(); ++r) uinv_(r, t) = -uinv_(r, t);
  }

  static void axpy_row(Matrix<S>& x, Eigen::Index i, Eigen::Index t, const S& q) {
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (!is_zero(x(t, c))) x(i, c) += q * x(t, c);
  }

  static void axpy_col(Matrix<S>& x, Eigen::Index j, Eigen::Index t, const S& q) {
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      if (!is_zero(x(r, t))) x(r, j) += q * x(r, t);
  }

  // row_i += q row_t
  void add_row(Eigen::Index i, Eigen::Index t, const S& q) {
    axpy_row(a_, i, t, q);
    if (opts_.want_u) axpy_row(u_, i, t, q);
    if (opts_.want_u_inverse) axpy_col(uinv_, t, i, -q);
  }

  // col_j += q col_t
  void add_col(Eigen::Index j, Eigen::Index t, const S& q) {
    axpy_col(a_, j, t, q);
    if (opts_.want_v) axpy_col(v_, j, t, q);
  }

  static void mix_rows(Matrix<S>& x, Eigen::Index t, Eigen::Index i, const S& s, const S& tt, const S& c,
                       const S& d) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      const S xt = x(t, k), xi = x(i, k);
      if (is_zero(xt) && is_zero(xi)) continue;
      x(t, k) = s * xt + tt * xi;
      x(i, k) = c * xt + d * xi;
    }
  }

  static void mix_cols(Matrix<S>& x, Eigen::Index t, Eigen::Index j, const S& s, const S& tt, const S& c,
                       const S& d) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      const S xt = x(k, t), xj = x(k, j);
      if (is_zero(xt) && is_zero(xj)) continue;
      x(k, t) = s * xt + tt * xj;
      x(k, j) = c * xt + d * xj;
    }
  }

  // [row_t; row_i] <- [[s, tt], [-b/g, a/g]] [row_t; row_i]
  void combine_rows(Eigen::Index t, Eigen::Index i) {
    S s, tt;
    const S a = a_(t, t), b = a_(i, t);
    const S g = extended_gcd(a, b, s, tt);
    const S c = -(b / g), d = a / g;
    mix_rows(a_, t, i, s, tt, c, d);
    if (opts_.want_u) mix_rows(u_, t, i, s, tt, c, d);
    // inverse is [[d, -tt], [-c, s]], applied on the right of U^{-1}
    if (opts_.want_u_inverse) mix_cols(uinv_, t, i, d, -c, -tt, s);
  }

  // [col_t, col_j] <- [col_t, col_j] [[s, -b/g], [tt, a/g]]
  void combine_cols(Eigen::Index t, Eigen::Index j) {
    S s, tt;
    const S a = a_(t, t), b = a_(t, j);
    const S g = extended_gcd(a, b, s, tt);
    const S c = -(b / g), d = a / g;
    mix_cols(a_, t, j, s, tt, c, d);
    if (opts_.want_v) mix_cols(v_, t, j, s, tt, c, d);
  }

  Matrix<S> a_, u_, uinv_, v_;
  std::int64_t p_;
  SmithOptions opts_;
  std::vector<int> exps_;
};

template <class S>
SmithDetail run_smith(const IntMatrix& a, std::int64_t p, SmithOptions opts) {
  SmithEngine<S> engine(a, p, opts);
  engine.run();
  return engine.result();
}

unsigned bit_length(const Integer& x) {
  if (x.is_zero()) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(x))) + 1;
}

unsigned max_bits(const IntMatrix& a) {
  unsigned b = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) b = std::max(b, bit_length(a(i, j)));
  return b;
}

}  // namespace

SmithDetail local_smith(const IntMatrix& a, const PrecisionContext& ctx, SmithOptions opts) {
  try {
    return run_smith<CheckedInt>(a, ctx.p(), opts);
  } catch (const Overflow&) {
    return run_smith<Integer>(a, ctx.p(), opts);
  }
}

LocalSmithForm local_smith(const IntMatrix& a, const PrecisionContext& ctx) {
  return local_smith(a, ctx, SmithOptions{}).form;
}

IntVector LocalSolution::approx(const PrecisionContext& ctx) const {
  const Integer mod = ctx.modulus();
  Integer s, t;
  Integer den = denominator % mod;
  extended_gcd(den, mod, s, t);
  IntVector out(numerator.size());
  for (Eigen::Index i = 0; i < numerator.size(); ++i) {
    Integer r = (numerator(i) * s) % mod;
    if (r < 0) r += mod;
    out(i) = r;
  }
  return out;
}

std::optional<LocalSolution> solve_local(const IntMatrix& a, const IntVector& b, const PrecisionContext& ctx) {
  if (a.rows() != b.size()) throw Error(ErrorCode::InvalidArgument, "solve_local: dimension mismatch");
  const LocalSmithForm f = local_smith(a, ctx);
  const IntVector c = f.U * b;
  const Eigen::Index r = f.rank();
  for (Eigen::Index i = r; i < c.size(); ++i)
    if (!c(i).is_zero()) return std::nullopt;
  // y_i = c_i / d_i with d_i = p^{a_i} u_i; collect the unit parts in one denominator.
  Integer den = 1;
  std::vector<Integer> tops(static_cast<std::size_t>(r)), units(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) {
    const Integer pa = ipow(ctx.p(), f.elementary_exponents[static_cast<std::size_t>(i)]);
    if (!(c(i) % pa).is_zero()) return std::nullopt;
    tops[static_cast<std::size_t>(i)] = c(i) / pa;
    units[static_cast<std::size_t>(i)] = f.D(i, i) / pa;
    den = boost::multiprecision::lcm(den, units[static_cast<std::size_t>(i)]);
  }
  IntVector y = IntVector::Zero(a.cols());
  for (Eigen::Index i = 0; i < r; ++i)
    y(i) = tops[static_cast<std::size_t>(i)] * (den / units[static_cast<std::size_t>(i)]);
  LocalSolution sol;
  sol.numerator = f.V * y;
  Integer g = den;
  for (Eigen::Index i = 0; i < sol.numerator.size(); ++i) g = boost::multiprecision::gcd(g, sol.numerator(i));
  if (g > 1) {
    for (Eigen::Index i = 0; i < sol.numerator.size(); ++i) sol.numerator(i) /= g;
    den /= g;
  }
  sol.denominator = den;
  return sol;
}

namespace {

// Column Hermite reduction driven by the first `pivot_rows` rows; returns the
// number of pivot columns, which come first.
Eigen::Index column_echelon(IntMatrix& h, Eigen::Index pivot_rows) {
  const Eigen::Index n = h.rows(), k = h.cols();
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < pivot_rows && c < k; ++i) {
    // Euclid across the row with the smallest entry as pivot, rounding the
    // quotients; this keeps the other entries far smaller than gcd mixing
    while (true) {
      Eigen::Index piv = -1;
      for (Eigen::Index j = c; j < k; ++j)
        if (!h(i, j).is_zero() && (piv < 0 || abs_value(h(i, j)) < abs_value(h(i, piv)))) piv = j;
      if (piv < 0) break;
      if (piv != c) h.col(c).swap(h.col(piv));
      bool done = true;
      const Integer a = h(i, c);
      for (Eigen::Index j = c + 1; j < k; ++j) {
        if (h(i, j).is_zero()) continue;
        Integer q = h(i, j) / a;
        const Integer rem = h(i, j) - q * a;
        if (2 * abs_value(rem) > abs_value(a)) q += (sign_of(rem) == sign_of(a)) ? 1 : -1;
        for (Eigen::Index r = 0; r < n; ++r)
          if (!h(r, c).is_zero()) h(r, j) -= q * h(r, c);
        if (!h(i, j).is_zero()) done = false;
      }
      if (done) break;
    }
    if (c >= k || h(i, c).is_zero()) continue;
    if (h(i, c) < 0)
      for (Eigen::Index r = 0; r < n; ++r) h(r, c) = -h(r, c);
    const Integer piv = h(i, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      Integer q = h(i, j) / piv;
      if ((h(i, j) - q * piv) < 0) q -= 1;
      if (q.is_zero()) continue;
      for (Eigen::Index r = 0; r < n; ++r) h(r, j) -= q * h(r, c);
    }
    ++c;
  }
  return c;
}

}  // namespace

IntMatrix hermite_columns(const IntMatrix& basis) {
  IntMatrix h = basis;
  const Eigen::Index c = column_echelon(h, h.rows());
  return h.leftCols(c);
}

IntMatrix kernel_local(const IntMatrix& a, const PrecisionContext&) {
  // integer column reduction of [a; I]: the columns whose top part vanishes
  // form a Z-basis of the kernel. A local Smith form would do, but its
  // fraction-free steps through unit pivots grow entries fast
  const Eigen::Index m = a.rows(), n = a.cols();
  IntMatrix h(m + n, n);
  h << a, IntMatrix::Identity(n, n);
  const Eigen::Index c = column_echelon(h, m);
  return hermite_columns(h.bottomRows(n).rightCols(n - c));
}

IntMatrix saturate(const IntMatrix& s, Eigen::Index ambient_rank, const PrecisionContext& ctx) {
  if (s.rows() != ambient_rank) throw Error(ErrorCode::InvalidArgument, "saturate: basis outside ambient lattice");
  if (s.cols() == 0) return IntMatrix(ambient_rank, 0);
  // kernel of the orthogonal complement; tracking U^{-1} instead lets
  // entries grow badly on scrambled bases
  const IntMatrix perp = kernel_local(s.transpose(), ctx);
  if (perp.cols() == 0) return IntMatrix::Identity(ambient_rank, ambient_rank);
  return kernel_local(perp.transpose(), ctx);
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const unsigned inner = static_cast<unsigned>(std::max<Eigen::Index>(a.cols(), 1));
  const unsigned guard = static_cast<unsigned>(std::bit_width(inner));
  if (max_bits(a) + max_bits(b) + guard < 62) {
    const FpMatrix x = a.unaryExpr([](const Integer& v) { return static_cast<std::int64_t>(v); });
    const FpMatrix y = b.unaryExpr([](const Integer& v) { return static_cast<std::int64_t>(v); });
    const FpMatrix z = x * y;
    return z.unaryExpr([](std::int64_t v) { return Integer(v); });
  }
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (b(k, j).is_zero()) continue;
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        if (!a(i, k).is_zero()) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

IntMatrix identity_matrix(Eigen::Index n) { return IntMatrix::Identity(n, n); }

Eigen::Index rank_mod_p(const IntMatrix& a, std::int64_t p) { return fp::rank(fp::reduce(a, p), p); }

Eigen::Index rank_exact(const IntMatrix& a) {
  return local_smith(a, PrecisionContext(2), SmithOptions{false, false, false}).form.rank();
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  // Bareiss fraction-free elimination.
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      Eigen::Index r = k + 1;
      while (r < n && m(r, k).is_zero()) ++r;
      if (r == n) return 0;
      m.row(k).swap(m.row(r));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

bool det_is_p_unit(const IntMatrix& a, std::int64_t p) {
  return a.rows() == a.cols() && rank_mod_p(a, p) == a.rows();
}

bool contains_span(const IntMatrix& outer, const IntMatrix& inner, const PrecisionContext& ctx) {
  if (inner.cols() == 0) return true;
  if (outer.cols() == 0) return inner.isZero();
  const LocalSmithForm f = local_smith(outer, ctx);
  const IntMatrix c = multiply(f.U, inner);
  const Eigen::Index r = f.rank();
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      if (c(i, j).is_zero()) continue;
      if (i >= r) return false;
      if (valuation(c(i, j), ctx.p()) < f.elementary_exponents[static_cast<std::size_t>(i)]) return false;
    }
  return true;
}

bool same_span(const IntMatrix& a, const IntMatrix& b, const PrecisionContext& ctx) {
  return contains_span(a, b, ctx) && contains_span(b, a, ctx);
}

std::optional<IntMatrix> coordinates_in(const IntMatrix& basis, const IntMatrix& x) {
  const Eigen::Index k = basis.cols();
  if (k == 0) {
    if (!x.isZero()) return std::nullopt;
    return IntMatrix(0, x.cols());
  }
  const LocalSmithForm f = local_smith(basis, PrecisionContext(2));
  if (f.rank() != k) throw Error(ErrorCode::InvalidArgument, "coordinates_in: basis is not independent");
  const IntMatrix c = multiply(f.U, x);
  IntMatrix y(k, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = k; i < c.rows(); ++i)
      if (!c(i, j).is_zero()) return std::nullopt;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!(c(i, j) % f.D(i, i)).is_zero()) return std::nullopt;
      y(i, j) = c(i, j) / f.D(i, i);
    }
  }
  return multiply(f.V, y);
}

IntMatrix complement_basis(const IntMatrix& w) {
  const Eigen::Index n = w.rows();
  if (w.cols() == 0) return identity_matrix(n);
  const SmithDetail d = local_smith(w, PrecisionContext(2), SmithOptions{false, false, true});
  const Eigen::Index r = d.form.rank();
  for (Eigen::Index i = 0; i < r; ++i)
    if (d.form.D(i, i) != 1) throw Error(ErrorCode::InvalidArgument, "complement_basis: basis is not saturated");
  return d.U_inverse.rightCols(n - r);
}

LocalInverse inverse_local(const IntMatrix& t, const PrecisionContext& ctx) {
  if (!det_is_p_unit(t, ctx.p())) throw Error(ErrorCode::InvalidArgument, "inverse_local: determinant is not a p-unit");
  const LocalSmithForm f = local_smith(t, ctx);
  const Eigen::Index n = t.rows();
  Integer den = 1;
  for (Eigen::Index i = 0; i < n; ++i) den = boost::multiprecision::lcm(den, f.D(i, i));
  IntMatrix scaled = f.U;
  for (Eigen::Index i = 0; i < n; ++i) scaled.row(i) *= den / f.D(i, i);
  return {multiply(f.V, scaled), den};
}

IntMatrix inverse_unimodular(const IntMatrix& t) {
  const LocalSmithForm f = local_smith(t, PrecisionContext(2));
  const Eigen::Index n = t.rows();
  if (t.rows() != t.cols() || f.rank() != n)
    throw Error(ErrorCode::InvalidArgument, "inverse_unimodular: singular matrix");
  for (Eigen::Index i = 0; i < n; ++i)
    if (f.D(i, i) != 1) throw Error(ErrorCode::InvalidArgument, "inverse_unimodular: matrix is not unimodular");
  return multiply(f.V, f.U);
}

}  // namespace zplat
