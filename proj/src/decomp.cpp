#include "zplat/decomp.hpp"

#include "zplat/error.hpp"
#include "zplat/random.hpp"

#include <algorithm>
#include <functional>

namespace zplat {

namespace {

IntVector flatten(const IntMatrix& a) { return Eigen::Map<const IntVector>(a.data(), a.size()); }
FpVector flatten(const FpMatrix& a) { return Eigen::Map<const FpVector>(a.data(), a.size()); }

FpVector reduce_vector(const IntVector& v, std::int64_t p) {
  FpVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = mod_small(v(i), p);
  return out;
}

IntVector lift_vector(const FpVector& v) {
  IntVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i);
  return out;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

bool direct_sum_is_whole(const IntMatrix& a, const IntMatrix& b, Eigen::Index n, std::int64_t p) {
  if (a.cols() + b.cols() != n) return false;
  return det_is_p_unit(hstack(a, b), p);
}

int index_in(const PGroup& g, const Subgroup& k) { return g.order() / k.order(); }

}  // namespace

// ------------------------------------------------------------------ EndRing

EndRing::EndRing(const Lattice& module, const PrecisionContext& ctx) : module_(module) {
  basis_ = hom_space(module, module, ctx).basis;
  const Eigen::Index n = module.rank(), k = rank();
  flat_ = IntMatrix(n * n, k);
  for (Eigen::Index j = 0; j < k; ++j) flat_.col(j) = flatten(basis_[static_cast<std::size_t>(j)]);
  if (k > 0) {
    // flat_ is saturated, so its Smith form is [I; 0] and V * U_top is a left inverse.
    const LocalSmithForm f = local_smith(flat_, ctx);
    for (Eigen::Index i = 0; i < k; ++i)
      if (f.D(i, i) != 1) throw Error(ErrorCode::InternalInconsistency, "endomorphism basis is not saturated");
    left_inverse_ = multiply(f.V, f.U.topRows(k));
  } else {
    left_inverse_ = IntMatrix(0, n * n);
  }
  table_.assign(static_cast<std::size_t>(k), std::vector<IntVector>(static_cast<std::size_t>(k)));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      auto c = coordinates(multiply(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]));
      if (!c) throw Error(ErrorCode::InternalInconsistency, "endomorphism ring is not closed under products");
      table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(*c);
    }
  auto one = coordinates(IntMatrix::Identity(n, n));
  if (!one) throw Error(ErrorCode::InternalInconsistency, "endomorphism ring misses the identity");
  one_ = std::move(*one);
}

std::optional<IntVector> EndRing::coordinates(const IntMatrix& x) const {
  const Eigen::Index n = module_.rank();
  if (x.rows() != n || x.cols() != n) return std::nullopt;
  const IntVector v = flatten(x);
  IntVector c = multiply(left_inverse_, v);
  if (multiply(flat_, c) != IntMatrix(v)) return std::nullopt;
  return c;
}

IntMatrix EndRing::element(const IntVector& coords) const {
  const Eigen::Index n = module_.rank();
  if (rank() == 0) return IntMatrix::Zero(n, n);
  const IntMatrix v = multiply(flat_, coords);
  return Eigen::Map<const IntMatrix>(v.data(), n, n);
}

IntVector EndRing::multiply_coords(const IntVector& a, const IntVector& b, const Integer& m) const {
  const Eigen::Index k = rank();
  IntVector out = IntVector::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (a(i).is_zero()) continue;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (b(j).is_zero()) continue;
      out += (a(i) * b(j)) * table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  if (m > 0)
    for (Eigen::Index i = 0; i < k; ++i) {
      out(i) %= m;
      if (out(i) < 0) out(i) += m;
    }
  return out;
}

// -------------------------------------------------------------- FpAlgebra

FpAlgebra::FpAlgebra(std::vector<FpMatrix> spanning, Eigen::Index n, std::int64_t p)
    : n_(n), p_(p), space_(n * n, p) {
  auto add = [&](const FpMatrix& x) {
    if (space_.insert(flatten(x))) basis_.push_back(x);
  };
  for (const auto& x : spanning) add(fp::reduce(fp::lift(x), p));
  // close under products
  for (std::size_t done = 0; done < basis_.size();) {
    const std::size_t limit = basis_.size();
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = (i < done ? done : 0); j < limit; ++j) {
        add(fp::multiply(basis_[i], basis_[j], p));
        if (j != i) add(fp::multiply(basis_[j], basis_[i], p));
      }
    done = limit;
  }
}

bool FpAlgebra::contains(const FpMatrix& x) const { return space_.contains(flatten(fp::reduce(fp::lift(x), p_))); }

namespace {

// Power of a matrix with entries taken in [0, m), modulo m.
FpMatrix power_mod(FpMatrix x, std::int64_t e, std::int64_t m) {
  const Eigen::Index n = x.rows();
  FpMatrix r = FpMatrix::Identity(n, n);
  while (e > 0) {
    if (e & 1) r = fp::multiply(r, x, m);
    x = fp::multiply(x, x, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::vector<FpMatrix> jacobson_radical(const FpAlgebra& a) {
  const std::int64_t p = a.p();
  const Eigen::Index n = a.degree();
  const auto& basis = a.basis();
  std::vector<FpMatrix> current = basis;
  if (current.empty()) return current;
  int levels = 0;
  for (std::int64_t q = p; q <= n; q *= p) ++levels;
  std::int64_t q = 1;  // p^i
  for (int i = 0; i <= levels; ++i) {
    const std::int64_t m = q * p;
    // g_i(x) = (Tr(x^{p^i}) mod p^{i+1}) / p^i, x lifted with entries in [0, p)
    FpMatrix g(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(current.size()));
    for (std::size_t l = 0; l < basis.size(); ++l)
      for (std::size_t j = 0; j < current.size(); ++j) {
        const FpMatrix x = fp::multiply(current[j], basis[l], p);
        const FpMatrix y = power_mod(x, q, m);
        std::int64_t tr = 0;
        for (Eigen::Index t = 0; t < n; ++t) tr = (tr + y(t, t)) % m;
        g(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = tr / q;
      }
    const FpMatrix ker = fp::nullspace(g, p);
    std::vector<FpMatrix> next;
    for (Eigen::Index c = 0; c < ker.cols(); ++c) {
      FpMatrix s = FpMatrix::Zero(n, n);
      for (std::size_t j = 0; j < current.size(); ++j)
        if (ker(static_cast<Eigen::Index>(j), c) != 0) s += ker(static_cast<Eigen::Index>(j), c) * current[j];
      next.push_back(fp::reduce(fp::lift(s), p));
    }
    current = std::move(next);
    if (current.empty()) break;
    q = m;
  }
  return current;
}

namespace {

// Working data for the idempotent computations inside E/pE.
struct Corner {
  std::vector<FpMatrix> basis;    // eAe
  std::vector<FpMatrix> radical;  // eJe
};

std::vector<FpMatrix> span_basis(const std::vector<FpMatrix>& mats, Eigen::Index n, std::int64_t p) {
  fp::Subspace s(n * n, p);
  std::vector<FpMatrix> out;
  for (const auto& x : mats)
    if (s.insert(flatten(x))) out.push_back(x);
  return out;
}

Corner corner(const FpMatrix& e, const std::vector<FpMatrix>& algebra, const std::vector<FpMatrix>& radical,
              Eigen::Index n, std::int64_t p) {
  std::vector<FpMatrix> b, r;
  for (const auto& x : algebra) b.push_back(fp::multiply(fp::multiply(e, x, p), e, p));
  for (const auto& x : radical) r.push_back(fp::multiply(fp::multiply(e, x, p), e, p));
  return Corner{span_basis(b, n, p), span_basis(r, n, p)};
}

// Whether eAe / eJe is a field: commutative with a one-dimensional space of
// Frobenius-fixed points.
bool corner_is_local(const Corner& c, Eigen::Index n, std::int64_t p) {
  const auto q = static_cast<Eigen::Index>(c.basis.size() - c.radical.size());
  if (q <= 0) return false;
  if (q == 1) return true;
  fp::Subspace s(n * n, p);
  for (const auto& x : c.radical) s.insert(flatten(x));
  std::vector<FpMatrix> comp;
  for (const auto& x : c.basis)
    if (s.insert(flatten(x))) comp.push_back(x);
  auto quotient = [&](const FpMatrix& x) -> FpVector {
    auto co = s.coordinates(flatten(x));
    if (!co) throw Error(ErrorCode::InternalInconsistency, "corner algebra is not closed");
    return co->tail(q);
  };
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const FpMatrix ab = fp::multiply(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)], p);
      const FpMatrix ba = fp::multiply(comp[static_cast<std::size_t>(j)], comp[static_cast<std::size_t>(i)], p);
      if (!quotient(fp::reduce(fp::lift(ab - ba), p)).isZero()) return false;
    }
  FpMatrix frob(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    FpMatrix x = comp[static_cast<std::size_t>(i)], y = x;
    for (std::int64_t t = 1; t < p; ++t) y = fp::multiply(y, x, p);
    frob.col(i) = quotient(y);
    frob(i, i) = (frob(i, i) + p - 1) % p;
  }
  return q - fp::rank(frob, p) == 1;
}

// Splits e into two orthogonal idempotents when eAe/eJe is not a field.
std::optional<std::pair<FpMatrix, FpMatrix>> split_idempotent(const FpMatrix& e, const Corner& c, Eigen::Index n,
                                                              std::int64_t p, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    FpMatrix x = FpMatrix::Zero(n, n);
    for (const auto& b : c.basis) x += rng.uniform(0, p - 1) * b;
    x = fp::reduce(fp::lift(x), p);
    // minimal polynomial of x in eAe with unit e
    fp::Subspace pow(n * n, p);
    std::vector<FpMatrix> powers{e};
    pow.insert(flatten(e));
    fp::Poly minpoly;
    while (true) {
      const FpMatrix next = fp::multiply(powers.back(), x, p);
      auto co = pow.coordinates(flatten(next));
      if (co) {
        minpoly.assign(powers.size() + 1, 0);
        for (Eigen::Index i = 0; i < co->size(); ++i) minpoly[static_cast<std::size_t>(i)] = (p - (*co)(i)) % p;
        minpoly.back() = 1;
        break;
      }
      pow.insert(flatten(next));
      powers.push_back(next);
    }
    const auto factors = fp::factor(minpoly, p);
    if (factors.size() < 2) continue;
    fp::Poly g{1};
    for (int k = 0; k < factors.front().second; ++k) g = fp::mul(g, factors.front().first, p);
    const fp::Poly h = fp::divmod(minpoly, g, p).first;
    const auto [d, s, t] = fp::ext_gcd(g, h, p);
    (void)s;
    if (fp::degree(d) != 0) continue;
    const fp::Poly u = fp::divmod(fp::mul(t, h, p), minpoly, p).second;
    const FpMatrix ue = fp::evaluate(u, x, e, p);
    if (ue.isZero() || ue == e) continue;
    return std::make_pair(ue, fp::reduce(fp::lift(FpMatrix(e - ue)), p));
  }
  return std::nullopt;
}

}  // namespace

RadicalAndSimples radical_and_simples_mod_p(const EndRing& e, const PrecisionContext& ctx, std::uint64_t seed) {
  const std::int64_t p = ctx.p();
  const Eigen::Index n = e.module().rank();
  std::vector<FpMatrix> mats;
  for (const auto& b : e.basis()) mats.push_back(fp::reduce(b, p));
  fp::Subspace coords(n * n, p);
  for (const auto& x : mats)
    if (!coords.insert(flatten(x))) throw Error(ErrorCode::InternalInconsistency, "endomorphism basis is dependent mod p");
  const FpAlgebra alg(mats, n, p);
  RadicalAndSimples out;
  out.radical = jacobson_radical(alg);
  auto to_coords = [&](const FpMatrix& x) {
    auto c = coords.coordinates(flatten(x));
    if (!c) throw Error(ErrorCode::InternalInconsistency, "element outside the endomorphism ring");
    return *c;
  };
  for (const auto& r : out.radical) out.radical_coords.push_back(to_coords(r));
  if (n == 0) return out;
  Rng rng(seed);
  std::vector<FpMatrix> work{fp::identity(n)};
  while (!work.empty()) {
    const FpMatrix x = work.front();
    work.erase(work.begin());
    const Corner c = corner(x, mats, out.radical, n, p);
    if (corner_is_local(c, n, p)) {
      out.idempotents.push_back(x);
      continue;
    }
    auto parts = split_idempotent(x, c, n, p, rng);
    if (!parts) throw Error(ErrorCode::InternalInconsistency, "failed to split a non-primitive idempotent");
    work.insert(work.begin(), {parts->first, parts->second});
  }
  for (const auto& i : out.idempotents) out.idempotent_coords.push_back(to_coords(i));
  return out;
}

bool end_is_local(const EndRing& e, const PrecisionContext& ctx) {
  const std::int64_t p = ctx.p();
  const Eigen::Index n = e.module().rank();
  if (n == 0) return false;
  std::vector<FpMatrix> mats;
  for (const auto& b : e.basis()) mats.push_back(fp::reduce(b, p));
  const FpAlgebra alg(mats, n, p);
  const auto rad = jacobson_radical(alg);
  return corner_is_local(Corner{alg.basis(), rad}, n, p);
}

// ------------------------------------------------------------ idempotents

namespace {

// Newton iteration e <- 3e^2 - 2e^3 in E-coordinates, reduced mod p^cap.
IntVector hensel_lift(const IntVector& start, const EndRing& e, std::int64_t p, int cap) {
  const IntMatrix x0 = e.element(start);
  if (fp::reduce(multiply(x0, x0), p) != fp::reduce(x0, p)) throw Error(ErrorCode::NotIdempotentModP, "e0 * e0 != e0 mod p");
  const Integer m = ipow(p, cap);
  IntVector c = start;
  // quadratic convergence: after t steps e^2 = e mod p^(2^t)
  for (int precision = 1; precision < cap; precision *= 2) {
    const IntMatrix x = e.element(c);
    const IntMatrix x2 = multiply(x, x);
    auto nc = e.coordinates(IntMatrix(3 * x2 - 2 * multiply(x2, x)));
    if (!nc) throw Error(ErrorCode::InternalInconsistency, "lifted idempotent left the endomorphism ring");
    c = std::move(*nc);
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      c(i) %= m;
      if (c(i) < 0) c(i) += m;
    }
  }
  return c;
}

}  // namespace

IntVector lift_idempotent(const FpVector& e0, const EndRing& e, const PrecisionContext& ctx) {
  if (e0.size() != e.rank()) throw Error(ErrorCode::InvalidArgument, "idempotent has the wrong number of coordinates");
  return hensel_lift(lift_vector(reduce_vector(lift_vector(e0), ctx.p())), e, ctx.p(), ctx.cap());
}

namespace {

// Wang's rational reconstruction of c mod m with |num|, den <= sqrt(m / 2).
std::optional<std::pair<Integer, Integer>> rational_reconstruction(const Integer& c, const Integer& m) {
  const Integer bound = boost::multiprecision::sqrt(Integer(m / 2));
  Integer r0 = m, r1 = c % m, t0 = 0, t1 = 1;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    const Integer q = r0 / r1;
    Integer r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1.is_zero() || boost::multiprecision::abs(t1) > bound) return std::nullopt;
  if (boost::multiprecision::gcd(r1, t1) != 1) return std::nullopt;
  if (t1 < 0) return std::make_pair(Integer(-r1), Integer(-t1));
  return std::make_pair(r1, t1);
}

// An exact idempotent N / d of E (d a p-unit) congruent to the lifted coordinates.
std::optional<std::pair<IntMatrix, Integer>> exact_idempotent(const IntVector& c, const EndRing& e, const Integer& m,
                                                              std::int64_t p) {
  IntVector sym(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) sym(i) = symmetric_mod(c(i), m);
  IntMatrix x = e.element(sym);
  if (multiply(x, x) == x) return std::make_pair(x, Integer(1));
  std::vector<std::pair<Integer, Integer>> fr;
  Integer den = 1;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    auto r = rational_reconstruction(c(i), m);
    if (!r) return std::nullopt;
    den = boost::multiprecision::lcm(den, r->second);
    fr.push_back(*r);
  }
  if (!is_p_unit(den, p)) return std::nullopt;
  IntVector num(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    num(i) = fr[static_cast<std::size_t>(i)].first * (den / fr[static_cast<std::size_t>(i)].second);
  x = e.element(num);
  if (multiply(x, x) == IntMatrix(den * x)) return std::make_pair(x, den);
  return std::nullopt;
}

std::optional<SplitPair> split_with(const EndRing& e, const IntMatrix& num, const Integer& den,
                                    const PrecisionContext& ctx) {
  const Lattice& m = e.module();
  const Eigen::Index n = m.rank();
  const IntMatrix a = saturate(num, n, ctx);
  const IntMatrix b = saturate(IntMatrix(den * IntMatrix::Identity(n, n) - num), n, ctx);
  if (!direct_sum_is_whole(a, b, n, ctx.p())) return std::nullopt;
  if (!is_invariant(m, a) || !is_invariant(m, b)) return std::nullopt;
  return SplitPair{Sublattice{a, true, true}, Sublattice{b, true, true}};
}

}  // namespace

SplitPair split_by_idempotent(const EndRing& e, const FpVector& e0, const PrecisionContext& ctx) {
  const std::int64_t p = ctx.p();
  if (e0.size() != e.rank()) throw Error(ErrorCode::InvalidArgument, "idempotent has the wrong number of coordinates");
  const IntVector base = lift_vector(reduce_vector(lift_vector(e0), p));
  Rng rng(0);
  // The Hensel limit depends on the integer lift of e0 and only some limits
  // are rational, so a few shifted starts are tried as well.
  for (int start = 0; start < 9; ++start) {
    IntVector shifted = base;
    if (start > 0)
      for (Eigen::Index i = 0; i < shifted.size(); ++i) shifted(i) += p * rng.uniform(-1, 1);
    for (int retry = 0, cap = ctx.cap(); retry <= 4; ++retry, cap *= 2) {
      const IntVector lifted = hensel_lift(shifted, e, p, cap);
      if (auto exact = exact_idempotent(lifted, e, ipow(p, cap), p))
        if (auto split = split_with(e, exact->first, exact->second, ctx)) return *split;
    }
  }
  throw Error(ErrorCode::PrecisionExhausted, "no exact idempotent found within the retry bound");
}

// ------------------------------------------------------------ certificates

int PermutationCertificate::multiplicity(const Subgroup& k) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == k) return multiplicities[i];
  return 0;
}

std::map<std::string, int> PermutationCertificate::labelled() const {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < classes.size(); ++i) out[classes[i].label()] = multiplicities[i];
  return out;
}

std::vector<Subgroup> canonical_classes(const PGroup& g) {
  std::vector<Subgroup> reps = classify_subgroups(g).class_reps;
  std::stable_sort(reps.begin(), reps.end(), [](const Subgroup& a, const Subgroup& b) { return a.order() > b.order(); });
  return reps;
}

std::vector<IntMatrix> canonical_permutation_action(const PGroup& g, const std::vector<Subgroup>& classes,
                                                    const std::vector<int>& multiplicities) {
  if (classes.size() != multiplicities.size())
    throw Error(ErrorCode::InvalidArgument, "one multiplicity per class is required");
  Eigen::Index total = 0;
  std::vector<std::vector<int>> reps, idx;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    reps.push_back(coset_transversal(g, classes[c]));
    idx.push_back(coset_index(g, classes[c]));
    total += static_cast<Eigen::Index>(reps.back().size()) * multiplicities[c];
  }
  std::vector<IntMatrix> out;
  for (int x = 0; x < g.order(); ++x) {
    IntMatrix a = IntMatrix::Zero(total, total);
    Eigen::Index off = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto r = static_cast<Eigen::Index>(reps[c].size());
      for (int copy = 0; copy < multiplicities[c]; ++copy) {
        for (Eigen::Index j = 0; j < r; ++j)
          a(off + idx[c][static_cast<std::size_t>(g.mul(x, reps[c][static_cast<std::size_t>(j)]))], off + j) = 1;
        off += r;
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

bool verify_certificate(const Lattice& m, const PermutationCertificate& cert, const PrecisionContext& ctx) {
  const Eigen::Index n = m.rank();
  const IntMatrix& t = cert.change_of_basis;
  if (t.rows() != n || t.cols() != n) return false;
  if (cert.classes.size() != cert.multiplicities.size()) return false;
  for (int mk : cert.multiplicities)
    if (mk < 0) return false;
  const auto action = canonical_permutation_action(m.group(), cert.classes, cert.multiplicities);
  if (!action.empty() && action.front().rows() != n) return false;
  if (!det_is_p_unit(t, ctx.p())) return false;
  for (int x = 0; x < m.group().order(); ++x)
    if (multiply(m.action(x), t) != multiply(t, action[static_cast<std::size_t>(x)])) return false;
  return true;
}

// ---------------------------------------------------------- coset summands

namespace {

// Saturated basis (columns) of the K-invariant linear forms on M.
IntMatrix invariant_forms(const Lattice& m, const Subgroup& k, const PrecisionContext& ctx) {
  const Eigen::Index n = m.rank();
  const std::vector<int> gens = minimal_generators(m.group(), k);
  if (gens.empty()) return IntMatrix::Identity(n, n);
  IntMatrix system(n * static_cast<Eigen::Index>(gens.size()), n);
  for (std::size_t i = 0; i < gens.size(); ++i)
    system.middleRows(static_cast<Eigen::Index>(i) * n, n) =
        IntMatrix(m.action(gens[i]).transpose()) - IntMatrix::Identity(n, n);
  return kernel_local(system, ctx);
}

}  // namespace

std::optional<std::pair<IntMatrix, IntMatrix>> split_coset_summand(const Lattice& m, const Subgroup& k,
                                                                  const PrecisionContext& ctx) {
  const PGroup& g = m.group();
  validate_subgroup(g, k);
  const Eigen::Index n = m.rank();
  const std::vector<int> reps = coset_transversal(g, k);
  const auto r = static_cast<Eigen::Index>(reps.size());
  if (r > n) return std::nullopt;
  const IntMatrix v = invariants(m, k).basis;
  const IntMatrix f = invariant_forms(m, k, ctx);
  if (v.cols() == 0 || f.cols() == 0) return std::nullopt;
  IntMatrix trace = IntMatrix::Zero(n, n);
  for (int x : reps) trace += m.action(g.inverse(x));
  // pairing (f, v) -> f^T (sum_r r^{-1}) v; a unit value splits off Z[G/K]
  const FpMatrix pairing = fp::reduce(multiply(multiply(IntMatrix(f.transpose()), trace), v), ctx.p());
  Eigen::Index bi = -1, bj = -1;
  for (Eigen::Index j = 0; j < pairing.cols() && bi < 0; ++j)
    for (Eigen::Index i = 0; i < pairing.rows(); ++i)
      if (pairing(i, j) != 0) {
        bi = i;
        bj = j;
        break;
      }
  if (bi < 0) return std::nullopt;
  IntMatrix span(n, r), forms(r, n);
  const IntVector vv = v.col(bj);
  const IntMatrix ff = f.col(bi).transpose();
  for (Eigen::Index j = 0; j < r; ++j) {
    span.col(j) = multiply(m.action(reps[static_cast<std::size_t>(j)]), vv);
    forms.row(j) = multiply(ff, m.action(g.inverse(reps[static_cast<std::size_t>(j)])));
  }
  const IntMatrix summand = saturate(span, n, ctx);
  const IntMatrix complement = kernel_local(forms, ctx);
  if (!direct_sum_is_whole(summand, complement, n, ctx.p()))
    throw Error(ErrorCode::InternalInconsistency, "coset summand does not split");
  return std::make_pair(summand, complement);
}

// ----------------------------------------------------------- Krull-Schmidt

namespace {

enum class Outcome { Split, Indecomposable, Stuck };

struct SplitResult {
  Outcome outcome = Outcome::Stuck;
  IntMatrix first, second;  // local coordinates
};

// Nontrivial homomorphisms G -> {+1, -1}, as values on every element.
std::vector<std::vector<int>> sign_characters(const PGroup& g) {
  std::vector<std::vector<int>> out;
  const auto& gens = g.generators();
  if (g.p() != 2 || gens.size() > 16) return out;
  for (std::uint32_t mask = 1; mask < (1u << gens.size()); ++mask) {
    std::vector<int> chi(static_cast<std::size_t>(g.order()), 0);
    chi[0] = 1;
    std::vector<int> queue{0};
    bool ok = true;
    for (std::size_t i = 0; i < queue.size() && ok; ++i)
      for (std::size_t s = 0; s < gens.size(); ++s) {
        const int y = g.mul(queue[i], gens[s]);
        const int val = chi[static_cast<std::size_t>(queue[i])] * ((mask >> s) & 1u ? -1 : 1);
        if (chi[static_cast<std::size_t>(y)] == 0) {
          chi[static_cast<std::size_t>(y)] = val;
          queue.push_back(y);
        } else if (chi[static_cast<std::size_t>(y)] != val) {
          ok = false;
          break;
        }
      }
    if (!ok) continue;
    for (int a = 0; a < g.order() && ok; ++a)
      for (int b = 0; b < g.order(); ++b)
        if (chi[static_cast<std::size_t>(g.mul(a, b))] != chi[static_cast<std::size_t>(a)] * chi[static_cast<std::size_t>(b)]) {
          ok = false;
          break;
        }
    if (ok) out.push_back(std::move(chi));
  }
  return out;
}

std::optional<SplitResult> split_by_character(const Lattice& l, const std::vector<int>& chi, const PrecisionContext& ctx) {
  const Eigen::Index n = l.rank();
  const auto& gens = l.group().generators();
  IntMatrix vs(n * static_cast<Eigen::Index>(gens.size()), n), fs(vs.rows(), n);
  for (std::size_t s = 0; s < gens.size(); ++s) {
    const IntMatrix id = chi[static_cast<std::size_t>(gens[s])] * IntMatrix::Identity(n, n);
    vs.middleRows(static_cast<Eigen::Index>(s) * n, n) = l.action(gens[s]) - id;
    fs.middleRows(static_cast<Eigen::Index>(s) * n, n) = IntMatrix(l.action(gens[s]).transpose()) - id;
  }
  const IntMatrix v = kernel_local(vs, ctx), f = kernel_local(fs, ctx);
  if (v.cols() == 0 || f.cols() == 0) return std::nullopt;
  const FpMatrix pairing = fp::reduce(multiply(IntMatrix(f.transpose()), v), ctx.p());
  for (Eigen::Index j = 0; j < pairing.cols(); ++j)
    for (Eigen::Index i = 0; i < pairing.rows(); ++i)
      if (pairing(i, j) != 0) {
        SplitResult r;
        if (n == 1) {
          r.outcome = Outcome::Indecomposable;
          return r;
        }
        r.outcome = Outcome::Split;
        r.first = v.col(j);
        r.second = kernel_local(IntMatrix(f.col(i).transpose()), ctx);
        return r;
      }
  return std::nullopt;
}

// Integer characteristic polynomial det(t I - a), low degree first (Faddeev-LeVerrier).
std::vector<Integer> integer_charpoly(const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Integer> c(static_cast<std::size_t>(n + 1), 0);
  c[static_cast<std::size_t>(n)] = 1;
  IntMatrix mk = IntMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = multiply(a, mk);
    for (Eigen::Index i = 0; i < n; ++i) mk(i, i) += c[static_cast<std::size_t>(n - k + 1)];
    const IntMatrix amk = multiply(a, mk);
    Integer tr = 0;
    for (Eigen::Index i = 0; i < n; ++i) tr += amk(i, i);
    c[static_cast<std::size_t>(n - k)] = -tr / k;
  }
  return c;
}

Integer horner(const std::vector<Integer>& f, const Integer& x) {
  Integer r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + *it;
  return r;
}

// f / (t - x) for a root x.
std::vector<Integer> deflate(const std::vector<Integer>& f, const Integer& x) {
  std::vector<Integer> q(f.size() - 1);
  Integer carry = 0;
  for (std::size_t i = f.size() - 1; i >= 1; --i) {
    carry = f[i] + carry * x;
    q[i - 1] = carry;
  }
  return q;
}

IntMatrix evaluate_poly(const std::vector<Integer>& f, const IntMatrix& a) {
  const Eigen::Index n = a.rows();
  IntMatrix r = IntMatrix::Zero(n, n);
  for (auto it = f.rbegin(); it != f.rend(); ++it) {
    r = multiply(r, a);
    for (Eigen::Index i = 0; i < n; ++i) r(i, i) += *it;
  }
  return r;
}

// Fitting-style split along the integer eigenvalues of an endomorphism a.
std::optional<SplitResult> split_by_eigenvalues(const IntMatrix& a, const PrecisionContext& ctx) {
  const Eigen::Index n = a.rows();
  const std::int64_t p = ctx.p();
  Integer bound = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Integer s = 0;
    for (Eigen::Index j = 0; j < n; ++j) s += boost::multiprecision::abs(a(i, j));
    bound = std::max(bound, s);
  }
  if (bound > 4096) return std::nullopt;
  std::vector<Integer> chi = integer_charpoly(a);
  std::vector<std::pair<Integer, int>> roots;
  const auto b = static_cast<std::int64_t>(bound);
  for (std::int64_t x = -b; x <= b && chi.size() > 1; ++x) {
    int mult = 0;
    while (chi.size() > 1 && horner(chi, x).is_zero()) {
      chi = deflate(chi, x);
      ++mult;
    }
    if (mult) roots.emplace_back(Integer(x), mult);
  }
  const std::vector<Integer> full = integer_charpoly(a);
  for (std::int64_t res = 0; res < p; ++res) {
    std::vector<Integer> g{1};
    for (const auto& [x, mult] : roots)
      if (mod_small(x, p) == res)
        for (int t = 0; t < mult; ++t) {
          std::vector<Integer> ng(g.size() + 1, 0);
          for (std::size_t i = 0; i < g.size(); ++i) {
            ng[i + 1] += g[i];
            ng[i] -= x * g[i];
          }
          g = std::move(ng);
        }
    if (g.size() == 1 || static_cast<Eigen::Index>(g.size()) == n + 1) continue;
    // h = full / g
    std::vector<Integer> h = full;
    for (const auto& [x, mult] : roots)
      if (mod_small(x, p) == res)
        for (int t = 0; t < mult; ++t) h = deflate(h, x);
    if (mod_small(horner(h, res), p) == 0) continue;
    const IntMatrix ka = kernel_local(evaluate_poly(g, a), ctx), kb = kernel_local(evaluate_poly(h, a), ctx);
    if (ka.cols() == 0 || kb.cols() == 0 || !direct_sum_is_whole(ka, kb, n, p)) continue;
    SplitResult r;
    r.outcome = Outcome::Split;
    r.first = ka;
    r.second = kb;
    return r;
  }
  return std::nullopt;
}

SplitResult split_once(const Lattice& l, const PrecisionContext& ctx) {
  SplitResult r;
  const Eigen::Index n = l.rank();
  if (n <= 1) {
    r.outcome = Outcome::Indecomposable;
    return r;
  }
  const PGroup& g = l.group();
  for (const auto& k : canonical_classes(g)) {
    if (index_in(g, k) > n) continue;
    auto s = split_coset_summand(l, k, ctx);
    if (!s) continue;
    if (s->second.cols() == 0) {
      r.outcome = Outcome::Indecomposable;
      return r;
    }
    r.outcome = Outcome::Split;
    r.first = s->first;
    r.second = s->second;
    return r;
  }
  if (ctx.p() == 2)
    for (const auto& chi : sign_characters(g))
      if (auto s = split_by_character(l, chi, ctx)) return *s;
  const EndRing e(l, ctx);
  const RadicalAndSimples rs = radical_and_simples_mod_p(e, ctx);
  if (rs.local()) {
    r.outcome = Outcome::Indecomposable;
    return r;
  }
  for (const auto& e0 : rs.idempotent_coords) {
    try {
      const SplitPair s = split_by_idempotent(e, e0, ctx);
      if (s.first.rank() == 0 || s.second.rank() == 0) continue;
      r.outcome = Outcome::Split;
      r.first = s.first.basis;
      r.second = s.second.basis;
      return r;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::PrecisionExhausted) throw;
    }
  }
  Rng rng(0);
  for (int attempt = 0; attempt < 32 && e.rank() > 0; ++attempt) {
    IntVector c(e.rank());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.uniform(-3, 3);
    if (auto s = split_by_eigenvalues(e.element(c), ctx)) return *s;
  }
  return r;
}

Decomposition run_krull_schmidt(const Lattice& m, const PrecisionContext& ctx, bool strict) {
  Decomposition out;
  const Eigen::Index n = m.rank();
  std::function<void(const IntMatrix&)> visit = [&](const IntMatrix& basis) {
    const Lattice l = sublattice_lattice(m, basis);
    const SplitResult s = split_once(l, ctx);
    switch (s.outcome) {
      case Outcome::Split:
        visit(multiply(basis, s.first));
        visit(multiply(basis, s.second));
        return;
      case Outcome::Indecomposable:
        out.summands.push_back(Sublattice{basis, true, true});
        out.indecomposable.push_back(true);
        return;
      case Outcome::Stuck:
        if (strict) throw Error(ErrorCode::PrecisionExhausted, "a decomposable summand could not be split exactly");
        out.summands.push_back(Sublattice{basis, true, true});
        out.indecomposable.push_back(false);
        return;
    }
  };
  if (n > 0) visit(IntMatrix::Identity(n, n));
  IntMatrix all(n, 0);
  for (const auto& s : out.summands) {
    if (!is_invariant(m, s.basis)) throw Error(ErrorCode::InternalInconsistency, "summand is not invariant");
    all = hstack(all, s.basis);
  }
  if (all.cols() != n || !det_is_p_unit(all, ctx.p()))
    throw Error(ErrorCode::InternalInconsistency, "summands do not form a direct sum");
  return out;
}

}  // namespace

Decomposition krull_schmidt(const Lattice& m, const PrecisionContext& ctx) { return run_krull_schmidt(m, ctx, true); }

Decomposition krull_schmidt_partial(const Lattice& m, const PrecisionContext& ctx) {
  return run_krull_schmidt(m, ctx, false);
}

IsoResult iso_indecomposable(const Lattice& x, const Lattice& y, const PrecisionContext& ctx) {
  if (!same_group(x.group(), y.group())) throw Error(ErrorCode::GroupMismatch, "isomorphism test over different groups");
  const EndRing ex(x, ctx);
  if (!end_is_local(ex, ctx)) throw Error(ErrorCode::NotIndecomposable, "End(X) is not local");
  IsoResult out;
  if (x.rank() != y.rank()) return out;
  const HomSpace xy = hom_space(x, y, ctx), yx = hom_space(y, x, ctx);
  for (const auto& f : xy.basis)
    for (const auto& g : yx.basis)
      if (det_is_p_unit(multiply(g, f), ctx.p())) {
        if (!intertwines(x, y, f) || !det_is_p_unit(f, ctx.p()))
          throw Error(ErrorCode::InternalInconsistency, "isomorphism failed verification");
        out.isomorphic = true;
        out.map = f;
        return out;
      }
  return out;
}

// ------------------------------------------------------------ recognition

namespace {

constexpr Eigen::Index kWitnessSplitLimit = 16;

Witness find_witness(const Lattice& m, const std::vector<Subgroup>& classes, const PrecisionContext& ctx) {
  const PGroup& g = m.group();
  const Eigen::Index n = m.rank();
  Witness w;
  w.peeled.assign(classes.size(), 0);
  IntMatrix basis = IntMatrix::Identity(n, n);
  for (bool progress = true; progress && basis.cols() > 0;) {
    progress = false;
    const Lattice l = sublattice_lattice(m, basis);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (index_in(g, classes[c]) > l.rank()) continue;
      if (auto s = split_coset_summand(l, classes[c], ctx)) {
        ++w.peeled[c];
        basis = multiply(basis, s->second);
        progress = true;
        break;
      }
    }
  }
  if (basis.cols() == 0) throw Error(ErrorCode::InternalInconsistency, "lattice peeled into permutation summands");
  w.summand = Sublattice{basis, true, true};
  if (basis.cols() <= kWitnessSplitLimit) {
    const Decomposition d = krull_schmidt_partial(sublattice_lattice(m, basis), ctx);
    std::size_t pick = 0;
    for (std::size_t i = 0; i < d.summands.size(); ++i)
      if (d.indecomposable[i]) {
        pick = i;
        break;
      }
    w.summand = Sublattice{multiply(basis, d.summands[pick].basis), true, true};
    w.indecomposable = d.indecomposable[pick];
  }
  return w;
}

}  // namespace

Verdict recognize_permutation(const Lattice& m, const PrecisionContext& ctx) {
  const PGroup& g = m.group();
  const Eigen::Index n = m.rank();
  const std::int64_t p = ctx.p();
  if (g.order() > 1 && g.p() != p) throw Error(ErrorCode::InvalidArgument, "precision prime differs from the group prime");
  const std::vector<Subgroup> classes = canonical_classes(g);
  // head M / (I_G M + pM): seed with the augmentation part, then add K-fixed
  // vectors class by class, largest K first
  fp::Subspace head(n, p);
  for (int s : g.generators()) {
    const FpMatrix a = fp::reduce(IntMatrix(m.action(s) - IntMatrix::Identity(n, n)), p);
    for (Eigen::Index j = 0; j < n; ++j) head.insert(a.col(j));
  }
  std::vector<std::vector<IntVector>> chosen(classes.size());
  Eigen::Index total = 0;
  for (std::size_t c = 0; c < classes.size() && head.dimension() < n; ++c) {
    const IntMatrix b = invariants(m, classes[c]).basis;
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      if (head.insert(reduce_vector(b.col(j), p))) {
        chosen[c].push_back(b.col(j));
        total += index_in(g, classes[c]);
      }
  }
  Verdict v;
  if (total == n && head.dimension() == n) {
    PermutationCertificate cert;
    cert.classes = classes;
    cert.change_of_basis = IntMatrix(n, n);
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      cert.multiplicities.push_back(static_cast<int>(chosen[c].size()));
      const std::vector<int> reps = coset_transversal(g, classes[c]);
      for (const auto& vec : chosen[c])
        for (int r : reps) cert.change_of_basis.col(col++) = multiply(m.action(r), vec);
    }
    if (!verify_certificate(m, cert, ctx))
      throw Error(ErrorCode::InternalInconsistency, "permutation basis failed verification");
    v.certificate = std::move(cert);
    return v;
  }
  v.witness = find_witness(m, classes, ctx);
  return v;
}

std::optional<std::vector<int>> recognize_by_decomposition(const Lattice& m, const PrecisionContext& ctx) {
  const std::vector<Subgroup> classes = canonical_classes(m.group());
  std::vector<Lattice> models;
  for (const auto& k : classes) models.push_back(permutation_lattice(m.group_ptr(), k));
  std::vector<int> mult(classes.size(), 0);
  const Decomposition d = krull_schmidt(m, ctx);
  for (const auto& s : d.summands) {
    const Lattice l = sublattice_lattice(m, s.basis);
    bool matched = false;
    for (std::size_t c = 0; c < classes.size() && !matched; ++c) {
      if (models[c].rank() != l.rank()) continue;
      if (iso_indecomposable(models[c], l, ctx).isomorphic) {
        ++mult[c];
        matched = true;
      }
    }
    if (!matched) return std::nullopt;
  }
  return mult;
}

std::optional<CpSplit> cp_split(const Lattice& m, const Subgroup& c, const PrecisionContext& ctx) {
  validate_subgroup(m.group(), c);
  if (c.order() != ctx.p()) throw Error(ErrorCode::WrongOrder, "cp_split needs a subgroup of order p");
  const Restriction res = restrict_lattice(m, c);
  const Verdict v = recognize_permutation(res.lattice, ctx);
  if (!v.is_permutation()) return std::nullopt;
  const PermutationCertificate& cert = *v.certificate;
  const Eigen::Index n = m.rank();
  Eigen::Index trivial = 0;
  for (std::size_t i = 0; i < cert.classes.size(); ++i)
    if (cert.classes[i].order() == c.order()) trivial = cert.multiplicities[i];
  const IntMatrix& t = cert.change_of_basis;
  CpSplit out;
  out.m1 = Sublattice{saturate(t.leftCols(trivial), n, ctx), true, false};
  out.mp = Sublattice{saturate(t.rightCols(n - trivial), n, ctx), true, false};
  if (!direct_sum_is_whole(out.m1.basis, out.mp.basis, n, ctx.p()))
    throw Error(ErrorCode::InternalInconsistency, "cp_split summands do not form a direct sum");
  for (int x : c.elements)
    if (multiply(m.action(x), out.m1.basis) != out.m1.basis)
      throw Error(ErrorCode::InternalInconsistency, "cp_split trivial part is not fixed");
  out.m1.invariant = is_invariant(m, out.m1.basis);
  out.mp.invariant = is_invariant(m, out.mp.basis);
  out.certificate = cert;
  return out;
}

}  // namespace zplat
