#include "zplat/fp_linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace zplat::fp {

namespace {

std::int64_t norm(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

}  // namespace

FpMatrix reduce(const IntMatrix& a, std::int64_t p) {
  FpMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = mod_small(a(i, j), p);
  return out;
}

IntMatrix lift(const FpMatrix& a) {
  IntMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
  return out;
}

FpMatrix multiply(const FpMatrix& a, const FpMatrix& b, std::int64_t p) {
  FpMatrix c = a * b;
  return c.unaryExpr([p](std::int64_t x) { return x % p; });
}

FpMatrix identity(Eigen::Index n) { return FpMatrix::Identity(n, n); }

Echelon row_echelon(FpMatrix a, std::int64_t p) {
  Echelon e;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = row; i < a.rows(); ++i)
      if (a(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row) a.row(piv).swap(a.row(row));
    std::int64_t inv = inverse_mod(a(row, col), p);
    for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv % p;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      std::int64_t f = a(i, col);
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) = norm(a(i, j) - f * a(row, j), p);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.rref = std::move(a);
  return e;
}

Eigen::Index rank(const FpMatrix& a, std::int64_t p) {
  return static_cast<Eigen::Index>(row_echelon(a, p).pivots.size());
}

FpMatrix nullspace(const FpMatrix& a, std::int64_t p) {
  Echelon e = row_echelon(a, p);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto c : e.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  FpMatrix basis = FpMatrix::Zero(n, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index f = free_cols[k];
    basis(f, static_cast<Eigen::Index>(k)) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      basis(e.pivots[r], static_cast<Eigen::Index>(k)) = norm(-e.rref(static_cast<Eigen::Index>(r), f), p);
  }
  return basis;
}

std::optional<FpVector> solve(const FpMatrix& a, const FpVector& b, std::int64_t p) {
  FpMatrix aug(a.rows(), a.cols() + 1);
  aug << a, b;
  Echelon e = row_echelon(aug, p);
  FpVector x = FpVector::Zero(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x(e.pivots[r]) = e.rref(static_cast<Eigen::Index>(r), a.cols());
  }
  return x;
}

std::optional<FpMatrix> inverse(const FpMatrix& a, std::int64_t p) {
  const Eigen::Index n = a.rows();
  FpMatrix aug(n, 2 * n);
  aug << a, FpMatrix::Identity(n, n);
  Echelon e = row_echelon(aug, p);
  if (static_cast<Eigen::Index>(e.pivots.size()) < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1)
    return std::nullopt;
  return FpMatrix(e.rref.rightCols(n));
}

Subspace::Subspace(Eigen::Index dim, std::int64_t p) : dim_(dim), p_(p) {}

FpVector Subspace::reduce(FpVector v) const {
  for (std::size_t k = 0; k < echelon_.size(); ++k) {
    const std::int64_t f = v(pivot_[k]);
    if (f == 0) continue;
    for (Eigen::Index j = 0; j < dim_; ++j)
      if (echelon_[k](j) != 0) v(j) = norm(v(j) - f * echelon_[k](j), p_);
  }
  return v;
}

bool Subspace::contains(const FpVector& v) const { return reduce(v).isZero(); }

bool Subspace::insert(const FpVector& v) {
  const Eigen::Index r = dimension();
  FpVector combo = FpVector::Zero(r + 1);
  FpVector w = v;
  for (std::size_t k = 0; k < echelon_.size(); ++k) {
    const std::int64_t f = w(pivot_[k]);
    if (f == 0) continue;
    for (Eigen::Index j = 0; j < dim_; ++j)
      if (echelon_[k](j) != 0) w(j) = norm(w(j) - f * echelon_[k](j), p_);
    for (Eigen::Index j = 0; j < r; ++j) combo(j) = norm(combo(j) - f * combo_[k](j), p_);
  }
  Eigen::Index piv = -1;
  for (Eigen::Index j = 0; j < dim_; ++j)
    if (w(j) != 0) {
      piv = j;
      break;
    }
  if (piv < 0) return false;
  combo(r) = 1;
  const std::int64_t inv = inverse_mod(w(piv), p_);
  w = w.unaryExpr([&](std::int64_t x) { return x * inv % p_; });
  combo = combo.unaryExpr([&](std::int64_t x) { return x * inv % p_; });
  for (auto& c : combo_) c.conservativeResize(r + 1), c(r) = 0;
  basis_.push_back(v);
  echelon_.push_back(std::move(w));
  pivot_.push_back(piv);
  combo_.push_back(std::move(combo));
  return true;
}

std::optional<FpVector> Subspace::coordinates(const FpVector& v) const {
  const Eigen::Index r = dimension();
  FpVector coords = FpVector::Zero(r);
  FpVector w = v;
  for (std::size_t k = 0; k < echelon_.size(); ++k) {
    const std::int64_t f = w(pivot_[k]);
    if (f == 0) continue;
    for (Eigen::Index j = 0; j < dim_; ++j)
      if (echelon_[k](j) != 0) w(j) = norm(w(j) - f * echelon_[k](j), p_);
    for (Eigen::Index j = 0; j < r; ++j) coords(j) = norm(coords(j) + f * combo_[k](j), p_);
  }
  if (!w.isZero()) return std::nullopt;
  return coords;
}

// ---------------------------------------------------------------- polynomials

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly monic(Poly f, std::int64_t p) {
  trim(f);
  if (f.empty()) return f;
  const std::int64_t inv = inverse_mod(f.back(), p);
  for (auto& c : f) c = c * inv % p;
  return f;
}

Poly add(const Poly& a, const Poly& b, std::int64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, std::int64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = norm(r[i] - b[i], p);
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::int64_t p) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, 0);
  const std::int64_t inv = inverse_mod(b.back(), p);
  for (std::size_t k = q.size(); k-- > 0;) {
    const std::int64_t c = r[k + b.size() - 1] * inv % p;
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = norm(r[k + j] - c * b[j], p);
  }
  trim(q);
  trim(r);
  return {q, r};
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

std::tuple<Poly, Poly, Poly> ext_gcd(const Poly& a, const Poly& b, std::int64_t p) {
  Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  const std::int64_t inv = inverse_mod(r0.back(), p);
  auto scale = [&](Poly f) {
    for (auto& c : f) c = c * inv % p;
    trim(f);
    return f;
  };
  return {scale(r0), scale(s0), scale(t0)};
}

Poly derivative(const Poly& f, std::int64_t p) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i)
    d.push_back(static_cast<std::int64_t>(i % static_cast<std::size_t>(p)) * f[i] % p);
  trim(d);
  return d;
}

Poly powmod(Poly base, std::int64_t exp, const Poly& mod, std::int64_t p) {
  Poly result{1};
  base = divmod(base, mod, p).second;
  while (exp > 0) {
    if (exp & 1) result = divmod(mul(result, base, p), mod, p).second;
    base = divmod(mul(base, base, p), mod, p).second;
    exp >>= 1;
  }
  return result;
}

Poly charpoly(const FpMatrix& a, std::int64_t p) {
  const Eigen::Index n = a.rows();
  FpMatrix h = a;
  // Reduce to upper Hessenberg form by similarity.
  for (Eigen::Index m = 1; m + 1 < n; ++m) {
    Eigen::Index i = m;
    while (i < n && h(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      h.row(i).swap(h.row(m));
      h.col(i).swap(h.col(m));
    }
    const std::int64_t t = inverse_mod(h(m, m - 1), p);
    for (Eigen::Index k = m + 1; k < n; ++k) {
      const std::int64_t u = h(k, m - 1) * t % p;
      if (u == 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) h(k, j) = norm(h(k, j) - u * h(m, j), p);
      for (Eigen::Index j = 0; j < n; ++j) h(j, m) = (h(j, m) + u * h(j, k)) % p;
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}  (1-based)
  std::vector<Poly> ps(static_cast<std::size_t>(n + 1));
  ps[0] = Poly{1};
  for (Eigen::Index m = 1; m <= n; ++m) {
    Poly cur = mul(Poly{norm(-h(m - 1, m - 1), p), 1}, ps[static_cast<std::size_t>(m - 1)], p);
    std::int64_t prod = 1;
    for (Eigen::Index i = m - 1; i >= 1; --i) {
      prod = prod * h(i, i - 1) % p;
      const std::int64_t c = h(i - 1, m - 1) * prod % p;
      if (c == 0) continue;
      cur = sub(cur, mul(Poly{c}, ps[static_cast<std::size_t>(i - 1)], p), p);
    }
    ps[static_cast<std::size_t>(m)] = cur;
  }
  Poly out = ps[static_cast<std::size_t>(n)];
  out.resize(static_cast<std::size_t>(n + 1), 0);
  out.back() = 1;
  return out;
}

namespace {

// p-th root of a polynomial all of whose exponents are multiples of p.
Poly pth_root(const Poly& f, std::int64_t p) {
  Poly r;
  for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) r.push_back(f[i]);
  trim(r);
  return r;
}

void squarefree_parts(const Poly& f, int scale, std::int64_t p, std::vector<std::pair<Poly, int>>& out) {
  if (degree(f) < 1) return;
  Poly d = derivative(f, p);
  if (d.empty()) {
    squarefree_parts(pth_root(f, p), scale * static_cast<int>(p), p, out);
    return;
  }
  Poly c = gcd(f, d, p);
  Poly w = divmod(f, c, p).first;
  int i = 1;
  while (degree(w) >= 1) {
    Poly y = gcd(w, c, p);
    Poly z = divmod(w, y, p).first;
    if (degree(z) >= 1) out.emplace_back(monic(z, p), i * scale);
    w = y;
    c = divmod(c, y, p).first;
    ++i;
  }
  if (degree(c) >= 1) squarefree_parts(pth_root(c, p), scale * static_cast<int>(p), p, out);
}

// Berlekamp splitting of a squarefree monic polynomial.
std::vector<Poly> berlekamp(const Poly& g, std::int64_t p) {
  const int d = degree(g);
  if (d <= 1) return {g};
  FpMatrix q = FpMatrix::Zero(d, d);  // column i: x^{p i} mod g
  Poly xp = powmod(Poly{0, 1}, p, g, p);
  Poly cur{1};
  for (int i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < cur.size(); ++j) q(static_cast<Eigen::Index>(j), i) = cur[j];
    cur = divmod(mul(cur, xp, p), g, p).second;
  }
  FpMatrix qm = q;
  for (int i = 0; i < d; ++i) qm(i, i) = norm(qm(i, i) - 1, p);
  FpMatrix ker = nullspace(qm, p);
  const auto k = static_cast<std::size_t>(ker.cols());
  std::vector<Poly> factors{g};
  if (k == 1) return factors;
  for (Eigen::Index col = 0; col < ker.cols() && factors.size() < k; ++col) {
    Poly v(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = ker(j, col);
    trim(v);
    if (degree(v) < 1) continue;
    for (std::int64_t s = 0; s < p && factors.size() < k; ++s) {
      std::vector<Poly> next;
      for (const auto& h : factors) {
        if (degree(h) <= 1) {
          next.push_back(h);
          continue;
        }
        Poly gg = gcd(h, sub(v, Poly{s}, p), p);
        if (degree(gg) >= 1 && degree(gg) < degree(h)) {
          next.push_back(gg);
          next.push_back(monic(divmod(h, gg, p).first, p));
        } else {
          next.push_back(h);
        }
      }
      factors = std::move(next);
    }
  }
  return factors;
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& f, std::int64_t p) {
  std::vector<std::pair<Poly, int>> parts;
  squarefree_parts(monic(f, p), 1, p, parts);
  std::vector<std::pair<Poly, int>> out;
  for (const auto& [g, mult] : parts)
    for (auto& h : berlekamp(g, p)) out.emplace_back(monic(h, p), mult);
  // The same irreducible can appear in two squarefree layers after p-th roots.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<std::pair<Poly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(std::move(e));
  }
  return merged;
}

FpMatrix evaluate(const Poly& f, const FpMatrix& a, const FpMatrix& unit, std::int64_t p) {
  FpMatrix acc = FpMatrix::Zero(a.rows(), a.cols());
  for (std::size_t k = f.size(); k-- > 0;) {
    acc = multiply(acc, a, p);
    if (f[k] != 0) acc = (acc + f[k] * unit).unaryExpr([p](std::int64_t x) { return x % p; });
  }
  return acc;
}

}  // namespace zplat::fp
