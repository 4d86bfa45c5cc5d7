#include "zplat/pgroup.hpp"

#include "zplat/error.hpp"
#include "zplat/random.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace zplat {

namespace {

std::int64_t smallest_prime_factor(std::int64_t n) {
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

bool is_power_of(std::int64_t n, std::int64_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

Permutation compose(const Permutation& g, const Permutation& h) {
  Permutation out(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) out[x] = g[static_cast<std::size_t>(h[x])];
  return out;
}

ElementSet closure(const PGroup& g, ElementSet set) {
  set.set(0);
  std::vector<int> members;
  for (int x = 0; x < g.order(); ++x)
    if (set.test(static_cast<std::size_t>(x))) members.push_back(x);
  std::vector<int> gens = members;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (int s : gens) {
      const int y = g.mul(members[i], s);
      if (!set.test(static_cast<std::size_t>(y))) {
        set.set(static_cast<std::size_t>(y));
        members.push_back(y);
      }
    }
  return set;
}

}  // namespace

PGroup PGroup::from_permutations(const std::vector<Permutation>& gens, int degree, int order_cap) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "permutation degree must be positive");
  order_cap = std::min(order_cap, kMaxGroupOrder);
  for (const auto& s : gens) {
    if (static_cast<int>(s.size()) != degree) throw Error(ErrorCode::InvalidArgument, "generator has wrong degree");
    std::vector<bool> seen(static_cast<std::size_t>(degree), false);
    for (int x : s) {
      if (x < 0 || x >= degree || seen[static_cast<std::size_t>(x)])
        throw Error(ErrorCode::InvalidArgument, "generator is not a permutation");
      seen[static_cast<std::size_t>(x)] = true;
    }
  }
  Permutation id(static_cast<std::size_t>(degree));
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> elems{id};
  std::map<Permutation, int> index{{id, 0}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& s : gens) {
      Permutation y = compose(elems[i], s);
      if (index.count(y)) continue;
      if (static_cast<int>(elems.size()) >= order_cap)
        throw Error(ErrorCode::OrderCapExceeded, "group order exceeds " + std::to_string(order_cap));
      index.emplace(y, static_cast<int>(elems.size()));
      elems.push_back(std::move(y));
    }
  const auto n = static_cast<std::int64_t>(elems.size());
  if (n > 1 && !is_power_of(n, smallest_prime_factor(n)))
    throw Error(ErrorCode::OrderNotPPower, "group order " + std::to_string(n) + " is not a prime power");
  PGroup g;
  g.mul_.assign(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) g.mul_[a][b] = index.at(compose(elems[a], elems[b]));
  for (const auto& s : gens) {
    const int e = index.at(s);
    if (e != 0 && std::find(g.generators_.begin(), g.generators_.end(), e) == g.generators_.end())
      g.generators_.push_back(e);
  }
  g.perms_ = std::move(elems);
  g.degree_ = degree;
  g.finish(n > 1 ? smallest_prime_factor(n) : 0);
  return g;
}

PGroup PGroup::from_table(std::vector<std::vector<int>> mul, std::vector<int> generators, std::int64_t p) {
  const auto n = static_cast<int>(mul.size());
  if (n < 1 || n > kMaxGroupOrder) throw Error(ErrorCode::NotAGroup, "table size out of range");
  for (const auto& row : mul) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorCode::NotAGroup, "table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw Error(ErrorCode::NotAGroup, "table entry out of range");
  }
  for (int x = 0; x < n; ++x)
    if (mul[0][static_cast<std::size_t>(x)] != x || mul[static_cast<std::size_t>(x)][0] != x)
      throw Error(ErrorCode::NotAGroup, "element 0 is not the identity");
  for (int x = 0; x < n; ++x) {
    const auto& row = mul[static_cast<std::size_t>(x)];
    if (std::find(row.begin(), row.end(), 0) == row.end())
      throw Error(ErrorCode::NotAGroup, "element " + std::to_string(x) + " has no inverse");
  }
  auto assoc = [&](int a, int b, int c) {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b), uc = static_cast<std::size_t>(c);
    return mul[static_cast<std::size_t>(mul[ua][ub])][uc] == mul[ua][static_cast<std::size_t>(mul[ub][uc])];
  };
  if (n <= 64) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!assoc(a, b, c)) throw Error(ErrorCode::NotAGroup, "multiplication is not associative");
  } else {
    Rng rng(0);
    for (int t = 0; t < 200000; ++t) {
      const auto a = static_cast<int>(rng.uniform(0, n - 1)), b = static_cast<int>(rng.uniform(0, n - 1)),
                 c = static_cast<int>(rng.uniform(0, n - 1));
      if (!assoc(a, b, c)) throw Error(ErrorCode::NotAGroup, "multiplication is not associative");
    }
  }
  for (int s : generators)
    if (s < 0 || s >= n) throw Error(ErrorCode::NotAGroup, "generator index out of range");
  std::int64_t q = n > 1 ? smallest_prime_factor(n) : p;
  if (n > 1 && !is_power_of(n, q))
    throw Error(ErrorCode::OrderNotPPower, "group order " + std::to_string(n) + " is not a prime power");
  if (p != 0 && n > 1 && p != q) throw Error(ErrorCode::OrderNotPPower, "group order is not a power of the given p");
  PGroup g;
  g.mul_ = std::move(mul);
  for (int s : generators)
    if (s != 0 && std::find(g.generators_.begin(), g.generators_.end(), s) == g.generators_.end())
      g.generators_.push_back(s);
  g.finish(q);
  ElementSet gen_set;
  for (int s : g.generators_) gen_set.set(static_cast<std::size_t>(s));
  if (static_cast<int>(closure(g, gen_set).count()) != n)
    throw Error(ErrorCode::NotAGroup, "generators do not generate the group");
  return g;
}

void PGroup::finish(std::int64_t p) {
  p_ = p;
  const auto n = mul_.size();
  inv_.assign(n, 0);
  orders_.assign(n, 1);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      if (mul_[x][y] == 0) inv_[x] = static_cast<int>(y);
    int k = 1;
    for (int y = static_cast<int>(x); y != 0; y = mul_[static_cast<std::size_t>(y)][x]) ++k;
    orders_[x] = k;
    if (x != 0 && !is_power_of(orders_[x], p_))
      throw Error(ErrorCode::OrderNotPPower, "element order is not a power of p");
  }
}

bool PGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool Subgroup::contains(int g) const { return std::binary_search(elements.begin(), elements.end(), g); }

ElementSet Subgroup::mask() const {
  ElementSet m;
  for (int x : elements) m.set(static_cast<std::size_t>(x));
  return m;
}

std::string Subgroup::label() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(elements[i]);
  }
  return s + "}";
}

bool subgroup_less(const Subgroup& a, const Subgroup& b) {
  if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
  return a.elements < b.elements;
}

Subgroup make_subgroup(const PGroup& g, const ElementSet& elems) {
  Subgroup k;
  for (int x = 0; x < g.order(); ++x)
    if (elems.test(static_cast<std::size_t>(x))) k.elements.push_back(x);
  k.is_normal = is_normal(g, k);
  return k;
}

void validate_subgroup(const PGroup& g, const Subgroup& k) {
  if (k.elements.empty() || k.elements.front() != 0) throw Error(ErrorCode::NotASubgroup, "subgroup lacks the identity");
  for (int x : k.elements)
    if (x < 0 || x >= g.order()) throw Error(ErrorCode::NotASubgroup, "subgroup element out of range");
  if (!std::is_sorted(k.elements.begin(), k.elements.end()) ||
      std::adjacent_find(k.elements.begin(), k.elements.end()) != k.elements.end())
    throw Error(ErrorCode::NotASubgroup, "subgroup elements must be sorted and distinct");
  const ElementSet m = k.mask();
  for (int a : k.elements)
    for (int b : k.elements)
      if (!m.test(static_cast<std::size_t>(g.mul(a, b))))
        throw Error(ErrorCode::NotASubgroup, "set " + k.label() + " is not closed under multiplication");
}

Subgroup subgroup_from_elements(const PGroup& g, const std::vector<int>& elems) {
  Subgroup k;
  k.elements = elems;
  std::sort(k.elements.begin(), k.elements.end());
  k.elements.erase(std::unique(k.elements.begin(), k.elements.end()), k.elements.end());
  validate_subgroup(g, k);
  k.is_normal = is_normal(g, k);
  return k;
}

Subgroup generated_subgroup(const PGroup& g, const std::vector<int>& gens) {
  ElementSet s;
  for (int x : gens) {
    if (x < 0 || x >= g.order()) throw Error(ErrorCode::InvalidArgument, "element index out of range");
    s.set(static_cast<std::size_t>(x));
  }
  return make_subgroup(g, closure(g, s));
}

Subgroup whole_group(const PGroup& g) {
  Subgroup k;
  k.elements.resize(static_cast<std::size_t>(g.order()));
  std::iota(k.elements.begin(), k.elements.end(), 0);
  k.is_normal = true;
  return k;
}

Subgroup trivial_subgroup(const PGroup& /*g*/) {
  Subgroup k;
  k.elements = {0};
  k.is_normal = true;
  return k;
}

bool is_normal(const PGroup& g, const Subgroup& k) {
  for (int s : g.generators())
    for (int x : k.elements)
      if (!k.contains(g.conjugate(s, x))) return false;
  return true;
}

Subgroup conjugate_subgroup(const PGroup& g, const Subgroup& k, int x) {
  Subgroup c;
  for (int y : k.elements) c.elements.push_back(g.conjugate(x, y));
  std::sort(c.elements.begin(), c.elements.end());
  c.is_normal = k.is_normal;
  return c;
}

bool is_subgroup_of(const Subgroup& small, const Subgroup& big) {
  return std::includes(big.elements.begin(), big.elements.end(), small.elements.begin(), small.elements.end());
}

int SubgroupClassification::subgroup_index(const Subgroup& k) const {
  auto it = std::lower_bound(all_subgroups.begin(), all_subgroups.end(), k, subgroup_less);
  if (it == all_subgroups.end() || !(*it == k)) throw Error(ErrorCode::NotASubgroup, "unknown subgroup " + k.label());
  return static_cast<int>(it - all_subgroups.begin());
}

int SubgroupClassification::class_index(const Subgroup& k) const {
  return class_of[static_cast<std::size_t>(subgroup_index(k))];
}

SubgroupClassification classify_subgroups(const PGroup& g) {
  const int n = g.order();
  auto key = [](const ElementSet& s) { return s.to_string(); };
  std::set<std::string> seen;
  std::vector<ElementSet> found;
  auto add = [&](const ElementSet& s) {
    if (seen.insert(key(s)).second) found.push_back(s);
  };
  std::vector<ElementSet> cyclic;
  for (int x = 0; x < n; ++x) {
    ElementSet s;
    s.set(static_cast<std::size_t>(x));
    ElementSet c = closure(g, s);
    if (seen.insert(key(c)).second) {
      found.push_back(c);
      cyclic.push_back(c);
    }
  }
  // Join every subgroup with every cyclic subgroup until nothing new appears.
  for (std::size_t i = 0; i < found.size(); ++i)
    for (const auto& c : cyclic) {
      if ((found[i] | c) == found[i]) continue;
      add(closure(g, found[i] | c));
    }
  SubgroupClassification out;
  for (const auto& s : found) out.all_subgroups.push_back(make_subgroup(g, s));
  std::sort(out.all_subgroups.begin(), out.all_subgroups.end(), subgroup_less);
  const auto total = out.all_subgroups.size();
  out.class_of.assign(total, -1);
  for (std::size_t i = 0; i < total; ++i) {
    if (out.class_of[i] >= 0) continue;
    // all_subgroups is sorted, so the first unclassified member is the least in its class
    const int cls = static_cast<int>(out.class_reps.size());
    out.class_reps.push_back(out.all_subgroups[i]);
    int size = 0;
    for (int x = 0; x < n; ++x) {
      const Subgroup c = conjugate_subgroup(g, out.all_subgroups[i], x);
      const auto j = static_cast<std::size_t>(out.subgroup_index(c));
      if (out.class_of[j] < 0) {
        out.class_of[j] = cls;
        ++size;
      }
    }
    out.class_size.push_back(size);
  }
  return out;
}

std::vector<int> coset_transversal(const PGroup& g, const Subgroup& k) {
  validate_subgroup(g, k);
  std::vector<bool> covered(static_cast<std::size_t>(g.order()), false);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (covered[static_cast<std::size_t>(x)]) continue;
    reps.push_back(x);
    for (int y : k.elements) covered[static_cast<std::size_t>(g.mul(x, y))] = true;
  }
  return reps;
}

std::vector<int> coset_index(const PGroup& g, const Subgroup& k) {
  const std::vector<int> reps = coset_transversal(g, k);
  std::vector<int> idx(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t r = 0; r < reps.size(); ++r)
    for (int y : k.elements) idx[static_cast<std::size_t>(g.mul(reps[r], y))] = static_cast<int>(r);
  return idx;
}

int index_of(const PGroup& g, const Subgroup& k) { return g.order() / k.order(); }

int orbit_count_on_cosets(const PGroup& g, const Subgroup& k, const Subgroup& l) {
  validate_subgroup(g, k);
  const std::vector<int> reps = coset_transversal(g, l);
  const std::vector<int> idx = coset_index(g, l);
  std::vector<bool> seen(reps.size(), false);
  int orbits = 0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (seen[r]) continue;
    ++orbits;
    for (int x : k.elements) seen[static_cast<std::size_t>(idx[static_cast<std::size_t>(g.mul(x, reps[r]))])] = true;
  }
  return orbits;
}

Subgroup normalizer(const PGroup& g, const Subgroup& k) {
  validate_subgroup(g, k);
  ElementSet s;
  for (int x = 0; x < g.order(); ++x)
    if (conjugate_subgroup(g, k, x) == k) s.set(static_cast<std::size_t>(x));
  return make_subgroup(g, s);
}

Subgroup center(const PGroup& g) {
  ElementSet s;
  for (int x = 0; x < g.order(); ++x) {
    bool central = true;
    for (int y : g.generators())
      if (g.mul(x, y) != g.mul(y, x)) central = false;
    if (central) s.set(static_cast<std::size_t>(x));
  }
  return make_subgroup(g, s);
}

std::vector<Subgroup> central_order_p_subgroups(const PGroup& g) {
  std::vector<Subgroup> out;
  for (int x : center(g).elements) {
    if (g.element_order(x) != g.p()) continue;
    Subgroup c = generated_subgroup(g, {x});
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), subgroup_less);
  return out;
}

std::vector<Subgroup> normal_subgroups(const PGroup& g) {
  std::vector<Subgroup> out;
  for (const auto& k : classify_subgroups(g).all_subgroups)
    if (k.is_normal) out.push_back(k);
  return out;
}

std::vector<int> minimal_generators(const PGroup& g, const Subgroup& k) {
  std::vector<int> gens;
  ElementSet span;
  span.set(0);
  for (int x : k.elements) {
    if (span.test(static_cast<std::size_t>(x))) continue;
    gens.push_back(x);
    ElementSet s;
    for (int y : gens) s.set(static_cast<std::size_t>(y));
    span = closure(g, s);
  }
  return gens;
}

SubgroupGroup subgroup_as_group(const PGroup& g, const Subgroup& k) {
  validate_subgroup(g, k);
  SubgroupGroup out;
  out.to_parent = k.elements;
  out.from_parent.assign(static_cast<std::size_t>(g.order()), -1);
  for (std::size_t i = 0; i < k.elements.size(); ++i) out.from_parent[static_cast<std::size_t>(k.elements[i])] = static_cast<int>(i);
  const auto m = k.elements.size();
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      table[a][b] = out.from_parent[static_cast<std::size_t>(g.mul(k.elements[a], k.elements[b]))];
  std::vector<int> gens;
  for (int x : minimal_generators(g, k)) gens.push_back(out.from_parent[static_cast<std::size_t>(x)]);
  out.group = PGroup::from_table(std::move(table), std::move(gens), g.p());
  return out;
}

QuotientGroup quotient_group(const PGroup& g, const Subgroup& n) {
  validate_subgroup(g, n);
  if (!is_normal(g, n)) throw Error(ErrorCode::NotNormal, "subgroup " + n.label() + " is not normal");
  QuotientGroup out;
  out.representative = coset_transversal(g, n);
  out.projection = coset_index(g, n);
  const auto m = out.representative.size();
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      table[a][b] = out.projection[static_cast<std::size_t>(g.mul(out.representative[a], out.representative[b]))];
  std::vector<int> gens;
  for (int s : g.generators()) gens.push_back(out.projection[static_cast<std::size_t>(s)]);
  out.group = PGroup::from_table(std::move(table), std::move(gens), g.p());
  return out;
}

}  // namespace zplat
