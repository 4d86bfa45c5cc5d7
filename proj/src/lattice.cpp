#include "zplat/lattice.hpp"

#include "zplat/error.hpp"

#include <algorithm>
#include <bit>

namespace zplat {

namespace {

unsigned entry_bits(const IntMatrix& a) {
  unsigned b = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!a(i, j).is_zero())
        b = std::max(b, static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(a(i, j)))) + 1);
  return b;
}

// rho(x) rho(s) = rho(xs) for all x and generators s already gives
// rho(x) rho(w) = rho(xw) for every word w, by induction on its length.
void check_homomorphism(const PGroup& g, const std::vector<IntMatrix>& action, Eigen::Index rank) {
  if (static_cast<int>(action.size()) != g.order())
    throw Error(ErrorCode::NotAHomomorphism, "need one action matrix per group element");
  for (const auto& a : action)
    if (a.rows() != rank || a.cols() != rank) throw Error(ErrorCode::NotAHomomorphism, "action matrix has wrong shape");
  if (action[0] != IntMatrix::Identity(rank, rank))
    throw Error(ErrorCode::NotAHomomorphism, "identity does not act trivially");
  unsigned bits = 0;
  for (const auto& a : action) bits = std::max(bits, entry_bits(a));
  const unsigned guard = static_cast<unsigned>(std::bit_width(static_cast<unsigned>(std::max<Eigen::Index>(rank, 1))));
  const int n = g.order();
  if (2 * bits + guard < 62) {
    std::vector<FpMatrix> small;
    small.reserve(action.size());
    for (const auto& a : action) small.push_back(a.unaryExpr([](const Integer& v) { return static_cast<std::int64_t>(v); }));
    for (int x = 0; x < n; ++x)
      for (int y : g.generators())
        if (small[static_cast<std::size_t>(x)] * small[static_cast<std::size_t>(y)] !=
            small[static_cast<std::size_t>(g.mul(x, y))])
          throw Error(ErrorCode::NotAHomomorphism,
                      "action(" + std::to_string(x) + ") action(" + std::to_string(y) + ") != action(product)");
    return;
  }
  for (int x = 0; x < n; ++x)
    for (int y : g.generators())
      if (multiply(action[static_cast<std::size_t>(x)], action[static_cast<std::size_t>(y)]) !=
          action[static_cast<std::size_t>(g.mul(x, y))])
        throw Error(ErrorCode::NotAHomomorphism,
                    "action(" + std::to_string(x) + ") action(" + std::to_string(y) + ") != action(product)");
}

// Left inverse of a Z-saturated basis: rows of the inverse of [basis complement].
IntMatrix left_inverse(const IntMatrix& basis) {
  const Eigen::Index n = basis.rows(), k = basis.cols();
  IntMatrix full(n, n);
  full << basis, complement_basis(basis);
  return inverse_unimodular(full).topRows(k);
}

}  // namespace

bool same_group(const PGroup& a, const PGroup& b) { return &a == &b || a.table() == b.table(); }

Lattice::Lattice(GroupPtr group, std::vector<IntMatrix> action) : group_(std::move(group)), action_(std::move(action)) {
  if (!group_) throw Error(ErrorCode::InvalidArgument, "lattice without a group");
  rank_ = action_.empty() ? 0 : action_.front().rows();
  check_homomorphism(*group_, action_, rank_);
}

Lattice Lattice::from_generators(GroupPtr group, const std::vector<IntMatrix>& generator_action) {
  if (!group) throw Error(ErrorCode::InvalidArgument, "lattice without a group");
  const auto& gens = group->generators();
  if (generator_action.size() != gens.size())
    throw Error(ErrorCode::InvalidArgument, "need one matrix per generator");
  if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "use Lattice::trivial for the trivial group");
  const Eigen::Index r = generator_action.front().rows();
  for (const auto& a : generator_action)
    if (a.rows() != r || a.cols() != r) throw Error(ErrorCode::NotAHomomorphism, "generator matrices differ in shape");
  std::vector<IntMatrix> action(static_cast<std::size_t>(group->order()));
  std::vector<bool> known(action.size(), false);
  action[0] = IntMatrix::Identity(r, r);
  known[0] = true;
  std::vector<int> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const int y = group->mul(queue[i], gens[s]);
      if (known[static_cast<std::size_t>(y)]) continue;
      action[static_cast<std::size_t>(y)] = multiply(action[static_cast<std::size_t>(queue[i])], generator_action[s]);
      known[static_cast<std::size_t>(y)] = true;
      queue.push_back(y);
    }
  return Lattice(std::move(group), std::move(action));
}

Lattice Lattice::trivial(GroupPtr group, Eigen::Index rank) {
  std::vector<IntMatrix> action(static_cast<std::size_t>(group->order()), IntMatrix::Identity(rank, rank));
  return Lattice(std::move(group), std::move(action));
}

Lattice Lattice::change_basis(const IntMatrix& s, const IntMatrix& s_inverse) const {
  if (multiply(s, s_inverse) != IntMatrix::Identity(rank_, rank_))
    throw Error(ErrorCode::InvalidArgument, "change_basis: matrices are not mutually inverse");
  std::vector<IntMatrix> action;
  action.reserve(action_.size());
  for (const auto& a : action_) action.push_back(multiply(multiply(s_inverse, a), s));
  return Lattice(group_, std::move(action));
}

bool is_invariant(const Lattice& m, const IntMatrix& basis) {
  if (basis.cols() == 0) return true;
  const PrecisionContext ctx(m.group().order() > 1 ? m.group().p() : 2);
  for (int s : m.group().generators())
    if (!contains_span(basis, multiply(m.action(s), basis), ctx)) return false;
  return true;
}

Lattice sublattice_lattice(const Lattice& m, const IntMatrix& basis) {
  const Eigen::Index k = basis.cols();
  std::vector<IntMatrix> action;
  action.reserve(m.actions().size());
  if (k == 0) return Lattice::trivial(m.group_ptr(), 0);
  const IntMatrix left = left_inverse(basis);
  for (const auto& a : m.actions()) {
    const IntMatrix image = multiply(a, basis);
    IntMatrix coords = multiply(left, image);
    if (multiply(basis, coords) != image)
      throw Error(ErrorCode::InvalidArgument, "sublattice is not invariant under the action");
    action.push_back(std::move(coords));
  }
  return Lattice(m.group_ptr(), std::move(action));
}

Lattice quotient_lattice(const Lattice& m, const IntMatrix& w, IntMatrix* section) {
  const Eigen::Index n = m.rank(), k = w.cols();
  const IntMatrix comp = complement_basis(w);
  IntMatrix full(n, n);
  full << w, comp;
  const IntMatrix inv = inverse_unimodular(full);
  const IntMatrix proj = inv.bottomRows(n - k);
  std::vector<IntMatrix> action;
  action.reserve(m.actions().size());
  for (const auto& a : m.actions()) {
    if (k > 0 && !multiply(proj, multiply(a, w)).isZero())
      throw Error(ErrorCode::InvalidArgument, "quotient by a non-invariant sublattice");
    action.push_back(multiply(proj, multiply(a, comp)));
  }
  if (section) *section = comp;
  return Lattice(m.group_ptr(), std::move(action));
}

Lattice permutation_lattice(const GroupPtr& g, const Subgroup& k) {
  const std::vector<int> reps = coset_transversal(*g, k);
  const std::vector<int> idx = coset_index(*g, k);
  const auto r = static_cast<Eigen::Index>(reps.size());
  std::vector<IntMatrix> action;
  action.reserve(static_cast<std::size_t>(g->order()));
  for (int x = 0; x < g->order(); ++x) {
    IntMatrix a = IntMatrix::Zero(r, r);
    for (Eigen::Index j = 0; j < r; ++j) a(idx[static_cast<std::size_t>(g->mul(x, reps[static_cast<std::size_t>(j)]))], j) = 1;
    action.push_back(std::move(a));
  }
  return Lattice(g, std::move(action));
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  if (!same_group(a.group(), b.group())) throw Error(ErrorCode::GroupMismatch, "direct sum over different groups");
  const Eigen::Index ra = a.rank(), rb = b.rank();
  std::vector<IntMatrix> action;
  action.reserve(a.actions().size());
  for (int x = 0; x < a.group().order(); ++x) {
    IntMatrix m = IntMatrix::Zero(ra + rb, ra + rb);
    m.topLeftCorner(ra, ra) = a.action(x);
    m.bottomRightCorner(rb, rb) = b.action(x);
    action.push_back(std::move(m));
  }
  return Lattice(a.group_ptr(), std::move(action));
}

Lattice direct_sum(const std::vector<Lattice>& parts, const GroupPtr& g) {
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    if (!same_group(p.group(), *g)) throw Error(ErrorCode::GroupMismatch, "direct sum over different groups");
    total += p.rank();
  }
  std::vector<IntMatrix> action;
  action.reserve(static_cast<std::size_t>(g->order()));
  for (int x = 0; x < g->order(); ++x) {
    IntMatrix m = IntMatrix::Zero(total, total);
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      m.block(off, off, p.rank(), p.rank()) = p.action(x);
      off += p.rank();
    }
    action.push_back(std::move(m));
  }
  return Lattice(g, std::move(action));
}

Restriction restrict_lattice(const Lattice& m, const Subgroup& k) {
  SubgroupGroup sg = subgroup_as_group(m.group(), k);
  auto sub = std::make_shared<const PGroup>(sg.group);
  std::vector<IntMatrix> action;
  for (int parent : sg.to_parent) action.push_back(m.action(parent));
  return Restriction{Lattice(sub, std::move(action)), std::move(sg)};
}

Sublattice invariants(const Lattice& m, const Subgroup& k) {
  validate_subgroup(m.group(), k);
  const Eigen::Index n = m.rank();
  const std::vector<int> gens = minimal_generators(m.group(), k);
  Sublattice out;
  out.saturated = true;
  out.invariant = k.is_normal;
  if (gens.empty()) {
    out.basis = IntMatrix::Identity(n, n);
    out.invariant = true;
    return out;
  }
  IntMatrix system(n * static_cast<Eigen::Index>(gens.size()), n);
  for (std::size_t i = 0; i < gens.size(); ++i)
    system.middleRows(static_cast<Eigen::Index>(i) * n, n) = m.action(gens[i]) - IntMatrix::Identity(n, n);
  out.basis = kernel_local(system, PrecisionContext(m.group().p()));
  return out;
}

InvariantQuotient invariants_over_quotient(const Lattice& m, const Subgroup& n) {
  if (!is_normal(m.group(), n)) throw Error(ErrorCode::NotNormal, "subgroup " + n.label() + " is not normal");
  const Sublattice inv = invariants(m, n);
  QuotientGroup q = quotient_group(m.group(), n);
  auto qg = std::make_shared<const PGroup>(q.group);
  const Lattice sub = sublattice_lattice(m, inv.basis);
  std::vector<IntMatrix> action;
  for (int rep : q.representative) action.push_back(sub.action(rep));
  return InvariantQuotient{Lattice(qg, std::move(action)), std::move(q), inv.basis};
}

Coinvariants coinvariants(const Lattice& m, const Subgroup& k, const PrecisionContext& ctx) {
  validate_subgroup(m.group(), k);
  const Eigen::Index n = m.rank();
  const std::vector<int> gens = minimal_generators(m.group(), k);
  IntMatrix rel = IntMatrix::Zero(n, std::max<Eigen::Index>(n * static_cast<Eigen::Index>(gens.size()), 1));
  for (std::size_t i = 0; i < gens.size(); ++i)
    rel.middleCols(static_cast<Eigen::Index>(i) * n, n) = m.action(gens[i]) - IntMatrix::Identity(n, n);
  const SmithDetail d = local_smith(rel, ctx, SmithOptions{true, false, true});
  const Eigen::Index r = d.form.rank();
  Coinvariants out;
  out.free_rank = n - r;
  for (int e : d.form.elementary_exponents)
    if (e > 0) out.torsion_exponents.push_back(e);
  if (is_normal(m.group(), k)) {
    const IntMatrix proj = d.form.U.bottomRows(n - r);
    const IntMatrix section = d.U_inverse.rightCols(n - r);
    std::vector<IntMatrix> action;
    for (const auto& a : m.actions()) action.push_back(multiply(proj, multiply(a, section)));
    out.free_part = Lattice(m.group_ptr(), std::move(action));
  }
  return out;
}

Lattice induce(const GroupPtr& g, const Subgroup& k, const SubgroupGroup& sg, const Lattice& l) {
  if (!same_group(l.group(), sg.group)) throw Error(ErrorCode::GroupMismatch, "induced lattice is not over the subgroup");
  const std::vector<int> reps = coset_transversal(*g, k);
  const std::vector<int> idx = coset_index(*g, k);
  const Eigen::Index r = l.rank();
  const auto c = static_cast<Eigen::Index>(reps.size());
  std::vector<IntMatrix> action;
  for (int x = 0; x < g->order(); ++x) {
    IntMatrix a = IntMatrix::Zero(c * r, c * r);
    for (Eigen::Index j = 0; j < c; ++j) {
      const int y = g->mul(x, reps[static_cast<std::size_t>(j)]);
      const int i = idx[static_cast<std::size_t>(y)];
      const int h = g->mul(g->inverse(reps[static_cast<std::size_t>(i)]), y);
      a.block(i * r, j * r, r, r) = l.action(sg.from_parent[static_cast<std::size_t>(h)]);
    }
    action.push_back(std::move(a));
  }
  return Lattice(g, std::move(action));
}

HomSpace hom_space(const Lattice& source, const Lattice& target, const PrecisionContext& ctx) {
  if (!same_group(source.group(), target.group())) throw Error(ErrorCode::GroupMismatch, "hom space over different groups");
  const Eigen::Index ra = source.rank(), rb = target.rank(), unknowns = ra * rb;
  HomSpace out;
  if (unknowns == 0) return out;
  const auto& gens = source.group().generators();
  IntMatrix system = IntMatrix::Zero(std::max<Eigen::Index>(unknowns * static_cast<Eigen::Index>(gens.size()), 1), unknowns);
  for (std::size_t s = 0; s < gens.size(); ++s) {
    const IntMatrix& a = source.action(gens[s]);
    const IntMatrix& b = target.action(gens[s]);
    const Eigen::Index base = static_cast<Eigen::Index>(s) * unknowns;
    // (T a - b T)(i, j) = sum_l T(i, l) a(l, j) - sum_l b(i, l) T(l, j); T(i, j) is unknown j * rb + i
    for (Eigen::Index j = 0; j < ra; ++j)
      for (Eigen::Index i = 0; i < rb; ++i) {
        const Eigen::Index row = base + j * rb + i;
        for (Eigen::Index l = 0; l < ra; ++l)
          if (!a(l, j).is_zero()) system(row, l * rb + i) += a(l, j);
        for (Eigen::Index l = 0; l < rb; ++l)
          if (!b(i, l).is_zero()) system(row, j * rb + l) -= b(i, l);
      }
  }
  const IntMatrix ker = kernel_local(system, ctx);
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    IntMatrix t(rb, ra);
    for (Eigen::Index j = 0; j < ra; ++j)
      for (Eigen::Index i = 0; i < rb; ++i) t(i, j) = ker(j * rb + i, c);
    out.basis.push_back(std::move(t));
  }
  return out;
}

bool intertwines(const Lattice& source, const Lattice& target, const IntMatrix& t) {
  for (int s : source.group().generators())
    if (multiply(t, source.action(s)) != multiply(target.action(s), t)) return false;
  return true;
}

}  // namespace zplat
