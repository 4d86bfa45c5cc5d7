#include "doctest.h"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"
#include "zplat/lattice.hpp"

using namespace zplat;

namespace {

GroupPtr group(const std::string& name) { return std::make_shared<const PGroup>(bundled_group(name).group); }

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

Lattice example_lattice(const GroupPtr& g) {
  return Lattice::from_generators(g, {mat({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}), mat({{1, 0, 0}, {1, -1, 0}, {1, 0, -1}})});
}

Lattice sign_lattice(const GroupPtr& c2) { return Lattice::from_generators(c2, {mat({{-1}})}); }

// Orbit count of k on g/l straight from the coset sets.
int orbits_brute(const PGroup& g, const Subgroup& k, const Subgroup& l) {
  std::vector<std::vector<int>> cosets;
  for (int x = 0; x < g.order(); ++x) {
    std::vector<int> c;
    for (int y : l.elements) c.push_back(g.mul(x, y));
    std::sort(c.begin(), c.end());
    if (std::find(cosets.begin(), cosets.end(), c) == cosets.end()) cosets.push_back(c);
  }
  std::vector<int> comp(cosets.size());
  for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int i) { return comp[static_cast<std::size_t>(i)] == i ? i : comp[static_cast<std::size_t>(i)] = find(comp[static_cast<std::size_t>(i)]); };
  for (std::size_t i = 0; i < cosets.size(); ++i)
    for (int x : k.elements) {
      const int y = g.mul(x, cosets[i].front());
      for (std::size_t j = 0; j < cosets.size(); ++j)
        if (std::binary_search(cosets[j].begin(), cosets[j].end(), y)) comp[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
    }
  int count = 0;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++count;
  return count;
}

}  // namespace

TEST_CASE("lattice construction checks the homomorphism property") {
  const GroupPtr c2 = group("c2");
  CHECK_NOTHROW(sign_lattice(c2));
  CHECK_THROWS_AS(Lattice::from_generators(c2, {mat({{2}})}), Error);
  const GroupPtr c22 = group("c2xc2");
  // non-commuting involutions violate the relations of C2 x C2
  CHECK_THROWS_AS(Lattice::from_generators(c22, {mat({{0, 1}, {1, 0}}), mat({{1, 0}, {1, -1}})}), Error);
  const Lattice m = example_lattice(c22);
  CHECK(m.rank() == 3);
  for (const auto& a : m.actions()) CHECK(abs(determinant(a)) == 1);
}

TEST_CASE("permutation lattice examples") {
  const GroupPtr g = group("c2xc2");
  const Lattice top = permutation_lattice(g, whole_group(*g));
  CHECK(top.rank() == 1);
  for (const auto& a : top.actions()) CHECK(a == identity_matrix(1));
  CHECK(permutation_lattice(g, trivial_subgroup(*g)).rank() == 4);
  const int c1 = g->generators()[0], c2 = g->generators()[1];
  const Lattice mid = permutation_lattice(g, generated_subgroup(*g, {c1}));
  CHECK(mid.rank() == 2);
  CHECK(mid.action(c1) == identity_matrix(2));
  CHECK(mid.action(c2) == mat({{0, 1}, {1, 0}}));
}

TEST_CASE("direct sums") {
  const GroupPtr c2 = group("c2");
  const Lattice reg = permutation_lattice(c2, trivial_subgroup(*c2));
  const Lattice triv = Lattice::trivial(c2, 1);
  CHECK(direct_sum(reg, Lattice::trivial(c2, 0)).actions() == reg.actions());
  CHECK(direct_sum(triv, triv).actions() == Lattice::trivial(c2, 2).actions());
  const Lattice sum = direct_sum(reg, triv);
  CHECK(sum.rank() == 3);
  CHECK_THROWS_AS(direct_sum(reg, Lattice::trivial(group("c4"), 1)), Error);
}

TEST_CASE("restriction") {
  const GroupPtr g = group("c2xc2");
  const Lattice reg = permutation_lattice(g, trivial_subgroup(*g));
  const Restriction whole = restrict_lattice(reg, whole_group(*g));
  CHECK(whole.lattice.actions() == reg.actions());
  const Restriction half = restrict_lattice(reg, generated_subgroup(*g, {g->generators()[0]}));
  CHECK(half.lattice.group().order() == 2);
  CHECK(half.lattice.rank() == 4);
}

TEST_CASE("invariants") {
  const GroupPtr g = group("c2xc2");
  const Lattice reg = permutation_lattice(g, trivial_subgroup(*g));
  const Sublattice norm = invariants(reg, whole_group(*g));
  CHECK(norm.rank() == 1);
  CHECK(norm.basis == mat({{1}, {1}, {1}, {1}}));
  const Lattice triv = Lattice::trivial(g, 3);
  CHECK(invariants(triv, whole_group(*g)).rank() == 3);

  const Lattice m = example_lattice(g);
  const Subgroup n = generated_subgroup(*g, {g->generators()[0]});
  const InvariantQuotient mn = invariants_over_quotient(m, n);
  CHECK(mn.lattice.rank() == 2);
  CHECK(mn.lattice.group().order() == 2);
  // the nontrivial element of G/N swaps a basis of M^N up to a unimodular change
  const int gen = mn.lattice.group().generators()[0];
  CHECK(mn.lattice.action(gen) != identity_matrix(2));
  CHECK(is_invariant(m, mn.basis));
}

TEST_CASE("coinvariants") {
  const PrecisionContext ctx(2);
  const GroupPtr c2 = group("c2");
  const Coinvariants triv = coinvariants(Lattice::trivial(c2, 2), whole_group(*c2), ctx);
  CHECK(triv.free_rank == 2);
  CHECK(triv.torsion_exponents.empty());
  const Coinvariants reg = coinvariants(permutation_lattice(c2, trivial_subgroup(*c2)), whole_group(*c2), ctx);
  CHECK(reg.free_rank == 1);
  CHECK(reg.torsion_exponents.empty());
  const Coinvariants sign = coinvariants(sign_lattice(c2), whole_group(*c2), ctx);
  CHECK(sign.free_rank == 0);
  CHECK(sign.torsion_exponents == std::vector<int>{1});
}

TEST_CASE("coinvariants and invariants of permutation lattices have equal rank for order-p subgroups") {
  for (const auto& name : bundled_group_names()) {
    const GroupPtr g = group(name);
    const PrecisionContext ctx(g->p());
    const auto cls = classify_subgroups(*g);
    for (const auto& k : cls.all_subgroups) {
      if (k.order() != g->p()) continue;
      for (const auto& l : cls.class_reps) {
        const Lattice m = permutation_lattice(g, l);
        const Coinvariants co = coinvariants(m, k, ctx);
        CHECK(co.free_rank == invariants(m, k).rank());
      }
    }
  }
}

TEST_CASE("induction") {
  const GroupPtr g = group("d4");
  const PrecisionContext ctx(2);
  for (const auto& k : classify_subgroups(*g).class_reps) {
    const SubgroupGroup sg = subgroup_as_group(*g, k);
    auto kg = std::make_shared<const PGroup>(sg.group);
    const Lattice ind = induce(g, k, sg, Lattice::trivial(kg, 1));
    // Ind of the trivial lattice is the permutation lattice on G/K, on the nose
    CHECK(ind.actions() == permutation_lattice(g, k).actions());
    const Lattice reg_k = permutation_lattice(kg, trivial_subgroup(*kg));
    const Lattice ind_reg = induce(g, k, sg, reg_k);
    CHECK(ind_reg.rank() == g->order());
    CHECK(hom_space(ind_reg, permutation_lattice(g, trivial_subgroup(*g)), ctx).rank() == g->order());
  }
  const Subgroup all = whole_group(*g);
  const SubgroupGroup sg = subgroup_as_group(*g, all);
  const Lattice reg = permutation_lattice(g, trivial_subgroup(*g));
  const Lattice same(std::make_shared<const PGroup>(sg.group), reg.actions());
  CHECK(induce(g, all, sg, same).actions() == reg.actions());
}

TEST_CASE("hom spaces") {
  const PrecisionContext ctx(2);
  const GroupPtr c2 = group("c2");
  const Lattice triv = Lattice::trivial(c2, 1);
  CHECK(hom_space(triv, triv, ctx).rank() == 1);
  CHECK(hom_space(triv, sign_lattice(c2), ctx).rank() == 0);
  const Lattice reg = permutation_lattice(c2, trivial_subgroup(*c2));
  const HomSpace end = hom_space(reg, reg, ctx);
  CHECK(end.rank() == 2);
  for (const auto& t : end.basis) CHECK(intertwines(reg, reg, t));
}

TEST_CASE("Frobenius reciprocity at the level of ranks") {
  for (const std::string name : {"c4", "c2xc2", "d4", "q8", "c3xc3"}) {
    const GroupPtr g = group(name);
    const PrecisionContext ctx(g->p());
    const auto cls = classify_subgroups(*g);
    for (const auto& k : cls.class_reps) {
      const SubgroupGroup sg = subgroup_as_group(*g, k);
      auto kg = std::make_shared<const PGroup>(sg.group);
      const Lattice l = Lattice::trivial(kg, 1);
      for (const auto& h : cls.class_reps) {
        const Lattice b = permutation_lattice(g, h);
        const Restriction res = restrict_lattice(b, k);
        const Lattice res_on_kg(kg, res.lattice.actions());
        CHECK(hom_space(induce(g, k, sg, l), b, ctx).rank() == hom_space(l, res_on_kg, ctx).rank());
      }
    }
  }
}

TEST_CASE("rank of invariants equals the orbit count on cosets") {
  for (const auto& name : bundled_group_names()) {
    const GroupPtr g = group(name);
    const auto cls = classify_subgroups(*g);
    for (const auto& l : cls.all_subgroups) {
      const Lattice m = permutation_lattice(g, l);
      for (const auto& k : cls.all_subgroups) {
        const Sublattice inv = invariants(m, k);
        CHECK(inv.rank() == orbit_count_on_cosets(*g, k, l));
        if (g->order() <= 8) CHECK(inv.rank() == orbits_brute(*g, k, l));
      }
    }
  }
}

TEST_CASE("sublattices and quotients") {
  const GroupPtr c2 = group("c2");
  const Lattice reg = permutation_lattice(c2, trivial_subgroup(*c2));
  const IntMatrix norm = mat({{1}, {1}});
  CHECK(is_invariant(reg, norm));
  CHECK_FALSE(is_invariant(reg, mat({{1}, {0}})));
  const Lattice sub = sublattice_lattice(reg, norm);
  CHECK(sub.action(1) == identity_matrix(1));
  IntMatrix section;
  const Lattice quo = quotient_lattice(reg, norm, &section);
  CHECK(quo.rank() == 1);
  CHECK(quo.action(1) == mat({{-1}}));
}
