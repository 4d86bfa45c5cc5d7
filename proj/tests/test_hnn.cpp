#include "doctest.h"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"
#include "zplat/hnn.hpp"
#include "zplat/random.hpp"

#include <set>

using namespace zplat;

namespace {

GroupPtr group(const std::string& name) { return std::make_shared<const PGroup>(bundled_group(name).group); }

PermutationCertificate cert_of(const GroupPtr& g, const std::vector<std::pair<Subgroup, int>>& parts) {
  PermutationCertificate c;
  c.classes = canonical_classes(*g);
  c.multiplicities.assign(c.classes.size(), 0);
  for (const auto& [k, m] : parts)
    for (std::size_t i = 0; i < c.classes.size(); ++i)
      if (c.classes[i] == k) c.multiplicities[i] += m;
  return c;
}

// Number of k-orbits on left cosets h/l, by listing the cosets as sets.
int orbit_count_brute(const PGroup& h, const Subgroup& k, const Subgroup& l) {
  std::set<std::set<int>> cosets;
  for (int x = 0; x < h.order(); ++x) {
    std::set<int> c;
    for (int y : l.elements) c.insert(h.mul(x, y));
    cosets.insert(c);
  }
  std::set<std::set<std::set<int>>> orbits;
  for (const auto& c : cosets) {
    std::set<std::set<int>> orbit;
    for (int a : k.elements) {
      std::set<int> t;
      for (int y : c) t.insert(h.mul(a, y));
      orbit.insert(t);
    }
    orbits.insert(orbit);
  }
  return static_cast<int>(orbits.size());
}

}  // namespace

TEST_CASE("synthesis from certificates") {
  const GroupPtr c2 = group("c2");
  const Subgroup one = trivial_subgroup(*c2), all = whole_group(*c2);
  const HnnPresentation a = synthesize_hnn(cert_of(c2, {{all, 1}}), c2);
  REQUIRE(a.edges.size() == 1);
  CHECK(a.edges[0].subgroup == all);
  CHECK(kernel_rank(a) == 1);
  CHECK(a.relators().size() == 1);

  const HnnPresentation mixed = synthesize_hnn(cert_of(c2, {{all, 1}, {one, 2}}), c2);
  REQUIRE(mixed.edges.size() == 2);
  CHECK(mixed.edges[0].subgroup == all);
  CHECK(mixed.edges[0].multiplicity == 1);
  CHECK(mixed.edges[1].subgroup == one);
  CHECK(mixed.edges[1].multiplicity == 2);
  CHECK(kernel_rank(mixed) == 5);
  CHECK(mixed.edges[1].letters == std::vector<std::string>{"x_{0,0}", "x_{0,1}"});
  CHECK(quotient_kill_nontrivial_edges(mixed).free_rank == 2);
  CHECK(quotient_kill_nontrivial_edges(a).free_rank == 0);

  const HnnPresentation free3 = synthesize_hnn(cert_of(c2, {{one, 3}}), c2);
  CHECK(kernel_rank(free3) == 6);
  CHECK(free3.relators().empty());
  CHECK(quotient_kill_nontrivial_edges(free3).free_rank == 3);
}

TEST_CASE("presentation validation") {
  const GroupPtr d4 = group("d4");
  const SubgroupClassification cls = classify_subgroups(*d4);
  Subgroup k, k2;
  for (std::size_t i = 0; i < cls.all_subgroups.size(); ++i)
    if (cls.class_size[static_cast<std::size_t>(cls.class_of[i])] == 2) {
      if (k.elements.empty())
        k = cls.all_subgroups[i];
      else if (cls.class_index(cls.all_subgroups[i]) == cls.class_index(k) && !(cls.all_subgroups[i] == k))
        k2 = cls.all_subgroups[i];
    }
  REQUIRE_FALSE(k2.elements.empty());
  CHECK_THROWS_AS(make_presentation(d4, {{k, 1}, {k2, 1}}), Error);
  CHECK_THROWS_AS(make_presentation(d4, {{k, -1}}), Error);
  CHECK_NOTHROW(make_presentation(d4, {{k, 1}, {k, 0}}));
}

TEST_CASE("kernel abelianization on small cases") {
  const PrecisionContext ctx(2);
  const GroupPtr c4 = group("c4");
  Subgroup c;
  for (const auto& k : classify_subgroups(*c4).all_subgroups)
    if (k.order() == 2) c = k;
  const PermutationCertificate cert = cert_of(c4, {{c, 1}});
  const RoundtripResult rt = roundtrip(cert, c4, ctx);
  CHECK(rt.ok);
  CHECK(rt.kernel_rank == 2);
  CHECK(rt.abelianization_rank == 2);

  const GroupPtr v4 = group("c2xc2");
  const Lattice whole = kernel_abelianization(make_presentation(v4, {{whole_group(*v4), 1}}), ctx);
  CHECK(whole.rank() == 1);
  for (const auto& m : whole.actions()) CHECK(m == IntMatrix::Identity(1, 1));

  const Lattice free2 = kernel_abelianization(make_presentation(v4, {{trivial_subgroup(*v4), 2}}), ctx);
  const Lattice reg = direct_sum(permutation_lattice(v4, trivial_subgroup(*v4)), permutation_lattice(v4, trivial_subgroup(*v4)));
  CHECK(free2.actions() == reg.actions());

  const Subgroup n = generated_subgroup(*v4, {v4->generators()[0]});
  const Verdict v = recognize_permutation(kernel_abelianization(make_presentation(v4, {{n, 1}}), ctx), ctx);
  REQUIRE(v.is_permutation());
  CHECK(v.certificate->multiplicity(n) == 1);
}

TEST_CASE("invariant ranks of the kernel abelianization match orbit counts") {
  for (const std::string name : {"c4", "c2xc2", "d4", "q8", "c3xc3"}) {
    const GroupPtr h = group(name);
    const PrecisionContext ctx(h->p());
    const auto classes = canonical_classes(*h);
    Rng rng(7);
    std::vector<std::pair<Subgroup, int>> parts;
    for (const auto& k : classes) parts.emplace_back(k, static_cast<int>(rng.uniform(0, 1)));
    const HnnPresentation pres = make_presentation(h, parts);
    const Lattice ab = kernel_abelianization(pres, ctx);
    CHECK(Integer(ab.rank()) == kernel_rank(pres));
    for (const auto& k : classify_subgroups(*h).all_subgroups) {
      int expected = 0;
      for (const auto& e : pres.edges) expected += e.multiplicity * orbit_count_brute(*h, k, e.subgroup);
      CHECK(invariants(ab, k).rank() == expected);
    }
  }
}

TEST_CASE("roundtrip on seeded certificates") {
  for (const std::string name : {"c2", "c2xc2", "d4", "q8", "c3xc3", "c8"}) {
    const GroupPtr h = group(name);
    const PrecisionContext ctx(h->p());
    const auto classes = canonical_classes(*h);
    Rng rng(11);
    for (int trial = 0; trial < 6; ++trial) {
      PermutationCertificate c = cert_of(h, {});
      int rank = 0;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        const int idx = index_of(*h, classes[i]);
        const int m = static_cast<int>(rng.uniform(0, 2));
        if (rank + m * idx > 24) continue;
        c.multiplicities[i] = m;
        rank += m * idx;
      }
      CHECK(roundtrip_check(c, h, ctx));
    }
  }
}
