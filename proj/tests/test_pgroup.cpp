#include "doctest.h"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"
#include "zplat/pgroup.hpp"

#include <set>

using namespace zplat;

namespace {

// All subgroups by brute force over subsets (orders up to 16).
std::vector<std::vector<int>> brute_subgroups(const PGroup& g) {
  const int n = g.order();
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); mask += 2) {
    std::vector<int> elems;
    for (int x = 0; x < n; ++x)
      if (mask & (1u << x)) elems.push_back(x);
    bool closed = true;
    for (int a : elems)
      for (int b : elems)
        if (!(mask & (1u << g.mul(a, b)))) closed = false;
    if (closed) out.push_back(elems);
  }
  return out;
}

int brute_class_count(const PGroup& g, const std::vector<std::vector<int>>& subs) {
  std::set<std::vector<int>> reps;
  for (const auto& s : subs) {
    std::vector<int> least = s;
    for (int x = 0; x < g.order(); ++x) {
      std::vector<int> c;
      for (int y : s) c.push_back(g.mul(g.mul(x, y), g.inverse(x)));
      std::sort(c.begin(), c.end());
      least = std::min(least, c);
    }
    reps.insert(least);
  }
  return static_cast<int>(reps.size());
}

}  // namespace

TEST_CASE("from_permutations examples") {
  CHECK(PGroup::from_permutations({{1, 0}}, 2).order() == 2);
  CHECK(PGroup::from_permutations({{1, 0, 3, 2}, {2, 3, 0, 1}}, 4).order() == 4);
  const PGroup d4 = PGroup::from_permutations({{1, 2, 3, 0}, {2, 1, 0, 3}}, 4);
  CHECK(d4.order() == 8);
  CHECK(d4.p() == 2);
  CHECK_FALSE(d4.is_abelian());
}

TEST_CASE("from_permutations rejects non-p-groups and oversize groups") {
  try {
    PGroup::from_permutations({{1, 2, 0, 3}, {1, 0, 2, 3}}, 4);  // S3 on three points
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderNotPPower);
  }
  try {
    // C2^9 has order 512
    std::vector<Permutation> gens;
    for (int k = 0; k < 9; ++k) {
      Permutation s(18);
      for (int x = 0; x < 18; ++x) s[static_cast<std::size_t>(x)] = x;
      std::swap(s[static_cast<std::size_t>(2 * k)], s[static_cast<std::size_t>(2 * k + 1)]);
      gens.push_back(s);
    }
    PGroup::from_permutations(gens, 18);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderCapExceeded);
  }
}

TEST_CASE("from_table validates group axioms") {
  CHECK_NOTHROW(PGroup::from_table({{0, 1}, {1, 0}}, {1}));
  CHECK_THROWS_AS(PGroup::from_table({{0, 1}, {1, 1}}, {1}), Error);
  CHECK_THROWS_AS(PGroup::from_table({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {1}, 2), Error);
  CHECK(PGroup::from_table({{0}}, {}, 3).p() == 3);
}

TEST_CASE("bundled groups have the expected orders") {
  const std::vector<std::pair<std::string, int>> expected{{"c2", 2}, {"c4", 4},  {"c8", 8},    {"c2xc2", 4},
                                                           {"d4", 8}, {"q8", 8}, {"c3xc3", 9}, {"heisenberg3", 27}};
  for (const auto& [name, order] : expected) {
    const NamedGroup g = bundled_group(name);
    CHECK(g.group.order() == order);
    CHECK(g.generator_names.size() == g.group.generators().size());
    // every element order divides the group order and is a power of p
    for (int o : g.group.element_orders()) CHECK(order % o == 0);
  }
  CHECK_FALSE(bundled_group("heisenberg3").group.is_abelian());
  CHECK(bundled_group("heisenberg3").group.p() == 3);
}

TEST_CASE("multiplication tables are associative") {
  for (const auto& name : bundled_group_names()) {
    const PGroup g = bundled_group(name).group;
    const int n = g.order();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; c += (n > 16 ? 5 : 1)) CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

TEST_CASE("classify_subgroups examples") {
  const auto c22 = classify_subgroups(bundled_group("c2xc2").group);
  CHECK(c22.all_subgroups.size() == 5);
  CHECK(c22.class_reps.size() == 5);
  const auto d4 = classify_subgroups(bundled_group("d4").group);
  CHECK(d4.all_subgroups.size() == 10);
  CHECK(d4.class_reps.size() == 8);
  const auto q8 = classify_subgroups(bundled_group("q8").group);
  CHECK(q8.all_subgroups.size() == 6);
  CHECK(q8.class_reps.size() == 6);
}

TEST_CASE("classify_subgroups agrees with brute force") {
  for (const auto& name : bundled_group_names()) {
    const PGroup g = bundled_group(name).group;
    if (g.order() > 16) continue;
    const auto subs = brute_subgroups(g);
    const auto cls = classify_subgroups(g);
    REQUIRE(cls.all_subgroups.size() == subs.size());
    CHECK(static_cast<int>(cls.class_reps.size()) == brute_class_count(g, subs));
    int total = 0;
    for (int s : cls.class_size) total += s;
    CHECK(total == static_cast<int>(cls.all_subgroups.size()));
    for (std::size_t c = 0; c < cls.class_reps.size(); ++c)
      CHECK(cls.class_index(cls.class_reps[c]) == static_cast<int>(c));
    for (std::size_t i = 0; i + 1 < cls.all_subgroups.size(); ++i)
      CHECK(subgroup_less(cls.all_subgroups[i], cls.all_subgroups[i + 1]));
  }
  const auto heis = classify_subgroups(bundled_group("heisenberg3").group);
  // 1 trivial, 13 of order 3, 4 of order 9, the whole group
  CHECK(heis.all_subgroups.size() == 19);
}

TEST_CASE("coset transversals factor every element uniquely") {
  for (const auto& name : bundled_group_names()) {
    const PGroup g = bundled_group(name).group;
    for (const auto& k : classify_subgroups(g).all_subgroups) {
      const auto reps = coset_transversal(g, k);
      REQUIRE(static_cast<int>(reps.size()) == g.order() / k.order());
      CHECK(reps.front() == 0);
      std::vector<int> hits(static_cast<std::size_t>(g.order()), 0);
      for (int r : reps)
        for (int y : k.elements) ++hits[static_cast<std::size_t>(g.mul(r, y))];
      for (int h : hits) CHECK(h == 1);
    }
  }
  const PGroup c22 = bundled_group("c2xc2").group;
  CHECK(coset_transversal(c22, whole_group(c22)) == std::vector<int>{0});
  CHECK(coset_transversal(c22, trivial_subgroup(c22)).size() == 4);
  CHECK(coset_transversal(c22, generated_subgroup(c22, {c22.generators()[0]})).size() == 2);
}

TEST_CASE("orbit counts") {
  const PGroup g = bundled_group("c2xc2").group;
  const Subgroup c1 = generated_subgroup(g, {g.generators()[0]});
  CHECK(orbit_count_on_cosets(g, trivial_subgroup(g), c1) == 2);
  CHECK(orbit_count_on_cosets(g, whole_group(g), trivial_subgroup(g)) == 1);
  CHECK(orbit_count_on_cosets(g, c1, trivial_subgroup(g)) == 2);
}

TEST_CASE("orbit counts are conjugation invariant") {
  for (const auto& name : bundled_group_names()) {
    const PGroup g = bundled_group(name).group;
    if (g.order() > 16) continue;
    const auto cls = classify_subgroups(g);
    for (const auto& k : cls.all_subgroups)
      for (const auto& l : cls.all_subgroups) {
        const Subgroup& rep = cls.class_reps[static_cast<std::size_t>(cls.class_index(k))];
        CHECK(orbit_count_on_cosets(g, k, l) == orbit_count_on_cosets(g, rep, l));
      }
  }
}

TEST_CASE("centers, normalizers and central subgroups") {
  const PGroup q8 = bundled_group("q8").group;
  CHECK(center(q8).order() == 2);
  const PGroup c22 = bundled_group("c2xc2").group;
  CHECK(center(c22).order() == 4);
  CHECK(central_order_p_subgroups(c22).size() == 3);
  const PGroup d4 = bundled_group("d4").group;
  CHECK(center(d4).order() == 2);
  for (const auto& k : classify_subgroups(d4).all_subgroups) {
    const Subgroup nk = normalizer(d4, k);
    CHECK(is_subgroup_of(k, nk));
    CHECK(nk.order() % k.order() == 0);
    CHECK((nk.order() == 8) == k.is_normal);
  }
  CHECK(center(bundled_group("heisenberg3").group).order() == 3);
}

TEST_CASE("subgroups and quotients as groups") {
  const PGroup d4 = bundled_group("d4").group;
  const Subgroup z = center(d4);
  const QuotientGroup q = quotient_group(d4, z);
  CHECK(q.group.order() == 4);
  CHECK(q.group.is_abelian());
  for (int a = 0; a < d4.order(); ++a)
    for (int b = 0; b < d4.order(); ++b)
      CHECK(q.projection[static_cast<std::size_t>(d4.mul(a, b))] ==
            q.group.mul(q.projection[static_cast<std::size_t>(a)], q.projection[static_cast<std::size_t>(b)]));
  const Subgroup refl = generated_subgroup(d4, {d4.generators()[1]});
  CHECK_THROWS_AS(quotient_group(d4, refl), Error);
  const SubgroupGroup sg = subgroup_as_group(d4, refl);
  CHECK(sg.group.order() == 2);
  CHECK_THROWS_AS(subgroup_from_elements(d4, {0, 1}), Error);
}
