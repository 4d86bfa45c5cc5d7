#include "doctest.h"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"
#include "zplat/random.hpp"
#include "zplat/weiss.hpp"

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

// Whether a rank-2 lattice over C2 (given by the generator matrix) is free:
// some v makes {v, a v} a basis with odd determinant.
bool free_rank2_brute(const IntMatrix& a) {
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      IntVector v(2);
      v << x, y;
      const IntVector av = a * v;
      const Integer det = v(0) * av(1) - v(1) * av(0);
      if (det % 2 != 0) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("classic criterion on the regular lattice and the example") {
  const GroupPtr g = group("c2xc2");
  const PrecisionContext ctx(2);
  const Subgroup n = generated_subgroup(*g, {g->generators()[0]});
  const WeissReport reg = check_weiss_classic(permutation_lattice(g, trivial_subgroup(*g)), n, ctx);
  CHECK(reg.hypothesis_i == HypothesisStatus::Verified);
  CHECK(reg.hypothesis_ii == HypothesisStatus::Verified);
  CHECK(reg.conclusion.is_permutation());
  CHECK(reg.consistent);

  const WeissReport ex = check_weiss_classic(example_lattice(g), n, ctx);
  CHECK(ex.hypothesis_i == HypothesisStatus::Failed);
  REQUIRE(ex.restriction_certificate);
  // Res_N M = Z_2 + Z_2[C2]
  for (std::size_t i = 0; i < ex.restriction_certificate->classes.size(); ++i) CHECK(ex.restriction_certificate->multiplicities[i] == 1);
  REQUIRE(ex.invariants_certificate);
  CHECK(ex.invariants_rank == 2);
  // M^N = Z_2[G/N]: only the trivial subgroup of G/N occurs, once
  for (std::size_t i = 0; i < ex.invariants_certificate->classes.size(); ++i)
    CHECK(ex.invariants_certificate->multiplicities[i] == (ex.invariants_certificate->classes[i].order() == 1 ? 1 : 0));
  CHECK_FALSE(ex.conclusion.is_permutation());
  CHECK(ex.consistent);
}

TEST_CASE("classic criterion boundary cases") {
  const GroupPtr g = group("c2xc2");
  const PrecisionContext ctx(2);
  const Lattice t = Lattice::trivial(g, 2);
  const Subgroup n = generated_subgroup(*g, {g->generators()[1]});
  CHECK(check_weiss_classic(t, n, ctx).hypothesis_i == HypothesisStatus::Failed);
  const WeissReport one = check_weiss_classic(t, trivial_subgroup(*g), ctx);
  CHECK(one.hypothesis_i == HypothesisStatus::Verified);
  CHECK(one.hypothesis_ii == HypothesisStatus::Verified);
  CHECK(one.conclusion.is_permutation());
  const GroupPtr d4 = group("d4");
  Subgroup nonnormal;
  for (const auto& k : classify_subgroups(*d4).all_subgroups)
    if (!k.is_normal) nonnormal = k;
  CHECK_THROWS_AS(check_weiss_classic(Lattice::trivial(d4, 1), nonnormal, ctx), Error);
}

TEST_CASE("classic criterion with |N| > p: C4 inside C8") {
  const GroupPtr g = group("c8");
  const PrecisionContext ctx(2);
  Subgroup c4;
  for (const auto& k : classify_subgroups(*g).all_subgroups)
    if (k.order() == 4) c4 = k;
  const Lattice m = direct_sum(permutation_lattice(g, trivial_subgroup(*g)), permutation_lattice(g, trivial_subgroup(*g)));
  const WeissReport r = check_weiss_classic(m, c4, ctx);
  CHECK(r.hypotheses_hold());
  CHECK(r.conclusion.is_permutation());
}

TEST_CASE("generalized criterion on the example: search is inconclusive, lattice is not permutation") {
  const GroupPtr g = group("c2xc2");
  const PrecisionContext ctx(2);
  const Subgroup n = generated_subgroup(*g, {g->generators()[0]});
  const Lattice m = example_lattice(g);
  const WeissReport r = check_weiss_generalized(m, n, std::nullopt, ctx);
  CHECK(r.forced_rank == 1);
  CHECK(r.hypothesis_i == HypothesisStatus::Inconclusive);
  CHECK(r.hypothesis_ii == HypothesisStatus::Verified);
  CHECK_FALSE(r.conclusion.is_permutation());
  CHECK(r.consistent);
  CHECK(r.candidates_tried >= 2);

  // Oracle: every G-stable line in M^N (eigenvectors for both generators)
  // leaves a quotient that is not free over N.
  std::vector<IntMatrix> lines;
  for (int x = -3; x <= 3; ++x)
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        IntVector v(3);
        v << x, a, b;
        if (v.isZero()) continue;
        Integer gg = boost::multiprecision::gcd(boost::multiprecision::gcd(Integer(x), Integer(a)), Integer(b));
        if (gg != 1) continue;
        bool stable = m.action(n.elements[1]) * v == v;
        for (int s : g->generators()) {
          const IntVector w = m.action(s) * v;
          stable = stable && (w == v || w == IntVector(-v));
        }
        if (!stable) continue;
        bool dup = false;
        for (const auto& l : lines) dup = dup || l.col(0) == v || l.col(0) == IntVector(-v);
        if (!dup) lines.push_back(IntMatrix(v));
      }
  CHECK(lines.size() == 2);
  for (const auto& l : lines) {
    IntMatrix section;
    const Lattice q = quotient_lattice(m, l, &section);
    CHECK_FALSE(free_rank2_brute(q.action(n.elements[1])));
    CHECK_FALSE(splits_off_trivial_part(m, n, l, ctx));
  }
}

TEST_CASE("generalized criterion with a supplied trivial part") {
  const GroupPtr c2 = group("c2");
  const PrecisionContext ctx(2);
  const Lattice m = direct_sum(Lattice::trivial(c2, 1), permutation_lattice(c2, trivial_subgroup(*c2)));
  const WeissReport r = check_weiss_generalized(m, whole_group(*c2), TrivialPartCandidate{mat({{1}, {0}, {0}})}, ctx);
  CHECK(r.hypothesis_i == HypothesisStatus::Verified);
  REQUIRE(r.trivial_part);
  CHECK(r.trivial_part->provenance == CandidateSource::Supplied);
  CHECK(r.hypothesis_ii == HypothesisStatus::Verified);
  CHECK(r.conclusion.is_permutation());
  CHECK(r.consistent);
  CHECK_THROWS_AS(check_weiss_generalized(m, whole_group(*c2), TrivialPartCandidate{mat({{0}, {1}, {0}})}, ctx), Error);
  CHECK_THROWS_AS(check_weiss_generalized(m, whole_group(*c2), TrivialPartCandidate{mat({{2}, {0}, {0}})}, ctx), Error);
  const GroupPtr c22 = group("c2xc2");
  CHECK_THROWS_AS(check_weiss_generalized(Lattice::trivial(c22, 1), whole_group(*c22), std::nullopt, ctx), Error);
}

TEST_CASE("generalized criterion on scrambled D4 permutation lattices with N the center") {
  const GroupPtr g = group("d4");
  const PrecisionContext ctx(2);
  const Subgroup z = center(*g);
  REQUIRE(z.order() == 2);
  const auto classes = canonical_classes(*g);
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Lattice> trivial_parts, free_parts;
    for (const auto& k : classes) {
      const int mk = static_cast<int>(rng.uniform(0, 1));
      for (int c = 0; c < mk; ++c) (is_subgroup_of(z, k) ? trivial_parts : free_parts).push_back(permutation_lattice(g, k));
    }
    std::vector<Lattice> parts = trivial_parts;
    Eigen::Index w = 0;
    for (const auto& l : trivial_parts) w += l.rank();
    parts.insert(parts.end(), free_parts.begin(), free_parts.end());
    if (parts.empty()) continue;
    const Lattice sum = direct_sum(parts, g);
    const Scramble s = random_unimodular(sum.rank(), rng);
    const Lattice m = sum.change_basis(s.S, s.S_inverse);
    const IntMatrix cand = s.S_inverse.leftCols(w);
    const WeissReport r = check_weiss_generalized(m, z, TrivialPartCandidate{cand}, ctx);
    CHECK(r.hypothesis_i == HypothesisStatus::Verified);
    CHECK(r.hypothesis_ii == HypothesisStatus::Verified);
    CHECK(r.conclusion.is_permutation());
    CHECK(r.consistent);
    CHECK(r.forced_rank == w);
    // the canonical search also finds a trivial part here
    const WeissReport searched = check_weiss_generalized(m, z, std::nullopt, ctx);
    CHECK(searched.hypothesis_i != HypothesisStatus::Failed);
    CHECK(searched.consistent);
  }
}

TEST_CASE("necessity") {
  const GroupPtr g = group("c2xc2");
  const PrecisionContext ctx(2);
  const Subgroup n = generated_subgroup(*g, {g->generators()[0]});
  const NecessityReport a = necessity_check(permutation_lattice(g, n), n, ctx);
  CHECK(a.passed());
  CHECK(a.trivial_part.rank() == 2);
  const NecessityReport b = necessity_check(permutation_lattice(g, trivial_subgroup(*g)), n, ctx);
  CHECK(b.passed());
  CHECK(b.trivial_part.rank() == 0);
  CHECK_THROWS_AS(necessity_check(example_lattice(g), n, ctx), Error);
  for (const std::string name : {"c4", "q8", "c3xc3"}) {
    const GroupPtr h = group(name);
    const PrecisionContext c(h->p());
    const Subgroup z = central_order_p_subgroups(*h).front();
    std::vector<Lattice> parts;
    for (const auto& k : canonical_classes(*h)) parts.push_back(permutation_lattice(h, k));
    Rng rng(1);
    const Lattice sum = direct_sum(parts, h);
    const Scramble s = random_unimodular(sum.rank(), rng);
    CHECK(necessity_check(sum.change_basis(s.S, s.S_inverse), z, c).passed());
  }
}

TEST_CASE("splits_off_trivial_part agrees with recognizing the quotient") {
  for (const std::string name : {"c4", "d4", "q8", "c3xc3"}) {
    const GroupPtr g = group(name);
    const PrecisionContext ctx(g->p());
    const std::vector<Subgroup> classes = canonical_classes(*g);
    const Subgroup n = central_order_p_subgroups(*g).front();
    Rng rng(11);
    int agreed = 0, free_cases = 0;
    for (int trial = 0; trial < 12; ++trial) {
      // trivial-over-N summands first, then a random mix of the rest
      std::vector<Lattice> parts;
      Eigen::Index front = 0, last = 0;
      for (int pass = 0; pass < 2; ++pass)
        for (const Subgroup& k : classes) {
          if (k.contains(n.elements.back()) != (pass == 0)) continue;
          const int copies = static_cast<int>(rng.uniform(0, 1));
          for (int c = 0; c < copies; ++c) {
            parts.push_back(permutation_lattice(g, k));
            if (pass == 0) front += last = parts.back().rank();
          }
        }
      if (parts.empty()) continue;
      const Lattice sum = direct_sum(parts, g);
      const Scramble s = random_unimodular(sum.rank(), rng);
      const Lattice m = sum.change_basis(s.S, s.S_inverse);
      // W is all of the trivial part, or on odd trials all but one summand
      const Eigen::Index take = trial % 2 == 1 ? front - last : front;
      const IntMatrix w = saturate(s.S_inverse.leftCols(take), m.rank(), ctx);
      const Lattice q = quotient_lattice(m, w);
      const Verdict v = recognize_permutation(restrict_lattice(q, n).lattice, ctx);
      bool oracle = v.is_permutation();
      if (oracle)
        for (std::size_t i = 0; i < v.certificate->classes.size(); ++i)
          if (v.certificate->classes[i].order() > 1 && v.certificate->multiplicities[i] > 0) oracle = false;
      CHECK(splits_off_trivial_part(m, n, w, ctx) == oracle);
      agreed += 1;
      free_cases += oracle ? 1 : 0;
    }
    CHECK(agreed > 0);
    CHECK(free_cases > 0);
    CHECK(free_cases < agreed);
  }
}
