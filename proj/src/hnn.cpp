#include "zplat/hnn.hpp"

#include "zplat/error.hpp"

namespace zplat {

std::vector<HnnRelator> HnnPresentation::relators() const {
  std::vector<HnnRelator> out;
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (int j = 0; j < edges[e].multiplicity; ++j)
      for (int a : minimal_generators(*base, edges[e].subgroup)) out.push_back({e, j, a});
  return out;
}

int HnnPresentation::letter_count() const {
  int n = 0;
  for (const auto& e : edges) n += e.multiplicity;
  return n;
}

void validate_presentation(const HnnPresentation& pres) {
  if (!pres.base) throw Error(ErrorCode::InvalidArgument, "presentation has no base group");
  const SubgroupClassification cls = classify_subgroups(*pres.base);
  std::vector<bool> used(cls.class_reps.size(), false);
  for (const auto& e : pres.edges) {
    validate_subgroup(*pres.base, e.subgroup);
    if (e.multiplicity < 1) throw Error(ErrorCode::InvalidArgument, "edge multiplicity must be positive");
    if (static_cast<int>(e.letters.size()) != e.multiplicity)
      throw Error(ErrorCode::InvalidArgument, "edge letter names do not match its multiplicity");
    const auto c = static_cast<std::size_t>(cls.class_index(e.subgroup));
    if (used[c]) throw Error(ErrorCode::InvalidArgument, "edge subgroups " + e.subgroup.label() + " are conjugate");
    used[c] = true;
  }
}

HnnPresentation make_presentation(GroupPtr base, const std::vector<std::pair<Subgroup, int>>& edges) {
  HnnPresentation pres;
  pres.base = std::move(base);
  const SubgroupClassification cls = classify_subgroups(*pres.base);
  for (const auto& [k, m] : edges) {
    if (m == 0) continue;
    validate_subgroup(*pres.base, k);
    HnnEdge e{k, m, {}};
    const int c = cls.class_index(k);
    for (int j = 0; j < m; ++j) e.letters.push_back("x_{" + std::to_string(c) + "," + std::to_string(j) + "}");
    pres.edges.push_back(std::move(e));
  }
  validate_presentation(pres);
  return pres;
}

HnnPresentation synthesize_hnn(const PermutationCertificate& cert, const GroupPtr& h) {
  std::vector<std::pair<Subgroup, int>> edges;
  for (std::size_t i = 0; i < cert.classes.size(); ++i) edges.emplace_back(cert.classes[i], cert.multiplicities[i]);
  return make_presentation(h, edges);
}

Integer kernel_rank(const HnnPresentation& pres) {
  Integer r = 0;
  for (const auto& e : pres.edges) r += Integer(e.multiplicity) * index_of(*pres.base, e.subgroup);
  return r;
}

Lattice kernel_abelianization(const HnnPresentation& pres, const PrecisionContext& ctx) {
  const PGroup& h = *pres.base;
  const int order = h.order();
  // Transversal for the kernel is H itself in element order; the Schreier
  // generator for (t, x) is t x t^-1. Relators never mix letters, so the
  // relation matrix is block diagonal with one block per letter, and the
  // letters of one edge share the same block.
  std::vector<IntMatrix> regular(static_cast<std::size_t>(order), IntMatrix::Zero(order, order));
  for (int g = 0; g < order; ++g)
    for (int t = 0; t < order; ++t) regular[static_cast<std::size_t>(g)](h.mul(g, t), t) = 1;
  const Lattice free(pres.base, regular);

  std::vector<Lattice> parts;
  for (const auto& e : pres.edges) {
    // t [a, x] t^-1 = (t a) x (t a)^-1 (t x t^-1)^-1 rewrites to y_{ta} - y_t;
    // the relators of H itself rewrite to the empty word
    const std::vector<int> gens = minimal_generators(h, e.subgroup);
    IntMatrix r = IntMatrix::Zero(order, static_cast<Eigen::Index>(gens.size()) * order);
    Eigen::Index col = 0;
    for (int a : gens)
      for (int t = 0; t < order; ++t, ++col) {
        r(h.mul(t, a), col) += 1;
        r(t, col) -= 1;
      }
    Lattice block = free;
    if (r.cols() > 0) {
      const IntMatrix span = saturate(r, order, ctx);
      if (!contains_span(r, span, ctx))
        throw Error(ErrorCode::InternalInconsistency, "abelianized kernel has torsion");
      block = quotient_lattice(free, span);
    }
    for (int j = 0; j < e.multiplicity; ++j) parts.push_back(block);
  }
  if (parts.empty()) return Lattice::trivial(pres.base, 0);
  return direct_sum(parts, pres.base);
}

RoundtripResult roundtrip(const PermutationCertificate& cert, const GroupPtr& h, const PrecisionContext& ctx) {
  RoundtripResult out;
  const HnnPresentation pres = synthesize_hnn(cert, h);
  out.kernel_rank = kernel_rank(pres);
  const Lattice ab = kernel_abelianization(pres, ctx);
  out.abelianization_rank = ab.rank();
  const Verdict v = recognize_permutation(ab, ctx);
  if (v.is_permutation()) out.recovered = *v.certificate;
  out.ok = out.recovered && out.recovered->labelled() == cert.labelled() && Integer(ab.rank()) == out.kernel_rank &&
           verify_certificate(ab, *out.recovered, ctx);
  return out;
}

bool roundtrip_check(const PermutationCertificate& cert, const GroupPtr& h, const PrecisionContext& ctx) {
  return roundtrip(cert, h, ctx).ok;
}

FreeProductPresentation quotient_kill_nontrivial_edges(const HnnPresentation& pres) {
  FreeProductPresentation out{pres.base, 0};
  for (const auto& e : pres.edges)
    if (e.subgroup.order() == 1) out.free_rank += e.multiplicity;
  return out;
}

}  // namespace zplat
