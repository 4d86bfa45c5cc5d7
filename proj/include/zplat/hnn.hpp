#pragma once

// Special HNN-extensions HNN(H, H_e, X_e) of a finite p-group H: one stable
// letter x_{e,j} per pointed basis element, commuting with its associated
// subgroup H_e. The kernel of the map to H (killing the letters) is free, and
// its abelianization is computed here by abelianized Reidemeister-Schreier.

#include "zplat/decomp.hpp"

#include <string>
#include <vector>

namespace zplat {

struct HnnEdge {
  Subgroup subgroup;  // H_e, a class representative
  int multiplicity = 0;
  std::vector<std::string> letters;  // x_{K,j}, j < multiplicity
};

/// The relator [a, x] for a generator a of H_e and the stable letter x.
struct HnnRelator {
  std::size_t edge = 0;
  int letter = 0;
  int element = 0;  // a
};

struct HnnPresentation {
  GroupPtr base;
  std::vector<HnnEdge> edges;

  std::vector<HnnRelator> relators() const;
  int letter_count() const;
};

struct FreeProductPresentation {
  GroupPtr finite_factor;
  int free_rank = 0;
};

/// Checks edge subgroups, positive multiplicities and pairwise non-conjugacy.
void validate_presentation(const HnnPresentation& pres);

/// Builds a presentation from subgroups and multiplicities; zero multiplicities
/// are dropped and letters get their canonical names.
HnnPresentation make_presentation(GroupPtr base, const std::vector<std::pair<Subgroup, int>>& edges);

HnnPresentation synthesize_hnn(const PermutationCertificate& cert, const GroupPtr& h);

/// Sum over edges of m_e [H : H_e].
Integer kernel_rank(const HnnPresentation& pres);

/// The H-lattice F^ab of the kernel. Throws InternalInconsistency when the
/// relation module has torsion.
Lattice kernel_abelianization(const HnnPresentation& pres, const PrecisionContext& ctx);

struct RoundtripResult {
  bool ok = false;
  Integer kernel_rank = 0;
  Eigen::Index abelianization_rank = 0;
  std::optional<PermutationCertificate> recovered;
};

RoundtripResult roundtrip(const PermutationCertificate& cert, const GroupPtr& h, const PrecisionContext& ctx);
bool roundtrip_check(const PermutationCertificate& cert, const GroupPtr& h, const PrecisionContext& ctx);

FreeProductPresentation quotient_kill_nontrivial_edges(const HnnPresentation& pres);

}  // namespace zplat
