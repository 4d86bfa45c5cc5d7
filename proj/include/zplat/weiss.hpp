#pragma once

// Checkers for the Weiss criterion and its generalization to normal
// subgroups of order p, plus the converse (necessity) check.
//
// Classic form: if Res_N M is Z_p[N]-free and M^N is a permutation lattice
// over G/N, then M is a permutation lattice. Generalized form (|N| = p): the
// freeness is weakened to M = W + (free part) over N with W a G-invariant,
// N-trivial sublattice.

#include "zplat/decomp.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace zplat {

enum class HypothesisStatus { Verified, Failed, Inconclusive };
std::string_view status_name(HypothesisStatus s);

enum class CandidateSource { Supplied, CanonicalSearch };

struct TrivialPartCandidate {
  IntMatrix basis;  // columns in the coordinates of M
  CandidateSource provenance = CandidateSource::Supplied;
};

struct WeissOptions {
  std::size_t search_budget = 4096;  // coefficient vectors tried in search (b)
};

struct WeissReport {
  std::string theorem;  // "classic" or "generalized"
  Subgroup normal;

  HypothesisStatus hypothesis_i = HypothesisStatus::Failed;
  std::string hypothesis_i_detail;
  std::optional<PermutationCertificate> restriction_certificate;  // Res_N M over N
  std::optional<TrivialPartCandidate> trivial_part;               // the W that passed
  Eigen::Index forced_rank = -1;                                  // generalized only
  std::size_t candidates_tried = 0;

  HypothesisStatus hypothesis_ii = HypothesisStatus::Failed;
  std::optional<PermutationCertificate> invariants_certificate;  // M^N over G/N
  Eigen::Index invariants_rank = 0;

  Verdict conclusion;
  bool consistent = true;

  bool hypotheses_hold() const {
    return hypothesis_i == HypothesisStatus::Verified && hypothesis_ii == HypothesisStatus::Verified;
  }
};

WeissReport check_weiss_classic(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx);

/// Throws NotNormal, WrongOrder (|N| != p) and CandidateInvalid (a supplied W
/// that is not saturated, G-invariant and N-trivial). A supplied W that is
/// valid but leaves a non-free quotient falls through to the search.
WeissReport check_weiss_generalized(const Lattice& m, const Subgroup& n,
                                    const std::optional<TrivialPartCandidate>& candidate, const PrecisionContext& ctx,
                                    const WeissOptions& opts = {});

/// Whether a G-invariant, N-trivial, saturated W leaves M / W free over N.
bool splits_off_trivial_part(const Lattice& m, const Subgroup& n, const IntMatrix& w, const PrecisionContext& ctx);

struct NecessityReport {
  PermutationCertificate certificate;
  Sublattice trivial_part;  // blocks Z[G/K] with N <= K
  bool hypothesis_i = false;
  bool hypothesis_ii = false;
  bool passed() const { return hypothesis_i && hypothesis_ii; }
};

/// Throws PreconditionFailed when M is not a permutation lattice.
NecessityReport necessity_check(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx);
/// The same with a certificate already at hand; throws PreconditionFailed if it does not verify.
NecessityReport necessity_check(const Lattice& m, const Subgroup& n, const PermutationCertificate& cert,
                                const PrecisionContext& ctx);

}  // namespace zplat
