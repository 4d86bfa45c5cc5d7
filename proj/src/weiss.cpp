#include "zplat/weiss.hpp"

#include "zplat/error.hpp"
#include "zplat/fp_linalg.hpp"

#include <numeric>
#include <set>

namespace zplat {

std::string_view status_name(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::Verified: return "verified";
    case HypothesisStatus::Failed: return "failed";
    case HypothesisStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

// Over Z_p C_p a lattice is free iff its reduction is a free F_p C_p-module,
// i.e. iff the trace (c - 1)^(p-1) has rank dim / p. For M/W with W fixed
// pointwise by N the trace kills W, so everything is read off mod p in M.
bool free_mod_p(const Lattice& m, const Subgroup& n, const IntMatrix& w, std::int64_t p) {
  const Eigen::Index rest = m.rank() - w.cols();
  if (rest % p != 0) return false;
  FpMatrix both = FpMatrix::Zero(m.rank(), m.rank() + w.cols());
  for (int x : n.elements) both.leftCols(m.rank()) += fp::reduce(m.action(x), p);
  for (Eigen::Index i = 0; i < both.size(); ++i) both.data()[i] %= p;
  both.rightCols(w.cols()) = fp::reduce(w, p);
  return fp::rank(both, p) - w.cols() == rest / p;
}

// Res to the subgroup is free: a permutation lattice with only the regular block.
bool free_over_subgroup(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx,
                        std::optional<PermutationCertificate>* cert) {
  if (!cert && n.order() == ctx.p()) return free_mod_p(m, n, IntMatrix(m.rank(), 0), ctx.p());
  const Restriction res = restrict_lattice(m, n);
  const Verdict v = recognize_permutation(res.lattice, ctx);
  if (!v.is_permutation()) return false;
  if (cert) *cert = *v.certificate;
  for (std::size_t i = 0; i < v.certificate->classes.size(); ++i)
    if (v.certificate->classes[i].order() > 1 && v.certificate->multiplicities[i] > 0) return false;
  return true;
}

void check_invariants(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx, WeissReport& r) {
  const InvariantQuotient iq = invariants_over_quotient(m, n);
  r.invariants_rank = iq.lattice.rank();
  const Verdict v = recognize_permutation(iq.lattice, ctx);
  r.hypothesis_ii = v.is_permutation() ? HypothesisStatus::Verified : HypothesisStatus::Failed;
  if (v.is_permutation()) r.invariants_certificate = *v.certificate;
}

void require_normal(const PGroup& g, const Subgroup& n) {
  validate_subgroup(g, n);
  if (!is_normal(g, n)) throw Error(ErrorCode::NotNormal, "subgroup " + n.label() + " is not normal");
}

bool fixes_pointwise(const Lattice& m, const Subgroup& n, const IntMatrix& w) {
  for (int x : n.elements)
    if (multiply(m.action(x), w) != w) return false;
  return true;
}

// Rank of the part of a certificate whose stabilizers contain n.
Eigen::Index trivial_part_rank(const PGroup& g, const PermutationCertificate& cert, const Subgroup& n) {
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < cert.classes.size(); ++i)
    if (is_subgroup_of(n, cert.classes[i])) r += static_cast<Eigen::Index>(cert.multiplicities[i]) * (g.order() / cert.classes[i].order());
  return r;
}

// Saturated G-submodule generated by the columns of v.
IntMatrix generated_submodule(const Lattice& m, const IntMatrix& v, const PrecisionContext& ctx) {
  const Eigen::Index n = m.rank();
  const int order = m.group().order();
  IntMatrix span(n, v.cols() * order);
  for (int x = 0; x < order; ++x) span.middleCols(x * v.cols(), v.cols()) = multiply(m.action(x), v);
  return saturate(span, n, ctx);
}

// Calls visit on coefficient vectors in [-t, t]^r by increasing t, one per
// line (first nonzero entry positive, gcd 1), until visit returns true or the
// budget runs out. Returns the number of vectors visited.
template <class Visit>
std::size_t enumerate_coefficients(Eigen::Index r, std::int64_t bound, std::size_t budget, Visit visit) {
  std::size_t used = 0;
  if (r == 0) return 0;
  for (std::int64_t t = 1; t <= bound; ++t) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(r), -t);
    while (true) {
      std::int64_t mx = 0, g = 0, first = 0;
      for (std::int64_t x : c) {
        mx = std::max(mx, std::abs(x));
        g = std::gcd(g, std::abs(x));
        if (first == 0) first = x;
      }
      if (mx == t && g == 1 && first > 0) {
        if (used >= budget) return used;
        ++used;
        if (visit(c)) return used;
      }
      std::size_t i = 0;
      while (i < c.size() && c[i] == t) c[i++] = -t;
      if (i == c.size()) break;
      ++c[i];
    }
  }
  return used;
}

}  // namespace

bool splits_off_trivial_part(const Lattice& m, const Subgroup& n, const IntMatrix& w, const PrecisionContext& ctx) {
  const IntMatrix ws = saturate(w, m.rank(), ctx);
  if (n.order() == ctx.p() && fixes_pointwise(m, n, ws)) return free_mod_p(m, n, ws, ctx.p());
  const Lattice q = quotient_lattice(m, ws);
  return free_over_subgroup(q, n, ctx, nullptr);
}

WeissReport check_weiss_classic(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx) {
  require_normal(m.group(), n);
  WeissReport r;
  r.theorem = "classic";
  r.normal = n;
  const bool free = free_over_subgroup(m, n, ctx, &r.restriction_certificate);
  r.hypothesis_i = free ? HypothesisStatus::Verified : HypothesisStatus::Failed;
  if (!r.restriction_certificate)
    r.hypothesis_i_detail = "restriction to N is not a permutation lattice";
  else if (!free)
    r.hypothesis_i_detail = "restriction to N has non-regular permutation summands";
  else
    r.hypothesis_i_detail = "restriction to N is free";
  check_invariants(m, n, ctx, r);
  r.conclusion = recognize_permutation(m, ctx);
  r.consistent = !r.hypotheses_hold() || r.conclusion.is_permutation();
  return r;
}

WeissReport check_weiss_generalized(const Lattice& m, const Subgroup& n,
                                    const std::optional<TrivialPartCandidate>& candidate, const PrecisionContext& ctx,
                                    const WeissOptions& opts) {
  const PGroup& g = m.group();
  require_normal(g, n);
  const std::int64_t p = ctx.p();
  if (n.order() != p) throw Error(ErrorCode::WrongOrder, "the generalized criterion needs |N| = p");
  const Eigen::Index rank = m.rank();
  WeissReport r;
  r.theorem = "generalized";
  r.normal = n;
  const IntMatrix inv = invariants(m, n).basis;
  const Eigen::Index rinv = inv.cols();
  {
    // (i) shared with the classic check: the restriction certificate, when there is one
    const Restriction res = restrict_lattice(m, n);
    const Verdict v = recognize_permutation(res.lattice, ctx);
    if (v.is_permutation()) r.restriction_certificate = *v.certificate;
  }

  if (candidate) {
    const IntMatrix& w = candidate->basis;
    if (w.rows() != rank || rank_exact(w) != w.cols())
      throw Error(ErrorCode::CandidateInvalid, "candidate basis has the wrong shape or is dependent");
    if (!same_span(saturate(w, rank, ctx), w, ctx)) throw Error(ErrorCode::CandidateInvalid, "candidate is not saturated");
    if (!is_invariant(m, w)) throw Error(ErrorCode::CandidateInvalid, "candidate is not G-invariant");
    if (!fixes_pointwise(m, n, w)) throw Error(ErrorCode::CandidateInvalid, "candidate is not N-trivial");
  }

  const Eigen::Index num = p * rinv - rank;
  bool search = true;
  if (num < 0 || num % (p - 1) != 0 || num / (p - 1) > rinv) {
    r.hypothesis_i = HypothesisStatus::Failed;
    r.hypothesis_i_detail = "no sublattice has the forced rank (p rank(M^N) - rank(M)) / (p - 1)";
    search = false;
  } else {
    r.forced_rank = num / (p - 1);
  }

  std::set<std::vector<std::string>> seen;
  auto try_candidate = [&](const IntMatrix& w, CandidateSource src) {
    if (w.cols() != r.forced_rank) return false;
    const IntMatrix ws = saturate(w, rank, ctx);
    std::vector<std::string> key;
    for (Eigen::Index i = 0; i < ws.size(); ++i) key.push_back(ws.data()[i].str());
    if (!seen.insert(key).second) return false;
    ++r.candidates_tried;
    if (!is_invariant(m, ws) || !fixes_pointwise(m, n, ws)) return false;
    if (!splits_off_trivial_part(m, n, ws, ctx)) return false;
    r.hypothesis_i = HypothesisStatus::Verified;
    r.trivial_part = TrivialPartCandidate{ws, src};
    return true;
  };

  if (search) {
    bool found = candidate && try_candidate(candidate->basis, CandidateSource::Supplied);
    if (found) r.hypothesis_i_detail = "supplied sublattice splits off with an N-free quotient";
    if (!found && r.forced_rank == 0) found = try_candidate(IntMatrix(rank, 0), CandidateSource::CanonicalSearch);
    if (!found && r.forced_rank == rinv) found = try_candidate(inv, CandidateSource::CanonicalSearch);
    if (!found) {
      // (a) translates of the trivial blocks of the restriction
      if (auto cs = cp_split(m, n, ctx); cs && cs->m1.rank() > 0)
        found = try_candidate(generated_submodule(m, cs->m1.basis, ctx), CandidateSource::CanonicalSearch);
    }
    if (!found) {
      // (b) submodules of M^N generated by one small integral combination
      const std::int64_t bound = p * p;
      enumerate_coefficients(rinv, bound, opts.search_budget, [&](const std::vector<std::int64_t>& c) {
        IntVector v = IntVector::Zero(rank);
        for (Eigen::Index i = 0; i < rinv; ++i)
          if (c[static_cast<std::size_t>(i)] != 0) v += Integer(c[static_cast<std::size_t>(i)]) * inv.col(i);
        const IntMatrix w = generated_submodule(m, v, ctx);
        found = try_candidate(w, CandidateSource::CanonicalSearch);
        return found;
      });
    }
    if (found && r.hypothesis_i_detail.empty())
      r.hypothesis_i_detail = "canonical search found a sublattice with an N-free quotient";
    if (!found) {
      r.hypothesis_i = HypothesisStatus::Inconclusive;
      r.hypothesis_i_detail = "bounded search found no trivial part; this is not a disproof";
    }
  }

  check_invariants(m, n, ctx, r);
  r.conclusion = recognize_permutation(m, ctx);
  r.consistent = !r.hypotheses_hold() || r.conclusion.is_permutation();
  if (r.hypotheses_hold() && r.conclusion.is_permutation())
    r.consistent = trivial_part_rank(g, *r.conclusion.certificate, n) == r.trivial_part->basis.cols();
  return r;
}

NecessityReport necessity_check(const Lattice& m, const Subgroup& n, const PrecisionContext& ctx) {
  const PGroup& g = m.group();
  require_normal(g, n);
  if (n.order() != ctx.p()) throw Error(ErrorCode::WrongOrder, "the necessity check needs |N| = p");
  const Verdict v = recognize_permutation(m, ctx);
  if (!v.is_permutation()) throw Error(ErrorCode::PreconditionFailed, "lattice is not a permutation lattice");
  return necessity_check(m, n, *v.certificate, ctx);
}

NecessityReport necessity_check(const Lattice& m, const Subgroup& n, const PermutationCertificate& cert,
                                const PrecisionContext& ctx) {
  const PGroup& g = m.group();
  require_normal(g, n);
  if (n.order() != ctx.p()) throw Error(ErrorCode::WrongOrder, "the necessity check needs |N| = p");
  if (!verify_certificate(m, cert, ctx)) throw Error(ErrorCode::PreconditionFailed, "certificate does not verify");
  NecessityReport out;
  out.certificate = cert;
  const IntMatrix& t = out.certificate.change_of_basis;
  IntMatrix w(m.rank(), 0);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < out.certificate.classes.size(); ++i) {
    const Subgroup& k = out.certificate.classes[i];
    const Eigen::Index width = static_cast<Eigen::Index>(out.certificate.multiplicities[i]) * (g.order() / k.order());
    if (is_subgroup_of(n, k)) {
      IntMatrix grown(m.rank(), w.cols() + width);
      grown << w, t.middleCols(col, width);
      w = std::move(grown);
    }
    col += width;
  }
  const IntMatrix ws = saturate(w, m.rank(), ctx);
  out.trivial_part = Sublattice{ws, true, is_invariant(m, ws)};
  const Eigen::Index rinv = invariants(m, n).basis.cols();
  const bool rank_ok = (ctx.p() * rinv - m.rank()) == (ctx.p() - 1) * ws.cols();
  out.hypothesis_i = rank_ok && out.trivial_part.invariant && fixes_pointwise(m, n, ws) &&
                     splits_off_trivial_part(m, n, ws, ctx);
  WeissReport tmp;
  check_invariants(m, n, ctx, tmp);
  out.hypothesis_ii = tmp.hypothesis_ii == HypothesisStatus::Verified;
  return out;
}

}  // namespace zplat
