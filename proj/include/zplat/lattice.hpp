#pragma once

// Z_(p)[G]-lattices: free modules of finite rank with an integral action.
// Action matrices act on column vectors; column j of action(g) is the image of
// the j-th basis vector.

#include "zplat/padic_linalg.hpp"
#include "zplat/pgroup.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace zplat {

using GroupPtr = std::shared_ptr<const PGroup>;

class Lattice {
 public:
  /// One matrix per group element; the homomorphism property is checked on
  /// every pair of elements.
  Lattice(GroupPtr group, std::vector<IntMatrix> action);
  /// Matrices for group.generators(); the rest is filled in by word evaluation.
  static Lattice from_generators(GroupPtr group, const std::vector<IntMatrix>& generator_action);
  static Lattice trivial(GroupPtr group, Eigen::Index rank);

  const PGroup& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  Eigen::Index rank() const { return rank_; }
  const IntMatrix& action(int g) const { return action_[static_cast<std::size_t>(g)]; }
  const std::vector<IntMatrix>& actions() const { return action_; }

  /// The same module in the basis given by the columns of s (s unimodular,
  /// s_inverse its inverse): new action = s_inverse * action * s.
  Lattice change_basis(const IntMatrix& s, const IntMatrix& s_inverse) const;

 private:
  GroupPtr group_;
  Eigen::Index rank_ = 0;
  std::vector<IntMatrix> action_;
};

bool same_group(const PGroup& a, const PGroup& b);

struct Sublattice {
  IntMatrix basis;  // columns, in ambient coordinates
  bool saturated = false;
  bool invariant = false;

  Eigen::Index rank() const { return basis.cols(); }
};

/// Whether the span of the basis is stable under every action matrix.
bool is_invariant(const Lattice& m, const IntMatrix& basis);
/// The lattice structure on an invariant Z-saturated sublattice, in the given basis.
Lattice sublattice_lattice(const Lattice& m, const IntMatrix& basis);
/// The lattice structure on M / W for a saturated invariant W; `section`
/// receives integer columns lifting the quotient basis.
Lattice quotient_lattice(const Lattice& m, const IntMatrix& w, IntMatrix* section = nullptr);

Lattice permutation_lattice(const GroupPtr& g, const Subgroup& k);
Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice direct_sum(const std::vector<Lattice>& parts, const GroupPtr& g);

/// The restriction together with the subgroup-as-group bookkeeping.
struct Restriction {
  Lattice lattice;
  SubgroupGroup subgroup;
};
Restriction restrict_lattice(const Lattice& m, const Subgroup& k);

Sublattice invariants(const Lattice& m, const Subgroup& k);
/// M^N as a lattice over G/N in the saturated basis of invariants(m, n).
struct InvariantQuotient {
  Lattice lattice;
  QuotientGroup quotient;
  IntMatrix basis;
};
InvariantQuotient invariants_over_quotient(const Lattice& m, const Subgroup& n);

struct Coinvariants {
  Eigen::Index free_rank = 0;
  std::vector<int> torsion_exponents;  // p-exponents of the nontrivial p-torsion
  std::optional<Lattice> free_part;    // present when K is normal (G-action with K trivial)
};
Coinvariants coinvariants(const Lattice& m, const Subgroup& k, const PrecisionContext& ctx);

/// Induction from a lattice over the subgroup k (given as a group through sg).
Lattice induce(const GroupPtr& g, const Subgroup& k, const SubgroupGroup& sg, const Lattice& l);

struct HomSpace {
  std::vector<IntMatrix> basis;  // target.rank x source.rank intertwiners
  Eigen::Index rank() const { return static_cast<Eigen::Index>(basis.size()); }
};
HomSpace hom_space(const Lattice& source, const Lattice& target, const PrecisionContext& ctx);
bool intertwines(const Lattice& source, const Lattice& target, const IntMatrix& t);

}  // namespace zplat
