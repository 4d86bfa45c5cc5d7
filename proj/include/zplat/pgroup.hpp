#pragma once

// Finite p-groups as full multiplication tables.
//
// Element 0 is always the identity. Groups built from permutations list their
// elements in breadth-first order from the generators, and multiply by
// composition (g h)(x) = g(h(x)).

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zplat {

constexpr int kMaxGroupOrder = 256;

using Permutation = std::vector<int>;  // image of each point
using ElementSet = std::bitset<kMaxGroupOrder>;

class PGroup {
 public:
  PGroup() = default;  // empty placeholder; use the factories
  /// Closure of the generators inside Sym(degree).
  static PGroup from_permutations(const std::vector<Permutation>& gens, int degree, int order_cap = kMaxGroupOrder);
  /// Validates associativity, identity at index 0, inverses and p-power orders.
  /// p must be given when the table has a single element.
  static PGroup from_table(std::vector<std::vector<int>> mul, std::vector<int> generators, std::int64_t p = 0);

  int order() const { return static_cast<int>(mul_.size()); }
  std::int64_t p() const { return p_; }
  int identity() const { return 0; }
  int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inverse(int a) const { return inv_[static_cast<std::size_t>(a)]; }
  int conjugate(int g, int x) const { return mul(mul(g, x), inverse(g)); }
  const std::vector<int>& generators() const { return generators_; }
  const std::vector<int>& element_orders() const { return orders_; }
  int element_order(int g) const { return orders_[static_cast<std::size_t>(g)]; }
  const std::vector<std::vector<int>>& table() const { return mul_; }

  /// Present only for groups built from permutations.
  const std::vector<Permutation>& permutations() const { return perms_; }
  int degree() const { return degree_; }

  bool is_abelian() const;

 private:
  void finish(std::int64_t p);

  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::vector<int> orders_;
  std::vector<int> generators_;
  std::vector<Permutation> perms_;
  int degree_ = 0;
  std::int64_t p_ = 0;
};

struct Subgroup {
  std::vector<int> elements;  // sorted
  bool is_normal = false;

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int g) const;
  ElementSet mask() const;
  /// Human-readable label such as "{0,3}".
  std::string label() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements == b.elements; }
};

/// Deterministic subgroup order: by size, then lexicographic element list.
bool subgroup_less(const Subgroup& a, const Subgroup& b);

Subgroup make_subgroup(const PGroup& g, const ElementSet& elems);
/// Throws NotASubgroup when the set is not closed or misses the identity.
Subgroup subgroup_from_elements(const PGroup& g, const std::vector<int>& elems);
Subgroup generated_subgroup(const PGroup& g, const std::vector<int>& gens);
Subgroup whole_group(const PGroup& g);
Subgroup trivial_subgroup(const PGroup& g);
bool is_normal(const PGroup& g, const Subgroup& k);
Subgroup conjugate_subgroup(const PGroup& g, const Subgroup& k, int x);
bool is_subgroup_of(const Subgroup& small, const Subgroup& big);
void validate_subgroup(const PGroup& g, const Subgroup& k);

struct SubgroupClassification {
  std::vector<Subgroup> all_subgroups;  // deterministic order
  std::vector<Subgroup> class_reps;     // deterministic order, each the least member of its class
  std::vector<int> class_of;            // all_subgroups index -> class_reps index
  std::vector<int> class_size;          // per class

  /// Index into class_reps of the class containing k.
  int class_index(const Subgroup& k) const;
  int subgroup_index(const Subgroup& k) const;
};

SubgroupClassification classify_subgroups(const PGroup& g);

/// Left coset representatives of k in g; the identity comes first and every
/// element factors uniquely as r k.
std::vector<int> coset_transversal(const PGroup& g, const Subgroup& k);
/// coset_index[x] = position of the coset x k in coset_transversal(g, k).
std::vector<int> coset_index(const PGroup& g, const Subgroup& k);
int index_of(const PGroup& g, const Subgroup& k);

/// Number of k-orbits on the left cosets g / l.
int orbit_count_on_cosets(const PGroup& g, const Subgroup& k, const Subgroup& l);

Subgroup normalizer(const PGroup& g, const Subgroup& k);
Subgroup center(const PGroup& g);
std::vector<Subgroup> central_order_p_subgroups(const PGroup& g);
std::vector<Subgroup> normal_subgroups(const PGroup& g);

/// A subgroup repackaged as a group in its own right.
struct SubgroupGroup {
  PGroup group;
  std::vector<int> to_parent;    // local index -> parent element
  std::vector<int> from_parent;  // parent element -> local index or -1
};
SubgroupGroup subgroup_as_group(const PGroup& g, const Subgroup& k);

/// G / N for a normal subgroup N; quotient elements are the cosets in
/// coset_transversal order.
struct QuotientGroup {
  PGroup group;
  std::vector<int> projection;      // parent element -> quotient element
  std::vector<int> representative;  // quotient element -> parent transversal element
};
QuotientGroup quotient_group(const PGroup& g, const Subgroup& n);

/// Greedy generating set: elements in index order that enlarge the span.
std::vector<int> minimal_generators(const PGroup& g, const Subgroup& k);

}  // namespace zplat
