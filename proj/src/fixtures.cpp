#include "zplat/fixtures.hpp"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"

namespace zplat {

Lattice example_lattice(const GroupPtr& c2xc2) {
  IntMatrix c1(3, 3), c2(3, 3);
  c1 << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  c2 << 1, 0, 0, 1, -1, 0, 1, 0, -1;
  return Lattice::from_generators(c2xc2, {c1, c2});
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out{"paper-example", "sign-c2", "c2-mixed"};
  for (const auto& g : bundled_group_names()) {
    out.push_back(g);
    out.push_back("regular-" + g);
    out.push_back("trivial-" + g);
  }
  return out;
}

Fixture load_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  auto with_group = [&](const std::string& g) { f.group = bundled_group_spec(g); };
  if (name == "paper-example") {
    with_group("c2xc2");
    f.description = "rank-3 lattice over C2 x C2 that is not permutation although both Weiss inputs look permutation";
    f.lattice = example_lattice(f.group.group);
    f.default_normal = generated_subgroup(*f.group.group, {f.group.group->generators()[0]});
    return f;
  }
  if (name == "sign-c2") {
    with_group("c2");
    f.description = "rank-1 sign lattice over C2";
    f.lattice = Lattice::from_generators(f.group.group, {IntMatrix::Constant(1, 1, Integer(-1))});
    return f;
  }
  if (name == "c2-mixed") {
    with_group("c2");
    f.description = "Z + Z[C2] + Z[C2] over C2";
    const Lattice reg = permutation_lattice(f.group.group, trivial_subgroup(*f.group.group));
    f.lattice = direct_sum({Lattice::trivial(f.group.group, 1), reg, reg}, f.group.group);
    return f;
  }
  for (const auto& g : bundled_group_names()) {
    if (name == g) {
      with_group(g);
      f.description = "bundled group " + g;
      return f;
    }
    if (name == "regular-" + g) {
      with_group(g);
      f.description = "regular lattice over " + g;
      f.lattice = permutation_lattice(f.group.group, trivial_subgroup(*f.group.group));
      return f;
    }
    if (name == "trivial-" + g) {
      with_group(g);
      f.description = "rank-1 trivial lattice over " + g;
      f.lattice = Lattice::trivial(f.group.group, 1);
      return f;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + name + "'");
}

}  // namespace zplat
