#pragma once

// Named inputs shipped with the library: the bundled groups, their regular
// and trivial lattices, and a few small lattices used throughout the tests.

#include "zplat/json_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zplat {

struct Fixture {
  std::string name;
  std::string description;
  GroupSpec group;
  std::optional<Lattice> lattice;         // absent for group fixtures
  std::optional<Subgroup> default_normal;  // used by the Weiss verbs when none is given
};

std::vector<std::string> fixture_names();
/// Throws InvalidArgument for an unknown name.
Fixture load_fixture(const std::string& name);

/// The rank-3 lattice over C2 x C2 on x, a, b with c1 swapping a and b and
/// c2 sending x to x + a + b and negating a and b.
Lattice example_lattice(const GroupPtr& c2xc2);

}  // namespace zplat
