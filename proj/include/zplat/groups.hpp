#pragma once

// The bundled example groups, all given as permutation groups.

#include "zplat/pgroup.hpp"

#include <string>
#include <vector>

namespace zplat {

struct NamedGroup {
  std::string name;
  PGroup group;
  std::vector<std::string> generator_names;  // parallel to group.generators()
};

/// c2, c4, c8, c2xc2, d4, q8, c3xc3, heisenberg3
const std::vector<std::string>& bundled_group_names();
/// Throws InvalidArgument for an unknown name.
NamedGroup bundled_group(const std::string& name);

}  // namespace zplat
