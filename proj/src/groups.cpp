#include "zplat/groups.hpp"

#include "zplat/error.hpp"

namespace zplat {

namespace {

Permutation cycle_perm(int degree, const std::vector<std::vector<int>>& cycles) {
  Permutation s(static_cast<std::size_t>(degree));
  for (int x = 0; x < degree; ++x) s[static_cast<std::size_t>(x)] = x;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) s[static_cast<std::size_t>(c[i])] = c[(i + 1) % c.size()];
  return s;
}

// Left multiplication on Q8 = {±1, ±i, ±j, ±k}; point 4*sign + unit.
Permutation quaternion_left(const int (&image)[4][2]) {
  Permutation s(8);
  for (int sign = 0; sign < 2; ++sign)
    for (int u = 0; u < 4; ++u) {
      const int v = image[u][0];
      const int flip = image[u][1] ^ sign;
      s[static_cast<std::size_t>(4 * sign + u)] = 4 * flip + v;
    }
  return s;
}

NamedGroup make(const std::string& name, const std::vector<Permutation>& gens, int degree,
                std::vector<std::string> names) {
  return NamedGroup{name, PGroup::from_permutations(gens, degree), std::move(names)};
}

}  // namespace

const std::vector<std::string>& bundled_group_names() {
  static const std::vector<std::string> names{"c2", "c4", "c8", "c2xc2", "d4", "q8", "c3xc3", "heisenberg3"};
  return names;
}

NamedGroup bundled_group(const std::string& name) {
  if (name == "c2") return make(name, {cycle_perm(2, {{0, 1}})}, 2, {"g"});
  if (name == "c4") return make(name, {cycle_perm(4, {{0, 1, 2, 3}})}, 4, {"g"});
  if (name == "c8") return make(name, {cycle_perm(8, {{0, 1, 2, 3, 4, 5, 6, 7}})}, 8, {"g"});
  if (name == "c2xc2")
    return make(name, {cycle_perm(4, {{0, 1}, {2, 3}}), cycle_perm(4, {{0, 2}, {1, 3}})}, 4, {"c1", "c2"});
  if (name == "d4") return make(name, {cycle_perm(4, {{0, 1, 2, 3}}), cycle_perm(4, {{0, 2}})}, 4, {"r", "s"});
  if (name == "q8") {
    // units 1, i, j, k; each row: (unit, sign) of i*u or j*u
    const int left_i[4][2] = {{1, 0}, {0, 1}, {3, 0}, {2, 1}};
    const int left_j[4][2] = {{2, 0}, {3, 1}, {0, 1}, {1, 0}};
    return make(name, {quaternion_left(left_i), quaternion_left(left_j)}, 8, {"i", "j"});
  }
  if (name == "c3xc3") return make(name, {cycle_perm(6, {{0, 1, 2}}), cycle_perm(6, {{3, 4, 5}})}, 6, {"a", "b"});
  if (name == "heisenberg3") {
    // affine maps of F_3^2, point x + 3y: s(x, y) = (x + y, y), t(x, y) = (x, y + 1)
    Permutation s(9), t(9);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        s[static_cast<std::size_t>(x + 3 * y)] = (x + y) % 3 + 3 * y;
        t[static_cast<std::size_t>(x + 3 * y)] = x + 3 * ((y + 1) % 3);
      }
    return make(name, {s, t}, 9, {"s", "t"});
  }
  throw Error(ErrorCode::InvalidArgument, "unknown group '" + name + "'");
}

}  // namespace zplat
