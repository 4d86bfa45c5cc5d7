#include "doctest.h"

#include "zplat/error.hpp"
#include "zplat/fixtures.hpp"

#include <set>

using namespace zplat;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("fixtures") {
  const auto names = fixture_names();
  for (const std::string n : {"paper-example", "sign-c2", "c2-mixed", "regular-q8", "trivial-d4", "heisenberg3"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK(load_fixture("regular-q8").lattice->rank() == 8);
  CHECK(load_fixture("c2-mixed").lattice->rank() == 5);
  CHECK_THROWS_AS(load_fixture("nope"), Error);

  // order of heisenberg3 by closing its generators as raw permutations
  const Fixture h = load_fixture("heisenberg3");
  std::set<Permutation> seen;
  std::vector<Permutation> todo;
  Permutation id(9);
  for (int i = 0; i < 9; ++i) id[static_cast<std::size_t>(i)] = i;
  seen.insert(id);
  todo.push_back(id);
  while (!todo.empty()) {
    const Permutation x = todo.back();
    todo.pop_back();
    for (int g : h.group.group->generators()) {
      const Permutation& s = h.group.group->permutations()[static_cast<std::size_t>(g)];
      Permutation y(9);
      for (std::size_t i = 0; i < 9; ++i) y[i] = s[static_cast<std::size_t>(x[i])];
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  CHECK(seen.size() == 27);
  CHECK(h.group.group->order() == 27);

  // the example action, as written out on x, a, b
  const Lattice ex = *load_fixture("paper-example").lattice;
  const auto& g = ex.group();
  IntVector x(3), a(3), b(3);
  x << 1, 0, 0;
  a << 0, 1, 0;
  b << 0, 0, 1;
  const IntMatrix& c1 = ex.action(g.generators()[0]);
  const IntMatrix& c2 = ex.action(g.generators()[1]);
  CHECK(c1 * x == x);
  CHECK(c1 * a == b);
  CHECK(c1 * b == a);
  CHECK(c2 * x == IntVector(x + a + b));
  CHECK(c2 * a == IntVector(-a));
  CHECK(c2 * b == IntVector(-b));
}

TEST_CASE("group and lattice json roundtrip") {
  for (const auto& name : {"c2xc2", "q8", "heisenberg3"}) {
    const GroupSpec g = bundled_group_spec(name);
    const Json j = group_to_json(g);
    CHECK(j["schema"] == 1);
    const GroupSpec back = group_from_json(j);
    CHECK(back.group->table() == g.group->table());
    CHECK(back.generator_names == g.generator_names);
    const LatticeSpec l{g, permutation_lattice(g.group, trivial_subgroup(*g.group))};
    const LatticeSpec lb = lattice_from_json(lattice_to_json(l));
    CHECK(lb.lattice.actions() == l.lattice.actions());
  }
  // an inline group
  const Json inline_lattice = parse_json(
      R"({"schema":1,"group":{"p":2,"degree":2,"generators":[[[0,1]]],"generator_names":["t"]},"rank":1,"action":{"t":[[-1]]}})",
      "inline");
  CHECK(lattice_from_json(inline_lattice).lattice.action(1)(0, 0) == -1);
  // big entries travel as strings
  IntMatrix big(1, 1);
  big(0, 0) = Integer("123456789012345678901234567890");
  CHECK(matrix_from_json(matrix_to_json(big), "") == big);
}

TEST_CASE("schema errors carry pointers") {
  CHECK(error_of([] { parse_json("{", "input"); }).find("input") != std::string::npos);
  CHECK(error_of([] { lattice_from_json(Json{{"group", "c2"}, {"rank", 1}}); }).find("/action") != std::string::npos);
  CHECK(error_of([] { lattice_from_json(Json{{"group", "c9"}, {"rank", 1}, {"action", Json::object()}}); })
            .find("/group") != std::string::npos);
  CHECK(error_of([] {
          lattice_from_json(parse_json(R"({"group":"c2","rank":2,"action":{"g":[[1,0],[0]]}})", "x"));
        }).find("/action/g/1") != std::string::npos);
  CHECK(error_of([] { lattice_from_json(parse_json(R"({"group":"c2","rank":1,"action":{"g":[[2]]}})", "x")); })
            .find("/action") != std::string::npos);
  CHECK(error_of([] { lattice_from_json(parse_json(R"({"schema":2,"group":"c2","rank":1,"action":{"g":[[1]]}})", "x")); })
            .find("/schema") != std::string::npos);
  CHECK(error_of([] { group_from_json(parse_json(R"({"p":3,"degree":2,"generators":[[[0,1]]]})", "x")); })
            .find("/p") != std::string::npos);
  CHECK(error_of([] { group_from_json(parse_json(R"({"p":2,"degree":3,"generators":[[[0,1,2]]]})", "x")); })
            .find("/p") != std::string::npos);
  CHECK(error_of([] { group_from_json(parse_json(R"({"p":2,"degree":2,"generators":[[[0,5]]]})", "x")); })
            .find("/generators/0/0") != std::string::npos);
  CHECK(error_of([] {
          presentation_from_json(parse_json(R"({"base":"c2","edges":[{"subgroup":[0,1],"multiplicity":0}]})", "x"));
        }).find("/edges/0/multiplicity") != std::string::npos);
  CHECK(error_of([] {
          presentation_from_json(parse_json(R"({"base":"c4","edges":[{"subgroup":[0,1],"multiplicity":1}]})", "x"));
        }).find("/edges/0/subgroup") != std::string::npos);
}

TEST_CASE("presentation and certificate json") {
  const PresentationSpec p = presentation_from_json(
      parse_json(R"({"schema":1,"base":"c2","edges":[{"subgroup":[0,1],"multiplicity":1},{"subgroup":[0],"multiplicity":2}]})", "x"));
  CHECK(kernel_rank(p.presentation) == 5);
  const Json back = presentation_to_json(p);
  CHECK(back["relators"].size() == 1);
  CHECK(presentation_from_json(back).presentation.edges.size() == 2);

  const Fixture f = load_fixture("c2-mixed");
  const PrecisionContext ctx(2);
  const Verdict v = recognize_permutation(*f.lattice, ctx);
  REQUIRE(v.is_permutation());
  const PermutationCertificate c = certificate_from_json(certificate_to_json(*v.certificate), f.lattice->group());
  CHECK(c.labelled() == v.certificate->labelled());
  CHECK(verify_certificate(*f.lattice, c, ctx));
}
