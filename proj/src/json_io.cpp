#include "zplat/json_io.hpp"

#include "zplat/error.hpp"
#include "zplat/groups.hpp"

#include <set>

namespace zplat {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Schema, (where.empty() ? "/" : where) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where + "/" + key, "missing field");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

void check_schema(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (const auto it = j.find("schema"); it != j.end() && as_int(*it, where + "/schema") != kSchemaVersion)
    fail(where + "/schema", "unsupported schema version");
}

Integer as_integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      fail(where, "expected an integer string");
    return Integer(s);
  }
  fail(where, "expected an integer");
}

Json integer_to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(x));
  return Json(x.str());
}

std::vector<std::vector<int>> cycles_of(const Permutation& s) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(s.size(), false);
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (seen[x] || s[x] == static_cast<int>(x)) continue;
    std::vector<int> c;
    for (auto y = x; !seen[y]; y = static_cast<std::size_t>(s[y])) {
      seen[y] = true;
      c.push_back(static_cast<int>(y));
    }
    out.push_back(std::move(c));
  }
  return out;
}

GroupSpec resolve_group(const Json& j, const std::string& where, const GroupSpec* known) {
  if (j.is_object()) return group_from_json(j);
  if (!j.is_string()) fail(where, "expected a group name or an inline group");
  const auto& name = j.get_ref<const std::string&>();
  if (known && known->name == name) return *known;
  for (const auto& b : bundled_group_names())
    if (b == name) return bundled_group_spec(name);
  fail(where, "unknown group '" + name + "'");
}

Subgroup subgroup_in(const PGroup& g, const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of elements");
  std::vector<int> elems;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::int64_t x = as_int(j[i], where + "/" + std::to_string(i));
    if (x < 0 || x >= g.order()) fail(where + "/" + std::to_string(i), "element out of range");
    elems.push_back(static_cast<int>(x));
  }
  try {
    return subgroup_from_elements(g, elems);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

std::string provenance_name(CandidateSource s) { return s == CandidateSource::Supplied ? "supplied" : "canonical-search"; }

Subgroup relabel(const Subgroup& k, const std::vector<int>& to_parent) {
  if (to_parent.empty()) return k;
  Subgroup out;
  for (int x : k.elements) out.elements.push_back(to_parent[static_cast<std::size_t>(x)]);
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

}  // namespace

GroupSpec bundled_group_spec(const std::string& name) {
  NamedGroup b = bundled_group(name);
  return GroupSpec{b.name, std::make_shared<const PGroup>(std::move(b.group)), std::move(b.generator_names)};
}

GroupSpec group_from_json(const Json& j) {
  check_schema(j, "");
  const std::int64_t p = as_int(field(j, "p", ""), "/p");
  if (!is_prime(p)) fail("/p", "not a prime");
  const std::int64_t degree = as_int(field(j, "degree", ""), "/degree");
  if (degree < 1 || degree > 4096) fail("/degree", "degree out of range");
  const Json& gens = field(j, "generators", "");
  if (!gens.is_array() || gens.empty()) fail("/generators", "expected a nonempty list of generators");
  std::vector<Permutation> perms;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string where = "/generators/" + std::to_string(i);
    if (!gens[i].is_array()) fail(where, "expected a list of cycles");
    Permutation s(static_cast<std::size_t>(degree));
    for (std::int64_t x = 0; x < degree; ++x) s[static_cast<std::size_t>(x)] = static_cast<int>(x);
    std::set<std::int64_t> moved;
    for (std::size_t c = 0; c < gens[i].size(); ++c) {
      const Json& cyc = gens[i][c];
      const std::string cw = where + "/" + std::to_string(c);
      if (!cyc.is_array() || cyc.empty()) fail(cw, "expected a nonempty cycle");
      for (std::size_t t = 0; t < cyc.size(); ++t) {
        const std::int64_t a = as_int(cyc[t], cw + "/" + std::to_string(t));
        const std::int64_t b = as_int(cyc[(t + 1) % cyc.size()], cw);
        if (a < 0 || a >= degree) fail(cw + "/" + std::to_string(t), "point out of range");
        if (!moved.insert(a).second) fail(cw + "/" + std::to_string(t), "point repeated across cycles");
        s[static_cast<std::size_t>(a)] = static_cast<int>(b);
      }
    }
    perms.push_back(std::move(s));
  }
  PGroup g;
  try {
    g = PGroup::from_permutations(perms, static_cast<int>(degree));
  } catch (const Error& e) {
    fail("/generators", e.what());
  }
  if (g.order() == 1) fail("/generators", "the trivial group is not supported");
  if (g.p() != p) fail("/p", "group order is a power of " + std::to_string(g.p()));

  GroupSpec out;
  if (const auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) fail("/name", "expected a string");
    out.name = it->get<std::string>();
  }
  if (const auto it = j.find("generator_names"); it != j.end()) {
    if (!it->is_array() || it->size() != gens.size()) fail("/generator_names", "expected one name per generator");
    std::set<std::string> uniq;
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) fail("/generator_names/" + std::to_string(i), "expected a string");
      out.generator_names.push_back((*it)[i].get<std::string>());
      if (!uniq.insert(out.generator_names.back()).second) fail("/generator_names/" + std::to_string(i), "duplicate name");
    }
  } else {
    for (std::size_t i = 0; i < gens.size(); ++i) out.generator_names.push_back("g" + std::to_string(i));
  }
  // from_permutations lists the generators in input order after the identity,
  // except that repeated or trivial generators collapse.
  if (g.generators().size() != gens.size()) fail("/generators", "generators must be distinct and nontrivial");
  out.group = std::make_shared<const PGroup>(std::move(g));
  return out;
}

Json group_to_json(const GroupSpec& g) {
  Json gens = Json::array();
  for (int x : g.group->generators()) gens.push_back(cycles_of(g.group->permutations()[static_cast<std::size_t>(x)]));
  return Json{{"schema", kSchemaVersion}, {"name", g.name},     {"p", g.group->p()},
              {"degree", g.group->degree()}, {"generators", gens}, {"generator_names", g.generator_names},
              {"order", g.group->order()}};
}

Json matrix_to_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(integer_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : (j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : -1);
  IntMatrix a(rows, std::max<Eigen::Index>(cols, 0));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(rw, "rows must be lists of equal length");
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = as_integer(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
  }
  return a;
}

Json subgroup_to_json(const Subgroup& k) { return Json(k.elements); }

LatticeSpec lattice_from_json(const Json& j, const GroupSpec* known) {
  check_schema(j, "");
  GroupSpec g = resolve_group(field(j, "group", ""), "/group", known);
  const std::int64_t rank = as_int(field(j, "rank", ""), "/rank");
  if (rank < 0 || rank > 4096) fail("/rank", "rank out of range");
  const Json& action = field(j, "action", "");
  if (!action.is_object()) fail("/action", "expected an object keyed by generator name");
  for (const auto& [key, value] : action.items())
    if (std::find(g.generator_names.begin(), g.generator_names.end(), key) == g.generator_names.end())
      fail("/action/" + key, "no generator of that name");
  std::vector<IntMatrix> mats;
  for (const auto& name : g.generator_names) {
    const Json& m = field(action, name, "/action");
    IntMatrix a = matrix_from_json(m, "/action/" + name);
    if (a.rows() != rank || a.cols() != rank) fail("/action/" + name, "matrix is not rank x rank");
    mats.push_back(std::move(a));
  }
  try {
    Lattice l = Lattice::from_generators(g.group, mats);
    return LatticeSpec{std::move(g), std::move(l)};
  } catch (const Error& e) {
    fail("/action", e.what());
  }
}

Json lattice_to_json(const LatticeSpec& l) {
  Json action = Json::object();
  const auto& gens = l.group.group->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) action[l.group.generator_names[i]] = matrix_to_json(l.lattice.action(gens[i]));
  return Json{{"schema", kSchemaVersion}, {"group", l.group.name}, {"rank", l.lattice.rank()}, {"action", action}};
}

PresentationSpec presentation_from_json(const Json& j, const GroupSpec* known) {
  check_schema(j, "");
  GroupSpec g = resolve_group(field(j, "base", ""), "/base", known);
  const Json& edges = field(j, "edges", "");
  if (!edges.is_array()) fail("/edges", "expected a list");
  std::vector<std::pair<Subgroup, int>> parts;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const Subgroup k = subgroup_in(*g.group, field(edges[i], "subgroup", where), where + "/subgroup");
    const std::int64_t m = as_int(field(edges[i], "multiplicity", where), where + "/multiplicity");
    if (m < 1 || m > 4096) fail(where + "/multiplicity", "multiplicity must be positive");
    parts.emplace_back(k, static_cast<int>(m));
  }
  HnnPresentation pres;
  try {
    pres = make_presentation(g.group, parts);
  } catch (const Error& e) {
    fail("/edges", e.what());
  }
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (const auto it = edges[i].find("letters"); it != edges[i].end()) {
      const std::string where = "/edges/" + std::to_string(i) + "/letters";
      if (!it->is_array() || static_cast<int>(it->size()) != pres.edges[i].multiplicity)
        fail(where, "expected one name per letter");
      for (std::size_t t = 0; t < it->size(); ++t) {
        if (!(*it)[t].is_string()) fail(where + "/" + std::to_string(t), "expected a string");
        pres.edges[i].letters[t] = (*it)[t].get<std::string>();
      }
    }
  return PresentationSpec{std::move(g), std::move(pres)};
}

Json presentation_to_json(const PresentationSpec& p) {
  Json edges = Json::array();
  for (const auto& e : p.presentation.edges)
    edges.push_back({{"subgroup", subgroup_to_json(e.subgroup)}, {"multiplicity", e.multiplicity}, {"letters", e.letters}});
  Json relators = Json::array();
  for (const auto& r : p.presentation.relators())
    relators.push_back("[" + std::to_string(r.element) + ", " + p.presentation.edges[r.edge].letters[static_cast<std::size_t>(r.letter)] + "]");
  return Json{{"schema", kSchemaVersion}, {"base", p.base.name}, {"edges", edges}, {"relators", relators}};
}

Json certificate_to_json(const PermutationCertificate& c, const std::vector<int>& to_parent) {
  Json mult = Json::object();
  Json classes = Json::array();
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    const Subgroup k = relabel(c.classes[i], to_parent);
    mult[k.label()] = c.multiplicities[i];
    classes.push_back(subgroup_to_json(k));
  }
  return Json{{"schema", kSchemaVersion}, {"multiplicities", mult}, {"classes", classes}, {"basis", matrix_to_json(c.change_of_basis)}};
}

PermutationCertificate certificate_from_json(const Json& j, const PGroup& g) {
  check_schema(j, "");
  const Json& classes = field(j, "classes", "");
  const Json& mult = field(j, "multiplicities", "");
  if (!classes.is_array()) fail("/classes", "expected a list");
  if (!mult.is_object()) fail("/multiplicities", "expected an object");
  PermutationCertificate c;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string where = "/classes/" + std::to_string(i);
    c.classes.push_back(subgroup_in(g, classes[i], where));
    const std::string label = c.classes.back().label();
    const std::int64_t m = as_int(field(mult, label, "/multiplicities"), "/multiplicities/" + label);
    if (m < 0) fail("/multiplicities/" + label, "negative multiplicity");
    c.multiplicities.push_back(static_cast<int>(m));
  }
  c.change_of_basis = matrix_from_json(field(j, "basis", ""), "/basis");
  return c;
}

Json verdict_to_json(const Verdict& v) {
  Json out{{"verdict", v.is_permutation() ? "IsPermutation" : "NotPermutation"}};
  if (v.certificate) out["certificate"] = certificate_to_json(*v.certificate);
  if (v.witness)
    out["witness"] = Json{{"summand", matrix_to_json(v.witness->summand.basis)},
                          {"rank", v.witness->summand.rank()},
                          {"indecomposable", v.witness->indecomposable},
                          {"peeled", v.witness->peeled}};
  return out;
}

Json cp_split_to_json(const std::optional<CpSplit>& s, const Lattice& m, const Subgroup& c) {
  Json out{{"subgroup", subgroup_to_json(c)}};
  if (!s) {
    out["verdict"] = "NotPermutationOverC";
    return out;
  }
  const std::vector<int> to_parent = subgroup_as_group(m.group(), c).to_parent;
  out["verdict"] = "Split";
  out["trivial_part"] = Json{{"rank", s->m1.rank()}, {"basis", matrix_to_json(s->m1.basis)}, {"invariant", s->m1.invariant}};
  out["free_part"] = Json{{"rank", s->mp.rank()}, {"basis", matrix_to_json(s->mp.basis)}, {"invariant", s->mp.invariant}};
  out["certificate"] = certificate_to_json(s->certificate, to_parent);
  return out;
}

Json weiss_report_to_json(const WeissReport& r, const Lattice& m) {
  const PGroup& g = m.group();
  Json h1{{"status", status_name(r.hypothesis_i)}, {"detail", r.hypothesis_i_detail}, {"candidates_tried", r.candidates_tried}};
  if (r.restriction_certificate)
    h1["restriction_certificate"] = certificate_to_json(*r.restriction_certificate, subgroup_as_group(g, r.normal).to_parent);
  if (r.forced_rank >= 0) h1["forced_rank"] = r.forced_rank;
  if (r.trivial_part)
    h1["trivial_part"] = Json{{"basis", matrix_to_json(r.trivial_part->basis)},
                              {"rank", r.trivial_part->basis.cols()},
                              {"provenance", provenance_name(r.trivial_part->provenance)}};
  Json h2{{"status", status_name(r.hypothesis_ii)}, {"invariants_rank", r.invariants_rank}};
  if (r.invariants_certificate) {
    // quotient subgroups are reported by their preimages in G
    const QuotientGroup q = quotient_group(g, r.normal);
    Json cert = certificate_to_json(*r.invariants_certificate);
    Json mult = Json::object(), classes = Json::array();
    for (std::size_t i = 0; i < r.invariants_certificate->classes.size(); ++i) {
      Subgroup pre;
      for (int x = 0; x < g.order(); ++x)
        if (r.invariants_certificate->classes[i].contains(q.projection[static_cast<std::size_t>(x)])) pre.elements.push_back(x);
      mult[pre.label()] = r.invariants_certificate->multiplicities[i];
      classes.push_back(subgroup_to_json(pre));
    }
    cert["multiplicities"] = mult;
    cert["classes"] = classes;
    h2["invariants_certificate"] = cert;
  }
  return Json{{"schema", kSchemaVersion},  {"theorem", r.theorem},          {"normal", subgroup_to_json(r.normal)},
              {"hypothesis_i", h1},        {"hypothesis_ii", h2},           {"conclusion", verdict_to_json(r.conclusion)},
              {"consistent", r.consistent}, {"hypotheses_hold", r.hypotheses_hold()}};
}

Json necessity_to_json(const NecessityReport& r, const Subgroup& n) {
  return Json{{"schema", kSchemaVersion},
              {"normal", subgroup_to_json(n)},
              {"certificate", certificate_to_json(r.certificate)},
              {"trivial_part", Json{{"rank", r.trivial_part.rank()}, {"basis", matrix_to_json(r.trivial_part.basis)}}},
              {"hypothesis_i", r.hypothesis_i},
              {"hypothesis_ii", r.hypothesis_ii},
              {"passed", r.passed()}};
}

Json roundtrip_to_json(const RoundtripResult& r) {
  Json out{{"roundtrip", r.ok}, {"kernel_rank", integer_to_json(r.kernel_rank)}, {"abelianization_rank", r.abelianization_rank}};
  if (r.recovered) out["recovered"] = certificate_to_json(*r.recovered);
  return out;
}

Json free_product_to_json(const FreeProductPresentation& f, const GroupSpec& base) {
  return Json{{"finite_factor", base.name}, {"free_rank", f.free_rank}};
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Schema, source + ": " + e.what());
  }
}

}  // namespace zplat
