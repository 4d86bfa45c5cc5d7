#pragma once

// JSON input and output. Every document carries "schema": 1; readers report
// problems as Schema errors whose message starts with a JSON pointer.

#include "zplat/hnn.hpp"
#include "zplat/weiss.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace zplat {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A group together with the names its generators go by in lattice files.
struct GroupSpec {
  std::string name;
  GroupPtr group;
  std::vector<std::string> generator_names;
};

GroupSpec bundled_group_spec(const std::string& name);

/// { "schema": 1, "name": s?, "p": int, "degree": int, "generators": [[cycle, ...], ...],
///   "generator_names": [s, ...]? }
GroupSpec group_from_json(const Json& j);
Json group_to_json(const GroupSpec& g);

/// { "schema": 1, "group": <name or inline group>, "rank": int,
///   "action": { "<generator name>": [[row], ...] } }.
/// A string group resolves to `known` when the names agree, else to a bundled group.
struct LatticeSpec {
  GroupSpec group;
  Lattice lattice;
};
LatticeSpec lattice_from_json(const Json& j, const GroupSpec* known = nullptr);
Json lattice_to_json(const LatticeSpec& l);

/// { "schema": 1, "base": <name or inline group>, "edges": [{ "subgroup": [elements],
///   "multiplicity": m, "letters": [s, ...]? }] }
struct PresentationSpec {
  GroupSpec base;
  HnnPresentation presentation;
};
PresentationSpec presentation_from_json(const Json& j, const GroupSpec* known = nullptr);
Json presentation_to_json(const PresentationSpec& p);

Json matrix_to_json(const IntMatrix& a);  // list of rows
IntMatrix matrix_from_json(const Json& j, const std::string& where);
Json subgroup_to_json(const Subgroup& k);

/// { "schema": 1, "multiplicities": {label: m}, "classes": [[elements]], "basis": [[row]] }.
/// `to_parent` relabels subgroup elements (restriction certificates); empty means identity.
Json certificate_to_json(const PermutationCertificate& c, const std::vector<int>& to_parent = {});
PermutationCertificate certificate_from_json(const Json& j, const PGroup& g);

Json verdict_to_json(const Verdict& v);
Json cp_split_to_json(const std::optional<CpSplit>& s, const Lattice& m, const Subgroup& c);
Json weiss_report_to_json(const WeissReport& r, const Lattice& m);
Json necessity_to_json(const NecessityReport& r, const Subgroup& n);
Json roundtrip_to_json(const RoundtripResult& r);
Json free_product_to_json(const FreeProductPresentation& f, const GroupSpec& base);

/// Parses text, turning syntax errors into Schema errors.
Json parse_json(const std::string& text, const std::string& source);

}  // namespace zplat
