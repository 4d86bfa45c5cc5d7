// Batch front end: load a fixture or JSON files, run one verb, print one JSON
// report. Exit status 0 when a verdict was computed, 1 on input errors, 2 when
// the analysis is inconclusive or runs out of precision.

#include "zplat/error.hpp"
#include "zplat/fixtures.hpp"
#include "zplat/suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace zplat;

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kVerbs{"recognize",  "cp-split",       "weiss-classic", "weiss-generalized", "necessity",
                                      "hnn-synthesize", "hnn-roundtrip", "subgroups",     "selftest"};

struct Options {
  std::string verb;
  std::int64_t p = 0;
  int cap = 64;
  std::uint64_t seed = 0;
  std::string fixture, group_file, lattice_file, out_file, candidate_file, presentation_file;
  std::vector<int> normal, subgroup;
  bool timings = false, quick = false, list_fixtures = false;
};

struct Inconclusive {};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inputs resolved from --fixture or --group/--lattice.
struct Inputs {
  GroupSpec group;
  std::optional<Lattice> lattice;
  std::optional<Subgroup> default_normal;
  Json echo = Json::object();
};

Inputs load_inputs(const Options& o, bool need_lattice) {
  Inputs in;
  if (!o.fixture.empty()) {
    if (!o.group_file.empty() || !o.lattice_file.empty())
      throw Error(ErrorCode::InvalidArgument, "--fixture excludes --group and --lattice");
    Fixture f = load_fixture(o.fixture);
    in.group = f.group;
    in.lattice = f.lattice;
    in.default_normal = f.default_normal;
    in.echo["fixture"] = o.fixture;
  } else {
    std::optional<GroupSpec> g;
    if (!o.group_file.empty()) {
      g = group_from_json(parse_json(read_file(o.group_file), o.group_file));
      in.echo["group"] = o.group_file;
    }
    if (!o.lattice_file.empty()) {
      LatticeSpec l = lattice_from_json(parse_json(read_file(o.lattice_file), o.lattice_file), g ? &*g : nullptr);
      in.group = l.group;
      in.lattice = std::move(l.lattice);
      in.echo["lattice"] = o.lattice_file;
    } else if (g) {
      in.group = *g;
    } else if (o.presentation_file.empty()) {
      throw Error(ErrorCode::InvalidArgument, "give --fixture, or --group and/or --lattice");
    }
  }
  if (need_lattice && !in.lattice) throw Error(ErrorCode::InvalidArgument, "this verb needs a lattice");
  return in;
}

// The prime the run actually uses; --p, when given, must agree with it.
std::int64_t resolve_prime(const Options& o, const GroupSpec& g) {
  if (o.p != 0 && o.p != g.group->p())
    throw Error(ErrorCode::InvalidArgument,
                "--p " + std::to_string(o.p) + " does not match the group's prime " + std::to_string(g.group->p()));
  return g.group->p();
}

Subgroup pick_subgroup(const Inputs& in, const std::vector<int>& given, bool prefer_default) {
  const PGroup& g = *in.group.group;
  if (!given.empty()) return subgroup_from_elements(g, given);
  if (prefer_default && in.default_normal) return *in.default_normal;
  if (g.order() == g.p()) return whole_group(g);
  return central_order_p_subgroups(g).front();
}

Json run(const Options& o, int& status, std::int64_t& prime) {
  const bool group_only = o.verb == "subgroups";
  if (o.verb == "selftest") {
    SuiteConfig cfg;
    cfg.seed = o.seed;
    if (o.quick) {
      cfg.recognition_cases = cfg.weiss_cases = 10;
      cfg.hnn_cases = 5;
      cfg.max_rank = 24;
    }
    const auto results = run_suites(cfg);
    Json out = Json::array();
    bool all = true;
    for (const auto& r : results) {
      std::cerr << summary_line(r) << "\n";
      Json j{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"cases", r.cases}, {"failures", r.failures}};
      if (!r.detail.empty()) j["detail"] = r.detail;
      if (o.timings) j["seconds"] = r.seconds;
      out.push_back(std::move(j));
      all = all && r.passed;
    }
    status = all ? 0 : 2;
    return Json{{"suites", out}, {"passed", all}};
  }

  if (o.verb == "hnn-roundtrip" && !o.presentation_file.empty()) {
    std::optional<GroupSpec> g;
    if (!o.group_file.empty()) g = group_from_json(parse_json(read_file(o.group_file), o.group_file));
    const PresentationSpec ps = presentation_from_json(parse_json(read_file(o.presentation_file), o.presentation_file),
                                                       g ? &*g : nullptr);
    prime = resolve_prime(o, ps.base);
    const PrecisionContext ctx(prime, o.cap);
    PermutationCertificate cert;
    cert.classes = canonical_classes(*ps.base.group);
    cert.multiplicities.assign(cert.classes.size(), 0);
    const SubgroupClassification cls = classify_subgroups(*ps.base.group);
    for (const auto& e : ps.presentation.edges)
      for (std::size_t i = 0; i < cert.classes.size(); ++i)
        if (cls.class_index(cert.classes[i]) == cls.class_index(e.subgroup)) cert.multiplicities[i] += e.multiplicity;
    const RoundtripResult rt = roundtrip(cert, ps.base.group, ctx);
    Json out = roundtrip_to_json(rt);
    out["presentation"] = presentation_to_json(ps);
    return out;
  }

  const Inputs in = load_inputs(o, !group_only);
  prime = resolve_prime(o, in.group);
  const PrecisionContext ctx(prime, o.cap);

  if (o.verb == "subgroups") {
    const SubgroupClassification cls = classify_subgroups(*in.group.group);
    Json subs = Json::array();
    for (std::size_t i = 0; i < cls.all_subgroups.size(); ++i) {
      const Subgroup& k = cls.all_subgroups[i];
      subs.push_back({{"elements", subgroup_to_json(k)},
                      {"order", k.order()},
                      {"normal", k.is_normal},
                      {"class", cls.class_of[i]}});
    }
    Json classes = Json::array();
    for (std::size_t c = 0; c < cls.class_reps.size(); ++c)
      classes.push_back({{"representative", subgroup_to_json(cls.class_reps[c])}, {"size", cls.class_size[c]}});
    return Json{{"group", group_to_json(in.group)}, {"subgroups", subs}, {"classes", classes}};
  }

  const Lattice& m = *in.lattice;
  if (o.verb == "recognize") {
    Json out = verdict_to_json(recognize_permutation(m, ctx));
    out["rank"] = m.rank();
    return out;
  }
  if (o.verb == "cp-split") {
    const Subgroup c = pick_subgroup(in, o.subgroup, false);
    return cp_split_to_json(cp_split(m, c, ctx), m, c);
  }
  if (o.verb == "weiss-classic") {
    const Subgroup n = pick_subgroup(in, o.normal, true);
    return weiss_report_to_json(check_weiss_classic(m, n, ctx), m);
  }
  if (o.verb == "weiss-generalized") {
    const Subgroup n = pick_subgroup(in, o.normal, true);
    std::optional<TrivialPartCandidate> cand;
    if (!o.candidate_file.empty()) {
      const Json j = parse_json(read_file(o.candidate_file), o.candidate_file);
      if (!j.is_object() || !j.contains("basis")) throw Error(ErrorCode::Schema, "/basis: missing field");
      IntMatrix basis = matrix_from_json(j["basis"], "/basis");
      // an empty list means the zero sublattice
      if (basis.rows() == 0) basis = IntMatrix(m.rank(), 0);
      cand = TrivialPartCandidate{basis};
    }
    const WeissReport r = check_weiss_generalized(m, n, cand, ctx);
    if (r.hypothesis_i == HypothesisStatus::Inconclusive) status = 2;
    return weiss_report_to_json(r, m);
  }
  if (o.verb == "necessity") {
    const Subgroup n = pick_subgroup(in, o.normal, true);
    return necessity_to_json(necessity_check(m, n, ctx), n);
  }
  if (o.verb == "hnn-synthesize" || o.verb == "hnn-roundtrip") {
    const Verdict v = recognize_permutation(m, ctx);
    if (!v.is_permutation()) throw Error(ErrorCode::PreconditionFailed, "lattice is not a permutation lattice");
    if (o.verb == "hnn-roundtrip") {
      Json out = roundtrip_to_json(roundtrip(*v.certificate, in.group.group, ctx));
      out["certificate"] = certificate_to_json(*v.certificate);
      return out;
    }
    const PresentationSpec ps{in.group, synthesize_hnn(*v.certificate, in.group.group)};
    return Json{{"certificate", certificate_to_json(*v.certificate)},
                {"presentation", presentation_to_json(ps)},
                {"kernel_rank", static_cast<std::int64_t>(kernel_rank(ps.presentation))},
                {"free_product_quotient", free_product_to_json(quotient_kill_nontrivial_edges(ps.presentation), in.group)}};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown verb " + o.verb);
}

int exit_code_for(ErrorCode c) {
  return c == ErrorCode::PrecisionExhausted || c == ErrorCode::InternalInconsistency ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with integral p-adic representations of finite p-groups"};
  app.set_version_flag("--version", kVersion);
  Options o;
  app.add_option("verb", o.verb, "what to run")->check(CLI::IsMember(kVerbs));
  app.add_option("--p", o.p, "expected prime; must match the input group");
  app.add_option("--cap", o.cap, "p-adic precision cap")->capture_default_str()->check(CLI::Range(1, 4096));
  app.add_option("--seed", o.seed, "seed for the randomized parts")->capture_default_str();
  app.add_option("--fixture", o.fixture, "named fixture (see --list-fixtures)");
  app.add_option("--group", o.group_file, "group JSON file");
  app.add_option("--lattice", o.lattice_file, "lattice JSON file");
  app.add_option("--presentation", o.presentation_file, "presentation JSON file (hnn-roundtrip)");
  app.add_option("--candidate", o.candidate_file, "trivial-part candidate JSON file (weiss-generalized)");
  app.add_option("--normal", o.normal, "elements of the normal subgroup N")->delimiter(',');
  app.add_option("--subgroup", o.subgroup, "elements of the subgroup C (cp-split)")->delimiter(',');
  app.add_option("--out", o.out_file, "write the report here instead of standard output");
  app.add_flag("--timings", o.timings, "include timings (reports are then no longer byte-stable)");
  app.add_flag("--quick", o.quick, "smaller selftest");
  app.add_flag("--list-fixtures", o.list_fixtures, "list fixture names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (o.list_fixtures) {
    Json list = Json::array();
    for (const auto& n : fixture_names()) {
      const Fixture f = load_fixture(n);
      list.push_back({{"name", n}, {"description", f.description}, {"order", f.group.group->order()},
                      {"rank", f.lattice ? Json(f.lattice->rank()) : Json(nullptr)}});
    }
    std::cout << list.dump(2) << "\n";
    return 0;
  }
  if (o.verb.empty()) {
    std::cerr << "a verb is required; see --help\n";
    return 1;
  }

  int status = 0;
  Json report{{"schema", kSchemaVersion},
              {"tool", "zplat"},
              {"version", kVersion},
              {"command", o.verb},
              {"options", {{"p", o.p}, {"cap", o.cap}, {"seed", o.seed}}}};
  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t prime = o.p;
  try {
    report["result"] = run(o, status, prime);
  } catch (const Error& e) {
    std::cerr << "zplat: " << e.what() << "\n";
    report["error"] = {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
    status = exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "zplat: " << e.what() << "\n";
    report["error"] = {{"code", "InvalidArgument"}, {"message", e.what()}};
    status = 1;
  }
  report["options"]["p"] = prime;
  if (o.timings)
    report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string text = report.dump(2) + "\n";
  if (o.out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.out_file);
    if (!out) {
      std::cerr << "zplat: cannot write " << o.out_file << "\n";
      return 1;
    }
    out << text;
  }
  return status;
}
