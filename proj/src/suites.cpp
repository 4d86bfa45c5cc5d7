#include "zplat/suites.hpp"

#include "zplat/error.hpp"
#include "zplat/fixtures.hpp"
#include "zplat/groups.hpp"
#include "zplat/random.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <thread>

namespace zplat {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t case_seed(std::uint64_t seed, int suite, std::size_t group, int trial) {
  return splitmix(splitmix(splitmix(seed) ^ static_cast<std::uint64_t>(suite)) ^ (group << 20) ^
                  static_cast<std::uint64_t>(trial));
}

std::string digest(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) h = (h ^ c) * 0x100000001b3ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct GroupCase {
  std::string name;
  GroupPtr group;
  std::vector<Subgroup> classes;
  std::vector<int> index;  // [G : K] per class
};

std::vector<GroupCase> all_groups() {
  std::vector<GroupCase> out;
  for (const auto& name : bundled_group_names()) {
    GroupCase c{name, bundled_group_spec(name).group, {}, {}};
    c.classes = canonical_classes(*c.group);
    for (const auto& k : c.classes) c.index.push_back(c.group->order() / k.order());
    out.push_back(std::move(c));
  }
  return out;
}

// Random multiplicities on the allowed classes, total rank at most max_rank
// and at least one summand.
std::vector<int> random_multiplicities(const GroupCase& g, const std::vector<bool>& allowed, Rng& rng, int max_rank) {
  const std::size_t n = g.classes.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
  std::vector<int> m(n, 0);
  int rank = 0;
  for (std::size_t i : order) {
    if (!allowed[i]) continue;
    int k = static_cast<int>(rng.uniform(0, 3));
    while (k > 0 && rank + k * g.index[i] > max_rank) --k;
    m[i] = k;
    rank += k * g.index[i];
  }
  if (rank == 0)
    for (std::size_t i = 0; i < n; ++i)
      if (allowed[i] && g.index[i] <= max_rank) {
        m[i] = 1;
        break;
      }
  return m;
}

struct Built {
  Lattice lattice;
  IntMatrix front;  // the first `front_cols` permutation basis vectors, in new coordinates
};

// Sum of Z[G/K]^{m_K}, classes flagged `first` placed first, then scrambled.
Built build(const GroupCase& g, const std::vector<int>& m, const std::vector<bool>& first, Rng& rng) {
  std::vector<Lattice> parts;
  Eigen::Index front = 0;
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
      if (first[i] != (pass == 0)) continue;
      for (int c = 0; c < m[i]; ++c) {
        parts.push_back(permutation_lattice(g.group, g.classes[i]));
        if (pass == 0) front += g.index[i];
      }
    }
  const Lattice sum = direct_sum(parts, g.group);
  const Scramble s = random_unimodular(sum.rank(), rng);
  return Built{sum.change_basis(s.S, s.S_inverse), s.S_inverse.leftCols(front)};
}

// Necessity results gathered while suites 2 to 4 run.
struct NecessityLog {
  std::size_t cases = 0, failures = 0;
  double seconds = 0;
  std::string detail;
  Json records = Json::array();

  void check(const std::string& where, const Lattice& m, const Subgroup& n, const PermutationCertificate& cert,
             const PrecisionContext& ctx) {
    const auto t0 = Clock::now();
    bool ok = false;
    std::string why;
    try {
      const NecessityReport r = necessity_check(m, n, cert, ctx);
      ok = r.passed();
      if (!ok) why = r.hypothesis_i ? "hypothesis (ii) failed" : "hypothesis (i) failed";
      records.push_back(Json::array({where, n.label(), r.trivial_part.rank(), ok}));
    } catch (const Error& e) {
      why = e.what();
      records.push_back(Json::array({where, n.label(), -1, false}));
    }
    seconds += since(t0);
    ++cases;
    if (!ok) {
      ++failures;
      if (detail.empty()) detail = where + ": " + why;
    }
  }

  void merge(const NecessityLog& o) {
    cases += o.cases;
    failures += o.failures;
    seconds += o.seconds;
    if (detail.empty()) detail = o.detail;
    for (const auto& r : o.records) records.push_back(r);
  }
};

// Per-group partial results of a suite, merged in group order.
struct Partial {
  std::size_t cases = 0, failures = 0;
  std::string detail;
  Json report = Json::array();
  NecessityLog necessity;

  void record(bool ok, const std::string& where, const std::string& why, Json entry) {
    ++cases;
    if (!ok) {
      ++failures;
      if (detail.empty()) detail = where + ": " + why;
    }
    report.push_back(std::move(entry));
  }
};

SuiteResult finish(int id, std::string name, double limit, Clock::time_point t0, std::vector<Partial>& parts,
                   const std::vector<GroupCase>& groups, NecessityLog* necessity) {
  SuiteResult r;
  r.id = id;
  r.name = std::move(name);
  r.limit_seconds = limit;
  r.report = Json::object();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    r.cases += parts[i].cases;
    r.failures += parts[i].failures;
    if (r.detail.empty()) r.detail = parts[i].detail;
    r.report[groups[i].name] = parts[i].report;
    if (necessity) necessity->merge(parts[i].necessity);
  }
  // necessity checks run inline but are timed under suite 5; with several
  // threads this subtraction is approximate
  double inline_seconds = 0;
  for (const auto& p : parts) inline_seconds += p.necessity.seconds;
  r.seconds = std::max(0.0, since(t0) - inline_seconds);
  r.passed = r.failures == 0 && r.cases > 0;
  return r;
}

std::string where_of(const GroupCase& g, int trial) { return g.name + "#" + std::to_string(trial); }

// 1. The example over C2 x C2.
SuiteResult suite_example() {
  const auto t0 = Clock::now();
  SuiteResult r;
  r.id = 1;
  r.name = "example-fidelity";
  r.limit_seconds = 1;
  const Fixture f = load_fixture("paper-example");
  const Lattice& m = *f.lattice;
  const Subgroup& n = *f.default_normal;
  const PrecisionContext ctx(2);
  const WeissReport w = check_weiss_classic(m, n, ctx);

  std::vector<std::string> problems;
  // restriction: one trivial and one regular summand over N
  if (!w.restriction_certificate) {
    problems.push_back("restriction not recognized");
  } else {
    for (std::size_t i = 0; i < w.restriction_certificate->classes.size(); ++i)
      if (w.restriction_certificate->multiplicities[i] != 1) problems.push_back("restriction multiplicities differ");
  }
  // invariants: the regular lattice of G/N
  if (!w.invariants_certificate) {
    problems.push_back("invariants not recognized");
  } else {
    for (std::size_t i = 0; i < w.invariants_certificate->classes.size(); ++i)
      if (w.invariants_certificate->multiplicities[i] != (w.invariants_certificate->classes[i].order() == 1 ? 1 : 0))
        problems.push_back("invariants multiplicities differ");
  }
  if (w.conclusion.is_permutation()) problems.push_back("verdict is IsPermutation");
  if (!w.conclusion.witness) problems.push_back("no witness");
  r.cases = 4;
  r.failures = problems.size();
  if (!problems.empty()) r.detail = problems.front();
  r.report = weiss_report_to_json(w, m);
  r.seconds = since(t0);
  r.passed = problems.empty();
  return r;
}

// 2. Recognition of scrambled permutation lattices.
SuiteResult suite_recognition(const SuiteConfig& cfg, const std::vector<GroupCase>& groups, NecessityLog& nec) {
  const auto t0 = Clock::now();
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t gi) {
    const GroupCase& g = groups[gi];
    const PrecisionContext ctx(g.group->p());
    const std::vector<Subgroup> centrals = central_order_p_subgroups(*g.group);
    const std::vector<bool> all(g.classes.size(), true), none(g.classes.size(), false);
    for (int trial = 0; trial < cfg.recognition_cases; ++trial) {
      Rng rng(case_seed(cfg.seed, 2, gi, trial));
      const std::vector<int> m = random_multiplicities(g, all, rng, cfg.max_rank);
      const Built b = build(g, m, none, rng);
      const Verdict v = recognize_permutation(b.lattice, ctx);
      bool ok = v.is_permutation() && v.certificate->multiplicities == m;
      std::string why = ok ? "" : "multiplicities not recovered";
      if (ok) {
        // the certificate survives serialization and re-verifies
        const PermutationCertificate back = certificate_from_json(certificate_to_json(*v.certificate), *g.group);
        ok = verify_certificate(b.lattice, back, ctx) && back.change_of_basis == v.certificate->change_of_basis;
        if (!ok) why = "certificate does not re-verify";
      }
      parts[gi].record(ok, where_of(g, trial), why,
                       Json::array({trial, b.lattice.rank(), m, ok,
                                    v.certificate ? digest(matrix_to_json(v.certificate->change_of_basis)) : ""}));
      if (v.is_permutation())
        parts[gi].necessity.check("2/" + where_of(g, trial), b.lattice,
                                  centrals[static_cast<std::size_t>(trial) % centrals.size()], *v.certificate, ctx);
    }
  });
  return finish(2, "recognition-completeness", 60, t0, parts, groups, &nec);
}

// 3. Generalized Weiss on constructions with |N| = p.
SuiteResult suite_generalized(const SuiteConfig& cfg, const std::vector<GroupCase>& groups, NecessityLog& nec) {
  const auto t0 = Clock::now();
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t gi) {
    const GroupCase& g = groups[gi];
    const PrecisionContext ctx(g.group->p());
    const std::vector<Subgroup> centrals = central_order_p_subgroups(*g.group);
    const std::vector<bool> all(g.classes.size(), true);
    for (int trial = 0; trial < cfg.weiss_cases; ++trial) {
      Rng rng(case_seed(cfg.seed, 3, gi, trial));
      const Subgroup& n = centrals[static_cast<std::size_t>(trial) % centrals.size()];
      std::vector<bool> contains(g.classes.size());
      for (std::size_t i = 0; i < g.classes.size(); ++i) contains[i] = is_subgroup_of(n, g.classes[i]);
      const std::vector<int> m = random_multiplicities(g, all, rng, cfg.max_rank);
      const Built b = build(g, m, contains, rng);
      const WeissReport w = check_weiss_generalized(b.lattice, n, TrivialPartCandidate{b.front}, ctx);
      const bool ok = w.hypothesis_i == HypothesisStatus::Verified && w.hypothesis_ii == HypothesisStatus::Verified &&
                      w.conclusion.is_permutation() && w.conclusion.certificate->multiplicities == m && w.consistent;
      std::string why;
      if (!ok)
        why = std::string("hypothesis (i) ") + std::string(status_name(w.hypothesis_i)) + ", (ii) " +
              std::string(status_name(w.hypothesis_ii)) + ", consistent " + (w.consistent ? "yes" : "no");
      parts[gi].record(ok, where_of(g, trial), why,
                       Json::array({trial, n.label(), b.lattice.rank(), w.forced_rank, m, ok, w.consistent}));
      if (w.conclusion.is_permutation())
        parts[gi].necessity.check("3/" + where_of(g, trial), b.lattice, n, *w.conclusion.certificate, ctx);
    }
  });
  return finish(3, "generalized-weiss-soundness", 60, t0, parts, groups, &nec);
}

// 4. Classic Weiss over every nontrivial normal subgroup, with Res_N free by
// construction (every K meets N trivially).
SuiteResult suite_classic(const SuiteConfig& cfg, const std::vector<GroupCase>& groups, NecessityLog& nec) {
  const auto t0 = Clock::now();
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t gi) {
    const GroupCase& g = groups[gi];
    const PrecisionContext ctx(g.group->p());
    std::vector<Subgroup> normals;
    for (const auto& k : normal_subgroups(*g.group))
      if (k.order() > 1) normals.push_back(k);
    const std::vector<Subgroup> centrals = central_order_p_subgroups(*g.group);
    const std::vector<bool> none(g.classes.size(), false);
    for (int trial = 0; trial < cfg.weiss_cases; ++trial) {
      Rng rng(case_seed(cfg.seed, 4, gi, trial));
      const Subgroup& n = normals[static_cast<std::size_t>(trial) % normals.size()];
      std::vector<bool> meets_trivially(g.classes.size());
      for (std::size_t i = 0; i < g.classes.size(); ++i) {
        int common = 0;
        for (int x : g.classes[i].elements) common += n.contains(x);
        meets_trivially[i] = common == 1;
      }
      const std::vector<int> m = random_multiplicities(g, meets_trivially, rng, cfg.max_rank);
      const Built b = build(g, m, none, rng);
      const WeissReport w = check_weiss_classic(b.lattice, n, ctx);
      const bool ok = w.hypotheses_hold() && w.conclusion.is_permutation() &&
                      w.conclusion.certificate->multiplicities == m && w.consistent;
      std::string why;
      if (!ok)
        why = std::string("hypothesis (i) ") + std::string(status_name(w.hypothesis_i)) + ", (ii) " +
              std::string(status_name(w.hypothesis_ii));
      parts[gi].record(ok, where_of(g, trial), why, Json::array({trial, n.label(), b.lattice.rank(), m, ok}));
      if (w.conclusion.is_permutation()) {
        // the converse needs |N| = p: use an order-p central subgroup inside N
        const Subgroup* z = nullptr;
        for (const auto& c : centrals)
          if (!z && is_subgroup_of(c, n)) z = &c;
        parts[gi].necessity.check("4/" + where_of(g, trial), b.lattice, *z, *w.conclusion.certificate, ctx);
      }
    }
  });
  return finish(4, "classic-weiss-soundness", 60, t0, parts, groups, &nec);
}

SuiteResult suite_necessity(const NecessityLog& nec) {
  SuiteResult r;
  r.id = 5;
  r.name = "necessity";
  r.cases = nec.cases;
  r.failures = nec.failures;
  r.detail = nec.detail;
  r.seconds = nec.seconds;
  r.limit_seconds = 60;
  r.report = Json{{"checks", nec.records.size()}, {"digest", digest(nec.records)}};
  r.passed = r.failures == 0 && r.cases > 0;
  return r;
}

// 6. HNN roundtrip on seeded certificates.
SuiteResult suite_hnn(const SuiteConfig& cfg, const std::vector<GroupCase>& groups) {
  const auto t0 = Clock::now();
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t gi) {
    const GroupCase& g = groups[gi];
    const PrecisionContext ctx(g.group->p());
    const std::vector<bool> all(g.classes.size(), true);
    for (int trial = 0; trial < cfg.hnn_cases; ++trial) {
      Rng rng(case_seed(cfg.seed, 6, gi, trial));
      PermutationCertificate cert;
      cert.classes = g.classes;
      cert.multiplicities = random_multiplicities(g, all, rng, cfg.max_rank);
      int expected = 0;
      for (std::size_t i = 0; i < g.classes.size(); ++i) expected += cert.multiplicities[i] * g.index[i];
      const RoundtripResult rt = roundtrip(cert, g.group, ctx);
      const bool ok = rt.ok && rt.kernel_rank == expected && rt.abelianization_rank == expected;
      parts[gi].record(ok, where_of(g, trial), ok ? "" : "roundtrip mismatch",
                       Json::array({trial, cert.multiplicities, expected, rt.abelianization_rank, ok}));
    }
  });
  return finish(6, "hnn-roundtrip", 60, t0, parts, groups, nullptr);
}

// Left cosets x L as point sets, and the number of K-orbits on them.
int brute_orbits(const PGroup& g, const Subgroup& k, const Subgroup& l) {
  std::set<std::set<int>> cosets;
  for (int x = 0; x < g.order(); ++x) {
    std::set<int> c;
    for (int y : l.elements) c.insert(g.mul(x, y));
    cosets.insert(std::move(c));
  }
  std::set<std::set<std::set<int>>> orbits;
  for (const auto& c : cosets) {
    std::set<std::set<int>> orbit;
    for (int a : k.elements) {
      std::set<int> t;
      for (int y : c) t.insert(g.mul(a, y));
      orbit.insert(std::move(t));
    }
    orbits.insert(std::move(orbit));
  }
  return static_cast<int>(orbits.size());
}

// 7. rank (Z[G/L])^K equals the number of K-orbits on G/L.
SuiteResult suite_orbits(const SuiteConfig& cfg, const std::vector<GroupCase>& groups) {
  const auto t0 = Clock::now();
  std::vector<Partial> parts(groups.size());
  parallel_for(groups.size(), cfg.threads, [&](std::size_t gi) {
    const GroupCase& g = groups[gi];
    const auto subs = classify_subgroups(*g.group).all_subgroups;
    for (std::size_t li = 0; li < subs.size(); ++li) {
      const Lattice pl = permutation_lattice(g.group, subs[li]);
      for (std::size_t ki = 0; ki < subs.size(); ++ki) {
        const Eigen::Index got = invariants(pl, subs[ki]).rank();
        const int want = brute_orbits(*g.group, subs[ki], subs[li]);
        const bool ok = got == want;
        parts[gi].record(ok, g.name + " K=" + subs[ki].label() + " L=" + subs[li].label(),
                         "rank " + std::to_string(got) + " vs " + std::to_string(want),
                         Json::array({subs[ki].label(), subs[li].label(), got}));
      }
    }
  });
  return finish(7, "orbit-count-law", 10, t0, parts, groups, nullptr);
}

// 8. Negative controls.
SuiteResult suite_negative() {
  const auto t0 = Clock::now();
  SuiteResult r;
  r.id = 8;
  r.name = "negative-controls";
  r.limit_seconds = 10;
  r.report = Json::object();
  std::vector<std::string> problems;
  for (const std::string name : {"sign-c2", "paper-example"}) {
    const Fixture f = load_fixture(name);
    const PrecisionContext ctx(f.group.group->p());
    const Verdict v = recognize_permutation(*f.lattice, ctx);
    if (v.is_permutation()) problems.push_back(name + " recognized as permutation");
    if (!v.witness || v.witness->summand.rank() == 0) problems.push_back(name + " has no witness summand");
    else if (!is_invariant(*f.lattice, v.witness->summand.basis)) problems.push_back(name + " witness is not invariant");
    r.report[name] = verdict_to_json(v);
  }
  {
    const Fixture f = load_fixture("sign-c2");
    const Subgroup c = whole_group(*f.group.group);
    const auto s = cp_split(*f.lattice, c, PrecisionContext(2));
    if (s) problems.push_back("cp_split splits the sign lattice");
    r.report["cp-split sign-c2"] = cp_split_to_json(s, *f.lattice, c);
  }
  r.cases = 5;
  r.failures = problems.size();
  if (!problems.empty()) r.detail = problems.front();
  r.seconds = since(t0);
  r.passed = problems.empty();
  return r;
}

std::vector<SuiteResult> run_one_through_eight(const SuiteConfig& cfg, const std::vector<GroupCase>& groups) {
  std::vector<SuiteResult> out;
  NecessityLog nec;
  auto add = [&](SuiteResult r) {
    if (cfg.progress) std::cerr << summary_line(r) << std::endl;
    out.push_back(std::move(r));
  };
  add(suite_example());
  add(suite_recognition(cfg, groups, nec));
  add(suite_generalized(cfg, groups, nec));
  add(suite_classic(cfg, groups, nec));
  add(suite_necessity(nec));
  add(suite_hnn(cfg, groups));
  add(suite_orbits(cfg, groups));
  add(suite_negative());
  return out;
}

SuiteResult guarded(int id, const std::string& name, const std::function<SuiteResult()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    SuiteResult r;
    r.id = id;
    r.name = name;
    r.failures = 1;
    r.detail = std::string("exception: ") + e.what();
    return r;
  }
}

}  // namespace

std::vector<SuiteResult> run_suites(const SuiteConfig& cfg) {
  const std::vector<GroupCase> groups = all_groups();
  std::vector<SuiteResult> first;
  try {
    first = run_one_through_eight(cfg, groups);
  } catch (const std::exception& e) {
    SuiteResult r;
    r.name = "suites";
    r.failures = 1;
    r.detail = std::string("exception: ") + e.what();
    return {r};
  }
  for (auto& r : first)
    if (r.limit_seconds > 0 && r.seconds > r.limit_seconds) {
      r.passed = false;
      if (r.detail.empty()) r.detail = "time limit exceeded";
    }

  first.push_back(guarded(9, "determinism", [&] {
    const auto t0 = Clock::now();
    const std::vector<SuiteResult> again = run_one_through_eight(cfg, groups);
    SuiteResult r;
    r.id = 9;
    r.name = "determinism";
    r.report = Json::object();
    for (std::size_t i = 0; i < again.size(); ++i) {
      const std::string a = first[i].report.dump(), b = again[i].report.dump();
      const bool same = a == b && first[i].passed == again[i].passed;
      ++r.cases;
      if (!same) {
        ++r.failures;
        if (r.detail.empty()) r.detail = "suite " + std::to_string(first[i].id) + " report differs on rerun";
      }
      r.report[std::to_string(first[i].id)] = digest(first[i].report);
    }
    r.seconds = since(t0);
    r.passed = r.failures == 0;
    return r;
  }));
  return first;
}

std::string summary_line(const SuiteResult& r) {
  char time[64];
  if (r.limit_seconds > 0)
    std::snprintf(time, sizeof time, "%.2f s (limit %.0f s)", r.seconds, r.limit_seconds);
  else
    std::snprintf(time, sizeof time, "%.2f s", r.seconds);
  std::string line = std::string(r.passed ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " +
                     std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) + " cases, " + time;
  if (!r.detail.empty()) line += " [" + r.detail + "]";
  return line;
}

}  // namespace zplat
