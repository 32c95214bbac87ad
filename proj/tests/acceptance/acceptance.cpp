// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "skelrot/brown.hpp"
#include "skelrot/errors.hpp"
#include "skelrot/geometry.hpp"
#include "skelrot/rotset.hpp"
#include "unit/oracle.hpp"

using namespace skelrot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const IrrationalParam& golden() {
  static const IrrationalParam p = build_param(std::vector<long>(25, 1), 20);
  return p;
}

const DenjoyModel& model() {
  static const DenjoyModel m = build_denjoy(golden());
  return m;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome ac1() {
  const IrrationalParam& p = golden();
  oracle::Dec rho = oracle::golden();
  long mismatches = 0, admissible = 0;
  for (long a = 1; a <= 100; ++a) {
    for (long b = 1; b <= 100; ++b) {
      bool lib = is_admissible(p, a, b);
      admissible += lib;
      if (lib != oracle::admissible(rho, a, b)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(admissible) + " admissible of 10000 pairs, " +
                               std::to_string(mismatches) + " disagreements with the 50-digit oracle"};
}

Outcome ac2() {
  const IrrationalParam& p = golden();
  std::string counts;
  bool increasing = true;
  std::size_t prev = 0;
  for (long N : {25L, 50L, 100L, 200L}) {
    std::size_t v = lambda_set(p, N).vertices.size();
    counts += (counts.empty() ? "" : ",") + std::to_string(v);
    if (v <= prev) increasing = false;
    prev = v;
  }
  Rational radius(1, 20);
  AccumulationReport a = accumulation_report(p, 100, radius);
  AccumulationReport b = accumulation_report(p, 200, radius);
  bool ok = increasing && b.elsewhere.size() <= 6 && a.elsewhere == b.elsewhere;
  return {ok, "vertex counts " + counts + "; " + std::to_string(b.elsewhere.size()) +
                  " vertices away from the axis points at N=200, same list at N=100: " +
                  (a.elsewhere == b.elsewhere ? "yes" : "no")};
}

// Endpoints of a Markov arc return to the two different endpoints of I^(v).
bool endpoints_hit_I(const DenjoyModel& m, const MarkovArc& arc) {
  Quad2 w(m.halfwidth);
  Quad2 one(Rational(1));
  int hits[2] = {0, 0};
  const Quad2* ends[2] = {&arc.lo, &arc.hi};
  for (int e = 0; e < 2; ++e) {
    LiftedPoint<Quad2> pt;
    pt.axis = Axis::v;
    pt.coord = sign(*ends[e]) < 0 ? *ends[e] + one : *ends[e];
    for (long t = 0; t < arc.m + arc.n + 1; ++t) pt = full_step(m, pt);
    if (pt.axis != Axis::v) return false;
    if (sign(pt.coord - w) == 0) hits[e] = 1;
    else if (sign(pt.coord - (one - w)) == 0) hits[e] = -1;
    else return false;
  }
  return hits[0] != hits[1];
}

Outcome ac3() {
  const DenjoyModel& m = model();
  long pairs = 0, nonempty = 0, bad = 0;
  for (long a = 1; a <= 12; ++a) {
    for (long b = 1; b <= 12; ++b) {
      ++pairs;
      auto arcs = markov_arcs(m, a, b);
      bool adm = is_admissible(m.param, a, b);
      if (arcs.empty() == adm) {
        ++bad;
        continue;
      }
      if (arcs.empty()) continue;
      ++nonempty;
      if (arcs.size() != 4) {
        ++bad;
        continue;
      }
      bool ok = true;
      for (std::size_t i = 0; i < 4; ++i) {
        if (compare_enclosed(arcs[i].lo, arcs[i].hi) >= 0) ok = false;
        if (i > 0 && compare_enclosed(arcs[i - 1].hi, arcs[i].lo) >= 0) ok = false;
        if (!endpoints_hit_I(m, arcs[i])) ok = false;
      }
      if (!ok) ++bad;
    }
  }
  return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(nonempty) +
                        " with four disjoint arcs, " + std::to_string(bad) + " failures"};
}

Outcome ac4() {
  const DenjoyModel& m = model();
  long checked = 0, bad = 0;
  Rational worst = 0;
  for (long a = 1; a <= 9; ++a) {
    for (long b = 1; a + b <= 10; ++b) {
      if (!is_admissible(m.param, a, b)) continue;
      ++checked;
      MarkovFixedPoint fp = markov_fixed_point(m, a, b);
      Rational res = abs(fp.residual);
      worst = std::max(worst, res);
      oracle::Dec rho = oracle::golden();
      long cx = static_cast<long>(boost::multiprecision::ceil(rho * a));
      long cy = static_cast<long>(boost::multiprecision::ceil(rho * b));
      if (fp.integer_displacement[0] != cx || fp.integer_displacement[1] != cy ||
          res >= Rational(1, 1000000000)) {
        ++bad;
      }
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " admissible pairs, " + std::to_string(bad) +
                                       " mismatches, max residual " + fmt(worst.get_d())};
}

Outcome ac5() {
  const DenjoyModel& m = model();
  auto cert = certified_cloud(m, 8);
  bool hull_eq = convex_hull(cert).vertices == omega_set(m.param, 8, true).vertices;
  auto cloud = empirical_cloud(m, sample_starts(m, SampleSpec{}), 5000);
  ComparisonReport r = compare_to_analytic(m, 8, cloud, 5000, cert);
  return {hull_eq && r.containment_violations.empty(),
          std::string("certified hull ") + (hull_eq ? "equals" : "differs from") + " omega_set(8); " +
              std::to_string(r.containment_violations.size()) + " of " + std::to_string(cloud.size()) +
              " orbits outside the 2B/horizon slack (worst distance " + fmt(r.max_ratio) + " x slack)"};
}

Outcome ac6() {
  const DenjoyModel& m = model();
  long horizon = 5000;
  Rational slack = 2 * m.semiconj_sup / horizon;
  Rational r = m.param.value();
  long bad = 0;
  double worst = 0;
  for (Axis axis : {Axis::h, Axis::v}) {
    PlanarRational target = axis == Axis::h ? PlanarRational{r, Rational(0)} : PlanarRational{Rational(0), r};
    for (long k = 0; k < 20; ++k) {
      RotationSample s = sample_orbit(m, free_start(m, axis, Rational(2 * k + 1, 40)), horizon);
      PlanarRational d = s.avg_displacement - target;
      Rational d2 = d.x * d.x + d.y * d.y;
      worst = std::max(worst, std::sqrt(d2.get_d()) / slack.get_d());
      if (d2 > slack * slack) ++bad;
    }
  }
  return {bad == 0, "40 free orbits, " + std::to_string(bad) + " outside 2B/horizon, worst " + fmt(worst) +
                        " x slack"};
}

Outcome ac7() {
  const DenjoyModel& m = model();
  const PiecewiseCircleMap& phi = m.phi;
  Arc gap0 = m.wandering_arc();
  Arc img = gap0;
  long hits = 0;
  for (long k = 1; k <= m.gap_budget() - 1; ++k) {
    // phi is increasing on the gap images, so endpoints map to endpoints.
    Rational lo = phi.lift(img.lo);
    Rational hi = phi.lift(img.hi);
    img = {lo, hi};
    if (arcs_intersect(img, gap0)) ++hits;
  }
  bool lib = wandering_check(m, m.gap_budget() - 1);
  return {hits == 0 && lib, std::to_string(m.gap_budget() - 1) + " iterates, " + std::to_string(hits) +
                                " intersections with gap_0"};
}

Outcome ac8() {
  const DenjoyModel& m = model();
  ApproxSequence raw = build_collapse_family(m, 64);
  Chains c(raw);
  IdentityReport id = verify_identities(c, 30, 12);
  auto ledger = build_ledger(c, 30, 60);
  CauchyReport cr = cauchy_verify(c, ledger, 12);
  auto target = [](long k) -> Rational {
    Rational t(1);
    t /= Rational(Integer(1) << static_cast<mp_bitcnt_t>(k));
    return t;
  };
  ThinResult thin = thin_subsequence(build_collapse_family(m), target, 30, 60);
  Chains tc(subsequence(build_collapse_family(m), thin.indices));
  CauchyReport tr = cauchy_verify(tc, thin.ledger, 12);
  Rational sum = thin.ledger.back().prefix_sum;
  bool ok = id.ok() && cr.ok() && tr.ok() && sum < 2;
  return {ok, std::string("identities ") + (id.ok() ? "exact" : "FAIL") + " on 30 stages; Cauchy bounds " +
                  (cr.ok() ? "hold" : "FAIL") + " (max d/eps " + fmt(cr.chains[2].max_ratio.get_d()) +
                  "); thinned 30 stages sum eps " + fmt(sum.get_d()) + ", bounds " + (tr.ok() ? "hold" : "FAIL")};
}

Outcome ac9() {
  const DenjoyModel& m = model();
  SampleSpec spec;
  spec.count = 50;
  Fact1Report r = fact1_rotation_check(m, Transport::semiconjugacy, sample_starts(m, spec), 5000, 8);
  return {r.ok() && r.orbits == 50, std::to_string(r.orbits) + " orbits, max difference " +
                                        fmt(r.max_difference.get_d()) + " vs bound " + fmt(r.bound.get_d()) + "; " +
                                        std::to_string(r.periodic_checked - r.periodic_mismatches) + "/" +
                                        std::to_string(r.periodic_checked) + " periodic orbits exact"};
}

Outcome ac10() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "skelrot_determinism";
  fs::create_directories(dir);
  cli::RunConfig base;
  base.trunc = 4;
  base.horizon = 200;
  base.samples = 20;
  base.stages = 4;
  fs::path cfg = dir / "config.json";
  cli::save_config(base, cfg.string());
  cli::RunConfig loaded = cli::load_config(cfg.string());
  long compared = 0, differ = 0;
  for (const auto& name : cli::command_names()) {
    for (const char* f : {"csv", "json"}) {
      loaded.format = f;
      ++compared;
      if (cli::run_command(name, loaded).body != cli::run_command(name, loaded).body) ++differ;
    }
  }
  // The built binary, driven by the config file, twice per command.
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* name : {"lambda", "brown"}) {
    std::string outs[2];
    bool ran = true;
    for (int i = 0; i < 2; ++i) {
      fs::path out = dir / (std::string(name) + std::to_string(i) + ".csv");
      std::string cmd = std::string("\"") + SKELROT_CLI_PATH + "\" " + name + " --config \"" + cfg.string() +
                        "\" --format csv --out \"" + out.string() + "\" 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) ran = false;
      outs[i] = read(out);
    }
    ++compared;
    if (!ran || outs[0].empty() || outs[0] != outs[1]) ++differ;
  }
  fs::remove_all(dir);
  return {differ == 0, std::to_string(compared) + " command/format pairs rerun, " + std::to_string(differ) +
                           " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1", "admissibility table", 1, ac1},
      {"AC2", "non-polygonal lambda", 10, ac2},
      {"AC3", "Markov arcs", 60, ac3},
      {"AC4", "periodic displacements", 60, ac4},
      {"AC5", "rotation set containment", 120, ac5},
      {"AC6", "free orbit averages", 30, ac6},
      {"AC7", "wandering arc", 1, ac7},
      {"AC8", "factorization stages", 120, ac8},
      {"AC9", "transported rotation vectors", 30, ac9},
      {"AC10", "deterministic CLI", 10, ac10},
  };
  // The shared model is built once up front so its cost is not charged to AC3.
  auto t_model = std::chrono::steady_clock::now();
  model();
  double build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_model).count();
  std::cout << "model build " << fmt(build_s) << " s\n";

  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s <= c.limit_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.name << ": " << o.detail << " (" << fmt(s)
              << " s, limit " << fmt(c.limit_s) << " s" << (in_time ? "" : ", over time") << ")" << std::endl;
  }
  std::cout << (sizeof criteria / sizeof criteria[0]) - failed << "/" << (sizeof criteria / sizeof criteria[0])
            << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
