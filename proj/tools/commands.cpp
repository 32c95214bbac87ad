#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "skelrot/brown.hpp"
#include "skelrot/errors.hpp"
#include "skelrot/geometry.hpp"
#include "skelrot/rotset.hpp"

namespace skelrot::cli {

using nlohmann::json;

void to_json(json& j, const RunConfig& c) {
  j = json{{"cf", c.cf},         {"depth", c.depth},     {"trunc", c.trunc},   {"gaps", c.gaps},
           {"mass", c.mass},     {"horizon", c.horizon}, {"seed", c.seed},     {"samples", c.samples},
           {"stages", c.stages}, {"corrupt", c.corrupt}, {"axis", c.axis},     {"start", c.start},
           {"format", c.format}, {"out", c.out}};
}

void from_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  json known;
  to_json(known, RunConfig{});
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  try {
    RunConfig d;
    c.cf = j.value("cf", d.cf);
    c.depth = j.value("depth", d.depth);
    c.trunc = j.value("trunc", d.trunc);
    c.gaps = j.value("gaps", d.gaps);
    c.mass = j.value("mass", d.mass);
    c.horizon = j.value("horizon", d.horizon);
    c.seed = j.value("seed", d.seed);
    c.samples = j.value("samples", d.samples);
    c.stages = j.value("stages", d.stages);
    c.corrupt = j.value("corrupt", d.corrupt);
    c.axis = j.value("axis", d.axis);
    c.start = j.value("start", d.start);
    c.format = j.value("format", d.format);
    c.out = j.value("out", d.out);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
  return j.get<RunConfig>();
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write config " + path);
  out << json(c).dump(2) << '\n';
}

namespace {

std::string description(const std::string& name) {
  static const std::map<std::string, std::string> text{
      {"lambda", "vertices of the truncated rotation hull"},
      {"markov", "Markov arcs and certified rotation vectors per admissible pair"},
      {"orbit", "one skeleton orbit with cell labels"},
      {"rotset", "sampled rotation vectors against the certified hull"},
      {"denjoy", "gap table of the Denjoy model"},
      {"brown", "thinned approximation ledger with Cauchy and identity checks"},
  };
  return text.at(name);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"lambda", "markov", "orbit", "rotset", "denjoy", "brown"};
  return names;
}

namespace {

json rational_json(const Rational& x) { return json{{"exact", to_string(x)}, {"value", to_decimal(x)}}; }

json point_json(const PlanarRational& p) { return json{{"x", rational_json(p.x)}, {"y", rational_json(p.y)}}; }

json hull_json(const HullPolygon& h) {
  json out = json::array();
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    json v = point_json(h.vertices[i]);
    if (i < h.generator_tags.size() && h.generator_tags[i]) {
      v["tag"] = {h.generator_tags[i]->first, h.generator_tags[i]->second};
    }
    out.push_back(v);
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed, const std::string& cmd) {
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  throw ValidationError("command " + cmd + " does not support format '" + c.format + "'");
}

IrrationalParam param_of(const RunConfig& c) { return build_param(c.cf, c.depth); }

// The last model built is kept; commands run back to back in one process
// usually share it.
std::shared_ptr<const DenjoyModel> model_of(const RunConfig& c) {
  static std::mutex mu;
  static std::string cached_key;
  static std::shared_ptr<const DenjoyModel> cached;
  DenjoyConfig dc;
  dc.gap_budget = c.gaps;
  dc.gap_mass = parse_rational(c.mass);
  std::string key =
      json{{"cf", c.cf}, {"depth", c.depth}, {"gaps", c.gaps}, {"mass", to_string(dc.gap_mass)}}.dump();
  std::lock_guard<std::mutex> lock(mu);
  if (!cached || key != cached_key) {
    cached = std::make_shared<const DenjoyModel>(build_denjoy(param_of(c), dc));
    cached_key = key;
  }
  return cached;
}

Axis axis_of(const std::string& s) {
  if (s == "h") return Axis::h;
  if (s == "v") return Axis::v;
  throw ValidationError("axis must be h or v, got '" + s + "'");
}

CommandOutput cmd_lambda(const RunConfig& c) {
  require_format(c, {"csv", "json", "svg"}, "lambda");
  if (c.trunc < 1) throw ValidationError("truncation must be at least 1");
  IrrationalParam param = param_of(c);
  Rational r = param.value();
  HullPolygon hull = lambda_set(param, c.trunc, true);
  CommandOutput out;
  if (c.format == "csv") {
    out.body = hull_to_csv(hull);
  } else if (c.format == "svg") {
    SvgMarkers markers;
    for (const auto& g : omega_generators(param, c.trunc)) markers.generators.push_back(g.point);
    markers.accumulation = {{Rational(0), r}, {r, Rational(0)}};
    out.body = hull_to_svg(hull, markers);
  } else {
    out.body = dump({{"N", c.trunc}, {"rho", rational_json(r)}, {"vertices", hull_json(hull)}});
  }
  out.summary = "lambda N=" + std::to_string(c.trunc) + ": " + std::to_string(hull.vertices.size()) + " vertices";
  return out;
}

CommandOutput cmd_markov(const RunConfig& c) {
  require_format(c, {"csv", "json"}, "markov");
  if (c.trunc < 0) throw ValidationError("truncation must be nonnegative");
  CommandOutput out;
  std::ostringstream csv;
  csv << "m,n,admissible,arcs,arc_enclosures,rho_x_num,rho_x_den,rho_y_num,rho_y_den,certified\n";
  json rows = json::array();
  long certified = 0, nonempty = 0;
  if (c.trunc > 0) {
    auto model = model_of(c);
  const DenjoyModel& m = *model;
    for (long a = 1; a <= c.trunc; ++a) {
      for (long b = 1; b <= c.trunc; ++b) {
        bool adm = is_admissible(m.param, a, b);
        auto arcs = markov_arcs(m, a, b);
        std::string enc;
        json jarcs = json::array();
        for (const auto& arc : arcs) {
          RationalInterval e = arc.enclosure(64);
          if (!enc.empty()) enc += ';';
          enc += to_decimal(e.lo) + ":" + to_decimal(e.hi);
          jarcs.push_back({to_decimal(e.lo), to_decimal(e.hi)});
        }
        csv << a << ',' << b << ',' << adm << ',' << arcs.size() << ',' << enc;
        json row{{"m", a}, {"n", b}, {"admissible", adm}, {"arcs", jarcs}};
        if (!arcs.empty()) {
          ++nonempty;
          PlanarRational v = rotation_vector_exact(m, a, b);
          bool ok = v == rho_vec(m.param, a, b);
          certified += ok;
          csv << ',' << v.x.get_num() << ',' << v.x.get_den() << ',' << v.y.get_num() << ',' << v.y.get_den()
              << ',' << ok;
          row["rho"] = point_json(v);
          row["certified"] = ok;
          if (!ok) out.exit_code = 3;
        } else {
          csv << ",,,,,";
        }
        if (adm != !arcs.empty()) out.exit_code = 3;
        csv << '\n';
        rows.push_back(row);
      }
    }
  }
  out.body = c.format == "csv" ? csv.str() : dump({{"rows", rows}});
  out.summary = "markov: " + std::to_string(nonempty) + " nonempty K_{m,n}, " + std::to_string(certified) +
                " certified rotation vectors";
  if (out.exit_code) out.summary += "; table disagrees with admissibility or certification";
  return out;
}

CommandOutput cmd_orbit(const RunConfig& c) {
  require_format(c, {"csv", "json"}, "orbit");
  if (c.horizon < 1) throw ValidationError("horizon must be positive");
  auto model = model_of(c);
  const DenjoyModel& m = *model;
  Axis axis = axis_of(c.axis);
  SkeletonPoint start =
      c.start.empty() ? free_start(m, axis, Rational(1, 5)) : make_point(axis, parse_rational(c.start));
  RotationSample s = sample_orbit(m, start, c.horizon);
  CommandOutput out;
  if (c.format == "csv") {
    std::ostringstream os;
    os << "t,axis,cell_x,cell_y,coord,x,y\n";
    LiftedSkeletonPoint x0 = lift_point(start);
    LiftedPoint<double> pt{x0.axis, x0.cell_x, x0.cell_y, x0.coord.get_d()};
    for (long t = 0; t <= c.horizon; ++t) {
      auto pos = position(pt);
      os << t << ',' << axis_name(pt.axis) << ',' << pt.cell_x << ',' << pt.cell_y << ',' << to_decimal(pt.coord)
         << ',' << to_decimal(pos[0]) << ',' << to_decimal(pos[1]) << '\n';
      if (t < c.horizon) pt = full_step(m, pt);
    }
    out.body = os.str();
  } else {
    json segs = json::array();
    for (const auto& [a, b] : s.classification.segments) segs.push_back({a, b});
    out.body = dump({{"start", {{"axis", axis_name(s.start.axis)}, {"coord", to_string(s.start.coord)}}},
                     {"horizon", c.horizon},
                     {"average", point_json(s.avg_displacement)},
                     {"classification", kind_name(s.classification.kind)},
                     {"segments", segs},
                     {"vertical_visits", s.classification.vertical_visits}});
  }
  out.summary = std::string("orbit: ") + kind_name(s.classification.kind) + ", average (" +
                to_decimal(s.avg_displacement.x) + ", " + to_decimal(s.avg_displacement.y) + ")";
  return out;
}

CommandOutput cmd_rotset(const RunConfig& c) {
  require_format(c, {"csv", "json"}, "rotset");
  if (c.horizon < 1) throw ValidationError("horizon must be positive");
  auto model = model_of(c);
  const DenjoyModel& m = *model;
  SampleSpec spec;
  spec.count = c.samples;
  spec.seed = c.seed;
  auto starts = sample_starts(m, spec);
  auto cloud = empirical_cloud(m, starts, c.horizon);
  ComparisonReport r = compare_to_analytic(m, c.trunc, cloud, c.horizon);
  CommandOutput out;
  if (c.format == "csv") {
    out.body = cloud_to_csv(cloud);
  } else {
    json viol = json::array();
    for (const auto& v : r.containment_violations) {
      viol.push_back({{"index", v.index},
                      {"average", point_json(v.avg)},
                      {"distance", to_decimal(std::sqrt(v.squared_distance.get_d()))},
                      {"ratio", to_decimal(v.ratio)}});
    }
    out.body = dump({{"N", r.N},
                     {"horizon", r.horizon},
                     {"samples", cloud.size()},
                     {"slack", rational_json(r.slack)},
                     {"hausdorff_bound", rational_json(r.hausdorff_bound)},
                     {"max_ratio", to_decimal(r.max_ratio)},
                     {"analytic", hull_json(r.analytic)},
                     {"observed", hull_json(r.observed)},
                     {"containment_violations", viol}});
  }
  out.summary = "rotset N=" + std::to_string(r.N) + " horizon=" + std::to_string(r.horizon) + ": " +
                std::to_string(r.containment_violations.size()) + " containment violations, max ratio " +
                to_decimal(r.max_ratio) + ", Hausdorff bound " + to_decimal(r.hausdorff_bound);
  if (!r.containment_violations.empty()) out.exit_code = 3;
  return out;
}

CommandOutput cmd_denjoy(const RunConfig& c) {
  require_format(c, {"csv", "json"}, "denjoy");
  auto model = model_of(c);
  const DenjoyModel& m = *model;
  const GapTable& g = m.table;
  CommandOutput out;
  if (c.format == "csv") {
    std::ostringstream os;
    os << "k,label,start,length\n";
    for (long k = 0; k < g.q; ++k) {
      os << k << ',' << g.label_of(k) << ',' << to_string(g.start[k]) << ',' << to_string(g.length[k]) << '\n';
    }
    out.body = os.str();
  } else {
    json pieces = json::array();
    const auto& bp = m.phi.breakpoints();
    const auto& pc = m.phi.pieces();
    for (std::size_t i = 0; i < bp.size(); ++i) {
      pieces.push_back({{"from", to_string(bp[i])},
                        {"a2", to_string(pc[i].a2)},
                        {"a1", to_string(pc[i].a1)},
                        {"a0", to_string(pc[i].a0)}});
    }
    json gaps = json::array();
    for (const auto& [label, arc] : m.gap_index) {
      gaps.push_back({{"label", label}, {"lo", to_string(arc.lo)}, {"hi", to_string(arc.hi)}});
    }
    out.body = dump({{"p", g.p},
                     {"q", g.q},
                     {"halfwidth", rational_json(m.halfwidth)},
                     {"wandering_halfwidth", rational_json(m.wandering_halfwidth)},
                     {"tau", rational_json(m.tau)},
                     {"semiconj_sup", rational_json(m.semiconj_sup)},
                     {"gaps", gaps},
                     {"phi", pieces}});
  }
  out.summary = "denjoy p/q=" + std::to_string(g.p) + "/" + std::to_string(g.q) + ": phi has " +
                std::to_string(m.phi.size()) + " pieces, B=" + to_decimal(m.semiconj_sup);
  return out;
}

CommandOutput cmd_brown(const RunConfig& c) {
  require_format(c, {"csv", "json"}, "brown");
  if (c.stages < 1) throw ValidationError("stages must be at least 1");
  constexpr int modulus_bits = 60;
  constexpr int grid_bits = 12;
  auto model = model_of(c);
  const DenjoyModel& m = *model;
  ApproxSequence family = build_collapse_family(m);
  auto target = [](long k) -> Rational {
    Rational r(1);
    r /= Rational(Integer(1) << static_cast<mp_bitcnt_t>(k));
    return r;
  };
  ThinResult thin = thin_subsequence(family, target, c.stages, modulus_bits);
  Chains chains(subsequence(family, thin.indices));
  Rational corruption = c.corrupt.empty() ? Rational(1) : parse_rational(c.corrupt);
  CauchyReport cauchy = cauchy_verify(chains, thin.ledger, grid_bits, corruption);
  IdentityReport ident = verify_identities(chains, static_cast<long>(thin.ledger.size()) - 1, grid_bits);

  CommandOutput out;
  if (c.format == "csv") {
    out.body = ledger_to_csv(thin.ledger);
  } else {
    json ledger = json::array();
    for (const auto& e : thin.ledger) {
      ledger.push_back({{"n", e.n},
                        {"index", e.index},
                        {"alpha", to_decimal(e.alpha)},
                        {"beta", to_decimal(e.beta)},
                        {"gamma", to_decimal(e.gamma)},
                        {"epsilon", to_decimal(e.epsilon)},
                        {"prefix_sum", to_decimal(e.prefix_sum)},
                        {"alpha_branch", branch_name(e.alpha_branch)},
                        {"beta_branch", branch_name(e.beta_branch)}});
    }
    json chk = json::array();
    for (const auto& ch : cauchy.chains) {
      chk.push_back({{"chain", ch.chain},
                     {"max_ratio", to_decimal(ch.max_ratio)},
                     {"violations", ch.violations},
                     {"first_violation_stage", ch.first_violation_stage}});
    }
    out.body = dump({{"indices", thin.indices},
                     {"ledger", ledger},
                     {"corruption", to_string(corruption)},
                     {"cauchy", chk},
                     {"identity_failures",
                      ident.fhat_ghat_failures + ident.ghat_fhat_failures + ident.conjugacy_failures}});
  }
  std::ostringstream s;
  s << "brown: " << thin.ledger.size() << " stages, sum epsilon " << to_decimal(thin.ledger.back().prefix_sum);
  for (const auto& ch : cauchy.chains) {
    s << "; " << ch.chain << " max d/eps " << to_decimal(ch.max_ratio);
    if (ch.violations) s << " (" << ch.violations << " violations from stage " << ch.first_violation_stage << ")";
  }
  s << "; identities " << (ident.ok() ? "exact" : "FAILED");
  if (corruption != 1) s << "; ledger scaled by " << to_string(corruption);
  out.summary = s.str();
  if (!cauchy.ok() || !ident.ok()) out.exit_code = 3;
  return out;
}

void add_options(CLI::App* sub, RunConfig& c, std::string& config_path, std::string& save_path) {
  sub->add_option("--cf", c.cf, "continued-fraction coefficients a1,a2,...")->delimiter(',');
  sub->add_option("--depth", c.depth, "convergent depth");
  sub->add_option("--trunc", c.trunc, "truncation N");
  sub->add_option("--gaps", c.gaps, "gap budget K");
  sub->add_option("--mass", c.mass, "total gap mass L, as p/q");
  sub->add_option("--horizon", c.horizon, "orbit length");
  sub->add_option("--seed", c.seed, "sampling seed");
  sub->add_option("--samples", c.samples, "number of sampled orbits");
  sub->add_option("--stages", c.stages, "thinned stages");
  sub->add_flag("--corrupt{1/64}", c.corrupt, "scale the ledger (default 1/64) to exercise the failure path");
  sub->add_option("--axis", c.axis, "orbit start axis")->check(CLI::IsMember({"h", "v"}));
  sub->add_option("--start", c.start, "orbit start coordinate, as p/q");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--config", config_path, "JSON config read before the other flags");
  sub->add_option("--save-config", save_path, "write the effective config as JSON");
}

}  // namespace

CommandOutput run_command(const std::string& name, const RunConfig& config) {
  if (name == "lambda") return cmd_lambda(config);
  if (name == "markov") return cmd_markov(config);
  if (name == "orbit") return cmd_orbit(config);
  if (name == "rotset") return cmd_rotset(config);
  if (name == "denjoy") return cmd_denjoy(config);
  if (name == "brown") return cmd_brown(config);
  throw ValidationError("unknown command '" + name + "'");
}

int run_cli(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path, save_path;
  try {
    // The config file sets the baseline; explicit flags override it.
    for (int i = 1; i < argc; ++i) {
      std::string a = argv[i];
      if (a == "--config" && i + 1 < argc) cfg = load_config(argv[i + 1]);
      else if (a.rfind("--config=", 0) == 0) cfg = load_config(a.substr(9));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"Rotation sets of a torus skeleton map"};
  app.require_subcommand(1);
  std::string chosen;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, description(name));
    add_options(sub, cfg, config_path, save_path);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!save_path.empty()) save_config(cfg, save_path);
    CommandOutput out = run_command(chosen, cfg);
    if (cfg.out.empty()) {
      std::cout << out.body;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw ValidationError("cannot write " + cfg.out);
      f << out.body;
    }
    std::cerr << out.summary << '\n';
    return out.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace skelrot::cli
