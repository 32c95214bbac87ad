#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "commands.hpp"
#include "skelrot/errors.hpp"
#include "skelrot/geometry.hpp"

using namespace skelrot;
using namespace skelrot::cli;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "skelrot");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  // Silence the command's own stdout/stderr chatter.
  std::ostringstream sink;
  auto* out = std::cout.rdbuf(sink.rdbuf());
  auto* err = std::cerr.rdbuf(sink.rdbuf());
  int code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(out);
  std::cerr.rdbuf(err);
  return code;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("skelrot_cli_" + name);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count(const std::string& s, const std::string& needle) {
  long n = 0;
  for (std::size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round trip") {
  RunConfig c;
  c.cf = {2, 1, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  c.depth = 8;
  c.mass = "3/5";
  c.seed = 99;
  c.corrupt = "1/8";
  c.format = "json";
  nlohmann::json j = c;
  CHECK(j.get<RunConfig>() == c);

  auto path = temp_file("config.json");
  save_config(c, path.string());
  CHECK(load_config(path.string()) == c);
  std::string first = read_file(path);
  save_config(load_config(path.string()), path.string());
  CHECK(read_file(path) == first);

  CHECK(nlohmann::json::parse(R"({"trunc": 5})").get<RunConfig>().trunc == 5);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"truncation": 5})").get<RunConfig>(), ValidationError);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"trunc": "five"})").get<RunConfig>(), ValidationError);
  CHECK_THROWS_AS(load_config((temp_file("missing") / "x.json").string()), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run({"lambda", "--trunc", "3"}) == 0);
  CHECK(run({"lambda", "--cf", "1", "--depth", "1"}) == 2);
  CHECK(run({"lambda", "--format", "png"}) == 2);
  CHECK(run({"lambda", "--trunc", "0"}) == 2);
  CHECK(run({"nonsense"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"lambda", "--help"}) == 0);
  CHECK(run({"denjoy", "--format", "svg"}) == 2);
  CHECK(run({"denjoy", "--mass", "3/2"}) == 2);
  CHECK(run({"orbit", "--axis", "d"}) == 2);
  CHECK(run({"brown", "--stages", "2", "--corrupt"}) == 3);
  CHECK(run({"brown", "--stages", "2", "--corrupt=1/2"}) == 0);
  CHECK(run({"lambda", "--config", temp_file("absent.json").string()}) == 2);
}

TEST_CASE("flags override the config file") {
  auto cfg = temp_file("base.json");
  auto out = temp_file("out.csv");
  auto saved = temp_file("saved.json");
  RunConfig base;
  base.trunc = 3;
  base.format = "json";
  save_config(base, cfg.string());
  REQUIRE(run({"lambda", "--config", cfg.string(), "--format", "csv", "--out", out.string(), "--save-config",
               saved.string()}) == 0);
  RunConfig eff = load_config(saved.string());
  CHECK(eff.trunc == 3);
  CHECK(eff.format == "csv");
  CHECK(read_file(out).rfind("m,n,x_num", 0) == 0);
  for (const auto& p : {cfg, out, saved}) std::filesystem::remove(p);
}

TEST_CASE("lambda outputs") {
  RunConfig c;
  c.trunc = 50;
  IrrationalParam param = build_param(c.cf, c.depth);
  HullPolygon hull = lambda_set(param, 50, true);

  CommandOutput csv = run_command("lambda", c);
  CHECK(count(csv.body, "\n") == static_cast<long>(hull.vertices.size()) + 1);
  CHECK(csv.body.find("\n,,0,1,0,1,0,0\n") != std::string::npos);

  c.format = "svg";
  std::string svg = run_command("lambda", c).body;
  CHECK(count(svg, "class=\"hull\"") == 1);
  CHECK(count(svg, "class=\"accumulation\"") == 2);
  CHECK(count(svg, "class=\"generator\"") == static_cast<long>(omega_generators(param, 50).size()));
  // Vertex list of the polygon matches the hull, with (0,0) at the bottom-left corner.
  std::smatch mt;
  REQUIRE(std::regex_search(svg, mt, std::regex("points=\"([^\"]*)\"")));
  std::string pts = mt[1];
  CHECK(count(pts, ",") == static_cast<long>(hull.vertices.size()));
  CHECK(pts.find("0.000000,1.000000") != std::string::npos);

  c.trunc = 1;
  c.format = "json";
  auto j = nlohmann::json::parse(run_command("lambda", c).body);
  CHECK(j["vertices"].size() == 4);
}

TEST_CASE("markov table follows admissibility") {
  RunConfig c;
  c.trunc = 4;
  CommandOutput out = run_command("markov", c);
  CHECK(out.exit_code == 0);
  IrrationalParam param = build_param(c.cf, c.depth);
  std::istringstream in(out.body);
  std::string line;
  std::getline(in, line);
  long rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    long m = 0, n = 0, adm = 0, arcs = 0;
    REQUIRE(std::sscanf(line.c_str(), "%ld,%ld,%ld,%ld", &m, &n, &adm, &arcs) == 4);
    CHECK(adm == is_admissible(param, m, n));
    CHECK(arcs == (adm ? 4 : 0));
    if (adm) CHECK(line.substr(line.size() - 2) == ",1");
  }
  CHECK(rows == 16);
  CHECK(out.body.find("\n1,1,1,4,") != std::string::npos);

  c.trunc = 0;
  CHECK(count(run_command("markov", c).body, "\n") == 1);
}

TEST_CASE("rotset and brown reports") {
  RunConfig c;
  c.samples = 0;
  c.horizon = 1;
  c.format = "json";
  auto j = nlohmann::json::parse(run_command("rotset", c).body);
  CHECK(j["containment_violations"].empty());
  CHECK(j["hausdorff_bound"]["exact"] == "0");
  CHECK(j["samples"] == 0);

  c.stages = 1;
  CommandOutput b = run_command("brown", c);
  CHECK(b.exit_code == 0);
  auto jb = nlohmann::json::parse(b.body);
  CHECK(jb["ledger"].size() == 1);
  CHECK(jb["indices"].size() == 2);
  CHECK(jb["identity_failures"] == 0);
  c.corrupt = "0";
  CHECK(run_command("brown", c).exit_code == 3);
  CHECK_THROWS_AS(run_command("brown", RunConfig{.stages = 0}), ValidationError);
  CHECK_THROWS_AS(run_command("nope", c), ValidationError);
}

TEST_CASE("reruns are byte-identical") {
  RunConfig c;
  c.trunc = 3;
  c.horizon = 60;
  c.samples = 12;
  c.stages = 3;
  for (const auto& name : command_names()) {
    for (const char* fmt : {"csv", "json"}) {
      c.format = fmt;
      CHECK_MESSAGE(run_command(name, c).body == run_command(name, c).body, name << " " << fmt);
    }
  }
}

}
