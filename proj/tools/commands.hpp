#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace skelrot::cli {

struct RunConfig {
  std::vector<long> cf = std::vector<long>(25, 1);
  int depth = 20;
  long trunc = 8;
  long gaps = 40;
  std::string mass = "1/2";
  long horizon = 5000;
  std::uint64_t seed = 1;
  long samples = 200;
  long stages = 8;
  std::string corrupt;  // empty: ledger used as computed
  std::string axis = "h";
  std::string start;    // empty: free start at Cantor coordinate 1/5
  std::string format = "csv";
  std::string out;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
// Missing keys keep their defaults; unknown keys raise ValidationError.
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& c, const std::string& path);

const std::vector<std::string>& command_names();

struct CommandOutput {
  std::string body;     // CSV, JSON or SVG, per config.format
  std::string summary;  // one human-readable line per finding
  int exit_code = 0;    // 0 or 3
};

// Throws ValidationError on bad configuration.
CommandOutput run_command(const std::string& name, const RunConfig& config);

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace skelrot::cli
