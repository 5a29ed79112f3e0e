#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aerobat/config/config.hpp"

namespace aerobat::cli {

enum ExitCode : int {
  kOk = 0,
  kThresholdsNotMet = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kNumerical = 4,
};

struct CommonOptions {
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out_dir = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> mode;  // aero variant: classical | paper-literal
};

// Defaults, then the config file, then AEROBAT_* environment overrides, then
// command-line flags. Throws ConfigError.
config::Config resolve_config(const CommonOptions& opts);

int cmd_linkage_optimize(const CommonOptions& opts, std::ostream& out, std::ostream& err);
// `scenarios` may name several; they run in parallel up to --jobs.
int cmd_simulate(const std::vector<std::string>& scenarios, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err);
int cmd_config_reference(const std::optional<std::filesystem::path>& path, std::ostream& out);

// Full command line entry point.
int run(int argc, char** argv);

}  // namespace aerobat::cli
