#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "guplab/config.hpp"

namespace guplab {

enum ExitCode : int {
  kExitOk = 0,
  kExitRelationFailure = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

/// Environment variable that overrides the configured output directory.
constexpr const char* kOutputEnv = "GUPLAB_OUT";

/// Command-line overrides applied on top of a RunConfig.
struct Overrides {
  std::string config_path;
  std::vector<std::string> relations;
  std::string order = "all";
  std::string out_dir;
  double tol = 0.0;
  unsigned threads = 1;
};

/// Loads the config (bundled defaults when no path is given), applies the
/// overrides and the output environment variable, and returns the suite to run.
RunConfig resolve_config(const Overrides& o);
SuiteSpec resolve_suite(const RunConfig& config, const Overrides& o);

int cmd_check(const Overrides& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const Overrides& o, const std::string& axis, std::ostream& out, std::ostream& err);
int cmd_dump(const Overrides& o, const std::string& what, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace guplab
