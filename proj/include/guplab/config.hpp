#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "guplab/suite.hpp"

namespace guplab {

constexpr int kConfigSchema = 1;

struct OutputPaths {
  std::string dir = "guplab-out";
  std::string report = "report.json";
  std::string table = "report.tsv";
};

struct RunConfig {
  std::vector<double> betas{0.0, 0.01, 0.1};
  std::vector<StateSpec> states;
  ProfileKind profile_kind = ProfileKind::gaussian;
  /// (f width, g width) pairs.
  std::vector<std::pair<double, double>> widths{{0.25, 0.75}, {0.5, 1.5}};
  std::vector<EntropyOrder> orders;
  double bin_zeta = 0.25;
  double bin_xi = 0.5;
  /// (bin_zeta, bin_xi) pairs for the bin-width sweep.
  std::vector<std::pair<double, double>> bin_sweep;
  std::size_t grid_n = 4096;
  double outcome_step = 0.25;
  double dx_fraction = 1.0 / 6.0;
  double leakage_cap = 0.05;
  double tol = 1e-4;
  std::uint64_t seed = 7;
  OutputPaths output;

  /// Three state families, two width pairs and four order pairs.
  static RunConfig defaults();

  SuiteSpec suite() const;
  PipelineSettings settings() const;
};

/// Parses a JSON config. Missing keys keep their defaults; every range error
/// is a ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Range checks shared by parsing and command-line overrides.
void validate(const RunConfig& config);

/// "2/3" or "0.5" as a number.
double parse_order_value(const std::string& text);

}  // namespace guplab
