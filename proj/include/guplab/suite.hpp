#pragma once

#include <vector>

#include "guplab/pipeline.hpp"

namespace guplab {

struct SuiteSpec {
  std::vector<StateSpec> states;
  std::vector<double> betas;
  /// Profile kind and (f, g) widths; one cell per entry.
  std::vector<ProfilePair> profiles;
  std::vector<EntropyOrder> orders{EntropyOrder{}};
  PipelineSettings settings;
  double tol = 1e-4;
  /// Empty selects every id.
  std::vector<RelationId> relations;
  /// Empty selects every applicable order.
  std::vector<MeasurementOrder> measurement_orders;
};

/// Reports of one cell in sweep order: ids in declaration order, then
/// measurement order, then entropy-order pair (Shannon ids once).
std::vector<RelationReport> check_cell(const Pipeline& cell, const SuiteSpec& spec);

/// Sweep state x beta x profile pair. A cell that cannot be built yields one
/// error report per requested relation instead of aborting the sweep.
std::vector<RelationReport> run_suite(const SuiteSpec& spec);

}  // namespace guplab
