#pragma once

#include <string>
#include <utility>
#include <vector>

#include "guplab/entropy.hpp"
#include "guplab/measurement.hpp"
#include "guplab/states.hpp"

namespace guplab {

enum class RelationId {
  ROBERTSON,
  PREP_SHANNON,
  S1_MP_SHANNON,
  S1_PM_SHANNON,
  S2_MP_SHANNON,
  S2_PM_SHANNON,
  PREP_SHANNON_BIN,
  S1_MP_BIN,
  S1_PM_BIN,
  S2_MP_BIN,
  S2_PM_BIN,
  PREP_RENYI,
  PREP_RENYI_BIN,
  PREP_TSALLIS_BIN,
  S1_RENYI,
  S1_RENYI_BIN,
  S1_TSALLIS_BIN,
  S2_RENYI,
  S2_RENYI_BIN,
  S2_TSALLIS_BIN,
};

enum class MeasurementOrder { momentum_first, position_first, preparation };

const char* to_string(RelationId id);
const char* to_string(MeasurementOrder order);
RelationId parse_relation_id(const std::string& name);
MeasurementOrder parse_order(const std::string& name);

/// All ids in declaration order.
const std::vector<RelationId>& all_relation_ids();
/// Orders an id is checked in: preparation, one fixed order, or both.
std::vector<MeasurementOrder> applicable_orders(RelationId id);
bool is_binned(RelationId id);
/// True for the Renyi/Tsallis ids that take a conjugate order pair.
bool takes_orders(RelationId id);

struct RelationReport {
  RelationId id = RelationId::PREP_SHANNON;
  MeasurementOrder order = MeasurementOrder::preparation;
  double alpha = 1.0;
  double gamma = 1.0;
  double beta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  double tol = 1e-4;
  /// "ok", "violation", or "error:<Kind>".
  std::string status;
  std::vector<std::pair<std::string, std::string>> labels;
  std::vector<std::pair<std::string, double>> diagnostics;

  /// Sets margin, pass and status from lhs, rhs and tol.
  void settle();
  double diagnostic(const std::string& key) const;
};

/// <ln(1 + beta k^2)> of rho, evaluated in q where it is -2 ln cos(sqrt(beta) q).
double correction_term(const MixedState& rho);

/// sup over zeta of int |f(zeta - k)|^2 / (1 + beta k^2) dk. Exactly the
/// profile's normalization integral at beta = 0.
double sf_compute(const AcceptanceProfile& f, const DeformationParameter& beta);

/// kappa = sqrt(alpha^{1/(alpha-1)} gamma^{1/(gamma-1)}); e at alpha = gamma = 1.
double kappa(double alpha, double gamma);

/// Delta x Delta k against (1 + beta <k^2>) / 2, with the weaker
/// (1 + beta Delta k^2) / 2 chained in the diagnostics.
RelationReport robertson_check(const MixedState& rho, double tol = 1e-4);

}  // namespace guplab
