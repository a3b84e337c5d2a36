#include "guplab/suite.hpp"

#include <algorithm>
#include <cmath>

namespace guplab {

namespace {

struct Request {
  RelationId id;
  MeasurementOrder order;
  EntropyOrder eo;
};

std::vector<Request> requests(const SuiteSpec& spec) {
  const auto& ids = spec.relations.empty() ? all_relation_ids() : spec.relations;
  std::vector<Request> out;
  for (RelationId id : all_relation_ids()) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    for (MeasurementOrder order : applicable_orders(id)) {
      if (!spec.measurement_orders.empty() &&
          std::find(spec.measurement_orders.begin(), spec.measurement_orders.end(), order) ==
              spec.measurement_orders.end()) {
        continue;
      }
      if (takes_orders(id)) {
        for (const auto& eo : spec.orders) out.push_back({id, order, eo});
      } else {
        out.push_back({id, order, EntropyOrder{}});
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> cell_labels(const StateSpec& state, const ProfilePair& p) {
  return {{"state", state.name},
          {"profile", to_string(p.kind)},
          {"f_width", number_label(p.f_width)},
          {"g_width", number_label(p.g_width)}};
}

}  // namespace

std::vector<RelationReport> check_cell(const Pipeline& cell, const SuiteSpec& spec) {
  std::vector<RelationReport> out;
  for (const auto& r : requests(spec)) out.push_back(cell.check(r.id, r.order, r.eo, spec.tol));
  return out;
}

std::vector<RelationReport> run_suite(const SuiteSpec& spec) {
  std::vector<RelationReport> out;
  for (const auto& state : spec.states) {
    for (double beta : spec.betas) {
      for (const auto& profiles : spec.profiles) {
        try {
          const Pipeline cell(state, beta, profiles, spec.settings);
          auto reports = check_cell(cell, spec);
          out.insert(out.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
        } catch (const Error& e) {
          std::vector<std::pair<std::string, double>> diag;
          try {
            diag.emplace_back("s_f", sf_compute(AcceptanceProfile::make(profiles.kind, profiles.f_width),
                                                DeformationParameter(beta)));
          } catch (const Error&) {
          }
          for (const auto& req : requests(spec)) {
            RelationReport r;
            r.id = req.id;
            r.order = req.order;
            r.alpha = req.eo.alpha;
            r.gamma = req.eo.gamma;
            r.beta = beta;
            r.tol = spec.tol;
            r.lhs = r.rhs = r.margin = std::nan("");
            r.pass = false;
            r.status = std::string("error:") + to_string(e.kind());
            r.labels = cell_labels(state, profiles);
            r.diagnostics = diag;
            out.push_back(std::move(r));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace guplab
