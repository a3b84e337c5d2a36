#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "guplab/bounds.hpp"

namespace guplab {

enum class StateKind { gaussian, superposition, mixture, uniform };

const char* to_string(StateKind kind);
StateKind parse_state_kind(const std::string& name);

struct GaussianPart {
  double weight = 1.0;
  double center_q = 0.0;
  double center_x = 0.0;
  double width_q = 0.5;
};

/// Recipe for a test state; the q-grid is chosen per deformation.
struct StateSpec {
  std::string name = "gaussian";
  StateKind kind = StateKind::gaussian;
  GaussianPart gaussian;
  RandomSuperpositionSpec superposition;
  std::vector<GaussianPart> parts;
  std::size_t taper_nodes = 2;
};

/// Builds the state on n q-nodes. At beta = 0 the q-window reaches eight
/// widths beyond the outermost center, each width widened in quadrature by
/// extra_width so that states disturbed by a position measurement still fit.
MixedState build_state(const StateSpec& spec, const DeformationParameter& beta, std::size_t n,
                       double extra_width = 0.0);

struct ProfilePair {
  ProfileKind kind = ProfileKind::gaussian;
  double f_width = 0.25;
  double g_width = 0.75;
};

struct PipelineSettings {
  std::size_t grid_n = 4096;
  /// Outcome-grid spacing as a fraction of the profile width, before bin alignment.
  double outcome_step = 0.25;
  /// x-lattice spacing target as a fraction of the position profile width.
  double dx_fraction = 1.0 / 6.0;
  double leakage_cap = 0.05;
  double bin_zeta = 0.25;
  double bin_xi = 0.5;
  /// Skip both collapses; only preparation relations are then available.
  bool prep_only = false;

  /// Doubled q-grid, halved outcome and lattice spacings, same bins.
  PipelineSettings refined() const;
};

/// Densities of one analysed state on window grids of the shared outcome lattices.
struct StateDensities {
  Density U;
  Density W;
  double correction = 0.0;
};

/// Every density and correction term the relations need for one
/// (state, beta, profiles, settings) cell.
class Pipeline {
 public:
  Pipeline(const StateSpec& spec, double beta, const ProfilePair& profiles,
           const PipelineSettings& settings = {});
  Pipeline(MixedState rho, const ProfilePair& profiles, const PipelineSettings& settings = {},
           std::string state_name = "state");
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  RelationReport check(RelationId id, MeasurementOrder order, const EntropyOrder& orders,
                       double tol) const;

  const MixedState& state() const noexcept { return rho_; }
  const AcceptanceProfile& f() const noexcept { return f_; }
  const AcceptanceProfile& g() const noexcept { return g_; }
  const PipelineSettings& settings() const noexcept { return settings_; }
  double beta() const noexcept { return rho_.deformation().beta(); }
  double s_f() const noexcept { return s_f_; }

  const StateDensities& rho_densities() const noexcept { return rho_d_; }
  const Density& U_phi_m() const;
  const Density& W_phi_m() const;
  const Density& U_phi_n() const;
  double correction_rho() const noexcept { return rho_d_.correction; }
  double correction_phi_n() const;
  const std::vector<StateDensities>& sigma() const noexcept { return sigma_; }
  const std::vector<StateDensities>& tau() const noexcept { return tau_; }
  const std::vector<double>& sigma_weights() const noexcept { return sigma_w_; }
  const std::vector<double>& tau_weights() const noexcept { return tau_w_; }
  /// Outcome values zeta_j (momentum first) and xi_j (position first) of the retained outcomes.
  const std::vector<double>& sigma_outcomes() const noexcept { return sigma_at_; }
  const std::vector<double>& tau_outcomes() const noexcept { return tau_at_; }
  const std::vector<double>& tau_leakage() const noexcept { return tau_leak_; }
  /// Set when a collapse stage failed; relations of that order then report it.
  const std::optional<Error>& momentum_first_error() const noexcept { return mp_error_; }
  const std::optional<Error>& position_first_error() const noexcept { return pm_error_; }
  double identity_sum_momentum() const noexcept { return identity_m_; }
  double identity_sum_position() const noexcept { return identity_n_; }
  const Grid& zeta_grid() const noexcept { return zeta_; }
  const Grid& xi_grid() const noexcept { return xi_; }
  const FourierLattice& lattice() const noexcept { return *lattice_; }

 private:
  void run();

  MixedState rho_;
  std::string state_name_;
  AcceptanceProfile f_;
  AcceptanceProfile g_;
  PipelineSettings settings_;
  std::unique_ptr<FourierLattice> lattice_;
  double s_f_ = 1.0;
  double h_zeta_ = 0.0;
  double h_xi_ = 0.0;
  Grid zeta_;
  Grid xi_;

  StateDensities rho_d_;
  double ideal_lhs_ = 0.0;
  std::vector<StateDensities> sigma_;
  std::vector<double> sigma_w_;
  std::vector<StateDensities> tau_;
  std::vector<double> tau_w_;
  std::vector<double> sigma_at_;
  std::vector<double> tau_at_;
  std::vector<double> tau_leak_;
  std::optional<Density> U_phi_m_;
  std::optional<Density> W_phi_m_;
  std::optional<Density> U_phi_n_;
  double corr_phi_n_ = 0.0;
  double corr_tau_avg_ = 0.0;
  double corr_sigma_avg_ = 0.0;
  std::optional<Error> mp_error_;
  std::optional<Error> pm_error_;
  double identity_m_ = 0.0;
  double identity_n_ = 0.0;
  double dropped_m_ = 0.0;
  double dropped_n_ = 0.0;
  double leakage_mean_ = 0.0;
  double leakage_max_ = 0.0;
};

/// Shortest %.17g spelling used for numeric report labels.
std::string number_label(double v);

/// One-shot check of a single relation for a prepared state.
RelationReport check_relation(RelationId id, const MixedState& rho, const ProfilePair& profiles,
                              const EntropyOrder& orders, MeasurementOrder order, double tol = 1e-4,
                              const PipelineSettings& settings = {});

}  // namespace guplab
