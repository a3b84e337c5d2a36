#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "guplab/grid.hpp"
#include "guplab/states.hpp"
#include "guplab/transforms.hpp"

namespace guplab {

enum class ProfileKind { gaussian, raised_cosine, top_hat_smoothed };

const char* to_string(ProfileKind kind);
ProfileKind parse_profile_kind(const std::string& name);

/// Squared-modulus acceptance profile |f(t)|^2 of a finite-resolution
/// instrument. width is the standard deviation of |f|^2 for every kind.
class AcceptanceProfile {
 public:
  static AcceptanceProfile make(ProfileKind kind, double width, double center_offset = 0.0);

  ProfileKind kind() const noexcept { return kind_; }
  double width() const noexcept { return width_; }
  double center_offset() const noexcept { return offset_; }

  /// |f(t)|^2, exactly zero beyond the support.
  double sq_at(double t) const noexcept;
  /// f(t) taken real and non-negative.
  double amp_at(double t) const noexcept { return std::sqrt(sq_at(t)); }
  /// Half-width of the region around center_offset outside which |f|^2 is treated as zero.
  double support() const noexcept { return support_; }
  /// Width of |f~|^2 on the conjugate axis, used to size windows on that axis.
  double conjugate_width() const noexcept { return conjugate_width_; }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> sq_modulus() const noexcept { return sq_; }

 private:
  AcceptanceProfile() = default;
  ProfileKind kind_ = ProfileKind::gaussian;
  double width_ = 1.0;
  double offset_ = 0.0;
  double support_ = 0.0;
  double conjugate_width_ = 0.0;
  // shape parameters: gaussian sigma; raised-cosine half-length; top-hat half-length and smoothing
  double p1_ = 0.0;
  double p2_ = 0.0;
  Grid grid_;
  std::vector<double> sq_;
};

/// Sparse rows K[j][i] = w_i |f(zeta_j - k(q_i))|^2 with w_i the q-trapezoid
/// weights, so that U(zeta_j) = sum_i K[j][i] v(q_i) is the q-space form of
/// int |f(zeta - k)|^2 u(k) dk.
class MomentumKernel {
 public:
  MomentumKernel(const Grid& qgrid, const DeformationParameter& beta, const AcceptanceProfile& f,
                 const Grid& zeta_grid);

  std::size_t rows() const noexcept { return first_.size(); }
  std::size_t first(std::size_t j) const noexcept { return first_[j]; }
  std::span<const double> row(std::size_t j) const noexcept;
  /// |f(zeta_j - k(q_i))| for the same entries (no quadrature weight).
  std::span<const double> amplitude_row(std::size_t j) const noexcept;

  /// Unnormalized outcome density at every outcome node.
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::vector<std::size_t> first_;
  std::vector<std::size_t> offset_;
  std::vector<double> values_;
  std::vector<double> amps_;
};

/// Same construction for position outcomes on a uniform x-grid.
class PositionKernel {
 public:
  PositionKernel(const Grid& xgrid, const AcceptanceProfile& g, const Grid& xi_grid);

  std::size_t rows() const noexcept { return first_.size(); }
  std::size_t first(std::size_t j) const noexcept { return first_[j]; }
  std::span<const double> row(std::size_t j) const noexcept;
  std::span<const double> amplitude_row(std::size_t j) const noexcept;

  std::vector<double> apply(std::span<const double> w) const;

 private:
  std::vector<std::size_t> first_;
  std::vector<std::size_t> offset_;
  std::vector<double> values_;
  std::vector<double> amps_;
};

/// x-spacing that resolves both the state's band and the position profile.
double default_dx_target(const Grid& qgrid, const AcceptanceProfile& g);

/// sum_c w_c |psi_c(x)|^2 on every lattice node.
std::vector<double> x_density(const MixedState& rho, const FourierLattice& lattice);

/// Reference convolution int |p(y - t)|^2 d(t) dt on out_grid by direct
/// double-sum quadrature. The input density's axis x maps to xi, k to zeta.
Density convolve_density(const Density& d, const AcceptanceProfile& profile, const Grid& out_grid);

/// U_rho on zeta_grid. Raises WindowTooSmall when less than 1 - 1e-5 is captured.
Density momentum_outcome_density(const MixedState& rho, const AcceptanceProfile& f,
                                 const Grid& zeta_grid);
/// W_rho on xi_grid, with psi evaluated on the given lattice.
Density position_outcome_density(const MixedState& rho, const AcceptanceProfile& g,
                                 const Grid& xi_grid, const FourierLattice& lattice);
Density position_outcome_density(const MixedState& rho, const AcceptanceProfile& g,
                                 const Grid& xi_grid);

struct OutcomeEnsemble {
  Axis axis = Axis::zeta;
  Grid outcome_grid;
  /// Indices into outcome_grid of the retained outcomes.
  std::vector<std::size_t> retained;
  /// Outcome probabilities, renormalized to sum 1.
  std::vector<double> weights;
  std::vector<MixedState> post_states;
  /// Sum of the raw weights before renormalization (resolution of the identity).
  double raw_weight_sum = 0.0;
  /// Raw weight of outcomes dropped below the floor.
  double dropped_mass = 0.0;
  /// Per retained outcome, the out-of-band fraction (position collapse; zero otherwise).
  std::vector<double> leakage;
};

constexpr double kOutcomeWeightFloor = 1e-12;

/// Momentum measurement with selective readout: post amplitude f(zeta_j - k) phi(k).
OutcomeEnsemble collapse_momentum(const MixedState& rho, const AcceptanceProfile& f,
                                  const Grid& zeta_grid);

/// Position measurement with selective readout: post amplitude g(xi_j - x) psi(x),
/// projected back to the band. BandLimitViolation names the offending outcome.
OutcomeEnsemble collapse_position(const MixedState& rho, const AcceptanceProfile& g,
                                  const Grid& xi_grid, const FourierLattice& lattice,
                                  double leakage_cap = 0.05);
OutcomeEnsemble collapse_position(const MixedState& rho, const AcceptanceProfile& g,
                                  const Grid& xi_grid, double leakage_cap = 0.05);

/// Non-selective mixture sum_j weight_j post_j.
MixedState scenario1_post_state(const OutcomeEnsemble& ensemble);

}  // namespace guplab
