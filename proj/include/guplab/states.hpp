#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "guplab/grid.hpp"

namespace guplab {

/// Minimal-length deformation strength beta (length^2). The physical
/// wavenumber is k(q) = tan(sqrt(beta) q) / sqrt(beta) on (-q0, q0).
class DeformationParameter {
 public:
  explicit DeformationParameter(double beta = 0.0);

  double beta() const noexcept { return beta_; }
  bool deformed() const noexcept { return beta_ > 0.0; }

  /// Band edge pi / (2 sqrt(beta)); infinity when beta = 0.
  double q0() const noexcept;

  double k_of_q(double q) const noexcept;
  double q_of_k(double k) const noexcept;

  /// ln(1 + beta k(q)^2) = -2 ln cos(sqrt(beta) q).
  double log_factor_q(double q) const noexcept;

  bool operator==(const DeformationParameter&) const = default;

 private:
  double beta_;
  double root_;
};

/// Amplitude phi(q) of a band-limited pure state on its q-grid.
class PureState {
 public:
  /// Validates finiteness and normalization (within 1e-6). With renormalize set
  /// the amplitudes are scaled to unit norm first.
  PureState(DeformationParameter beta, Grid qgrid, std::vector<cplx> amplitudes,
            bool renormalize = false);

  const DeformationParameter& deformation() const noexcept { return beta_; }
  const Grid& qgrid() const noexcept { return grid_; }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }

  double norm_squared() const;
  /// Largest |phi| at the two grid ends.
  double endpoint_residual() const noexcept;
  /// |phi(q)|^2 at the grid nodes.
  std::vector<double> q_density() const;

 private:
  DeformationParameter beta_;
  Grid grid_;
  std::vector<cplx> amps_;
};

struct MixtureComponent {
  double weight;
  PureState state;
};

/// Finite ensemble sum_i w_i |phi_i><phi_i| on one shared q-grid.
class MixedState {
 public:
  MixedState(const PureState& pure);  // NOLINT: a pure state is a one-component mixture
  explicit MixedState(std::vector<MixtureComponent> components, bool renormalize_weights = false);

  std::span<const MixtureComponent> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  const Grid& qgrid() const noexcept { return components_.front().state.qgrid(); }
  const DeformationParameter& deformation() const noexcept {
    return components_.front().state.deformation();
  }

  /// Weighted q-density sum_i w_i |phi_i(q)|^2.
  std::vector<double> q_density() const;

 private:
  std::vector<MixtureComponent> components_;
};

/// q-grid used by the state builders. For beta > 0 it spans (-q0, q0) up to a
/// relative gap of 1e-9; for beta = 0 it spans [-cutoff, cutoff].
Grid make_qgrid(const DeformationParameter& beta, std::size_t grid_n, double cutoff);

struct GaussianOptions {
  double center_x = 0.0;
  /// Half-width of the q-window when beta = 0. Non-positive selects 8 widths beyond the center.
  double cutoff = 0.0;
};

/// Gaussian |phi(q)|^2 with mean center_q and standard deviation width_q,
/// truncated to the band. The residual edge pedestal is removed so the
/// amplitude vanishes at both grid ends. Displacement in x enters as the
/// phase exp(-i q center_x).
PureState make_gaussian_q(const DeformationParameter& beta, double center_q, double width_q,
                          std::size_t grid_n, const GaussianOptions& options = {});

/// Constant |phi(q)|^2 on the band with a raised-cosine taper over the outermost
/// taper_nodes nodes per side. Requires beta > 0.
PureState make_uniform_q(const DeformationParameter& beta, std::size_t grid_n,
                         std::size_t taper_nodes = 2);

/// Normalized sum_i c_i phi_i. Raises DegenerateState when the sum vanishes.
PureState make_superposition(std::span<const PureState> states, std::span<const cplx> coeffs);

struct RandomSuperpositionSpec {
  std::size_t components = 3;
  double width_q = 0.5;
  double spread_q = 0.5;  ///< centers drawn uniformly in [-spread_q, spread_q]
  double spread_x = 1.5;  ///< displacements drawn uniformly in [-spread_x, spread_x]
  double cutoff = 0.0;
  std::uint64_t seed = 1;
};

/// Seeded superposition of displaced Gaussians with complex normal coefficients.
PureState make_random_superposition(const DeformationParameter& beta, std::size_t grid_n,
                                    const RandomSuperpositionSpec& spec);

}  // namespace guplab
