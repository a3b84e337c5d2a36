#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "guplab/grid.hpp"
#include "guplab/states.hpp"

namespace guplab {

enum class Axis { q, x, k, zeta, xi };

const char* to_string(Axis axis);

/// Sampled probability density on one named axis.
struct Density {
  Axis axis = Axis::x;
  Grid grid;
  std::vector<double> values;
  /// Probability mass that fell outside the grid before renormalization.
  double tail_mass = 0.0;
  /// Mass removed by clamping negative interpolants to zero.
  double clamp_mass = 0.0;

  /// Checks non-negativity and unit mass within tol.
  void validate(double tol = 1e-6) const;
};

/// Builds a density from raw non-negative samples. The captured mass is
/// recorded as 1 - tail_mass and the values are renormalized when
/// 1 - captured < max_tail; otherwise WindowTooSmall is raised.
Density make_density(Axis axis, const Grid& grid, std::vector<double> values, double max_tail);

/// Band-limited Fourier pair psi(x) <-> phi(q) evaluated with FFTs on the
/// periodic lattice x_m = (m - N/2) dx, dx = 2 pi / (N dq). The lattice x-grid
/// carries every node, so the transform pair is exactly invertible.
class FourierLattice {
 public:
  /// N is the smallest power of two with N >= 2 n_q and dx <= dx_target.
  FourierLattice(const Grid& qgrid, double dx_target);
  ~FourierLattice();
  FourierLattice(const FourierLattice&) = delete;
  FourierLattice& operator=(const FourierLattice&) = delete;

  const Grid& qgrid() const noexcept { return qgrid_; }
  const Grid& xgrid() const noexcept { return xgrid_; }
  std::size_t size() const noexcept { return size_; }

  /// psi on every lattice node from phi on the q-grid (trapezoid weights in q).
  std::vector<cplx> to_x(std::span<const cplx> phi) const;

  struct Projection {
    std::vector<cplx> in_band;  ///< spectrum on the q-grid nodes, not renormalized
    double total_norm;          ///< integral of |psi|^2 over the lattice
    double leakage;             ///< fraction of total_norm outside the q-grid
  };
  /// Spectrum of psi on the periodically extended q-lattice, split into the
  /// in-band part and the out-of-band fraction.
  Projection to_q(std::span<const cplx> psi) const;

 private:
  struct Plans;
  Grid qgrid_;
  Grid xgrid_;
  std::size_t size_;
  std::unique_ptr<Plans> plans_;
};

/// Reference transform psi(x) = (2 pi)^{-1/2} int exp(iqx) phi(q) dq by direct
/// O(n m) quadrature.
SampledFunction<cplx> q_to_x_direct(const PureState& state, const Grid& xgrid);

/// psi on xgrid. Uses the FFT lattice when xgrid is the lattice of the state's
/// q-grid, otherwise direct quadrature. WindowTooSmall when the window keeps
/// less than 1 - 1e-6 of the norm.
SampledFunction<cplx> q_to_x(const PureState& state, const Grid& xgrid);
SampledFunction<cplx> q_to_x(const PureState& state, const FourierLattice& lattice);

struct BandProjectedState {
  PureState state;
  double leakage;
};

/// phi(q) = (2 pi)^{-1/2} int exp(-iqx) psi(x) dx restricted to the band,
/// renormalized. The out-of-band fraction is reported as leakage and must not
/// exceed leakage_cap (BandLimitViolation). Direct quadrature; the out-of-band
/// mass is measured against the x-space norm.
BandProjectedState x_to_q(const SampledFunction<cplx>& psi, const DeformationParameter& beta,
                          const Grid& qgrid, double leakage_cap = 0.05);
/// FFT path for psi sampled on the full lattice.
BandProjectedState x_to_q(std::span<const cplx> psi, const DeformationParameter& beta,
                          const FourierLattice& lattice, double leakage_cap = 0.05);

/// u(k) = v(q(k)) / (1 + beta k^2) on kgrid, interpolating v with a
/// shape-preserving cubic. For beta = 0 returns v relabeled. WindowTooSmall
/// when the grid captures less than min_capture of the mass.
Density q_to_k_density(const Density& v, const DeformationParameter& beta, const Grid& kgrid,
                       double min_capture = 1.0 - 1e-6);

/// Mass of d on [a, b] with linear interpolation inside partial cells.
double interval_probability(const Density& d, double a, double b);

/// Running integral F(x_i) of d from grid.lo() to node i.
std::vector<double> cumulative(const Density& d);

/// Running integral up to an arbitrary x in the grid span, given cumulative(d).
double cumulative_at(const Density& d, std::span<const double> cum, double x);

/// Smallest node range [first, last] outside of which each tail carries at most tail mass.
std::pair<std::size_t, std::size_t> quantile_window(const Grid& grid, std::span<const double> density,
                                                    double tail);

}  // namespace guplab
