#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "guplab/errors.hpp"

namespace guplab {

using cplx = std::complex<double>;

/// Uniform grid of n nodes on [lo, hi].
class Grid {
 public:
  Grid() = default;
  Grid(double lo, double hi, std::size_t n);

  /// Grid whose nodes are the integer multiples first*h, ..., last*h.
  static Grid lattice(long first, long last, double h);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t n() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double span() const noexcept { return hi_ - lo_; }

  double node(std::size_t i) const noexcept {
    return i + 1 == n_ ? hi_ : lo_ + static_cast<double>(i) * h_;
  }
  std::vector<double> nodes() const;
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  /// Trapezoid weight of node i (h/2 at the ends, h inside).
  double weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
  }

  bool operator==(const Grid&) const = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::size_t n_ = 0;
  double h_ = 0.0;
};

template <typename T>
struct SampledFunction {
  Grid grid;
  std::vector<T> values;

  SampledFunction() = default;
  SampledFunction(Grid g, std::vector<T> v);
};

/// Composite trapezoid rule over the whole grid.
double integrate(const Grid& grid, std::span<const double> values);
cplx integrate(const Grid& grid, std::span<const cplx> values);

template <typename T>
T integrate(const SampledFunction<T>& f) {
  return integrate(f.grid, std::span<const T>(f.values));
}

/// Same rule without the finiteness check, for hot loops on values already validated.
double trapezoid_unchecked(const Grid& grid, std::span<const double> values);

struct Supremum {
  double location;
  double value;
};

/// Coarse scan over scan_n nodes followed by golden-section refinement around
/// the best node. A maximum on either end of the scan raises BoundaryMaximum.
Supremum supremum_1d(const std::function<double(double)>& h, double scan_lo, double scan_hi,
                     std::size_t scan_n);

}  // namespace guplab
