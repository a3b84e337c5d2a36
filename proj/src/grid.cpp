#include "guplab/grid.hpp"

#include <cmath>
#include <string>

namespace guplab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSample: return "InvalidSample";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NormalizationError: return "NormalizationError";
    case ErrorKind::BoundaryMaximum: return "BoundaryMaximum";
    case ErrorKind::ExcessTruncation: return "ExcessTruncation";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::BandLimitViolation: return "BandLimitViolation";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateMeasurement: return "DegenerateMeasurement";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConjugacyError: return "ConjugacyError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::TailTruncation: return "TailTruncation";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    fail(ErrorKind::InvalidArgument, "grid requires finite lo < hi");
  }
  if (n < 8) fail(ErrorKind::InvalidArgument, "grid requires at least 8 nodes");
  h_ = (hi - lo) / static_cast<double>(n - 1);
}

Grid Grid::lattice(long first, long last, double h) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "lattice spacing must be positive");
  Grid g(static_cast<double>(first) * h, static_cast<double>(last) * h,
         static_cast<std::size_t>(last - first + 1));
  g.h_ = h;
  return g;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

template <typename T>
SampledFunction<T>::SampledFunction(Grid g, std::vector<T> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n()) {
    fail(ErrorKind::InvalidSample, "sample count " + std::to_string(values.size()) +
                                       " does not match grid size " + std::to_string(grid.n()));
  }
  for (const auto& x : values) {
    if (!std::isfinite(std::abs(x))) fail(ErrorKind::InvalidSample, "non-finite sample");
  }
}

template struct SampledFunction<double>;
template struct SampledFunction<cplx>;

namespace {

template <typename T>
T trapezoid(const Grid& grid, std::span<const T> values, bool check) {
  if (values.size() != grid.n()) fail(ErrorKind::InvalidSample, "sample count mismatch");
  T interior{};
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (check && !std::isfinite(std::abs(values[i]))) {
      fail(ErrorKind::InvalidSample, "non-finite sample at node " + std::to_string(i));
    }
    interior += values[i];
  }
  const T ends = values.front() + values.back();
  if (check && !std::isfinite(std::abs(ends))) fail(ErrorKind::InvalidSample, "non-finite end sample");
  return grid.spacing() * (interior + 0.5 * ends);
}

}  // namespace

double integrate(const Grid& grid, std::span<const double> values) {
  return trapezoid(grid, values, true);
}

cplx integrate(const Grid& grid, std::span<const cplx> values) {
  return trapezoid(grid, values, true);
}

double trapezoid_unchecked(const Grid& grid, std::span<const double> values) {
  return trapezoid(grid, values, false);
}

Supremum supremum_1d(const std::function<double(double)>& h, double scan_lo, double scan_hi,
                     std::size_t scan_n) {
  if (scan_n < 64) fail(ErrorKind::InvalidArgument, "supremum scan needs at least 64 nodes");
  const Grid scan(scan_lo, scan_hi, scan_n);

  std::size_t best = 0;
  double best_value = h(scan.node(0));
  for (std::size_t i = 1; i < scan_n; ++i) {
    const double v = h(scan.node(i));
    if (!std::isfinite(v)) fail(ErrorKind::InvalidSample, "non-finite objective in supremum scan");
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == scan_n) {
    fail(ErrorKind::BoundaryMaximum,
         "maximum attained at scan boundary x=" + std::to_string(scan.node(best)));
  }

  Supremum result{scan.node(best), best_value};
  auto consider = [&](double x, double v) {
    if (v > result.value) result = {x, v};
  };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = scan.node(best - 1);
  double b = scan.node(best + 1);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = h(c);
  double fd = h(d);
  consider(c, fc);
  consider(d, fd);
  const double stop = 1e-10 * (scan_hi - scan_lo);
  while (b - a > stop) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = h(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = h(d);
      consider(d, fd);
    }
  }
  return result;
}

}  // namespace guplab
