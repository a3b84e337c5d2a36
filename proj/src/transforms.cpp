#include "guplab/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace guplab {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // (2 pi)^{-1/2}

// FFTW planning is not thread-safe; execution with fresh buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

std::size_t next_pow2(double x) {
  std::size_t n = 1;
  while (static_cast<double>(n) < x) n <<= 1;
  return n;
}

// Fritsch-Carlson slopes for uniformly spaced data.
std::vector<double> pchip_slopes(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / h;
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] > 0.0) {
      d[i] = 2.0 / (1.0 / delta[i - 1] + 1.0 / delta[i]);
    }
  }
  auto end_slope = [](double d0, double d1) {
    double s = 0.5 * (3.0 * d0 - d1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(delta[0], delta[1]);
  d[n - 1] = end_slope(delta[n - 2], delta[n - 3]);
  return d;
}

double pchip_eval(const Grid& grid, std::span<const double> y, std::span<const double> d, double x) {
  const double h = grid.spacing();
  double s = (x - grid.lo()) / h;
  auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(grid.n() - 2)));
  const double t = s - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

}  // namespace

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::q: return "q";
    case Axis::x: return "x";
    case Axis::k: return "k";
    case Axis::zeta: return "zeta";
    case Axis::xi: return "xi";
  }
  return "?";
}

void Density::validate(double tol) const {
  if (values.size() != grid.n()) fail(ErrorKind::InvalidSample, "density size mismatch");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::InvalidSample, "density must be finite and >= 0");
  }
  const double mass = integrate(grid, values);
  if (std::abs(mass - 1.0) > tol) {
    fail(ErrorKind::NormalizationError, "density integrates to " + std::to_string(mass));
  }
}

Density make_density(Axis axis, const Grid& grid, std::vector<double> values, double max_tail) {
  const double captured = integrate(grid, values);
  const double tail = 1.0 - captured;
  if (tail > max_tail) {
    fail(ErrorKind::WindowTooSmall, std::string(to_string(axis)) + "-grid captures only " +
                                        std::to_string(captured) + " of the mass");
  }
  if (!(captured > 0.0)) fail(ErrorKind::DegenerateState, "density has no mass");
  const double scale = 1.0 / captured;
  for (auto& v : values) v *= scale;
  Density d{axis, grid, std::move(values)};
  d.tail_mass = std::max(0.0, tail);
  return d;
}

struct FourierLattice::Plans {
  fftw_plan backward = nullptr;
  fftw_plan forward = nullptr;
};

FourierLattice::FourierLattice(const Grid& qgrid, double dx_target)
    : qgrid_(qgrid), plans_(std::make_unique<Plans>()) {
  if (!(dx_target > 0.0)) fail(ErrorKind::InvalidArgument, "lattice spacing target must be positive");
  const double dq = qgrid.spacing();
  size_ = next_pow2(std::max(2.0 * static_cast<double>(qgrid.n()),
                             2.0 * std::numbers::pi / (dq * dx_target)));
  const double dx = 2.0 * std::numbers::pi / (static_cast<double>(size_) * dq);
  const long half = static_cast<long>(size_ / 2);
  xgrid_ = Grid::lattice(-half, half - 1, dx);

  std::lock_guard lock(planner_mutex());
  FftwBuffer in(size_);
  FftwBuffer out(size_);
  const int n = static_cast<int>(size_);
  plans_->backward = fftw_plan_dft_1d(n, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans_->forward = fftw_plan_dft_1d(n, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
}

FourierLattice::~FourierLattice() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->backward);
  fftw_destroy_plan(plans_->forward);
}

std::vector<cplx> FourierLattice::to_x(std::span<const cplx> phi) const {
  const std::size_t n = qgrid_.n();
  if (phi.size() != n) fail(ErrorKind::InvalidSample, "amplitude count mismatch");
  FftwBuffer in(size_);
  FftwBuffer out(size_);
  for (std::size_t j = 0; j < size_; ++j) {
    cplx a = 0.0;
    if (j < n) {
      a = phi[j] * (qgrid_.weight(j) / qgrid_.spacing());
      if (j & 1U) a = -a;
    }
    in.data[j][0] = a.real();
    in.data[j][1] = a.imag();
  }
  fftw_execute_dft(plans_->backward, in.data, out.data);

  std::vector<cplx> psi(size_);
  const double scale = kInvSqrt2Pi * qgrid_.spacing();
  const double q_lo = qgrid_.lo();
  for (std::size_t m = 0; m < size_; ++m) {
    const cplx phase = std::polar(scale, q_lo * xgrid_.node(m));
    psi[m] = phase * cplx(out.data[m][0], out.data[m][1]);
  }
  return psi;
}

FourierLattice::Projection FourierLattice::to_q(std::span<const cplx> psi) const {
  if (psi.size() != size_) fail(ErrorKind::InvalidSample, "lattice sample count mismatch");
  FftwBuffer in(size_);
  FftwBuffer out(size_);
  const double q_lo = qgrid_.lo();
  double total = 0.0;
  for (std::size_t m = 0; m < size_; ++m) {
    const cplx a = psi[m] * std::polar(1.0, -q_lo * xgrid_.node(m));
    in.data[m][0] = a.real();
    in.data[m][1] = a.imag();
    total += std::norm(psi[m]);
  }
  total *= xgrid_.spacing();
  fftw_execute_dft(plans_->forward, in.data, out.data);

  const std::size_t n = qgrid_.n();
  const double scale = kInvSqrt2Pi * xgrid_.spacing();
  Projection p{std::vector<cplx>(n), total, 0.0};
  double in_band = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx a(out.data[j][0], out.data[j][1]);
    a *= (j & 1U) ? -scale : scale;
    p.in_band[j] = a;
    in_band += qgrid_.weight(j) * std::norm(a);
  }
  p.leakage = total > 0.0 ? std::max(0.0, 1.0 - in_band / total) : 0.0;
  return p;
}

SampledFunction<cplx> q_to_x_direct(const PureState& state, const Grid& xgrid) {
  const Grid& qg = state.qgrid();
  const auto phi = state.amplitudes();
  std::vector<cplx> psi(xgrid.n());
  for (std::size_t m = 0; m < xgrid.n(); ++m) {
    const double x = xgrid.node(m);
    cplx sum = 0.0;
    for (std::size_t j = 0; j < qg.n(); ++j) {
      sum += qg.weight(j) * phi[j] * std::polar(1.0, qg.node(j) * x);
    }
    psi[m] = kInvSqrt2Pi * sum;
  }
  return {xgrid, std::move(psi)};
}

namespace {

void require_capture(const Grid& xgrid, std::span<const cplx> psi) {
  double mass = 0.0;
  for (std::size_t m = 0; m < psi.size(); ++m) mass += xgrid.weight(m) * std::norm(psi[m]);
  if (mass < 1.0 - 1e-6) {
    fail(ErrorKind::WindowTooSmall, "x-window captures only " + std::to_string(mass) + " of the norm");
  }
}

BandProjectedState finish_projection(std::vector<cplx> in_band, const DeformationParameter& beta,
                                     const Grid& qgrid, double leakage, double leakage_cap) {
  if (leakage > leakage_cap) {
    fail(ErrorKind::BandLimitViolation,
         "out-of-band fraction " + std::to_string(leakage) + " exceeds cap " + std::to_string(leakage_cap));
  }
  return {PureState(beta, qgrid, std::move(in_band), true), leakage};
}

}  // namespace

SampledFunction<cplx> q_to_x(const PureState& state, const FourierLattice& lattice) {
  if (!(state.qgrid() == lattice.qgrid())) fail(ErrorKind::InvalidArgument, "lattice built for another q-grid");
  SampledFunction<cplx> out{lattice.xgrid(), lattice.to_x(state.amplitudes())};
  require_capture(out.grid, out.values);
  return out;
}

SampledFunction<cplx> q_to_x(const PureState& state, const Grid& xgrid) {
  const FourierLattice lattice(state.qgrid(), xgrid.spacing());
  if (lattice.xgrid() == xgrid) return q_to_x(state, lattice);
  SampledFunction<cplx> out = q_to_x_direct(state, xgrid);
  require_capture(out.grid, out.values);
  return out;
}

BandProjectedState x_to_q(const SampledFunction<cplx>& psi, const DeformationParameter& beta,
                          const Grid& qgrid, double leakage_cap) {
  const Grid& xg = psi.grid;
  double total = 0.0;
  for (std::size_t m = 0; m < xg.n(); ++m) total += xg.weight(m) * std::norm(psi.values[m]);
  if (!(total > 0.0)) fail(ErrorKind::DegenerateState, "empty wave function");

  std::vector<cplx> phi(qgrid.n());
  for (std::size_t j = 0; j < qgrid.n(); ++j) {
    const double q = qgrid.node(j);
    cplx sum = 0.0;
    for (std::size_t m = 0; m < xg.n(); ++m) {
      sum += xg.weight(m) * psi.values[m] * std::polar(1.0, -q * xg.node(m));
    }
    phi[j] = kInvSqrt2Pi * sum;
  }
  double in_band = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) in_band += qgrid.weight(j) * std::norm(phi[j]);
  const double leakage = std::max(0.0, 1.0 - in_band / total);
  return finish_projection(std::move(phi), beta, qgrid, leakage, leakage_cap);
}

BandProjectedState x_to_q(std::span<const cplx> psi, const DeformationParameter& beta,
                          const FourierLattice& lattice, double leakage_cap) {
  FourierLattice::Projection p = lattice.to_q(psi);
  if (!(p.total_norm > 0.0)) fail(ErrorKind::DegenerateState, "empty wave function");
  return finish_projection(std::move(p.in_band), beta, lattice.qgrid(), p.leakage, leakage_cap);
}

Density q_to_k_density(const Density& v, const DeformationParameter& beta, const Grid& kgrid,
                       double min_capture) {
  if (v.axis != Axis::q) fail(ErrorKind::InvalidArgument, "q_to_k_density expects a q-density");
  const auto slopes = pchip_slopes(v.values, v.grid.spacing());
  std::vector<double> u(kgrid.n(), 0.0);
  double clamped = 0.0;
  for (std::size_t i = 0; i < kgrid.n(); ++i) {
    const double k = kgrid.node(i);
    const double q = beta.q_of_k(k);
    if (!v.grid.contains(q)) continue;
    double val = pchip_eval(v.grid, v.values, slopes, q);
    if (val < 0.0) {
      clamped -= kgrid.weight(i) * val;
      val = 0.0;
    }
    u[i] = val / (1.0 + beta.beta() * k * k);
  }
  const double captured = integrate(kgrid, u);
  if (captured < min_capture) {
    fail(ErrorKind::WindowTooSmall,
         "k-grid captures only " + std::to_string(captured) + " of the momentum mass");
  }
  Density out{Axis::k, kgrid, std::move(u)};
  out.tail_mass = std::max(0.0, 1.0 - captured);
  out.clamp_mass = clamped;
  return out;
}

std::vector<double> cumulative(const Density& d) {
  std::vector<double> cum(d.grid.n(), 0.0);
  const double h = d.grid.spacing();
  const std::size_t n = cum.size();
  for (std::size_t i = 1; i < n; ++i) {
    cum[i] = cum[i - 1] + 0.5 * h * (d.values[i - 1] + d.values[i]);
  }
  if (n < 3) return cum;
  // Euler-Maclaurin end correction -h^2/12 (f'(x_i) - f'(x_0)) makes every
  // node value fourth order for smooth densities.
  const auto& f = d.values;
  auto slope = [&](std::size_t i) {
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (i + 1 == n) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
  };
  const double s0 = slope(0);
  for (std::size_t i = 1; i < n; ++i) cum[i] -= h * h / 12.0 * (slope(i) - s0);
  return cum;
}

double cumulative_at(const Density& d, std::span<const double> cum, double x) {
  const Grid& g = d.grid;
  const double s = (x - g.lo()) / g.spacing();
  if (s <= 0.0) return 0.0;
  if (s >= static_cast<double>(g.n() - 1)) return cum.back();
  const auto i = static_cast<std::size_t>(std::floor(s));
  const double t = s - static_cast<double>(i);
  const double h = g.spacing();
  const double a = d.values[i];
  const double b = d.values[i + 1];
  return cum[i] + h * (a * t + 0.5 * (b - a) * t * t);
}

double interval_probability(const Density& d, double a, double b) {
  const double slack = 1e-9 * d.grid.spacing();
  if (!(a < b) || a < d.grid.lo() - slack || b > d.grid.hi() + slack) {
    fail(ErrorKind::OutOfRange, "interval [" + std::to_string(a) + ", " + std::to_string(b) +
                                    "] is not inside the density grid");
  }
  const auto cum = cumulative(d);
  return cumulative_at(d, cum, b) - cumulative_at(d, cum, a);
}

std::pair<std::size_t, std::size_t> quantile_window(const Grid& grid, std::span<const double> density,
                                                    double tail) {
  const std::size_t n = grid.n();
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    cum[i] = cum[i - 1] + 0.5 * grid.spacing() * (density[i - 1] + density[i]);
  }
  const double total = cum.back();
  std::size_t first = 0;
  while (first + 1 < n && cum[first + 1] <= tail * total) ++first;
  std::size_t last = n - 1;
  while (last > first + 1 && total - cum[last - 1] <= tail * total) --last;
  return {first, last};
}

}  // namespace guplab
