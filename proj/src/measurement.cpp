#include "guplab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "guplab/parallel.hpp"

namespace guplab {

namespace {

constexpr std::size_t kProfileNodes = 4097;
constexpr double kProfileNormTolerance = 1e-8;
constexpr double kOutcomeCapture = 1e-5;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Half-width of the band of |F(w)|^2, F the cosine transform of an even
// amplitude, outside which at most tail of the spectral mass lies.
double spectral_half_width(const Grid& grid, std::span<const double> amp, double center,
                           double scale, double tail) {
  constexpr std::size_t kFreqNodes = 4000;
  const double w_max = 400.0 / scale;
  const Grid freq(0.0, w_max, kFreqNodes);
  std::vector<double> power(kFreqNodes);
  for (std::size_t j = 0; j < kFreqNodes; ++j) {
    const double w = freq.node(j);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n(); ++i) {
      s += grid.weight(i) * amp[i] * std::cos(w * (grid.node(i) - center));
    }
    power[j] = s * s;
  }
  // one-sided mass; the full spectrum integrates to 2 pi, half of it on w >= 0
  double cum = 0.0;
  const double half_total = std::numbers::pi;
  for (std::size_t j = 1; j < kFreqNodes; ++j) {
    cum += 0.5 * freq.spacing() * (power[j - 1] + power[j]);
    if (half_total - cum <= tail * half_total) return freq.node(j);
  }
  return w_max;
}

}  // namespace

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::raised_cosine: return "raised_cosine";
    case ProfileKind::top_hat_smoothed: return "top_hat_smoothed";
  }
  return "?";
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "raised_cosine") return ProfileKind::raised_cosine;
  if (name == "top_hat_smoothed") return ProfileKind::top_hat_smoothed;
  fail(ErrorKind::ConfigError, "unknown profile kind '" + name + "'");
}

AcceptanceProfile AcceptanceProfile::make(ProfileKind kind, double width, double center_offset) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    fail(ErrorKind::InvalidArgument, "profile width must be positive");
  }
  if (!std::isfinite(center_offset)) fail(ErrorKind::InvalidArgument, "profile offset must be finite");
  AcceptanceProfile p;
  p.kind_ = kind;
  p.width_ = width;
  p.offset_ = center_offset;
  switch (kind) {
    case ProfileKind::gaussian:
      p.p1_ = width;
      p.support_ = 12.0 * width;
      p.conjugate_width_ = 0.5 / width;
      break;
    case ProfileKind::raised_cosine:
      p.p1_ = width / std::sqrt(1.0 / 3.0 - 2.0 / (std::numbers::pi * std::numbers::pi));
      p.support_ = p.p1_;
      break;
    case ProfileKind::top_hat_smoothed:
      p.p2_ = 0.25 * width;
      p.p1_ = std::sqrt(3.0 * (width * width - p.p2_ * p.p2_));
      p.support_ = p.p1_ + 12.0 * p.p2_;
      break;
  }
  p.grid_ = Grid(center_offset - p.support_, center_offset + p.support_, kProfileNodes);
  p.sq_.resize(kProfileNodes);
  for (std::size_t i = 0; i < kProfileNodes; ++i) p.sq_[i] = p.sq_at(p.grid_.node(i));
  const double mass = integrate(p.grid_, p.sq_);
  if (std::abs(mass - 1.0) > kProfileNormTolerance) {
    fail(ErrorKind::NormalizationError,
         std::string(to_string(kind)) + " profile integrates to " + std::to_string(mass));
  }
  if (kind != ProfileKind::gaussian) {
    std::vector<double> amp(kProfileNodes);
    for (std::size_t i = 0; i < kProfileNodes; ++i) amp[i] = std::sqrt(p.sq_[i]);
    p.conjugate_width_ = spectral_half_width(p.grid_, amp, center_offset, width, 1e-6) / 8.0;
  }
  return p;
}

double AcceptanceProfile::sq_at(double t) const noexcept {
  const double s = t - offset_;
  if (std::abs(s) > support_) return 0.0;
  switch (kind_) {
    case ProfileKind::gaussian: {
      const double z = s / p1_;
      return std::exp(-0.5 * z * z) / (p1_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case ProfileKind::raised_cosine:
      return (1.0 + std::cos(std::numbers::pi * s / p1_)) / (2.0 * p1_);
    case ProfileKind::top_hat_smoothed:
      return (normal_cdf((s + p1_) / p2_) - normal_cdf((s - p1_) / p2_)) / (2.0 * p1_);
  }
  return 0.0;
}

MomentumKernel::MomentumKernel(const Grid& qgrid, const DeformationParameter& beta,
                               const AcceptanceProfile& f, const Grid& zeta_grid) {
  std::vector<double> k(qgrid.n());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = beta.k_of_q(qgrid.node(i));
  const std::size_t rows = zeta_grid.n();
  first_.resize(rows);
  offset_.resize(rows + 1);
  offset_[0] = 0;
  for (std::size_t j = 0; j < rows; ++j) {
    const double zeta = zeta_grid.node(j);
    const double k_lo = zeta - f.center_offset() - f.support();
    const double k_hi = zeta - f.center_offset() + f.support();
    const auto b = std::lower_bound(k.begin(), k.end(), k_lo);
    const auto e = std::upper_bound(b, k.end(), k_hi);
    first_[j] = static_cast<std::size_t>(b - k.begin());
    for (auto it = b; it != e; ++it) {
      const auto i = static_cast<std::size_t>(it - k.begin());
      const double sq = f.sq_at(zeta - *it);
      values_.push_back(qgrid.weight(i) * sq);
      amps_.push_back(std::sqrt(sq));
    }
    offset_[j + 1] = values_.size();
  }
}

std::span<const double> MomentumKernel::row(std::size_t j) const noexcept {
  return std::span<const double>(values_).subspan(offset_[j], offset_[j + 1] - offset_[j]);
}

std::span<const double> MomentumKernel::amplitude_row(std::size_t j) const noexcept {
  return std::span<const double>(amps_).subspan(offset_[j], offset_[j + 1] - offset_[j]);
}

namespace {

template <typename Kernel>
std::vector<double> apply_kernel(const Kernel& kernel, std::span<const double> v) {
  std::vector<double> out(kernel.rows(), 0.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto r = kernel.row(j);
    const std::size_t f = kernel.first(j);
    double s = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) s += r[t] * v[f + t];
    out[j] = s;
  }
  return out;
}

}  // namespace

std::vector<double> MomentumKernel::apply(std::span<const double> v) const {
  return apply_kernel(*this, v);
}

PositionKernel::PositionKernel(const Grid& xgrid, const AcceptanceProfile& g, const Grid& xi_grid) {
  const std::size_t rows = xi_grid.n();
  const double h = xgrid.spacing();
  const auto last = static_cast<double>(xgrid.n() - 1);
  first_.resize(rows);
  offset_.resize(rows + 1);
  offset_[0] = 0;
  for (std::size_t j = 0; j < rows; ++j) {
    const double xi = xi_grid.node(j);
    const double lo = (xi - g.center_offset() - g.support() - xgrid.lo()) / h;
    const double hi = (xi - g.center_offset() + g.support() - xgrid.lo()) / h;
    const double b = std::clamp(std::ceil(lo), 0.0, last + 1.0);
    const double e = std::clamp(std::floor(hi), -1.0, last);
    first_[j] = static_cast<std::size_t>(b);
    for (double m = b; m <= e; m += 1.0) {
      const auto i = static_cast<std::size_t>(m);
      const double sq = g.sq_at(xi - xgrid.node(i));
      values_.push_back(xgrid.weight(i) * sq);
      amps_.push_back(std::sqrt(sq));
    }
    offset_[j + 1] = values_.size();
  }
}

std::span<const double> PositionKernel::row(std::size_t j) const noexcept {
  return std::span<const double>(values_).subspan(offset_[j], offset_[j + 1] - offset_[j]);
}

std::span<const double> PositionKernel::amplitude_row(std::size_t j) const noexcept {
  return std::span<const double>(amps_).subspan(offset_[j], offset_[j + 1] - offset_[j]);
}

std::vector<double> PositionKernel::apply(std::span<const double> w) const {
  return apply_kernel(*this, w);
}

double default_dx_target(const Grid& qgrid, const AcceptanceProfile& g) {
  const double q_max = std::max(std::abs(qgrid.lo()), std::abs(qgrid.hi()));
  return std::min(g.width() / 6.0, std::numbers::pi / (4.0 * q_max));
}

std::vector<double> x_density(const MixedState& rho, const FourierLattice& lattice) {
  std::vector<double> w(lattice.size(), 0.0);
  for (const auto& c : rho.components()) {
    const auto psi = lattice.to_x(c.state.amplitudes());
    for (std::size_t m = 0; m < w.size(); ++m) w[m] += c.weight * std::norm(psi[m]);
  }
  return w;
}

Density convolve_density(const Density& d, const AcceptanceProfile& profile, const Grid& out_grid) {
  const double in_mass = integrate(d.grid, d.values);
  if (std::abs(in_mass - 1.0) > 1e-6) fail(ErrorKind::NormalizationError, "input density is not normalized");
  const double p_mass = integrate(profile.grid(), profile.sq_modulus());
  if (std::abs(p_mass - 1.0) > 1e-6) fail(ErrorKind::NormalizationError, "profile is not normalized");

  const Axis axis = d.axis == Axis::x ? Axis::xi : d.axis == Axis::k ? Axis::zeta : d.axis;
  std::vector<double> out(out_grid.n(), 0.0);
  parallel_for(out.size(), [&](std::size_t j) {
    const double y = out_grid.node(j);
    double s = 0.0;
    for (std::size_t i = 0; i < d.grid.n(); ++i) {
      const double v = d.values[i];
      if (v != 0.0) s += d.grid.weight(i) * profile.sq_at(y - d.grid.node(i)) * v;
    }
    out[j] = s;
  });
  const double mass = integrate(out_grid, out);
  if (std::abs(mass - 1.0) >= 1e-6) {
    fail(ErrorKind::NormalizationError,
         "convolution drifts to mass " + std::to_string(mass) + " (grid under-resolved)");
  }
  for (auto& v : out) v /= mass;
  Density result{axis, out_grid, std::move(out)};
  result.tail_mass = std::max(0.0, 1.0 - mass);
  return result;
}

Density momentum_outcome_density(const MixedState& rho, const AcceptanceProfile& f,
                                 const Grid& zeta_grid) {
  const MomentumKernel kernel(rho.qgrid(), rho.deformation(), f, zeta_grid);
  return make_density(Axis::zeta, zeta_grid, kernel.apply(rho.q_density()), kOutcomeCapture);
}

Density position_outcome_density(const MixedState& rho, const AcceptanceProfile& g,
                                 const Grid& xi_grid, const FourierLattice& lattice) {
  const PositionKernel kernel(lattice.xgrid(), g, xi_grid);
  return make_density(Axis::xi, xi_grid, kernel.apply(x_density(rho, lattice)), kOutcomeCapture);
}

Density position_outcome_density(const MixedState& rho, const AcceptanceProfile& g,
                                 const Grid& xi_grid) {
  const FourierLattice lattice(rho.qgrid(), default_dx_target(rho.qgrid(), g));
  return position_outcome_density(rho, g, xi_grid, lattice);
}

namespace {

struct OutcomeSlot {
  std::optional<MixedState> state;
  double leakage = 0.0;
  std::optional<Error> error;
};

// Per-component raw outcome densities and their weighted sum.
struct RawOutcomes {
  std::vector<std::vector<double>> per_component;
  std::vector<double> total;
};

template <typename Kernel>
RawOutcomes raw_outcomes(const MixedState& rho, const Kernel& kernel,
                         const std::vector<std::vector<double>>& densities) {
  RawOutcomes r;
  r.total.assign(kernel.rows(), 0.0);
  for (std::size_t c = 0; c < rho.size(); ++c) {
    r.per_component.push_back(kernel.apply(densities[c]));
    const double w = rho.components()[c].weight;
    for (std::size_t j = 0; j < r.total.size(); ++j) r.total[j] += w * r.per_component[c][j];
  }
  return r;
}

OutcomeEnsemble assemble(Axis axis, const Grid& grid, const RawOutcomes& raw,
                         const std::function<OutcomeSlot(std::size_t)>& collapse_one) {
  OutcomeEnsemble e;
  e.axis = axis;
  e.outcome_grid = grid;
  const double h = grid.spacing();
  for (std::size_t j = 0; j < raw.total.size(); ++j) {
    const double p = raw.total[j] * h;
    e.raw_weight_sum += p;
    if (raw.total[j] > kOutcomeWeightFloor) {
      e.retained.push_back(j);
    } else {
      e.dropped_mass += p;
    }
  }
  if (e.retained.empty()) {
    fail(ErrorKind::DegenerateMeasurement, "every outcome falls below the weight floor");
  }

  std::vector<OutcomeSlot> slots(e.retained.size());
  parallel_for(slots.size(), [&](std::size_t s) {
    try {
      slots[s] = collapse_one(e.retained[s]);
    } catch (const Error& err) {
      slots[s].error = err;
    }
  });

  double kept = 0.0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].error) throw *slots[s].error;
    kept += raw.total[e.retained[s]] * h;
  }
  e.weights.reserve(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    e.weights.push_back(raw.total[e.retained[s]] * h / kept);
    e.post_states.push_back(std::move(*slots[s].state));
    e.leakage.push_back(slots[s].leakage);
  }
  return e;
}

}  // namespace

OutcomeEnsemble collapse_momentum(const MixedState& rho, const AcceptanceProfile& f,
                                  const Grid& zeta_grid) {
  const MomentumKernel kernel(rho.qgrid(), rho.deformation(), f, zeta_grid);
  std::vector<std::vector<double>> densities;
  for (const auto& c : rho.components()) densities.push_back(c.state.q_density());
  const RawOutcomes raw = raw_outcomes(rho, kernel, densities);

  auto collapse_one = [&](std::size_t j) {
    const auto amp_row = kernel.amplitude_row(j);
    const std::size_t first = kernel.first(j);
    std::vector<MixtureComponent> parts;
    for (std::size_t c = 0; c < rho.size(); ++c) {
      const auto& comp = rho.components()[c];
      const double rel = comp.weight * raw.per_component[c][j] / raw.total[j];
      if (!(rel > 1e-15)) continue;
      const auto phi = comp.state.amplitudes();
      std::vector<cplx> post(phi.size(), 0.0);
      for (std::size_t t = 0; t < amp_row.size(); ++t) post[first + t] = amp_row[t] * phi[first + t];
      parts.push_back({rel, PureState(comp.state.deformation(), comp.state.qgrid(), std::move(post), true)});
    }
    return OutcomeSlot{MixedState(std::move(parts), true), 0.0, std::nullopt};
  };
  return assemble(Axis::zeta, zeta_grid, raw, collapse_one);
}

OutcomeEnsemble collapse_position(const MixedState& rho, const AcceptanceProfile& g,
                                  const Grid& xi_grid, const FourierLattice& lattice,
                                  double leakage_cap) {
  if (!(rho.qgrid() == lattice.qgrid())) fail(ErrorKind::InvalidArgument, "lattice built for another q-grid");
  const PositionKernel kernel(lattice.xgrid(), g, xi_grid);
  std::vector<std::vector<cplx>> psi;
  std::vector<std::vector<double>> densities;
  for (const auto& c : rho.components()) {
    psi.push_back(lattice.to_x(c.state.amplitudes()));
    std::vector<double> w(psi.back().size());
    for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::norm(psi.back()[m]);
    densities.push_back(std::move(w));
  }
  const RawOutcomes raw = raw_outcomes(rho, kernel, densities);

  auto collapse_one = [&](std::size_t j) {
    const auto amp_row = kernel.amplitude_row(j);
    const std::size_t first = kernel.first(j);
    std::vector<MixtureComponent> parts;
    double leakage = 0.0;
    for (std::size_t c = 0; c < rho.size(); ++c) {
      const auto& comp = rho.components()[c];
      const double rel = comp.weight * raw.per_component[c][j] / raw.total[j];
      if (!(rel > 1e-15)) continue;
      std::vector<cplx> post(lattice.size(), 0.0);
      for (std::size_t t = 0; t < amp_row.size(); ++t) post[first + t] = amp_row[t] * psi[c][first + t];
      try {
        BandProjectedState b = x_to_q(post, comp.state.deformation(), lattice, leakage_cap);
        leakage += rel * b.leakage;
        parts.push_back({rel, std::move(b.state)});
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::BandLimitViolation) throw;
        fail(ErrorKind::BandLimitViolation,
             std::string(err.what()) + " at outcome xi=" + std::to_string(xi_grid.node(j)));
      }
    }
    return OutcomeSlot{MixedState(std::move(parts), true), leakage, std::nullopt};
  };
  return assemble(Axis::xi, xi_grid, raw, collapse_one);
}

OutcomeEnsemble collapse_position(const MixedState& rho, const AcceptanceProfile& g,
                                  const Grid& xi_grid, double leakage_cap) {
  const FourierLattice lattice(rho.qgrid(), default_dx_target(rho.qgrid(), g));
  return collapse_position(rho, g, xi_grid, lattice, leakage_cap);
}

MixedState scenario1_post_state(const OutcomeEnsemble& ensemble) {
  std::vector<MixtureComponent> parts;
  for (std::size_t s = 0; s < ensemble.post_states.size(); ++s) {
    for (const auto& c : ensemble.post_states[s].components()) {
      parts.push_back({ensemble.weights[s] * c.weight, c.state});
    }
  }
  return MixedState(std::move(parts), true);
}

}  // namespace guplab
