#include "guplab/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace guplab {

namespace {

constexpr double kNormTolerance = 1e-6;
constexpr double kEndpointTolerance = 1e-8;
constexpr double kBandGap = 1e-9;

double squared_norm(const Grid& grid, std::span<const cplx> amps) {
  double sum = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) sum += grid.weight(i) * std::norm(amps[i]);
  return sum;
}

void require_endpoints_vanish(const PureState& s) {
  if (s.endpoint_residual() > kEndpointTolerance) {
    fail(ErrorKind::InvalidSample,
         "constructed state does not vanish at the band edges (residual " +
             std::to_string(s.endpoint_residual()) + ")");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

DeformationParameter::DeformationParameter(double beta) : beta_(beta), root_(std::sqrt(beta)) {
  if (!std::isfinite(beta) || beta < 0.0) {
    fail(ErrorKind::InvalidArgument, "beta must be finite and non-negative");
  }
}

double DeformationParameter::q0() const noexcept {
  return deformed() ? std::numbers::pi / (2.0 * root_) : std::numeric_limits<double>::infinity();
}

double DeformationParameter::k_of_q(double q) const noexcept {
  return deformed() ? std::tan(root_ * q) / root_ : q;
}

double DeformationParameter::q_of_k(double k) const noexcept {
  return deformed() ? std::atan(root_ * k) / root_ : k;
}

double DeformationParameter::log_factor_q(double q) const noexcept {
  return deformed() ? -2.0 * std::log(std::cos(root_ * q)) : 0.0;
}

PureState::PureState(DeformationParameter beta, Grid qgrid, std::vector<cplx> amplitudes,
                     bool renormalize)
    : beta_(beta), grid_(qgrid), amps_(std::move(amplitudes)) {
  if (amps_.size() != grid_.n()) fail(ErrorKind::InvalidSample, "amplitude count mismatch");
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      fail(ErrorKind::InvalidSample, "non-finite amplitude");
    }
  }
  if (beta_.deformed() && grid_.hi() > beta_.q0()) {
    fail(ErrorKind::InvalidArgument, "q-grid extends beyond the band edge");
  }
  double norm = squared_norm(grid_, amps_);
  if (renormalize) {
    if (!(norm > 0.0)) fail(ErrorKind::DegenerateState, "zero state cannot be normalized");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amps_) a *= scale;
    norm = squared_norm(grid_, amps_);
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    fail(ErrorKind::NormalizationError, "state norm " + std::to_string(norm) + " is not 1");
  }
}

double PureState::norm_squared() const { return squared_norm(grid_, amps_); }

double PureState::endpoint_residual() const noexcept {
  return std::max(std::abs(amps_.front()), std::abs(amps_.back()));
}

std::vector<double> PureState::q_density() const {
  std::vector<double> v(amps_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(amps_[i]);
  return v;
}

MixedState::MixedState(const PureState& pure) : components_{{1.0, pure}} {}

MixedState::MixedState(std::vector<MixtureComponent> components, bool renormalize_weights)
    : components_(std::move(components)) {
  if (components_.empty()) fail(ErrorKind::InvalidArgument, "mixed state needs a component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      fail(ErrorKind::InvalidArgument, "mixture weights must be positive");
    }
    if (!(c.state.qgrid() == components_.front().state.qgrid()) ||
        !(c.state.deformation() == components_.front().state.deformation())) {
      fail(ErrorKind::InvalidArgument, "mixture components must share one q-grid and beta");
    }
    total += c.weight;
  }
  if (renormalize_weights) {
    for (auto& c : components_) c.weight /= total;
  } else if (std::abs(total - 1.0) > 1e-10) {
    fail(ErrorKind::NormalizationError, "mixture weights sum to " + std::to_string(total));
  }
}

std::vector<double> MixedState::q_density() const {
  std::vector<double> v(qgrid().n(), 0.0);
  for (const auto& c : components_) {
    const auto amps = c.state.amplitudes();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c.weight * std::norm(amps[i]);
  }
  return v;
}

Grid make_qgrid(const DeformationParameter& beta, std::size_t grid_n, double cutoff) {
  if (beta.deformed()) {
    const double edge = beta.q0() * (1.0 - kBandGap);
    return Grid(-edge, edge, grid_n);
  }
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    fail(ErrorKind::InvalidArgument, "beta = 0 needs a positive q cutoff");
  }
  return Grid(-cutoff, cutoff, grid_n);
}

PureState make_gaussian_q(const DeformationParameter& beta, double center_q, double width_q,
                          std::size_t grid_n, const GaussianOptions& options) {
  if (!(width_q > 0.0)) fail(ErrorKind::InvalidArgument, "width_q must be positive");
  const double cutoff =
      options.cutoff > 0.0 ? options.cutoff : std::abs(center_q) + 8.0 * width_q;
  const Grid grid = make_qgrid(beta, grid_n, cutoff);

  const double kept = normal_cdf((grid.hi() - center_q) / width_q) -
                      normal_cdf((grid.lo() - center_q) / width_q);
  if (1.0 - kept > 0.1) {
    fail(ErrorKind::ExcessTruncation,
         "band keeps only " + std::to_string(kept) + " of the Gaussian mass");
  }

  auto envelope = [&](double q) {
    const double z = (q - center_q) / width_q;
    return std::exp(-0.25 * z * z);
  };
  const double left = envelope(grid.lo());
  const double right = envelope(grid.hi());
  std::vector<cplx> amps(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double q = grid.node(i);
    const double t = (q - grid.lo()) / grid.span();
    const double a = envelope(q) - (left * (1.0 - t) + right * t);
    amps[i] = std::polar(a, -q * options.center_x);
  }
  amps.front() = 0.0;
  amps.back() = 0.0;
  PureState state(beta, grid, std::move(amps), true);
  require_endpoints_vanish(state);
  return state;
}

PureState make_uniform_q(const DeformationParameter& beta, std::size_t grid_n,
                         std::size_t taper_nodes) {
  if (!beta.deformed()) fail(ErrorKind::InvalidArgument, "uniform-q family needs beta > 0");
  const Grid grid = make_qgrid(beta, grid_n, 0.0);
  const std::size_t m = std::max<std::size_t>(taper_nodes, 1);
  std::vector<cplx> amps(grid.n(), 1.0);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const std::size_t d = std::min(i, grid.n() - 1 - i);
    if (d < m) {
      amps[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(d) /
                                       static_cast<double>(m)));
    }
  }
  PureState state(beta, grid, std::move(amps), true);
  require_endpoints_vanish(state);
  return state;
}

PureState make_superposition(std::span<const PureState> states, std::span<const cplx> coeffs) {
  if (states.empty() || states.size() != coeffs.size()) {
    fail(ErrorKind::InvalidArgument, "superposition needs one coefficient per state");
  }
  const Grid& grid = states.front().qgrid();
  std::vector<cplx> amps(grid.n(), 0.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (!(states[s].qgrid() == grid)) fail(ErrorKind::InvalidArgument, "states must share a q-grid");
    const auto a = states[s].amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += coeffs[s] * a[i];
  }
  if (!(squared_norm(grid, amps) > 1e-24)) {
    fail(ErrorKind::DegenerateState, "superposition vanishes");
  }
  return PureState(states.front().deformation(), grid, std::move(amps), true);
}

PureState make_random_superposition(const DeformationParameter& beta, std::size_t grid_n,
                                    const RandomSuperpositionSpec& spec) {
  if (spec.components == 0) fail(ErrorKind::InvalidArgument, "superposition needs components");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double cutoff =
      spec.cutoff > 0.0 ? spec.cutoff : spec.spread_q + 8.0 * spec.width_q;
  std::vector<PureState> parts;
  std::vector<cplx> coeffs;
  for (std::size_t c = 0; c < spec.components; ++c) {
    const double cq = spec.spread_q * unit(rng);
    const double cx = spec.spread_x * unit(rng);
    const double re = normal(rng);
    const double im = normal(rng);
    parts.push_back(make_gaussian_q(beta, cq, spec.width_q, grid_n, {cx, cutoff}));
    coeffs.emplace_back(re, im);
  }
  PureState state = make_superposition(parts, coeffs);
  require_endpoints_vanish(state);
  return state;
}

}  // namespace guplab
