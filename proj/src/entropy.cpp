#include "guplab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace guplab {

namespace {

constexpr double kShannonBranch = 1e-9;
constexpr double kSeriesBranch = 1e-6;
constexpr double kTinyDensity = 1e-300;

std::vector<double> sorted_positive(std::span<const double> p) {
  std::vector<double> s;
  s.reserve(p.size());
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::InvalidSample, "probabilities must be finite and >= 0");
    if (v > 0.0) s.push_back(v);
  }
  std::sort(s.begin(), s.end());
  return s;
}

void require_order(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorKind::DomainError, "entropy order must be positive");
}

// Sum p ln p and sum p (ln p)^2 over sorted positive probabilities.
std::pair<double, double> log_moments(std::span<const double> s) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (double v : s) {
    const double l = std::log(v);
    m1 += v * l;
    m2 += v * l * l;
  }
  return {m1, m2};
}

}  // namespace

double alpha_log(double y, double alpha) {
  if (!(y > 0.0) || !std::isfinite(y)) fail(ErrorKind::DomainError, "alpha-logarithm needs y > 0");
  require_order(alpha);
  const double l = std::log(y);
  const double e = alpha - 1.0;
  if (std::abs(e) < kShannonBranch) return l;
  if (std::abs(e) < kSeriesBranch) return l - e * l * l / 2.0 + e * e * l * l * l / 6.0;
  return std::expm1(-e * l) / -e;
}

BinnedDistribution BinnedDistribution::make(std::vector<double> edges, std::vector<double> probs) {
  if (edges.size() < 2 || probs.size() + 1 != edges.size()) {
    fail(ErrorKind::InvalidArgument, "need one probability per bin");
  }
  BinnedDistribution d;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) fail(ErrorKind::InvalidArgument, "bin edges must increase strictly");
    d.delta_max = std::max(d.delta_max, edges[i + 1] - edges[i]);
    if (!(probs[i] >= 0.0)) fail(ErrorKind::InvalidSample, "bin probabilities must be >= 0");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-8) {
    fail(ErrorKind::NormalizationError, "bin probabilities sum to " + std::to_string(total));
  }
  d.edges = std::move(edges);
  d.probs = std::move(probs);
  return d;
}

double shannon_discrete(std::span<const double> p) {
  const auto s = sorted_positive(p);
  return -log_moments(s).first;
}

double renyi_discrete(std::span<const double> p, double alpha) {
  require_order(alpha);
  const auto s = sorted_positive(p);
  const double e = alpha - 1.0;
  if (std::abs(e) < kSeriesBranch) {
    const auto [m1, m2] = log_moments(s);
    const double h = -m1;
    if (std::abs(e) < kShannonBranch) return h;
    return h - e * (m2 - h * h) / 2.0;
  }
  double sum = 0.0;
  for (double v : s) sum += std::pow(v, alpha);
  return std::log(sum) / -e;
}

double tsallis_discrete(std::span<const double> p, double alpha) {
  require_order(alpha);
  const auto s = sorted_positive(p);
  const double e = alpha - 1.0;
  if (std::abs(e) < kSeriesBranch) {
    const auto [m1, m2] = log_moments(s);
    if (std::abs(e) < kShannonBranch) return -m1;
    return -m1 - e * m2 / 2.0;
  }
  double sum = 0.0;
  for (double v : s) sum += v * std::expm1(e * std::log(v));
  return sum / -e;
}

DifferentialEntropy renyi_differential(const Density& w, double alpha) {
  require_order(alpha);
  const std::size_t n = w.values.size();
  if (n != w.grid.n()) fail(ErrorKind::InvalidSample, "density size mismatch");
  const double e = alpha - 1.0;
  DifferentialEntropy out{0.0, false, w.tail_mass};
  out.tail_truncated = alpha <= 1.0 + kShannonBranch && w.tail_mass >= 1e-6;

  if (std::abs(e) < kSeriesBranch) {
    std::vector<double> a(n, 0.0);
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = w.values[i];
      if (v < kTinyDensity) continue;
      const double l = std::log(v);
      a[i] = v * l;
      b[i] = v * l * l;
    }
    const double h = -integrate(w.grid, a);
    out.value = std::abs(e) < kShannonBranch ? h : h - e * (integrate(w.grid, b) - h * h) / 2.0;
    return out;
  }
  std::vector<double> a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w.values[i];
    if (v > 0.0) a[i] = std::pow(v, alpha);
  }
  const double s = integrate(w.grid, a);
  if (!(s > 0.0)) fail(ErrorKind::DegenerateState, "density has no mass");
  out.value = std::log(s) / -e;
  return out;
}

std::vector<double> aligned_edges(const Grid& grid, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "bin width must be positive");
  const double slack = 1e-9;
  const auto first = static_cast<long>(std::ceil(grid.lo() / delta - slack));
  const auto last = static_cast<long>(std::floor(grid.hi() / delta + slack));
  if (last - first < 1) fail(ErrorKind::WindowTooSmall, "grid shorter than one bin");
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(last - first + 1));
  for (long i = first; i <= last; ++i) {
    edges.push_back(std::clamp(static_cast<double>(i) * delta, grid.lo(), grid.hi()));
  }
  return edges;
}

BinnedDistribution bin_density(const Density& w, std::span<const double> edges) {
  if (edges.size() < 2) fail(ErrorKind::InvalidArgument, "need at least one bin");
  const double slack = 1e-9 * w.grid.spacing();
  if (edges.front() < w.grid.lo() - slack || edges.back() > w.grid.hi() + slack) {
    fail(ErrorKind::OutOfRange, "bin edges extend beyond the density grid");
  }
  const auto cum = cumulative(w);
  std::vector<double> at(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) at[i] = cumulative_at(w, cum, edges[i]);
  const double total = cum.back();
  const double covered = at.back() - at.front();
  if (covered < total * (1.0 - 1e-6)) {
    fail(ErrorKind::WindowTooSmall, "bins cover only " + std::to_string(covered / total) + " of the mass");
  }
  std::vector<double> probs(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) probs[i] = at[i + 1] - at[i];
  probs.front() += at.front();
  probs.back() += total - at.back();
  // end corrections can push an empty bin a rounding step below zero
  double sum = 0.0;
  for (auto& p : probs) {
    p = std::max(0.0, p);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
  return BinnedDistribution::make(std::vector<double>(edges.begin(), edges.end()), std::move(probs));
}

EntropyOrder EntropyOrder::conjugate(double alpha, double gamma) {
  if (!(alpha > 0.0) || !(gamma > 0.0) || !std::isfinite(alpha) || !std::isfinite(gamma)) {
    fail(ErrorKind::ConjugacyError, "entropy orders must be positive");
  }
  if (std::abs(1.0 / alpha + 1.0 / gamma - 2.0) > 1e-12) {
    fail(ErrorKind::ConjugacyError, "orders " + std::to_string(alpha) + ", " + std::to_string(gamma) +
                                        " violate 1/alpha + 1/gamma = 2");
  }
  return {alpha, gamma};
}

bool EntropyOrder::is_shannon() const noexcept {
  return std::abs(alpha - 1.0) < kShannonBranch && std::abs(gamma - 1.0) < kShannonBranch;
}

}  // namespace guplab
