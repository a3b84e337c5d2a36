#pragma once

#include <span>
#include <vector>

#include "guplab/transforms.hpp"

namespace guplab {

/// ln_alpha(y) = (y^(1-alpha) - 1) / (1 - alpha); ln y at alpha = 1.
double alpha_log(double y, double alpha);

struct BinnedDistribution {
  std::vector<double> edges;
  std::vector<double> probs;
  double delta_max = 0.0;

  /// Validates edges and probabilities (sum 1 within 1e-8) and fills delta_max.
  static BinnedDistribution make(std::vector<double> edges, std::vector<double> probs);
};

double shannon_discrete(std::span<const double> p);
double renyi_discrete(std::span<const double> p, double alpha);
double tsallis_discrete(std::span<const double> p, double alpha);

inline double renyi_discrete(const BinnedDistribution& d, double alpha) { return renyi_discrete(d.probs, alpha); }
inline double tsallis_discrete(const BinnedDistribution& d, double alpha) { return tsallis_discrete(d.probs, alpha); }

struct DifferentialEntropy {
  double value;
  /// Set when the density's recorded tail mass reaches 1e-6 for alpha <= 1.
  bool tail_truncated;
  double tail_mass;
};

/// (1 - alpha)^{-1} ln int w^alpha, or -int w ln w at alpha = 1.
DifferentialEntropy renyi_differential(const Density& w, double alpha);

/// Edges at integer multiples of delta covering the grid span.
std::vector<double> aligned_edges(const Grid& grid, double delta);

/// Bin masses of w; mass outside the edges is folded into the outermost bins.
/// WindowTooSmall when the edges see less than 1 - 1e-6 of the mass.
BinnedDistribution bin_density(const Density& w, std::span<const double> edges);

/// Entropy orders for the momentum (alpha) and position (gamma) measurements.
struct EntropyOrder {
  double alpha = 1.0;
  double gamma = 1.0;

  /// Requires positive orders with 1/alpha + 1/gamma = 2 within 1e-12.
  static EntropyOrder conjugate(double alpha, double gamma);
  double nu() const noexcept { return alpha > gamma ? alpha : gamma; }
  bool is_shannon() const noexcept;
};

}  // namespace guplab
