#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "guplab/entropy.hpp"

using namespace guplab;

namespace {

Density gaussian_density(double sigma, double half, std::size_t n) {
  const Grid g(-half, half, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.node(i);
    v[i] = std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  return Density{Axis::x, g, v};
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) s += (v = e(rng));
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST(AlphaLog, Values) {
  for (double a : {0.3, 0.5, 1.0, 2.0, 7.0}) EXPECT_EQ(alpha_log(1.0, a), 0.0);
  EXPECT_NEAR(alpha_log(4.0, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(alpha_log(std::numbers::e, 1.0 + 1e-12), 1.0, 1e-9);
  EXPECT_NEAR(alpha_log(3.0, 1.0 + 5e-7), std::expm1(-5e-7 * std::log(3.0)) / -5e-7, 1e-12);
  EXPECT_THROW(alpha_log(0.0, 2.0), Error);
  EXPECT_THROW(alpha_log(-1.0, 2.0), Error);
}

TEST(RenyiDiscrete, Examples) {
  const std::vector<double> uniform(4, 0.25);
  for (double a : {0.5, 1.0, 2.0, 5.0}) EXPECT_NEAR(renyi_discrete(uniform, a), std::log(4.0), 1e-14);
  const std::vector<double> sure{0.0, 1.0, 0.0};
  for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(renyi_discrete(sure, a), 0.0, 1e-15);
  EXPECT_NEAR(renyi_discrete(std::vector<double>{0.75, 0.25}, 2.0), std::log(8.0 / 5.0), 1e-15);
}

TEST(TsallisDiscrete, Examples) {
  EXPECT_NEAR(tsallis_discrete(std::vector<double>{1.0, 0.0}, 2.0), 0.0, 1e-15);
  EXPECT_NEAR(tsallis_discrete(std::vector<double>{0.5, 0.5}, 2.0), 0.5, 1e-15);
  for (std::size_t n = 2; n <= 16; ++n) {
    const std::vector<double> p(n, 1.0 / static_cast<double>(n));
    for (double a : {0.5, 2.0 / 3.0, 2.0, 3.0}) {
      EXPECT_NEAR(tsallis_discrete(p, a), alpha_log(static_cast<double>(n), a), 1e-13) << n << " " << a;
    }
  }
}

TEST(DiscreteEntropy, ShannonLimitAndMonotonicity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_distribution(rng, 16);
    const double h = shannon_discrete(p);
    for (double a : {1.0 - 1e-6, 1.0 + 1e-6}) {
      EXPECT_LT(std::abs(renyi_discrete(p, a) - h), 1e-4);
      EXPECT_LT(std::abs(tsallis_discrete(p, a) - h), 1e-4);
    }
    double prev = renyi_discrete(p, 0.1);
    for (double a : {0.3, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0, 10.0}) {
      const double r = renyi_discrete(p, a);
      ASSERT_GE(prev, r - 1e-12);
      ASSERT_GE(r, 0.0);
      ASSERT_GE(tsallis_discrete(p, a), 0.0);
      prev = r;
    }
  }
}

TEST(DiscreteEntropy, SeriesBranchIsContinuous) {
  std::mt19937_64 rng(4);
  const auto p = random_distribution(rng, 12);
  for (double e : {2e-6, 1e-6, 5e-7}) {
    const double inside = renyi_discrete(p, 1.0 + e * 0.999);
    const double outside = renyi_discrete(p, 1.0 + e * 1.001);
    EXPECT_NEAR(inside, outside, 1e-9);
  }
}

TEST(DiscreteEntropy, PermutationInvariantToTheBit) {
  std::mt19937_64 rng(99);
  auto p = random_distribution(rng, 64);
  const double r = renyi_discrete(p, 0.7);
  const double t = tsallis_discrete(p, 2.0);
  const double h = shannon_discrete(p);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(p.begin(), p.end(), rng);
    ASSERT_EQ(renyi_discrete(p, 0.7), r);
    ASSERT_EQ(tsallis_discrete(p, 2.0), t);
    ASSERT_EQ(shannon_discrete(p), h);
  }
}

TEST(RenyiDifferential, UniformAndGaussian) {
  const Grid g(0.0, 2.5, 101);
  const Density u{Axis::x, g, std::vector<double>(101, 0.4)};
  for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(renyi_differential(u, a).value, std::log(2.5), 1e-12);

  const Density d = gaussian_density(0.7, 12.0, 4001);
  EXPECT_NEAR(renyi_differential(d, 1.0).value, 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 0.49), 1e-7);
  // closed form for the Gaussian: ln(sqrt(2 pi) sigma) + ln(alpha) / (2 (alpha - 1))
  for (double a : {0.5, 2.0 / 3.0, 2.0}) {
    EXPECT_NEAR(renyi_differential(d, a).value,
                std::log(std::sqrt(2 * std::numbers::pi) * 0.7) + std::log(a) / (2 * (a - 1)), 1e-7);
  }
}

TEST(RenyiDifferential, NegativeValuesAreNotClamped) {
  const Density d = gaussian_density(0.05, 1.0, 4001);
  EXPECT_LT(renyi_differential(d, 1.0).value, 0.0);
}

TEST(RenyiDifferential, CauchyFromUniformQ) {
  // u(k) = sqrt(beta) / (pi (1 + beta k^2)), beta = 1, tail outside |k| < 1e5
  const Grid g(-1e5, 1e5, 4000001);
  std::vector<double> v(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) v[i] = 1.0 / (std::numbers::pi * (1.0 + g.node(i) * g.node(i)));
  Density u{Axis::k, g, v};
  u.tail_mass = 1.0 - integrate(g, v);
  const auto h = renyi_differential(u, 1.0);
  EXPECT_NEAR(h.value, std::log(std::numbers::pi) + 2.0 * std::log(2.0), 1e-3);
  EXPECT_TRUE(h.tail_truncated);
  EXPECT_FALSE(renyi_differential(u, 2.0).tail_truncated);
}

TEST(Binning, EqualBinsOfUniform) {
  const Grid g(0.0, 4.0, 401);
  const Density u{Axis::x, g, std::vector<double>(401, 0.25)};
  const auto b = bin_density(u, aligned_edges(g, 0.5));
  ASSERT_EQ(b.probs.size(), 8u);
  for (double p : b.probs) EXPECT_NEAR(p, 0.125, 1e-8);
  EXPECT_DOUBLE_EQ(b.delta_max, 0.5);
}

TEST(Binning, FineBinsRecoverDifferentialEntropy) {
  const double sigma = 1.0;
  const Density d = gaussian_density(sigma, 10.0, 8001);
  const double delta = sigma / 20.0;
  const auto b = bin_density(d, aligned_edges(d.grid, delta));
  double total = 0.0;
  for (double p : b.probs) total += p;
  EXPECT_NEAR(total, 1.0, 1e-8);
  EXPECT_NEAR(shannon_discrete(b.probs) + std::log(delta), renyi_differential(d, 1.0).value, 0.01);
}

TEST(Binning, ResidualFoldedAndCoverageChecked) {
  const Density d = gaussian_density(1.0, 10.0, 2001);
  const std::vector<double> edges{-3.0, -1.0, 0.0, 1.0, 3.0};
  EXPECT_THROW(bin_density(d, edges), Error);
  const std::vector<double> wide{-7.0, 0.0, 7.0};
  const auto b = bin_density(d, wide);
  EXPECT_NEAR(b.probs[0], 0.5, 1e-9);
  EXPECT_NEAR(b.probs[0] + b.probs[1], 1.0, 1e-15);
}

TEST(EntropyOrder, Conjugacy) {
  EXPECT_NO_THROW(EntropyOrder::conjugate(2.0, 2.0 / 3.0));
  EXPECT_NO_THROW(EntropyOrder::conjugate(1.5, 0.75));
  EXPECT_DOUBLE_EQ(EntropyOrder::conjugate(2.0, 2.0 / 3.0).nu(), 2.0);
  EXPECT_TRUE(EntropyOrder::conjugate(1.0, 1.0).is_shannon());
  try {
    EntropyOrder::conjugate(2.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConjugacyError);
  }
  EXPECT_THROW(EntropyOrder::conjugate(-1.0, 1.0 / 3.0), Error);
}
