#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "guplab/parallel.hpp"
#include "guplab/pipeline.hpp"

using namespace guplab;

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

StateSpec gaussian_spec(double width_q = 0.5) {
  StateSpec s;
  s.name = "gaussian";
  s.gaussian.width_q = width_q;
  return s;
}

StateSpec superposition_spec() {
  StateSpec s;
  s.name = "superposition";
  s.kind = StateKind::superposition;
  s.superposition.seed = 7;
  return s;
}

StateSpec mixture_spec() {
  StateSpec s;
  s.name = "mixture";
  s.kind = StateKind::mixture;
  s.parts = {{0.6, 0.3, -1.0, 0.5}, {0.4, -0.3, 1.0, 0.5}};
  return s;
}

std::vector<StateSpec> families() { return {gaussian_spec(), superposition_spec(), mixture_spec()}; }

RelationReport run(const Pipeline& p, RelationId id, MeasurementOrder order, EntropyOrder eo = {}) {
  return p.check(id, order, eo, 1e-4);
}

double gauss_sq(double t, double s) {
  return std::exp(-0.5 * t * t / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
}

double trap_entropy(double h, const std::vector<double>& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] <= 1e-300) continue;
    const double w = (i == 0 || i + 1 == d.size()) ? 0.5 * h : h;
    s -= w * d[i] * std::log(d[i]);
  }
  return s;
}

// Selective momentum-first Shannon lhs recomputed by direct quadrature: a
// coarse q-grid, explicit Fourier sums for psi and explicit convolutions.
double selective_momentum_first_oracle(const MixedState& rho, double f, double g) {
  const Grid& qg = rho.qgrid();
  const auto& beta = rho.deformation();
  const std::size_t n = qg.n();
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = beta.k_of_q(qg.node(i));

  const double hz = 0.05;
  const double zmax = 5.0;
  const auto nz = static_cast<std::size_t>(std::lround(2.0 * zmax / hz)) + 1;
  const double hx = 0.05;
  const double xmax = 14.0;
  const auto nx = static_cast<std::size_t>(std::lround(2.0 * xmax / hx)) + 1;
  const double hu = 0.01;
  const double umax = 3.0;
  const auto nu = static_cast<std::size_t>(std::lround(2.0 * umax / hu)) + 1;

  double total = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < nz; ++j) {
    const double zeta = -zmax + hz * static_cast<double>(j);
    std::vector<double> v(n, 0.0);
    for (const auto& c : rho.components()) {
      const auto a = c.state.amplitudes();
      for (std::size_t i = 0; i < n; ++i) v[i] += c.weight * gauss_sq(zeta - k[i], f) * std::norm(a[i]);
    }
    double P = 0.0;
    for (std::size_t i = 0; i < n; ++i) P += qg.weight(i) * v[i];
    if (P < 1e-12) continue;
    for (auto& x : v) x /= P;

    std::vector<double> U(nu, 0.0);
    for (std::size_t m = 0; m < nu; ++m) {
      const double z = zeta - umax + hu * static_cast<double>(m);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += qg.weight(i) * gauss_sq(z - k[i], f) * v[i];
      U[m] = s;
    }

    std::vector<double> w(nx, 0.0);
    for (const auto& c : rho.components()) {
      const auto a = c.state.amplitudes();
      std::vector<std::complex<double>> amp(n);
      for (std::size_t i = 0; i < n; ++i) amp[i] = qg.weight(i) * std::sqrt(gauss_sq(zeta - k[i], f)) * a[i];
      for (std::size_t m = 0; m < nx; ++m) {
        const double x = -xmax + hx * static_cast<double>(m);
        const std::complex<double> step = std::polar(1.0, qg.spacing() * x);
        std::complex<double> ph = std::polar(1.0, qg.lo() * x);
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          s += amp[i] * ph;
          ph *= step;
        }
        w[m] += c.weight * std::norm(s) / (2.0 * std::numbers::pi * P);
      }
    }
    std::vector<double> W(nx, 0.0);
    for (std::size_t m = 0; m < nx; ++m) {
      const double xi = -xmax + hx * static_cast<double>(m);
      double s = 0.0;
      for (std::size_t l = 0; l < nx; ++l) {
        const double x = -xmax + hx * static_cast<double>(l);
        s += hx * gauss_sq(xi - x, g) * w[l];
      }
      W[m] = s;
    }
    acc += P * (trap_entropy(hu, U) + trap_entropy(hx, W));
    total += P;
  }
  return acc / total;
}

}  // namespace

TEST(Pipeline, GaussianPreparationMatchesClosedForm) {
  const Pipeline p(gaussian_spec(), 0.0, {ProfileKind::gaussian, 0.25, 0.75});
  const auto r = run(p, RelationId::PREP_SHANNON, MeasurementOrder::preparation);
  // U and W are Gaussians with variances sigma_k^2 + f^2 and sigma_x^2 + g^2
  const double expected = 0.5 * std::log(kTwoPiE * (0.25 + 0.0625)) + 0.5 * std::log(kTwoPiE * (1.0 + 0.5625));
  EXPECT_NEAR(r.lhs, expected, 1e-6);
  EXPECT_NEAR(r.rhs, std::log(std::numbers::e * std::numbers::pi), 1e-12);
  EXPECT_NEAR(r.diagnostic("ideal_lhs"), std::log(std::numbers::e * std::numbers::pi), 1e-6);
}

TEST(Pipeline, GaussianSelectiveMomentumFirstClosedForm) {
  const Pipeline p(gaussian_spec(), 0.0, {ProfileKind::gaussian, 0.25, 0.75});
  const auto r = run(p, RelationId::S2_MP_SHANNON, MeasurementOrder::momentum_first);
  // every conditional state is a minimum-uncertainty Gaussian of k-variance s2
  const double s2 = 0.25 * 0.0625 / (0.25 + 0.0625);
  const double expected = 0.5 * std::log(kTwoPiE * (s2 + 0.0625)) + 0.5 * std::log(kTwoPiE * (0.25 / s2 + 0.5625));
  EXPECT_NEAR(r.lhs, expected, 1e-5);
  EXPECT_TRUE(r.pass);
}

TEST(Pipeline, MomentumFirstLeavesMomentumEntropyUnchanged) {
  for (const auto& spec : families()) {
    for (double beta : {0.0, 0.1}) {
      const Pipeline p(spec, beta, {});
      const auto prep = run(p, RelationId::PREP_SHANNON, MeasurementOrder::preparation);
      const auto s1 = run(p, RelationId::S1_MP_SHANNON, MeasurementOrder::momentum_first);
      // H(W) differs; the momentum parts are both H(U_rho)
      const double h_u_prep = prep.lhs - renyi_differential(p.rho_densities().W, 1.0).value;
      const double h_u_s1 = s1.lhs - renyi_differential(p.W_phi_m(), 1.0).value;
      EXPECT_NEAR(h_u_prep, h_u_s1, 1e-12) << spec.name << " " << beta;

      const Density& a = p.rho_densities().U;
      const Density& b = p.U_phi_m();
      const auto offset = static_cast<long>(std::lround((a.grid.lo() - b.grid.lo()) / b.grid.spacing()));
      double worst = 0.0;
      for (std::size_t i = 0; i < a.grid.n(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[static_cast<std::size_t>(offset) + i]));
      }
      EXPECT_LT(worst, 1e-6) << spec.name << " " << beta;
      EXPECT_NEAR(prep.diagnostic("corr_rho"),
                  run(p, RelationId::S2_MP_SHANNON, MeasurementOrder::momentum_first).diagnostic("corr_post"), 1e-8);
    }
  }
}

TEST(Pipeline, OutcomeWeightsResolveIdentity) {
  for (const auto& spec : families()) {
    const Pipeline p(spec, 0.1, {});
    EXPECT_NEAR(p.identity_sum_momentum(), 1.0, 1e-6) << spec.name;
    EXPECT_NEAR(p.identity_sum_position(), 1.0, 1e-6) << spec.name;
    double s = 0.0;
    for (double w : p.sigma_weights()) s += w;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Pipeline, SelectiveMomentumFirstMixtureMatchesCoarseRecomputation) {
  const auto spec = mixture_spec();
  for (double beta : {0.0, 0.1}) {
    const Pipeline p(spec, beta, {ProfileKind::gaussian, 0.25, 0.75});
    const auto r = run(p, RelationId::S2_MP_SHANNON, MeasurementOrder::momentum_first);
    EXPECT_GE(r.margin, -1e-4);
    const MixedState coarse = build_state(spec, DeformationParameter(beta), 1024, 0.0);
    EXPECT_NEAR(r.lhs, selective_momentum_first_oracle(coarse, 0.25, 0.75), 1e-3) << beta;
  }
}

TEST(Pipeline, BinnedRhsIsContinuumRhsMinusBinLog) {
  PipelineSettings s;
  s.bin_zeta = 0.2;
  s.bin_xi = 0.4;
  const Pipeline p(gaussian_spec(), 0.1, {}, s);
  for (auto [a, g] : {std::pair{1.0, 1.0}, {2.0, 2.0 / 3.0}, {2.0 / 3.0, 2.0}}) {
    const EntropyOrder eo{a, g};
    const auto cont = run(p, RelationId::PREP_RENYI, MeasurementOrder::preparation, eo);
    const auto bin = run(p, RelationId::PREP_RENYI_BIN, MeasurementOrder::preparation, eo);
    EXPECT_EQ(bin.rhs, cont.rhs - std::log(0.2 * 0.4));
  }
  const auto shannon = run(p, RelationId::PREP_SHANNON, MeasurementOrder::preparation);
  const auto shannon_bin = run(p, RelationId::PREP_SHANNON_BIN, MeasurementOrder::preparation);
  EXPECT_EQ(shannon_bin.rhs, shannon.rhs - std::log(0.2 * 0.4));
}

TEST(Pipeline, TsallisAndRenyiAgreeAtShannonPoint) {
  const Pipeline p(mixture_spec(), 0.01, {});
  const auto renyi = run(p, RelationId::PREP_RENYI_BIN, MeasurementOrder::preparation);
  const auto tsallis = run(p, RelationId::PREP_TSALLIS_BIN, MeasurementOrder::preparation);
  EXPECT_NEAR(renyi.rhs, tsallis.rhs, 1e-12);
  EXPECT_NEAR(renyi.lhs, tsallis.lhs, 1e-12);
  const auto shannon = run(p, RelationId::PREP_SHANNON_BIN, MeasurementOrder::preparation);
  EXPECT_NEAR(shannon.lhs, renyi.lhs, 1e-12);
}

TEST(Pipeline, BinnedShannonTracksDifferentialEntropy) {
  // H_binned + ln(delta) -> H_differential for delta well below the width
  const Pipeline p(gaussian_spec(), 0.0, {ProfileKind::gaussian, 0.25, 0.75});
  const Density& U = p.rho_densities().U;
  const double sigma = std::sqrt(0.25 + 0.0625);
  const double delta = sigma / 20.0;
  const double hb = renyi_discrete(bin_density(U, aligned_edges(U.grid, delta)), 1.0);
  EXPECT_NEAR(hb + std::log(delta), renyi_differential(U, 1.0).value, 0.01);
}

TEST(Pipeline, RenyiBoundApproachedAsProfilesNarrow) {
  // Gaussian state, beta = 0: rhs = ln(kappa pi) and the margin shrinks with the profiles
  PipelineSettings s;
  s.prep_only = true;
  const EntropyOrder eo{2.0, 2.0 / 3.0};
  double last = 1e300;
  for (double scale : {0.2, 0.1, 0.05}) {
    const Pipeline p(gaussian_spec(), 0.0, {ProfileKind::gaussian, scale * 0.5, scale * 1.0}, s);
    const auto r = run(p, RelationId::PREP_RENYI, MeasurementOrder::preparation, eo);
    EXPECT_NEAR(r.rhs, std::log(kappa(2.0, 2.0 / 3.0) * std::numbers::pi), 1e-8);
    EXPECT_GE(r.margin, -1e-4);
    EXPECT_LT(r.margin, last);
    last = r.margin;
  }
}

TEST(Pipeline, PositionFirstCorrectionUsesDisturbedState) {
  StateSpec s = gaussian_spec(0.6);
  s.gaussian.center_q = 0.5;
  s.gaussian.center_x = 1.5;
  const Pipeline p(s, 0.1, {ProfileKind::gaussian, 0.25, 0.75});
  const auto r = run(p, RelationId::S1_PM_SHANNON, MeasurementOrder::position_first);
  EXPECT_TRUE(r.pass) << r.status;
  const double c_rho = r.diagnostic("corr_rho");
  const double c_post = r.diagnostic("corr_post");
  EXPECT_NEAR(c_rho, p.correction_rho(), 1e-15);
  EXPECT_NEAR(c_post, p.correction_phi_n(), 1e-15);
  EXPECT_GT(std::abs(c_post - c_rho), 1e-3);
  EXPECT_NEAR(r.rhs, std::log(std::numbers::e * std::numbers::pi) + c_post, 1e-12);
}

TEST(Pipeline, EveryReportPassesIffMarginWithinTolerance) {
  const Pipeline p(superposition_spec(), 0.01, {});
  for (RelationId id : all_relation_ids()) {
    for (auto order : applicable_orders(id)) {
      const auto r = run(p, id, order, takes_orders(id) ? EntropyOrder{1.5, 0.75} : EntropyOrder{});
      EXPECT_EQ(r.pass, r.margin >= -r.tol) << to_string(id);
      EXPECT_EQ(r.status, "ok") << to_string(id) << " " << to_string(order);
    }
  }
}

TEST(Pipeline, RejectsInapplicableOrder) {
  const Pipeline p(gaussian_spec(), 0.0, {});
  try {
    p.check(RelationId::S1_MP_SHANNON, MeasurementOrder::position_first, {}, 1e-4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
  EXPECT_THROW(p.check(RelationId::PREP_RENYI, MeasurementOrder::preparation, {2.0, 2.0}, 1e-4), Error);
}

TEST(Pipeline, PreparationOnlyCellReportsSuccessiveRelationsAsErrors) {
  PipelineSettings s;
  s.prep_only = true;
  const Pipeline p(gaussian_spec(), 0.0, {}, s);
  const auto r = run(p, RelationId::S2_PM_BIN, MeasurementOrder::position_first);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.status, "error:ConfigError");
  EXPECT_TRUE(run(p, RelationId::PREP_SHANNON, MeasurementOrder::preparation).pass);
}

TEST(Pipeline, PositionCollapseBeyondLeakageCapIsReportedPerOrder) {
  // a position profile narrower than sqrt(beta) pushes the post states out of the band
  PipelineSettings s;
  s.grid_n = 512;
  const Pipeline p(gaussian_spec(), 1.0, {ProfileKind::gaussian, 0.5, 0.3}, s);
  ASSERT_TRUE(p.position_first_error().has_value());
  EXPECT_EQ(p.position_first_error()->kind(), ErrorKind::BandLimitViolation);
  const auto r = run(p, RelationId::S1_PM_SHANNON, MeasurementOrder::position_first);
  EXPECT_EQ(r.status, "error:BandLimitViolation");
  EXPECT_TRUE(run(p, RelationId::PREP_SHANNON, MeasurementOrder::preparation).pass);
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  const auto spec = mixture_spec();
  set_thread_count(1);
  const Pipeline a(spec, 0.1, {});
  set_thread_count(4);
  const Pipeline b(spec, 0.1, {});
  set_thread_count(1);
  for (RelationId id : all_relation_ids()) {
    for (auto order : applicable_orders(id)) {
      const auto ra = run(a, id, order);
      const auto rb = run(b, id, order);
      EXPECT_EQ(ra.lhs, rb.lhs) << to_string(id);
      EXPECT_EQ(ra.rhs, rb.rhs) << to_string(id);
    }
  }
}

TEST(Pipeline, NonGaussianProfilesKeepBoundsSatisfied) {
  for (auto kind : {ProfileKind::raised_cosine, ProfileKind::top_hat_smoothed}) {
    const Pipeline p(mixture_spec(), 0.01, {kind, 0.25, 0.75});
    for (RelationId id : all_relation_ids()) {
      for (auto order : applicable_orders(id)) {
        const auto r = run(p, id, order, takes_orders(id) ? EntropyOrder{2.0, 2.0 / 3.0} : EntropyOrder{});
        EXPECT_TRUE(r.pass) << to_string(kind) << " " << to_string(id) << " " << r.status << " " << r.margin;
      }
    }
  }
}
