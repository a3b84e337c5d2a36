#include "guplab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "guplab/parallel.hpp"

namespace guplab {

namespace {

constexpr double kWindowTail = 1e-13;
constexpr double kOutcomeTail = 1e-5;
// Conditional states are checked in aggregate: sum_j p_j (tail of U_j + tail of W_j).
constexpr double kEnsembleTail = 1e-5;
constexpr double kCapWidths = 40.0;

// Inclusive range of lattice indices on an outcome axis with spacing h.
struct Span {
  long first;
  long last;
};

long floor_div(long a, long m) { return a >= 0 ? a / m : -((-a + m - 1) / m); }
long ceil_div(long a, long m) { return -floor_div(-a, m); }

Span merge(Span a, Span b) { return {std::min(a.first, b.first), std::max(a.last, b.last)}; }

// Outcome axis: lattice spacing h, bins of m nodes, and a hard cap on the reach.
struct Axis1 {
  double h;
  long m;
  Span cap;

  Span span(double lo, double hi) const {
    long a = static_cast<long>(std::floor(lo / h));
    long b = static_cast<long>(std::ceil(hi / h));
    a = floor_div(a, m) * m;
    b = ceil_div(b, m) * m;
    a = std::clamp(a, cap.first, cap.last - m);
    b = std::clamp(b, a + m, cap.last);
    return {a, b};
  }
  Grid grid(Span s) const { return Grid::lattice(s.first, s.last, h); }
};

Axis1 make_axis(double width, double step_fraction, double bin, double center, double reach) {
  const double target = width * step_fraction;
  const double steps = std::ceil(bin / target - 1e-9);
  Axis1 ax{bin / steps, static_cast<long>(steps), {0, 0}};
  const long m = ax.m;
  ax.cap.first = floor_div(static_cast<long>(std::floor((center - reach) / ax.h)), m) * m;
  ax.cap.last = ceil_div(static_cast<long>(std::ceil((center + reach) / ax.h)), m) * m;
  return ax;
}

double correction_from_density(const Grid& qg, const DeformationParameter& beta, std::span<const double> v) {
  if (!beta.deformed()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) s += qg.weight(i) * beta.log_factor_q(qg.node(i)) * v[i];
  }
  return s;
}

// Quantities of one analysed state kept between the window pass and the density pass.
struct Raw {
  std::vector<double> v;
  std::size_t w_first = 0;
  std::vector<double> w;
  Span z{0, 0};
  Span x{0, 0};
  double correction = 0.0;
};

struct Moments {
  double mean;
  double sd;
};

Moments q_moments_in_k(const MixedState& s) {
  const Grid& g = s.qgrid();
  const auto v = s.q_density();
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double k = s.deformation().k_of_q(g.node(i));
    m1 += g.weight(i) * k * v[i];
    m2 += g.weight(i) * k * k * v[i];
  }
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

Moments lattice_moments(const Grid& xg, std::span<const double> w) {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = xg.node(i);
    m0 += xg.weight(i) * w[i];
    m1 += xg.weight(i) * x * w[i];
    m2 += xg.weight(i) * x * x * w[i];
  }
  m1 /= m0;
  return {m1, std::sqrt(std::max(0.0, m2 / m0 - m1 * m1))};
}

template <typename Kernel>
std::vector<double> rows_dot(const Kernel& kernel, std::size_t row_begin, std::size_t row_end,
                             std::span<const double> values, std::size_t values_first) {
  std::vector<double> out(row_end - row_begin, 0.0);
  const std::size_t values_last = values_first + values.size();
  for (std::size_t j = row_begin; j < row_end; ++j) {
    const auto r = kernel.row(j);
    const std::size_t f = kernel.first(j);
    const std::size_t lo = std::max(f, values_first);
    const std::size_t hi = std::min(f + r.size(), values_last);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += r[i - f] * values[i - values_first];
    out[j - row_begin] = s;
  }
  return out;
}

double shannon_in_q(const Grid& qg, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 1e-300) s -= qg.weight(i) * v[i] * std::log(v[i]);
  }
  return s;
}

}  // namespace

std::string number_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::gaussian: return "gaussian";
    case StateKind::superposition: return "superposition";
    case StateKind::mixture: return "mixture";
    case StateKind::uniform: return "uniform";
  }
  return "?";
}

StateKind parse_state_kind(const std::string& name) {
  if (name == "gaussian") return StateKind::gaussian;
  if (name == "superposition") return StateKind::superposition;
  if (name == "mixture") return StateKind::mixture;
  if (name == "uniform") return StateKind::uniform;
  fail(ErrorKind::ConfigError, "unknown state kind '" + name + "'");
}

MixedState build_state(const StateSpec& spec, const DeformationParameter& beta, std::size_t n,
                       double extra_width) {
  auto cutoff = [&](double center, double width) {
    return std::abs(center) + 8.0 * std::hypot(width, extra_width);
  };
  switch (spec.kind) {
    case StateKind::gaussian: {
      const auto& p = spec.gaussian;
      return make_gaussian_q(beta, p.center_q, p.width_q, n, {p.center_x, cutoff(p.center_q, p.width_q)});
    }
    case StateKind::superposition: {
      auto s = spec.superposition;
      s.cutoff = cutoff(s.spread_q, s.width_q);
      return make_random_superposition(beta, n, s);
    }
    case StateKind::mixture: {
      if (spec.parts.empty()) fail(ErrorKind::ConfigError, "mixture state needs parts");
      double q_cut = 0.0;
      for (const auto& p : spec.parts) q_cut = std::max(q_cut, cutoff(p.center_q, p.width_q));
      std::vector<MixtureComponent> comps;
      for (const auto& p : spec.parts) {
        comps.push_back({p.weight, make_gaussian_q(beta, p.center_q, p.width_q, n, {p.center_x, q_cut})});
      }
      return MixedState(std::move(comps), true);
    }
    case StateKind::uniform:
      return make_uniform_q(beta, n, spec.taper_nodes);
  }
  fail(ErrorKind::ConfigError, "unhandled state kind");
}

PipelineSettings PipelineSettings::refined() const {
  PipelineSettings s = *this;
  s.grid_n = 2 * grid_n;
  s.outcome_step = 0.5 * outcome_step;
  s.dx_fraction = 0.5 * dx_fraction;
  return s;
}

Pipeline::Pipeline(const StateSpec& spec, double beta, const ProfilePair& profiles,
                   const PipelineSettings& settings)
    : Pipeline(build_state(spec, DeformationParameter(beta), settings.grid_n,
                           settings.prep_only
                               ? 0.0
                               : AcceptanceProfile::make(profiles.kind, profiles.g_width).conjugate_width()),
               profiles, settings, spec.name) {}

Pipeline::Pipeline(MixedState rho, const ProfilePair& profiles, const PipelineSettings& settings,
                   std::string state_name)
    : rho_(std::move(rho)),
      state_name_(std::move(state_name)),
      f_(AcceptanceProfile::make(profiles.kind, profiles.f_width)),
      g_(AcceptanceProfile::make(profiles.kind, profiles.g_width)),
      settings_(settings) {
  if (!(settings_.bin_zeta > 0.0) || !(settings_.bin_xi > 0.0)) {
    fail(ErrorKind::ConfigError, "bin widths must be positive");
  }
  run();
}

Pipeline::~Pipeline() = default;

void Pipeline::run() {
  const auto& beta = rho_.deformation();
  const Grid& qg = rho_.qgrid();
  const double q_max = std::max(std::abs(qg.lo()), std::abs(qg.hi()));
  lattice_ = std::make_unique<FourierLattice>(
      qg, std::min(g_.width() * settings_.dx_fraction, std::numbers::pi / (4.0 * q_max)));
  const Grid& xg = lattice_->xgrid();
  s_f_ = sf_compute(f_, beta);

  const auto w_rho = x_density(rho_, *lattice_);
  const Moments km = q_moments_in_k(rho_);
  const Moments xm = lattice_moments(xg, w_rho);
  const Axis1 zax = make_axis(f_.width(), settings_.outcome_step, settings_.bin_zeta, km.mean,
                              kCapWidths * (km.sd + f_.width() + g_.conjugate_width()) + f_.support());
  const Axis1 xax = make_axis(g_.width(), settings_.outcome_step, settings_.bin_xi, xm.mean,
                              kCapWidths * (xm.sd + g_.width() + f_.conjugate_width()) + g_.support());
  h_zeta_ = zax.h;
  h_xi_ = xax.h;

  const double x_reach = g_.support() + std::abs(g_.center_offset());
  const double k_reach = f_.support() + std::abs(f_.center_offset());
  const auto x_pad = static_cast<std::size_t>(std::ceil(x_reach / xg.spacing())) + 1;

  auto analyse = [&](const MixedState& s, std::vector<double> w_full) {
    Raw r;
    r.v = s.q_density();
    r.correction = correction_from_density(qg, beta, r.v);
    const auto [qa, qb] = quantile_window(qg, r.v, kWindowTail);
    r.z = zax.span(beta.k_of_q(qg.node(qa)) + f_.center_offset() - k_reach,
                   beta.k_of_q(qg.node(qb)) + f_.center_offset() + k_reach);
    const auto [xa, xb] = quantile_window(xg, w_full, kWindowTail);
    r.x = xax.span(xg.node(xa) + g_.center_offset() - x_reach, xg.node(xb) + g_.center_offset() + x_reach);
    r.w_first = xa > x_pad ? xa - x_pad : 0;
    const std::size_t w_last = std::min(xb + x_pad, w_full.size() - 1);
    r.w.assign(w_full.begin() + static_cast<long>(r.w_first), w_full.begin() + static_cast<long>(w_last) + 1);
    return r;
  };

  const Raw rho_raw = analyse(rho_, w_rho);
  {
    double hw = 0.0;
    for (std::size_t m = 0; m < w_rho.size(); ++m) {
      if (w_rho[m] > 1e-300) hw -= xg.weight(m) * w_rho[m] * std::log(w_rho[m]);
    }
    ideal_lhs_ = shannon_in_q(qg, rho_raw.v) + rho_raw.correction + hw;
  }

  std::vector<Raw> sigma_raw;
  std::vector<Raw> tau_raw;
  Span zspan = rho_raw.z;
  Span xspan = rho_raw.x;
  std::vector<double> w_phi_m;
  std::vector<double> v_phi_m;
  std::vector<double> v_phi_n;

  auto analyse_all = [&](const OutcomeEnsemble& ens, std::vector<Raw>& out) {
    std::vector<std::optional<Raw>> slots(ens.post_states.size());
    parallel_for(slots.size(), [&](std::size_t j) {
      slots[j] = analyse(ens.post_states[j], x_density(ens.post_states[j], *lattice_));
    });
    for (auto& s : slots) {
      zspan = merge(zspan, s->z);
      xspan = merge(xspan, s->x);
      out.push_back(std::move(*s));
    }
  };

  if (!settings_.prep_only) {
    try {
      const OutcomeEnsemble ens_m = collapse_momentum(rho_, f_, zax.grid(rho_raw.z));
      identity_m_ = ens_m.raw_weight_sum;
      dropped_m_ = ens_m.dropped_mass;
      sigma_w_ = ens_m.weights;
      for (std::size_t j : ens_m.retained) sigma_at_.push_back(ens_m.outcome_grid.node(j));
      analyse_all(ens_m, sigma_raw);
    } catch (const Error& e) {
      mp_error_ = e;
      sigma_w_.clear();
      sigma_at_.clear();
      sigma_raw.clear();
    }

    try {
      const OutcomeEnsemble ens_n =
          collapse_position(rho_, g_, xax.grid(rho_raw.x), *lattice_, settings_.leakage_cap);
      identity_n_ = ens_n.raw_weight_sum;
      dropped_n_ = ens_n.dropped_mass;
      tau_w_ = ens_n.weights;
      tau_leak_ = ens_n.leakage;
      for (std::size_t j : ens_n.retained) tau_at_.push_back(ens_n.outcome_grid.node(j));
      for (std::size_t j = 0; j < ens_n.leakage.size(); ++j) {
        leakage_mean_ += tau_w_[j] * ens_n.leakage[j];
        leakage_max_ = std::max(leakage_max_, ens_n.leakage[j]);
      }
      analyse_all(ens_n, tau_raw);
    } catch (const Error& e) {
      pm_error_ = e;
      tau_w_.clear();
      tau_leak_.clear();
      tau_at_.clear();
    }
  }

  zeta_ = zax.grid(zspan);
  xi_ = xax.grid(xspan);
  const MomentumKernel mk(qg, beta, f_, zeta_);
  const PositionKernel pk(xg, g_, xi_);

  auto densities = [&](const Raw& r, double max_tail) {
    StateDensities d;
    d.correction = r.correction;
    const auto zb = static_cast<std::size_t>(r.z.first - zspan.first);
    const auto ze = static_cast<std::size_t>(r.z.last - zspan.first) + 1;
    d.U = make_density(Axis::zeta, zax.grid(r.z), rows_dot(mk, zb, ze, r.v, 0), max_tail);
    const auto xb = static_cast<std::size_t>(r.x.first - xspan.first);
    const auto xe = static_cast<std::size_t>(r.x.last - xspan.first) + 1;
    d.W = make_density(Axis::xi, xax.grid(r.x), rows_dot(pk, xb, xe, r.w, r.w_first), max_tail);
    return d;
  };

  rho_d_ = densities(rho_raw, kOutcomeTail);
  auto all_densities = [&](const std::vector<Raw>& raws, const std::vector<double>& weights,
                           std::vector<StateDensities>& out) {
    std::vector<std::optional<StateDensities>> slots(raws.size());
    std::vector<std::optional<Error>> errors(raws.size());
    parallel_for(raws.size(), [&](std::size_t j) {
      try {
        slots[j] = densities(raws[j], 1.0);
      } catch (const Error& e) {
        errors[j] = e;
      }
    });
    double lost = 0.0;
    for (std::size_t j = 0; j < raws.size(); ++j) {
      if (errors[j]) throw *errors[j];
      lost += weights[j] * (slots[j]->U.tail_mass + slots[j]->W.tail_mass);
      out.push_back(std::move(*slots[j]));
    }
    if (lost > kEnsembleTail) {
      fail(ErrorKind::WindowTooSmall, "outcome windows lose " + std::to_string(lost) + " of the weighted mass");
    }
  };

  if (settings_.prep_only) return;

  if (!mp_error_) {
    try {
      all_densities(sigma_raw, sigma_w_, sigma_);
      v_phi_m.assign(qg.n(), 0.0);
      w_phi_m.assign(xg.n(), 0.0);
      for (std::size_t j = 0; j < sigma_raw.size(); ++j) {
        const double p = sigma_w_[j];
        for (std::size_t i = 0; i < qg.n(); ++i) v_phi_m[i] += p * sigma_raw[j].v[i];
        for (std::size_t i = 0; i < sigma_raw[j].w.size(); ++i) w_phi_m[sigma_raw[j].w_first + i] += p * sigma_raw[j].w[i];
        corr_sigma_avg_ += p * sigma_raw[j].correction;
      }
      U_phi_m_ = make_density(Axis::zeta, zeta_, mk.apply(v_phi_m), kOutcomeTail);
      W_phi_m_ = make_density(Axis::xi, xi_, pk.apply(w_phi_m), kOutcomeTail);
    } catch (const Error& e) {
      mp_error_ = e;
      sigma_.clear();
      U_phi_m_.reset();
      W_phi_m_.reset();
    }
  }

  if (pm_error_) return;
  try {
    all_densities(tau_raw, tau_w_, tau_);
    v_phi_n.assign(qg.n(), 0.0);
    for (std::size_t j = 0; j < tau_raw.size(); ++j) {
      const double p = tau_w_[j];
      for (std::size_t i = 0; i < qg.n(); ++i) v_phi_n[i] += p * tau_raw[j].v[i];
      corr_tau_avg_ += p * tau_raw[j].correction;
    }
    corr_phi_n_ = correction_from_density(qg, beta, v_phi_n);
    U_phi_n_ = make_density(Axis::zeta, zeta_, mk.apply(v_phi_n), kOutcomeTail);
  } catch (const Error& e) {
    pm_error_ = e;
    tau_.clear();
    U_phi_n_.reset();
  }
}

const Density& Pipeline::U_phi_m() const {
  if (mp_error_) throw *mp_error_;
  if (!U_phi_m_) fail(ErrorKind::ConfigError, "momentum-first mixture not computed");
  return *U_phi_m_;
}

const Density& Pipeline::W_phi_m() const {
  if (mp_error_) throw *mp_error_;
  if (!W_phi_m_) fail(ErrorKind::ConfigError, "momentum-first mixture not computed");
  return *W_phi_m_;
}

const Density& Pipeline::U_phi_n() const {
  if (pm_error_) throw *pm_error_;
  if (!U_phi_n_) fail(ErrorKind::ConfigError, "position-first mixture not computed");
  return *U_phi_n_;
}

double Pipeline::correction_phi_n() const {
  if (pm_error_) throw *pm_error_;
  if (!U_phi_n_) fail(ErrorKind::ConfigError, "position-first mixture not computed");
  return corr_phi_n_;
}

namespace {

enum class Family { shannon, shannon_bin, renyi, renyi_bin, tsallis_bin };
enum class Scenario { prep, s1, s2 };

struct Shape {
  Family family;
  Scenario scenario;
};

Shape shape_of(RelationId id) {
  using enum RelationId;
  switch (id) {
    case PREP_SHANNON: return {Family::shannon, Scenario::prep};
    case S1_MP_SHANNON:
    case S1_PM_SHANNON: return {Family::shannon, Scenario::s1};
    case S2_MP_SHANNON:
    case S2_PM_SHANNON: return {Family::shannon, Scenario::s2};
    case PREP_SHANNON_BIN: return {Family::shannon_bin, Scenario::prep};
    case S1_MP_BIN:
    case S1_PM_BIN: return {Family::shannon_bin, Scenario::s1};
    case S2_MP_BIN:
    case S2_PM_BIN: return {Family::shannon_bin, Scenario::s2};
    case PREP_RENYI: return {Family::renyi, Scenario::prep};
    case PREP_RENYI_BIN: return {Family::renyi_bin, Scenario::prep};
    case PREP_TSALLIS_BIN: return {Family::tsallis_bin, Scenario::prep};
    case S1_RENYI: return {Family::renyi, Scenario::s1};
    case S1_RENYI_BIN: return {Family::renyi_bin, Scenario::s1};
    case S1_TSALLIS_BIN: return {Family::tsallis_bin, Scenario::s1};
    case S2_RENYI: return {Family::renyi, Scenario::s2};
    case S2_RENYI_BIN: return {Family::renyi_bin, Scenario::s2};
    case S2_TSALLIS_BIN: return {Family::tsallis_bin, Scenario::s2};
    case ROBERTSON: break;
  }
  fail(ErrorKind::InvalidArgument, "relation has no entropic shape");
}

}  // namespace

RelationReport Pipeline::check(RelationId id, MeasurementOrder order, const EntropyOrder& orders,
                               double tol) const {
  const auto allowed = applicable_orders(id);
  if (std::find(allowed.begin(), allowed.end(), order) == allowed.end()) {
    fail(ErrorKind::ConfigError, std::string(to_string(id)) + " is not defined for order " + to_string(order));
  }
  const EntropyOrder eo = takes_orders(id) ? EntropyOrder::conjugate(orders.alpha, orders.gamma) : EntropyOrder{};

  RelationReport r;
  const double dzeta = settings_.bin_zeta;
  const double dxi = settings_.bin_xi;
  const auto& beta = rho_.deformation();
  auto label = [&](RelationReport& rep) {
    rep.labels = {{"state", state_name_},
                  {"profile", to_string(f_.kind())},
                  {"f_width", number_label(f_.width())},
                  {"g_width", number_label(g_.width())}};
  };

  if (id == RelationId::ROBERTSON) {
    r = robertson_check(rho_, tol);
    label(r);
    return r;
  }

  r.id = id;
  r.order = order;
  r.alpha = eo.alpha;
  r.gamma = eo.gamma;
  r.beta = beta.beta();
  r.tol = tol;
  label(r);

  const Shape shape = shape_of(id);
  const bool pm = order == MeasurementOrder::position_first;
  const double kap = kappa(eo.alpha, eo.gamma);
  double corr_post = rho_d_.correction;
  double rhs_cont = 0.0;
  double max_tail = 0.0;

  try {
    if (shape.scenario != Scenario::prep && settings_.prep_only) {
      fail(ErrorKind::ConfigError, "successive-measurement relations need the collapse stages");
    }
    if (shape.scenario != Scenario::prep) {
      if (pm && pm_error_) throw *pm_error_;
      if (!pm && mp_error_) throw *mp_error_;
    }

    // tails of conditional states count with their outcome weight
    double weight = 1.0;
    auto entropy = [&](const Density& d, double a, double delta) {
      if (shape.scenario == Scenario::s2) max_tail += weight * d.tail_mass;
      else max_tail = std::max(max_tail, d.tail_mass);
      switch (shape.family) {
        case Family::shannon:
        case Family::renyi:
          return renyi_differential(d, a).value;
        case Family::shannon_bin:
        case Family::renyi_bin:
          return renyi_discrete(bin_density(d, aligned_edges(d.grid, delta)), a);
        case Family::tsallis_bin:
          return tsallis_discrete(bin_density(d, aligned_edges(d.grid, delta)), a);
      }
      return 0.0;
    };
    auto pair = [&](const Density& U, const Density& W) {
      return entropy(U, eo.alpha, dzeta) + entropy(W, eo.gamma, dxi);
    };

    switch (shape.scenario) {
      case Scenario::prep:
        r.lhs = pair(rho_d_.U, rho_d_.W);
        break;
      case Scenario::s1:
        r.lhs = pm ? pair(U_phi_n(), rho_d_.W) : pair(rho_d_.U, W_phi_m());
        if (pm) corr_post = corr_phi_n_;
        else corr_post = corr_sigma_avg_;
        break;
      case Scenario::s2: {
        const auto& states = pm ? tau_ : sigma_;
        const auto& weights = pm ? tau_w_ : sigma_w_;
        double sum = 0.0;
        for (std::size_t j = 0; j < states.size(); ++j) {
          weight = weights[j];
          sum += weight * pair(states[j].U, states[j].W);
        }
        r.lhs = sum;
        corr_post = pm ? corr_tau_avg_ : corr_sigma_avg_;
        break;
      }
    }

    const double ln_bins = std::log(dzeta * dxi);
    switch (shape.family) {
      case Family::shannon:
      case Family::shannon_bin: {
        // position-first relations carry the correction of the disturbed state
        const double corr = pm ? corr_post : rho_d_.correction;
        rhs_cont = std::log(std::numbers::e * std::numbers::pi) + corr;
        r.rhs = shape.family == Family::shannon ? rhs_cont : rhs_cont - ln_bins;
        break;
      }
      case Family::renyi:
      case Family::renyi_bin:
        rhs_cont = std::log(kap * std::numbers::pi / s_f_);
        r.rhs = shape.family == Family::renyi ? rhs_cont : rhs_cont - ln_bins;
        break;
      case Family::tsallis_bin:
        rhs_cont = std::log(kap * std::numbers::pi / s_f_);
        r.rhs = alpha_log(kap * std::numbers::pi / (s_f_ * dzeta * dxi), eo.nu());
        break;
    }
    r.settle();
  } catch (const Error& e) {
    r.lhs = std::nan("");
    r.rhs = std::nan("");
    r.margin = std::nan("");
    r.pass = false;
    r.status = std::string("error:") + to_string(e.kind());
  }

  r.diagnostics = {
      {"dzeta", dzeta},
      {"dxi", dxi},
      {"h_zeta", h_zeta_},
      {"h_xi", h_xi_},
      {"dx", lattice_->xgrid().spacing()},
      {"dq", rho_.qgrid().spacing()},
      {"n_q", static_cast<double>(rho_.qgrid().n())},
      {"q_max", rho_.qgrid().hi()},
      {"corr_rho", rho_d_.correction},
      {"corr_post", corr_post},
      {"s_f", s_f_},
      {"kappa", kap},
      {"rhs_continuum", rhs_cont},
      {"tail_mass", max_tail},
      {"tail_flag", std::min(eo.alpha, eo.gamma) <= 1.0 + 1e-9 && max_tail >= 1e-6 ? 1.0 : 0.0},
  };
  if (id == RelationId::PREP_SHANNON) r.diagnostics.emplace_back("ideal_lhs", ideal_lhs_);
  if (shape.scenario != Scenario::prep) {
    r.diagnostics.emplace_back("identity_sum", pm ? identity_n_ : identity_m_);
    r.diagnostics.emplace_back("dropped_mass", pm ? dropped_n_ : dropped_m_);
    r.diagnostics.emplace_back("outcomes", static_cast<double>(pm ? tau_w_.size() : sigma_w_.size()));
  }
  if (pm) {
    r.diagnostics.emplace_back("leakage_mean", leakage_mean_);
    r.diagnostics.emplace_back("leakage_max", leakage_max_);
  }
  return r;
}

RelationReport check_relation(RelationId id, const MixedState& rho, const ProfilePair& profiles,
                              const EntropyOrder& orders, MeasurementOrder order, double tol,
                              const PipelineSettings& settings) {
  const Pipeline p(rho, profiles, settings);
  return p.check(id, order, orders, tol);
}

}  // namespace guplab
