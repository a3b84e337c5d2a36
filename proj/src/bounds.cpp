#include "guplab/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace guplab {

namespace {

struct IdInfo {
  RelationId id;
  const char* name;
};

constexpr std::array<IdInfo, 20> kIds{{
    {RelationId::ROBERTSON, "ROBERTSON"},
    {RelationId::PREP_SHANNON, "PREP_SHANNON"},
    {RelationId::S1_MP_SHANNON, "S1_MP_SHANNON"},
    {RelationId::S1_PM_SHANNON, "S1_PM_SHANNON"},
    {RelationId::S2_MP_SHANNON, "S2_MP_SHANNON"},
    {RelationId::S2_PM_SHANNON, "S2_PM_SHANNON"},
    {RelationId::PREP_SHANNON_BIN, "PREP_SHANNON_BIN"},
    {RelationId::S1_MP_BIN, "S1_MP_BIN"},
    {RelationId::S1_PM_BIN, "S1_PM_BIN"},
    {RelationId::S2_MP_BIN, "S2_MP_BIN"},
    {RelationId::S2_PM_BIN, "S2_PM_BIN"},
    {RelationId::PREP_RENYI, "PREP_RENYI"},
    {RelationId::PREP_RENYI_BIN, "PREP_RENYI_BIN"},
    {RelationId::PREP_TSALLIS_BIN, "PREP_TSALLIS_BIN"},
    {RelationId::S1_RENYI, "S1_RENYI"},
    {RelationId::S1_RENYI_BIN, "S1_RENYI_BIN"},
    {RelationId::S1_TSALLIS_BIN, "S1_TSALLIS_BIN"},
    {RelationId::S2_RENYI, "S2_RENYI"},
    {RelationId::S2_RENYI_BIN, "S2_RENYI_BIN"},
    {RelationId::S2_TSALLIS_BIN, "S2_TSALLIS_BIN"},
}};

double log_ratio_term(double a) {
  // ln(a) / (a - 1), continuous through a = 1
  const double e = a - 1.0;
  if (std::abs(e) < 1e-9) return 1.0;
  return std::log1p(e) / e;
}

}  // namespace

const char* to_string(RelationId id) {
  for (const auto& info : kIds) {
    if (info.id == id) return info.name;
  }
  return "?";
}

const char* to_string(MeasurementOrder order) {
  switch (order) {
    case MeasurementOrder::momentum_first: return "momentum_first";
    case MeasurementOrder::position_first: return "position_first";
    case MeasurementOrder::preparation: return "preparation";
  }
  return "?";
}

RelationId parse_relation_id(const std::string& name) {
  for (const auto& info : kIds) {
    if (name == info.name) return info.id;
  }
  fail(ErrorKind::ConfigError, "unknown relation id '" + name + "'");
}

MeasurementOrder parse_order(const std::string& name) {
  if (name == "momentum_first") return MeasurementOrder::momentum_first;
  if (name == "position_first") return MeasurementOrder::position_first;
  if (name == "preparation") return MeasurementOrder::preparation;
  fail(ErrorKind::ConfigError, "unknown measurement order '" + name + "'");
}

const std::vector<RelationId>& all_relation_ids() {
  static const std::vector<RelationId> ids = [] {
    std::vector<RelationId> v;
    for (const auto& info : kIds) v.push_back(info.id);
    return v;
  }();
  return ids;
}

std::vector<MeasurementOrder> applicable_orders(RelationId id) {
  using enum RelationId;
  switch (id) {
    case ROBERTSON:
    case PREP_SHANNON:
    case PREP_SHANNON_BIN:
    case PREP_RENYI:
    case PREP_RENYI_BIN:
    case PREP_TSALLIS_BIN:
      return {MeasurementOrder::preparation};
    case S1_MP_SHANNON:
    case S2_MP_SHANNON:
    case S1_MP_BIN:
    case S2_MP_BIN:
      return {MeasurementOrder::momentum_first};
    case S1_PM_SHANNON:
    case S2_PM_SHANNON:
    case S1_PM_BIN:
    case S2_PM_BIN:
      return {MeasurementOrder::position_first};
    default:
      return {MeasurementOrder::momentum_first, MeasurementOrder::position_first};
  }
}

bool is_binned(RelationId id) {
  using enum RelationId;
  switch (id) {
    case PREP_SHANNON_BIN:
    case S1_MP_BIN:
    case S1_PM_BIN:
    case S2_MP_BIN:
    case S2_PM_BIN:
    case PREP_RENYI_BIN:
    case PREP_TSALLIS_BIN:
    case S1_RENYI_BIN:
    case S1_TSALLIS_BIN:
    case S2_RENYI_BIN:
    case S2_TSALLIS_BIN:
      return true;
    default:
      return false;
  }
}

bool takes_orders(RelationId id) {
  return static_cast<int>(id) >= static_cast<int>(RelationId::PREP_RENYI);
}

void RelationReport::settle() {
  margin = lhs - rhs;
  pass = margin >= -tol;
  status = pass ? "ok" : "violation";
}

double RelationReport::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics) {
    if (k == key) return v;
  }
  fail(ErrorKind::InvalidArgument, "report has no diagnostic '" + key + "'");
}

double correction_term(const MixedState& rho) {
  const auto& beta = rho.deformation();
  if (!beta.deformed()) return 0.0;
  const Grid& g = rho.qgrid();
  const auto v = rho.q_density();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    sum += g.weight(i) * beta.log_factor_q(g.node(i)) * v[i];
  }
  return sum;
}

double sf_compute(const AcceptanceProfile& f, const DeformationParameter& beta) {
  const Grid& t = f.grid();
  const auto sq = f.sq_modulus();
  if (!beta.deformed()) return integrate(t, sq);
  const double b = beta.beta();
  auto overlap = [&](double zeta) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.n(); ++i) {
      const double k = zeta - t.node(i);
      s += t.weight(i) * sq[i] / (1.0 + b * k * k);
    }
    return s;
  };
  const double reach = 8.0 * f.width() + f.support();
  return supremum_1d(overlap, f.center_offset() - reach, f.center_offset() + reach, 401).value;
}

double kappa(double alpha, double gamma) {
  const auto order = EntropyOrder::conjugate(alpha, gamma);
  if (std::abs(order.alpha - 1.0) < 1e-9 && std::abs(order.gamma - 1.0) < 1e-9) return std::numbers::e;
  return std::exp(0.5 * (log_ratio_term(order.alpha) + log_ratio_term(order.gamma)));
}

RelationReport robertson_check(const MixedState& rho, double tol) {
  const auto& beta = rho.deformation();
  const Grid& qg = rho.qgrid();
  const double q_max = std::max(std::abs(qg.lo()), std::abs(qg.hi()));
  const FourierLattice lattice(qg, std::numbers::pi / (4.0 * q_max));
  const auto w = x_density(rho, lattice);
  const Grid& xg = lattice.xgrid();
  double x1 = 0.0;
  double x2 = 0.0;
  double mass = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    const double x = xg.node(m);
    mass += xg.weight(m) * w[m];
    x1 += xg.weight(m) * x * w[m];
    x2 += xg.weight(m) * x * x * w[m];
  }
  const auto v = rho.q_density();
  double k1 = 0.0;
  double k2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double k = beta.k_of_q(qg.node(i));
    k1 += qg.weight(i) * k * v[i];
    k2 += qg.weight(i) * k * k * v[i];
  }
  const double dx = std::sqrt(std::max(0.0, x2 / mass - (x1 / mass) * (x1 / mass)));
  const double dk = std::sqrt(std::max(0.0, k2 - k1 * k1));

  RelationReport r;
  r.id = RelationId::ROBERTSON;
  r.order = MeasurementOrder::preparation;
  r.beta = beta.beta();
  r.tol = tol;
  r.lhs = dx * dk;
  r.rhs = 0.5 * (1.0 + beta.beta() * k2);
  r.settle();
  const double rhs_weak = 0.5 * (1.0 + beta.beta() * dk * dk);
  r.diagnostics = {
      {"delta_x", dx},
      {"delta_k", dk},
      {"mean_k2", k2},
      {"rhs_weak", rhs_weak},
      {"margin_weak", r.lhs - rhs_weak},
      {"chain_gap", r.rhs - rhs_weak},
      {"delta_x_minus_sqrt_beta", dx - std::sqrt(beta.beta())},
      {"x_mass", mass},
  };
  if (std::abs(mass - 1.0) > 1e-6) {
    r.pass = false;
    r.status = "error:TailTruncation";
  }
  return r;
}

}  // namespace guplab
