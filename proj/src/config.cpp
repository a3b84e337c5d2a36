#include "guplab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace guplab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(ErrorKind::ConfigError, field + ": " + what);
}

double number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_order_value(j.get<std::string>());
    } catch (const Error&) {
      bad(field, "'" + j.get<std::string>() + "' is not a number");
    }
  }
  bad(field, "expected a number");
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  const std::string field = path + key;
  if constexpr (std::is_same_v<T, double>) {
    out = number(v, field);
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad(field, "expected a string");
    out = v.get<std::string>();
  } else {
    if (!v.is_number_integer() || v.get<long long>() < 0) bad(field, "expected a non-negative integer");
    out = static_cast<T>(v.get<unsigned long long>());
  }
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) bad(field, std::to_string(v) + " must be positive");
}

const json& array_at(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) bad(key, "expected an array");
  return v;
}

std::pair<double, double> pair_of(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) bad(field, "expected a two-element array");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

GaussianPart gaussian_part(const json& j, const std::string& path) {
  GaussianPart p;
  read(j, "weight", path, p.weight);
  read(j, "center_q", path, p.center_q);
  read(j, "center_x", path, p.center_x);
  read(j, "width_q", path, p.width_q);
  return p;
}

StateSpec state_of(const json& j, const std::string& path, std::uint64_t seed) {
  if (!j.is_object()) bad(path, "expected an object");
  StateSpec s;
  std::string kind = "gaussian";
  read(j, "kind", path + ".", kind);
  try {
    s.kind = parse_state_kind(kind);
  } catch (const Error&) {
    bad(path + ".kind", "unknown state kind '" + kind + "'");
  }
  s.name = kind;
  read(j, "name", path + ".", s.name);
  const std::string p = path + ".";
  switch (s.kind) {
    case StateKind::gaussian:
      s.gaussian = gaussian_part(j, p);
      break;
    case StateKind::superposition:
      s.superposition.seed = seed;
      read(j, "components", p, s.superposition.components);
      read(j, "width_q", p, s.superposition.width_q);
      read(j, "spread_q", p, s.superposition.spread_q);
      read(j, "spread_x", p, s.superposition.spread_x);
      read(j, "seed", p, s.superposition.seed);
      break;
    case StateKind::mixture: {
      if (!j.contains("parts")) bad(p + "parts", "mixture needs parts");
      const auto& parts = array_at(j, "parts");
      for (std::size_t i = 0; i < parts.size(); ++i) {
        s.parts.push_back(gaussian_part(parts[i], p + "parts[" + std::to_string(i) + "]."));
      }
      break;
    }
    case StateKind::uniform:
      read(j, "taper_nodes", p, s.taper_nodes);
      break;
  }
  return s;
}

}  // namespace

double parse_order_value(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      const std::string a = text.substr(0, slash);
      const std::string b = text.substr(slash + 1);
      std::size_t ua = 0;
      std::size_t ub = 0;
      const double num = std::stod(a, &ua);
      const double den = std::stod(b, &ub);
      if (ua == a.size() && ub == b.size()) return num / den;
    }
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ConfigError, "'" + text + "' is not a number");
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  StateSpec g;
  g.name = "gaussian";
  StateSpec sp;
  sp.name = "superposition";
  sp.kind = StateKind::superposition;
  sp.superposition.seed = c.seed;
  StateSpec mix;
  mix.name = "mixture";
  mix.kind = StateKind::mixture;
  mix.parts = {{0.6, 0.3, -1.0, 0.5}, {0.4, -0.3, 1.0, 0.5}};
  c.states = {g, sp, mix};
  c.orders = {{1.0, 1.0}, {2.0, 2.0 / 3.0}, {2.0 / 3.0, 2.0}, {1.5, 0.75}};
  c.bin_sweep = {{0.25, 0.5}, {0.125, 0.25}, {0.0625, 0.125}};
  return c;
}

PipelineSettings RunConfig::settings() const {
  PipelineSettings s;
  s.grid_n = grid_n;
  s.outcome_step = outcome_step;
  s.dx_fraction = dx_fraction;
  s.leakage_cap = leakage_cap;
  s.bin_zeta = bin_zeta;
  s.bin_xi = bin_xi;
  return s;
}

SuiteSpec RunConfig::suite() const {
  SuiteSpec s;
  s.states = states;
  s.betas = betas;
  for (const auto& [f, g] : widths) s.profiles.push_back({profile_kind, f, g});
  s.orders = orders;
  s.settings = settings();
  s.tol = tol;
  return s;
}

void validate(const RunConfig& c) {
  for (std::size_t i = 0; i < c.betas.size(); ++i) {
    const double b = c.betas[i];
    if (!(b >= 0.0) || !std::isfinite(b)) {
      bad("betas[" + std::to_string(i) + "]", std::to_string(b) + " must be >= 0");
    }
  }
  for (std::size_t i = 0; i < c.widths.size(); ++i) {
    require_positive(c.widths[i].first, "profiles.widths[" + std::to_string(i) + "][0]");
    require_positive(c.widths[i].second, "profiles.widths[" + std::to_string(i) + "][1]");
  }
  for (std::size_t i = 0; i < c.orders.size(); ++i) {
    try {
      EntropyOrder::conjugate(c.orders[i].alpha, c.orders[i].gamma);
    } catch (const Error& e) {
      bad("orders[" + std::to_string(i) + "]", e.what());
    }
  }
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    const auto& s = c.states[i];
    const std::string p = "states[" + std::to_string(i) + "].";
    if (s.kind == StateKind::gaussian) require_positive(s.gaussian.width_q, p + "width_q");
    if (s.kind == StateKind::superposition) {
      require_positive(s.superposition.width_q, p + "width_q");
      if (s.superposition.components == 0) bad(p + "components", "must be at least 1");
    }
    for (std::size_t k = 0; k < s.parts.size(); ++k) {
      const std::string pp = p + "parts[" + std::to_string(k) + "].";
      require_positive(s.parts[k].width_q, pp + "width_q");
      require_positive(s.parts[k].weight, pp + "weight");
    }
  }
  require_positive(c.bin_zeta, "bins.zeta");
  require_positive(c.bin_xi, "bins.xi");
  for (std::size_t i = 0; i < c.bin_sweep.size(); ++i) {
    require_positive(c.bin_sweep[i].first, "sweep.bin_widths[" + std::to_string(i) + "][0]");
    require_positive(c.bin_sweep[i].second, "sweep.bin_widths[" + std::to_string(i) + "][1]");
  }
  if (c.grid_n < 64) bad("grid.n", std::to_string(c.grid_n) + " must be at least 64");
  require_positive(c.outcome_step, "grid.outcome_step");
  require_positive(c.dx_fraction, "grid.dx_fraction");
  if (!(c.leakage_cap > 0.0 && c.leakage_cap < 1.0)) bad("grid.leakage_cap", "must lie in (0, 1)");
  require_positive(c.tol, "tolerance");
  if (c.output.dir.empty()) bad("output.dir", "must not be empty");
}

RunConfig config_from(const nlohmann::json& root);

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("malformed config: ") + e.what());
  }
  try {
    return config_from(root);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("malformed config: ") + e.what());
  }
}

RunConfig config_from(const nlohmann::json& root) {
  if (!root.is_object()) bad("config", "expected a top-level object");
  if (!root.contains("schema") || !root.at("schema").is_number_integer()) bad("schema", "missing schema version");
  if (root.at("schema").get<int>() != kConfigSchema) {
    bad("schema", "unsupported version " + root.at("schema").dump() + " (expected " +
                      std::to_string(kConfigSchema) + ")");
  }

  RunConfig c = RunConfig::defaults();
  read(root, "seed", "", c.seed);
  read(root, "tolerance", "", c.tol);
  if (root.contains("betas")) {
    c.betas.clear();
    const auto& a = array_at(root, "betas");
    for (std::size_t i = 0; i < a.size(); ++i) c.betas.push_back(number(a[i], "betas[" + std::to_string(i) + "]"));
  }
  if (root.contains("states")) {
    c.states.clear();
    const auto& a = array_at(root, "states");
    for (std::size_t i = 0; i < a.size(); ++i) c.states.push_back(state_of(a[i], "states[" + std::to_string(i) + "]", c.seed));
  } else {
    for (auto& s : c.states) s.superposition.seed = c.seed;
  }
  if (root.contains("profiles")) {
    const auto& p = root.at("profiles");
    if (!p.is_object()) bad("profiles", "expected an object");
    std::string kind = to_string(c.profile_kind);
    read(p, "kind", "profiles.", kind);
    try {
      c.profile_kind = parse_profile_kind(kind);
    } catch (const Error&) {
      bad("profiles.kind", "unknown profile kind '" + kind + "'");
    }
    if (p.contains("widths")) {
      c.widths.clear();
      const auto& a = array_at(p, "widths");
      for (std::size_t i = 0; i < a.size(); ++i) c.widths.push_back(pair_of(a[i], "profiles.widths[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("orders")) {
    c.orders.clear();
    const auto& a = array_at(root, "orders");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto [al, ga] = pair_of(a[i], "orders[" + std::to_string(i) + "]");
      c.orders.push_back({al, ga});
    }
  }
  if (root.contains("bins")) {
    const auto& b = root.at("bins");
    read(b, "zeta", "bins.", c.bin_zeta);
    read(b, "xi", "bins.", c.bin_xi);
  }
  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    read(g, "n", "grid.", c.grid_n);
    read(g, "outcome_step", "grid.", c.outcome_step);
    read(g, "dx_fraction", "grid.", c.dx_fraction);
    read(g, "leakage_cap", "grid.", c.leakage_cap);
  }
  if (root.contains("sweep")) {
    const auto& s = root.at("sweep");
    if (s.contains("bin_widths")) {
      c.bin_sweep.clear();
      const auto& a = array_at(s, "bin_widths");
      for (std::size_t i = 0; i < a.size(); ++i) c.bin_sweep.push_back(pair_of(a[i], "sweep.bin_widths[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("output")) {
    const auto& o = root.at("output");
    read(o, "dir", "output.", c.output.dir);
    read(o, "report", "output.", c.output.report);
    read(o, "table", "output.", c.output.table);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace guplab
