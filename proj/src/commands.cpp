#include "guplab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "guplab/parallel.hpp"
#include "guplab/report_io.hpp"

namespace guplab {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError: return kExitConfigError;
    case ErrorKind::IoError: return kExitIoError;
    default: return kExitRelationFailure;
  }
}

struct Summary {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double min_margin = std::numeric_limits<double>::infinity();
};

Summary summarize(const std::vector<RelationReport>& reports) {
  Summary s;
  for (const auto& r : reports) {
    ++s.checked;
    if (!r.pass) ++s.failures;
    if (r.status.rfind("error:", 0) == 0) ++s.errors;
    if (std::isfinite(r.margin)) s.min_margin = std::min(s.min_margin, r.margin);
  }
  return s;
}

void print_summary(std::ostream& out, const Summary& s) {
  out << fmt::format("relations checked: {}\nmin margin: {}\nfailures: {} ({} errors)\n", s.checked,
                     s.checked ? format_number(s.min_margin) : std::string("nan"), s.failures, s.errors);
}

std::string slug(double v) { return fmt::format("{:g}", v); }

std::string cell_name(const StateSpec& s, double beta) { return s.name + "_b" + slug(beta); }

std::string label(const RelationReport& r, const std::string& key) {
  for (const auto& [k, v] : r.labels) {
    if (k == key) return v;
  }
  return {};
}

std::string diag_or_blank(const RelationReport& r, const std::string& key) {
  for (const auto& [k, v] : r.diagnostics) {
    if (k == key) return format_number(v);
  }
  return {};
}

std::string two_columns(const char* a, const char* b, const Grid& g, std::span<const double> v) {
  std::string text = fmt::format("# {}\t{}\n", a, b);
  for (std::size_t i = 0; i < v.size(); ++i) text += format_number(g.node(i)) + "\t" + format_number(v[i]) + "\n";
  return text;
}

void dump_states(const RunConfig& c, const std::string& dir, std::vector<std::string>& written) {
  for (const auto& spec : c.states) {
    for (double beta : c.betas) {
      const MixedState rho = build_state(spec, DeformationParameter(beta), c.grid_n);
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const auto& comp = rho.components()[i];
        const Grid& g = comp.state.qgrid();
        const auto amps = comp.state.amplitudes();
        std::string text = fmt::format("# weight {}\n# q\tre\tim\n", format_number(comp.weight));
        for (std::size_t k = 0; k < amps.size(); ++k) {
          text += format_number(g.node(k)) + "\t" + format_number(amps[k].real()) + "\t" +
                  format_number(amps[k].imag()) + "\n";
        }
        const std::string path = join(dir, "state_" + cell_name(spec, beta) + "_c" + std::to_string(i) + ".txt");
        write_text(path, text);
        written.push_back(path);
      }
    }
  }
}

void dump_densities(const RunConfig& c, const std::string& dir, std::vector<std::string>& written) {
  PipelineSettings settings = c.settings();
  settings.prep_only = true;
  for (const auto& spec : c.states) {
    for (double beta : c.betas) {
      const DeformationParameter dp(beta);
      const MixedState rho = build_state(spec, dp, c.grid_n);
      const Grid& qg = rho.qgrid();
      const Density v{Axis::q, qg, rho.q_density()};
      const double k_max = dp.deformed() ? dp.k_of_q(0.95 * qg.hi()) : qg.hi();
      const Density u = q_to_k_density(v, dp, Grid(-k_max, k_max, 4001), 0.0);
      const std::string base = join(dir, "density_" + cell_name(spec, beta));
      write_text(base + "_u.txt", two_columns("k", "u", u.grid, u.values));
      written.push_back(base + "_u.txt");

      for (std::size_t p = 0; p < c.widths.size(); ++p) {
        const std::string pb = base + "_p" + std::to_string(p);
        std::optional<Pipeline> built;
        try {
          built.emplace(rho, ProfilePair{c.profile_kind, c.widths[p].first, c.widths[p].second}, settings, spec.name);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::IoError) throw;
          write_text(pb + "_error.txt", std::string("# error ") + e.what() + "\n");
          written.push_back(pb + "_error.txt");
          continue;
        }
        const Pipeline& cell = *built;
        if (p == 0) {
          const auto w = x_density(rho, cell.lattice());
          const Grid& xg = cell.lattice().xgrid();
          const auto [a, b] = quantile_window(xg, w, 1e-12);
          std::string text = "# x\tw\n";
          for (std::size_t m = a; m <= b; ++m) text += format_number(xg.node(m)) + "\t" + format_number(w[m]) + "\n";
          write_text(base + "_w.txt", text);
          written.push_back(base + "_w.txt");
        }
        const auto& d = cell.rho_densities();
        write_text(pb + "_U.txt", two_columns("zeta", "U", d.U.grid, d.U.values));
        write_text(pb + "_W.txt", two_columns("xi", "W", d.W.grid, d.W.values));
        written.push_back(pb + "_U.txt");
        written.push_back(pb + "_W.txt");
      }
    }
  }
}

void dump_ensembles(const RunConfig& c, const std::string& dir, std::vector<std::string>& written) {
  for (const auto& spec : c.states) {
    for (double beta : c.betas) {
      for (std::size_t p = 0; p < c.widths.size(); ++p) {
        const std::string base = join(dir, "ensemble_" + cell_name(spec, beta) + "_p" + std::to_string(p));
        std::optional<Pipeline> built;
        try {
          built.emplace(spec, beta, ProfilePair{c.profile_kind, c.widths[p].first, c.widths[p].second}, c.settings());
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::IoError) throw;
          write_text(base + "_error.txt", std::string("# error ") + e.what() + "\n");
          written.push_back(base + "_error.txt");
          continue;
        }
        const Pipeline& cell = *built;
        std::string mp;
        if (cell.momentum_first_error()) {
          mp = std::string("# error ") + cell.momentum_first_error()->what() + "\n";
        } else {
          mp = fmt::format("# raw weight sum {}\n# zeta\tweight\tcorrection\n",
                           format_number(cell.identity_sum_momentum()));
          for (std::size_t j = 0; j < cell.sigma_weights().size(); ++j) {
            mp += format_number(cell.sigma_outcomes()[j]) + "\t" + format_number(cell.sigma_weights()[j]) + "\t" +
                  format_number(cell.sigma()[j].correction) + "\n";
          }
        }
        write_text(base + "_momentum_first.txt", mp);
        written.push_back(base + "_momentum_first.txt");

        std::string pm;
        if (cell.position_first_error()) {
          pm = std::string("# error ") + cell.position_first_error()->what() + "\n";
        } else {
          pm = fmt::format("# raw weight sum {}\n# xi\tweight\tleakage\tcorrection\n",
                           format_number(cell.identity_sum_position()));
          for (std::size_t j = 0; j < cell.tau_weights().size(); ++j) {
            pm += format_number(cell.tau_outcomes()[j]) + "\t" + format_number(cell.tau_weights()[j]) + "\t" +
                  format_number(cell.tau_leakage()[j]) + "\t" + format_number(cell.tau()[j].correction) + "\n";
          }
        }
        write_text(base + "_position_first.txt", pm);
        written.push_back(base + "_position_first.txt");
      }
    }
  }
}

}  // namespace

RunConfig resolve_config(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig::defaults() : load_config(o.config_path);
  if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') c.output.dir = env;
  if (!o.out_dir.empty()) c.output.dir = o.out_dir;
  if (o.tol != 0.0) c.tol = o.tol;
  validate(c);
  return c;
}

SuiteSpec resolve_suite(const RunConfig& config, const Overrides& o) {
  SuiteSpec s = config.suite();
  for (const auto& name : o.relations) s.relations.push_back(parse_relation_id(name));
  if (o.order != "all") s.measurement_orders = {parse_order(o.order)};
  return s;
}

int cmd_check(const Overrides& o, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = resolve_config(o);
    const SuiteSpec spec = resolve_suite(c, o);
    set_thread_count(o.threads);
    const auto reports = run_suite(spec);
    write_text(join(c.output.dir, c.output.report), reports_to_json(reports));
    write_text(join(c.output.dir, c.output.table), reports_to_table(reports));
    const Summary s = summarize(reports);
    print_summary(out, s);
    return s.failures == 0 ? kExitOk : kExitRelationFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_sweep(const Overrides& o, const std::string& axis, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = resolve_config(o);
    SuiteSpec spec = resolve_suite(c, o);
    set_thread_count(o.threads);

    struct Row {
      double value;
      RelationReport report;
      double bin_zeta;
      double bin_xi;
    };
    std::vector<Row> rows;
    auto count_check = [&](std::size_t n, const char* field) {
      if (n < 2) fail(ErrorKind::ConfigError, std::string(field) + ": sweep axis needs at least two values");
    };
    if (axis == "beta") {
      count_check(c.betas.size(), "betas");
      for (auto& r : run_suite(spec)) rows.push_back({r.beta, std::move(r), c.bin_zeta, c.bin_xi});
    } else if (axis == "profile_width") {
      count_check(c.widths.size(), "profiles.widths");
      for (auto& r : run_suite(spec)) {
        const double v = std::stod(label(r, "f_width"));
        rows.push_back({v, std::move(r), c.bin_zeta, c.bin_xi});
      }
    } else if (axis == "bin_width") {
      count_check(c.bin_sweep.size(), "sweep.bin_widths");
      for (const auto& [bz, bx] : c.bin_sweep) {
        spec.settings.bin_zeta = bz;
        spec.settings.bin_xi = bx;
        for (auto& r : run_suite(spec)) rows.push_back({bz, std::move(r), bz, bx});
      }
    } else {
      fail(ErrorKind::ConfigError, "axis: unknown sweep axis '" + axis + "'");
    }

    std::string text =
        "axis\tvalue\tstate\tprofile\tf_width\tg_width\tid\torder\talpha\tgamma\tbeta\tbin_zeta\tbin_xi\t"
        "lhs\trhs\tmargin\tpass\tstatus\ts_f\trhs_continuum\tcorr_rho\tcorr_post\n";
    std::vector<RelationReport> reports;
    for (const auto& row : rows) {
      const auto& r = row.report;
      text += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", axis,
                          format_number(row.value), label(r, "state"), label(r, "profile"), label(r, "f_width"),
                          label(r, "g_width"), to_string(r.id), to_string(r.order), format_number(r.alpha),
                          format_number(r.gamma), format_number(r.beta), format_number(row.bin_zeta),
                          format_number(row.bin_xi), format_number(r.lhs), format_number(r.rhs),
                          format_number(r.margin), r.pass ? "true" : "false", r.status, diag_or_blank(r, "s_f"),
                          diag_or_blank(r, "rhs_continuum"), diag_or_blank(r, "corr_rho"),
                          diag_or_blank(r, "corr_post"));
      reports.push_back(r);
    }
    write_text(join(c.output.dir, "sweep_" + axis + ".tsv"), text);
    const Summary s = summarize(reports);
    print_summary(out, s);
    return s.failures == 0 ? kExitOk : kExitRelationFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e);
  }
}

int cmd_dump(const Overrides& o, const std::string& what, std::ostream& out, std::ostream& err) {
  try {
    if (what != "densities" && what != "states" && what != "ensembles") {
      fail(ErrorKind::ConfigError, "what: unknown dump target '" + what + "'");
    }
    const RunConfig c = resolve_config(o);
    set_thread_count(o.threads);
    const std::string dir = join(c.output.dir, "dump");
    std::vector<std::string> written;
    if (what == "states") dump_states(c, dir, written);
    if (what == "densities") dump_densities(c, dir, written);
    if (what == "ensembles") dump_ensembles(c, dir, written);
    out << "files written: " << written.size() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e);
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropic uncertainty relations with a minimal length"};
  app.require_subcommand(1);

  Overrides o;
  std::string relations;
  std::string axis;
  std::string what;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--relations", relations, "Comma-separated relation ids");
    sub->add_option("--order", o.order, "momentum_first|position_first|preparation|all")
        ->check(CLI::IsMember({"momentum_first", "position_first", "preparation", "all"}));
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--tol", o.tol, "Pass tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };
  auto* check = app.add_subcommand("check", "Run the relation suite and write reports");
  common(check);
  auto* sweep = app.add_subcommand("sweep", "Tabulate lhs, rhs and margin along one axis");
  common(sweep);
  sweep->add_option("--axis", axis, "beta|profile_width|bin_width")->required();
  auto* dump = app.add_subcommand("dump", "Write states, densities or ensembles as text columns");
  common(dump);
  dump->add_option("--what", what, "densities|states|ensembles")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::stringstream ss(relations);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) o.relations.push_back(item);
  }
  if (*check) return cmd_check(o, out, err);
  if (*sweep) return cmd_sweep(o, axis, out, err);
  return cmd_dump(o, what, out, err);
}

}  // namespace guplab
