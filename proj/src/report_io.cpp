#include "guplab/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace guplab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string reports_to_json(const std::vector<RelationReport>& reports) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json o;
    o["id"] = to_string(r.id);
    o["order"] = to_string(r.order);
    o["alpha"] = r.alpha;
    o["gamma"] = r.gamma;
    o["beta"] = r.beta;
    o["lhs"] = r.lhs;
    o["rhs"] = r.rhs;
    o["margin"] = r.margin;
    o["pass"] = r.pass;
    o["tol"] = r.tol;
    o["status"] = r.status;
    ordered_json labels = ordered_json::object();
    for (const auto& [k, v] : r.labels) labels[k] = v;
    o["labels"] = labels;
    ordered_json diag = ordered_json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = v;
    o["diagnostics"] = diag;
    doc.push_back(std::move(o));
  }
  return doc.dump(1) + "\n";
}

std::string reports_to_table(const std::vector<RelationReport>& reports) {
  std::vector<std::string> label_keys;
  std::vector<std::string> diag_keys;
  for (const auto& r : reports) {
    for (const auto& kv : r.labels) {
      if (std::find(label_keys.begin(), label_keys.end(), kv.first) == label_keys.end()) label_keys.push_back(kv.first);
    }
    for (const auto& kv : r.diagnostics) {
      if (std::find(diag_keys.begin(), diag_keys.end(), kv.first) == diag_keys.end()) diag_keys.push_back(kv.first);
    }
  }
  std::string out = "id\torder\talpha\tgamma\tbeta\tlhs\trhs\tmargin\tpass\ttol\tstatus";
  for (const auto& k : label_keys) out += "\t" + k;
  for (const auto& k : diag_keys) out += "\t" + k;
  out += "\n";
  for (const auto& r : reports) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", to_string(r.id), to_string(r.order),
                       format_number(r.alpha), format_number(r.gamma), format_number(r.beta),
                       format_number(r.lhs), format_number(r.rhs), format_number(r.margin),
                       r.pass ? "true" : "false", format_number(r.tol), r.status);
    for (const auto& k : label_keys) {
      auto it = std::find_if(r.labels.begin(), r.labels.end(), [&](const auto& kv) { return kv.first == k; });
      out += "\t" + (it == r.labels.end() ? std::string() : it->second);
    }
    for (const auto& k : diag_keys) {
      auto it = std::find_if(r.diagnostics.begin(), r.diagnostics.end(), [&](const auto& kv) { return kv.first == k; });
      out += "\t" + (it == r.diagnostics.end() ? std::string() : format_number(it->second));
    }
    out += "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) {
    fs::create_directories(p.parent_path(), ec);
    if (ec) fail(ErrorKind::IoError, "cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

}  // namespace guplab
