#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "mml/lab.hpp"

namespace mml {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return fmt15(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(Complex v) const { return fmt15(v.real()) + "," + fmt15(v.imag()); }
  };
  return std::visit(Visitor{}, cell);
}

Json json_cell(const Cell& cell) {
  struct Visitor {
    Json operator()(double v) const { return v; }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
    Json operator()(bool v) const { return v; }
    Json operator()(Complex v) const { return Json{{"re", v.real()}, {"im", v.imag()}}; }
  };
  return std::visit(Visitor{}, cell);
}

Json list_json(const std::vector<double>& v) { return Json(v); }

}  // namespace

void write_csv(std::ostream& out, const ResultTable& table) {
  out << "# mml-schema 1\n";
  for (const auto& [key, value] : table.summary) out << "# " << key << " = " << csv_cell(value) << '\n';
  // Complex columns are detected from the first row.
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    const bool complex_col = !table.rows.empty() && std::holds_alternative<Complex>(table.rows.front()[c]);
    if (complex_col) {
      out << table.columns[c] << "_re," << table.columns[c] << "_im";
    } else {
      out << table.columns[c];
    }
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_cell(row[c]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const ResultTable& table, const ExperimentConfig& cfg) {
  Json doc;
  doc["schema"] = 1;
  doc["version"] = kVersion;
  doc["command"] = table.command;
  Json config;
  config["theta_list"] = list_json(cfg.theta_list);
  config["T_list"] = list_json(cfg.T_list);
  config["x_list"] = list_json(cfg.x_list);
  config["t_list"] = list_json(cfg.t_list);
  config["u_list"] = list_json(cfg.u_list);
  config["window"] = window_name(cfg.window);
  config["seed"] = cfg.seed;
  config["override_guardrail"] = cfg.override_guardrail;
  config["length_samples"] = cfg.length_samples;
  config["zero_count"] = cfg.zero_count;
  config["beta0"] = cfg.beta0;
  config["quadrature"] = Json{{"nodes_per_period", cfg.quadrature.nodes_per_period},
                              {"panel_nodes", cfg.quadrature.panel_nodes},
                              {"rel_tol", cfg.quadrature.rel_tol},
                              {"max_panels", cfg.quadrature.max_panels}};
  config["contour"] = Json{{"sigma", cfg.contour.sigma},
                           {"height_Y", cfg.contour.height_Y},
                           {"spacing", cfg.contour.spacing},
                           {"tail_tol", cfg.contour.tail_tol}};
  doc["config"] = std::move(config);
  Json summary = Json::object();
  for (const auto& [key, value] : table.summary) summary[key] = json_cell(value);
  doc["summary"] = std::move(summary);
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r;
    for (std::size_t c = 0; c < row.size(); ++c) r[table.columns[c]] = json_cell(row[c]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void emit(const ResultTable& table, const ExperimentConfig& cfg) {
  auto write = [&](std::ostream& out) {
    if (cfg.format == OutputFormat::json) {
      write_json(out, table, cfg);
    } else {
      write_csv(out, table);
    }
  };
  if (cfg.output.empty()) {
    write(std::cout);
    return;
  }
  if (cfg.output.has_parent_path()) std::filesystem::create_directories(cfg.output.parent_path());
  std::ofstream out(cfg.output, std::ios::trunc);
  if (!out) throw Error("cannot open output file " + cfg.output.string());
  write(out);
  if (!out) throw Error("write failed for " + cfg.output.string());
}

}  // namespace mml
