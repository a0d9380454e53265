#include "mml/lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mml/mollifier.hpp"

namespace mml {

Command parse_command(const std::string& name) {
  if (name == "levinson") return Command::levinson;
  if (name == "jt-check") return Command::jt_check;
  if (name == "chain") return Command::chain;
  if (name == "meanvalue") return Command::meanvalue;
  if (name == "zeros") return Command::zeros;
  if (name == "gsupport") return Command::gsupport;
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::levinson: return "levinson";
    case Command::jt_check: return "jt-check";
    case Command::chain: return "chain";
    case Command::meanvalue: return "meanvalue";
    case Command::zeros: return "zeros";
    case Command::gsupport: return "gsupport";
  }
  return "?";
}

Window parse_window(const std::string& name) {
  if (name == "from_zero") return Window::from_zero;
  if (name == "dyadic") return Window::dyadic;
  throw ConfigError("unknown window '" + name + "' (from_zero|dyadic)");
}

std::string window_name(Window w) { return w == Window::from_zero ? "from_zero" : "dyadic"; }

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + name + "' (csv|json)");
}

void ExperimentConfig::validate() const {
  quadrature.validate();
  contour.validate();
  for (double th : theta_list) {
    if (!(th > 0.0 && th <= 1.0)) throw ConfigError("theta values must lie in (0, 1]");
  }
  for (double T : T_list) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T values must be positive");
  }
  for (double x : x_list) {
    if (!(x >= 2.0) || !std::isfinite(x)) throw ConfigError("x values must be >= 2");
  }
  for (double t : t_list) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t values must be >= 0");
  }
  for (double u : u_list) {
    if (!(u > 0.0) || !std::isfinite(u)) throw ConfigError("u values must be positive");
  }
  if (!(beta0 >= 0.5 && beta0 < 1.0)) throw ConfigError("beta0 must lie in [1/2, 1)");
  if (length_samples == 1) throw ConfigError("length_samples must be 0 or at least 2");
}

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(first), &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("cannot parse boolean '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::stringstream in(v);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

}  // namespace

ExperimentConfig load_config_file(const std::filesystem::path& file, ExperimentConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(file.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      const std::string full = section + "." + key;
      if (section == "lab") {
        if (key == "command") base.command = parse_command(v);
        else if (key == "theta_list") base.theta_list = parse_list(v);
        else if (key == "T_list") base.T_list = parse_list(v);
        else if (key == "x_list") base.x_list = parse_list(v);
        else if (key == "t_list") base.t_list = parse_list(v);
        else if (key == "u_list") base.u_list = parse_list(v);
        else if (key == "window") base.window = parse_window(v);
        else if (key == "format") base.format = parse_format(v);
        else if (key == "output") base.output = v;
        else if (key == "cache_dir") base.cache_dir = v;
        else if (key == "seed") base.seed = parse_number<std::uint64_t>(full, v);
        else if (key == "override_guardrail") base.override_guardrail = parse_bool(v);
        else if (key == "length_samples") base.length_samples = parse_number<std::size_t>(full, v);
        else if (key == "zero_count") base.zero_count = parse_number<std::size_t>(full, v);
        else if (key == "beta0") base.beta0 = parse_number<double>(full, v);
        else throw ConfigError("config file: unknown key " + full);
      } else if (section == "moments") {
        auto& q = base.quadrature;
        if (key == "nodes_per_period") q.nodes_per_period = parse_number<int>(full, v);
        else if (key == "panel_nodes") q.panel_nodes = parse_number<int>(full, v);
        else if (key == "rel_tol") q.rel_tol = parse_number<double>(full, v);
        else if (key == "max_panels") q.max_panels = parse_number<std::size_t>(full, v);
        else if (key == "workers") q.workers = parse_number<unsigned>(full, v);
        else throw ConfigError("config file: unknown key " + full);
      } else if (section == "kernels") {
        auto& c = base.contour;
        if (key == "sigma") c.sigma = parse_number<double>(full, v);
        else if (key == "height_Y") c.height_Y = parse_number<double>(full, v);
        else if (key == "spacing") c.spacing = parse_number<double>(full, v);
        else if (key == "tail_tol") c.tail_tol = parse_number<double>(full, v);
        else throw ConfigError("config file: unknown key " + full);
      } else {
        throw ConfigError("config file: unknown section [" + section + "]");
      }
    }
  }
  return base;
}

void check_guardrail(double T, double length, bool override_guardrail) {
  if (override_guardrail) return;
  if (T > kGuardrailHeight) {
    throw GuardrailError("height " + std::to_string(T) + " exceeds the 1e4 guardrail (use --override-guardrail)");
  }
  if (length > kGuardrailLength) {
    throw GuardrailError("mollifier length " + std::to_string(length) +
                         " exceeds the 1e6 guardrail (use --override-guardrail)");
  }
}

namespace {

std::vector<double> or_default(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

MobiusTable mobius_for(double length, const ExperimentConfig& cfg) {
  const auto limit = static_cast<std::size_t>(std::max(1.0, std::floor(length)));
  return mobius_table_cached(limit, cfg.cache_dir);
}

double rel_dev(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

ChainReport chain_report(double x, double T1, double T2, const MobiusTable& mobius, const QuadratureConfig& cfg) {
  ChainReport r;
  r.x = x;
  r.T1 = T1;
  r.T2 = T2;
  r.beta0 = 0.5;
  r.average = moment_length_average(x, mobius, T1, T2, cfg);
  const double log_x = std::log(x);
  r.lhs = std::pow(x, 2.0 * r.beta0) * std::log(T1 + 2.0) / std::pow(1.0 + T1, 3) + T2 * std::log(T2 + 2.0) / x;
  r.rhs = log_x * log_x * r.average.value;
  r.ratio = r.lhs / r.rhs;
  return r;
}

ResultTable run_levinson(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.window != Window::from_zero) throw DomainError("levinson: the table is defined for the from_zero window");
  const auto thetas = or_default(cfg.theta_list, {0.25, 0.4, 0.5});
  const auto Ts = or_default(cfg.T_list, {500.0, 2000.0, 8000.0});
  double longest = 1.0;
  for (double th : thetas) {
    for (double T : Ts) {
      check_guardrail(T, std::pow(T, th), cfg.override_guardrail);
      longest = std::max(longest, std::pow(T, th));
    }
  }
  const auto mobius = mobius_for(longest, cfg);

  ResultTable table;
  table.command = "levinson";
  table.columns = {"theta", "T", "x", "theta_eff", "I_over_T", "target", "rel_gap",
                   "err_estimate", "panels_used", "evaluations", "converged"};
  for (double th : thetas) {
    for (double T : Ts) {
      const double full = std::pow(T, th);
      std::vector<double> lengths;
      if (cfg.length_samples >= 2 && full > 2.0) {
        for (std::size_t k = 0; k + 1 < cfg.length_samples; ++k) {
          const double frac = static_cast<double>(k) / static_cast<double>(cfg.length_samples - 1);
          lengths.push_back(2.0 * std::pow(full / 2.0, frac));
        }
      }
      lengths.push_back(full);
      for (double x : lengths) {
        const auto spec = MollifierSpec::make(x, mobius);
        const MomentResult m = mollified_moment(spec, 0.0, T, cfg.quadrature);
        const double theta_eff = std::log(x) / std::log(T);
        const double target = 1.0 + 1.0 / theta_eff;
        const double ratio = m.value / T;
        table.rows.push_back({th, T, x, theta_eff, ratio, target, std::abs(ratio - target) / target,
                              m.err_estimate / T, as_int(m.panels_used), as_int(m.evaluations), m.converged});
      }
    }
  }
  return table;
}

ResultTable run_chain(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.beta0 != 0.5) {
    throw DomainError("chain: beta0 > 1/2 is a hypothesis and cannot be run against the real zeta function");
  }
  const auto xs = or_default(cfg.x_list, {10.0, 100.0, 1000.0});
  const auto Ts = or_default(cfg.T_list, {cfg.window == Window::from_zero ? 200.0 : 100.0});
  double longest = 2.0;
  for (double x : xs) {
    for (double T : Ts) {
      check_guardrail(cfg.window == Window::from_zero ? T : 2.0 * T, x, cfg.override_guardrail);
    }
    longest = std::max(longest, x);
  }
  const auto mobius = mobius_for(longest, cfg);

  ResultTable table;
  table.command = "chain";
  table.columns = {"x", "T1", "T2", "beta0", "lhs", "rhs", "ratio", "length_average", "err_estimate", "converged"};
  double max_ratio = 0.0;
  for (double x : xs) {
    for (double T : Ts) {
      const double T1 = cfg.window == Window::from_zero ? 0.0 : T;
      const double T2 = cfg.window == Window::from_zero ? T : 2.0 * T;
      const ChainReport r = chain_report(x, T1, T2, mobius, cfg.quadrature);
      max_ratio = std::max(max_ratio, r.ratio);
      table.rows.push_back({x, T1, T2, r.beta0, r.lhs, r.rhs, r.ratio, r.average.value, r.average.err_estimate,
                            r.average.converged});
    }
  }
  table.summary.push_back({"max_ratio", max_ratio});
  return table;
}

ResultTable run_jt_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto xs = or_default(cfg.x_list, {2.0, 10.0, 100.0});
  const auto ts = or_default(cfg.t_list, {0.0, 5.0, 50.0});
  double longest = 2.0;
  for (double x : xs) longest = std::max(longest, x);
  for (double t : ts) check_guardrail(t, longest, cfg.override_guardrail);
  const auto mobius = mobius_for(longest, cfg);

  ResultTable table;
  table.command = "jt-check";
  table.columns = {"x", "t", "rho0", "j_mellin", "j_convolution", "j_residue", "residue_term",
                   "dev_mellin_residue", "dev_convolution", "max_rel_dev", "err_mellin", "err_convolution",
                   "err_residue"};
  double worst = 0.0;
  double worst_mr = 0.0;
  double worst_conv = 0.0;
  for (double x : xs) {
    for (double t : ts) {
      const KernelContext ctx{t};
      const ContourValue m = J_via_mellin(x, ctx, cfg.contour);
      const ContourValue c = J_via_convolution(x, ctx, mobius, cfg.contour, cfg.quadrature);
      const ContourValue r = J_via_residue(x, ctx, cfg.contour);
      const double d_mr = rel_dev(m.value, r.value);
      const double d_conv = std::max(rel_dev(c.value, m.value), rel_dev(c.value, r.value));
      const double d = std::max(d_mr, d_conv);
      worst = std::max(worst, d);
      worst_mr = std::max(worst_mr, d_mr);
      worst_conv = std::max(worst_conv, d_conv);
      table.rows.push_back({x, t, ctx.rho0.rho(), m.value, c.value, r.value, residue_term(x, ctx), d_mr, d_conv, d,
                            m.err_estimate, c.err_estimate, r.err_estimate});
    }
  }
  table.summary.push_back({"max_rel_dev", worst});
  table.summary.push_back({"max_dev_mellin_residue", worst_mr});
  table.summary.push_back({"max_dev_convolution", worst_conv});
  return table;
}

ResultTable run_meanvalue(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto Ts = or_default(cfg.T_list, {500.0, 1000.0, 2000.0});
  for (double T : Ts) check_guardrail(cfg.window == Window::from_zero ? T : 2.0 * T, 1.0, cfg.override_guardrail);
  ResultTable table;
  table.command = "meanvalue";
  table.columns = {"T1", "T2", "integral", "T_log", "ratio", "main_term", "rel_to_main", "err_estimate",
                   "converged"};
  for (double T : Ts) {
    const double T1 = cfg.window == Window::from_zero ? 0.0 : T;
    const double T2 = cfg.window == Window::from_zero ? T : 2.0 * T;
    const MomentResult m = second_moment_zeta(T1, T2, cfg.quadrature);
    const double t_log = T2 * std::log(T2 + 2.0);
    const double main = second_moment_main_term(T2) - (T1 > 0.0 ? second_moment_main_term(T1) : 0.0);
    table.rows.push_back({T1, T2, m.value, t_log, m.value / t_log, main, std::abs(m.value - main) / main,
                          m.err_estimate, m.converged});
  }
  return table;
}

ResultTable run_zeros(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.command = "zeros";
  table.columns = {"index", "gamma", "abs_z"};
  const auto zeros = critical_line_zeros(cfg.zero_count);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    table.rows.push_back({as_int(i + 1), zeros[i], std::abs(hardy_z(zeros[i]))});
  }
  if (!cfg.cache_dir.empty() && !zeros.empty()) {
    std::filesystem::create_directories(cfg.cache_dir);
    std::ofstream grid(cfg.cache_dir / "zeta_grid.csv", std::ios::trunc);
    if (!grid) throw Error("zeros: cannot write the zeta-grid cache");
    ResultTable cache;
    cache.command = "zeta-grid";
    cache.columns = {"t", "re", "im", "method", "err"};
    const auto steps = static_cast<std::size_t>(std::ceil(zeros.back() / 0.05));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = 0.05 * static_cast<double>(k);
      const ZetaResult z = zeta_em(Complex(0.5, t));
      cache.rows.push_back({t, z.value.real(), z.value.imag(), std::string("euler_maclaurin"), z.err_estimate});
    }
    write_csv(grid, cache);
  }
  return table;
}

ResultTable run_gsupport(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ts = or_default(cfg.t_list, {0.0, 10.0, 50.0});
  const auto us = or_default(cfg.u_list, {0.1, 0.5, 0.9, 1.05, 1.1, 2.0, 10.0});
  for (double t : ts) check_guardrail(t, 1.0, cfg.override_guardrail);
  const double u_min = std::min(1.0, *std::min_element(us.begin(), us.end()));
  ResultTable table;
  table.command = "gsupport";
  table.columns = {"u", "t", "abs_g", "err_estimate", "bound", "height"};
  for (double t : ts) {
    const GKernel kernel(KernelContext{t}, cfg.contour, u_min, cfg.quadrature.workers);
    for (double u : us) {
      const ContourValue g = kernel(u);
      table.rows.push_back({u, t, std::abs(g.value), g.err_estimate, kernel.bound(), g.height});
    }
  }
  return table;
}

ResultTable run(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::levinson: return run_levinson(cfg);
    case Command::jt_check: return run_jt_check(cfg);
    case Command::chain: return run_chain(cfg);
    case Command::meanvalue: return run_meanvalue(cfg);
    case Command::zeros: return run_zeros(cfg);
    case Command::gsupport: return run_gsupport(cfg);
  }
  throw ConfigError("unknown command");
}

}  // namespace mml
