#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mml/lab.hpp"

namespace {

std::vector<double> split_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw mml::ConfigError("cannot parse number '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mollified-moment and contour-kernel laboratory"};
  app.set_version_flag("--version", std::string(mml::kVersion));

  std::string command;
  std::string config_file;
  std::string theta, t_list, x_list, u_list, window, out, format, cache_dir;
  double tmax = 0.0;
  double spacing = 0.0;
  double height = 0.0;
  double rel_tol = 0.0;
  double beta0 = 0.0;
  long long k = -1;
  long long workers = -1;
  long long length_samples = -1;
  long long seed = -1;
  bool override_guardrail = false;

  app.add_option("command", command, "levinson | jt-check | chain | meanvalue | zeros | gsupport")->required();
  app.add_option("--config", config_file, "key = value file with [lab], [moments], [kernels] sections");
  app.add_option("--theta", theta, "comma-separated theta list (levinson)");
  app.add_option("--tmax", tmax, "largest height: levinson T in {N/16, N/4, N}, meanvalue {N/4, N/2, N}, chain {N}");
  app.add_option("--window", window, "from_zero | dyadic");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv | json");
  app.add_option("--cache-dir", cache_dir, "directory for the Mobius sieve and zeta-grid caches");
  app.add_flag("--override-guardrail", override_guardrail, "allow T > 1e4 or mollifier length > 1e6");
  app.add_option("--t-list", t_list, "comma-separated t values (jt-check, gsupport)");
  app.add_option("--x-list", x_list, "comma-separated x values (jt-check, chain)");
  app.add_option("--u-list", u_list, "comma-separated u values (gsupport)");
  app.add_option("--k", k, "number of zeros (zeros)");
  app.add_option("--spacing", spacing, "contour node spacing");
  app.add_option("--height", height, "contour truncation height (0 = automatic)");
  app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--length-samples", length_samples, "levinson: extra lengths on a geometric grid in [2, T^theta]");
  app.add_option("--beta0", beta0, "real part of rho0 (chain refuses values above 1/2)");
  app.add_option("--seed", seed, "seed recorded with the run");

  CLI11_PARSE(app, argc, argv);

  try {
    mml::ExperimentConfig cfg;
    if (!config_file.empty()) cfg = mml::load_config_file(config_file, cfg);
    cfg.command = mml::parse_command(command);
    if (!theta.empty()) cfg.theta_list = split_list(theta);
    if (tmax > 0.0) {
      switch (cfg.command) {
        case mml::Command::levinson: cfg.T_list = {tmax / 16.0, tmax / 4.0, tmax}; break;
        case mml::Command::meanvalue: cfg.T_list = {tmax / 4.0, tmax / 2.0, tmax}; break;
        case mml::Command::chain: cfg.T_list = {tmax}; break;
        default: throw mml::ConfigError("--tmax applies to levinson, meanvalue and chain");
      }
    }
    if (!window.empty()) cfg.window = mml::parse_window(window);
    if (!out.empty()) cfg.output = out;
    if (!format.empty()) cfg.format = mml::parse_format(format);
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (override_guardrail) cfg.override_guardrail = true;
    if (!t_list.empty()) cfg.t_list = split_list(t_list);
    if (!x_list.empty()) cfg.x_list = split_list(x_list);
    if (!u_list.empty()) cfg.u_list = split_list(u_list);
    if (k >= 0) cfg.zero_count = static_cast<std::size_t>(k);
    if (spacing > 0.0) cfg.contour.spacing = spacing;
    if (height > 0.0) cfg.contour.height_Y = height;
    if (rel_tol > 0.0) cfg.quadrature.rel_tol = rel_tol;
    if (workers >= 0) cfg.quadrature.workers = static_cast<unsigned>(workers);
    if (length_samples >= 0) cfg.length_samples = static_cast<std::size_t>(length_samples);
    if (beta0 > 0.0) cfg.beta0 = beta0;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    mml::emit(mml::run(cfg), cfg);
  } catch (const mml::GuardrailError& e) {
    std::cerr << "mml: refused: " << e.what() << '\n';
    return 3;
  } catch (const mml::Error& e) {
    std::cerr << "mml: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mml: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
