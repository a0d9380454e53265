#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "mml/arith.hpp"
#include "mml/kernels.hpp"
#include "mml/moments.hpp"

namespace mml {

enum class Command { levinson, jt_check, chain, meanvalue, zeros, gsupport };
enum class Window { from_zero, dyadic };
enum class OutputFormat { csv, json };

Command parse_command(const std::string& name);
std::string command_name(Command c);
Window parse_window(const std::string& name);
std::string window_name(Window w);
OutputFormat parse_format(const std::string& name);

inline constexpr double kGuardrailHeight = 1e4;
inline constexpr double kGuardrailLength = 1e6;

struct ExperimentConfig {
  Command command = Command::levinson;
  // Empty lists take the per-command defaults (see README).
  std::vector<double> theta_list;
  std::vector<double> T_list;
  std::vector<double> x_list;
  std::vector<double> t_list;
  std::vector<double> u_list;
  Window window = Window::from_zero;
  QuadratureConfig quadrature;
  ContourConfig contour;
  std::filesystem::path cache_dir;
  std::filesystem::path output;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 1;
  bool override_guardrail = false;
  // levinson: extra mollifier lengths N on a geometric grid in [2, T^theta]
  std::size_t length_samples = 0;
  std::size_t zero_count = 3;
  double beta0 = 0.5;

  void validate() const;
};

// Flat "key = value" file with [lab], [moments] and [kernels] sections; keys
// already present in `base` are overwritten.
ExperimentConfig load_config_file(const std::filesystem::path& file, ExperimentConfig base = {});

// One cell of a result table. Complex cells become name_re, name_im columns in CSV.
using Cell = std::variant<double, std::int64_t, std::string, bool, Complex>;

struct ResultTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Aggregates reported next to the rows (JSON top level, CSV trailing comments).
  std::vector<std::pair<std::string, Cell>> summary;
};

void write_csv(std::ostream& out, const ResultTable& table);
void write_json(std::ostream& out, const ResultTable& table, const ExperimentConfig& cfg);
// Writes to cfg.output (or stdout) in cfg.format.
void emit(const ResultTable& table, const ExperimentConfig& cfg);

struct ChainReport {
  double x = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double beta0 = 0.5;
  double lhs = 0.0;  // x^{2 beta0} log(T1+2)/(1+T1)^3 + T2 log(T2+2)/x
  double rhs = 0.0;  // log^2 x int_1^x I_y(T1, T2) dy
  double ratio = 0.0;
  MomentResult average;  // int_1^x I_y dy
};

ChainReport chain_report(double x, double T1, double T2, const MobiusTable& mobius, const QuadratureConfig& cfg);

// Throws GuardrailError unless overridden.
void check_guardrail(double T, double length, bool override_guardrail);

ResultTable run_levinson(const ExperimentConfig& cfg);
ResultTable run_chain(const ExperimentConfig& cfg);
ResultTable run_jt_check(const ExperimentConfig& cfg);
ResultTable run_meanvalue(const ExperimentConfig& cfg);
ResultTable run_zeros(const ExperimentConfig& cfg);
ResultTable run_gsupport(const ExperimentConfig& cfg);
ResultTable run(const ExperimentConfig& cfg);

}  // namespace mml
