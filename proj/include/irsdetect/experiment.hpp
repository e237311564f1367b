#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irsdetect/baselines.hpp"

namespace irsdetect {

enum class SweepKind { none, symbols, elements };

/// Experiment description in user units (dBm, dB, degrees, meters).
struct ExperimentConfig {
  int mt = 8;
  int mr = 8;
  int n = 16;
  int t = 8;
  double theta0_deg = 45.0;
  double theta1_deg = 45.0;
  double theta2_deg = 45.0;
  double d1 = 120.0;
  double d2 = 10.0;
  double k0_db = -30.0;
  double d_ref = 1.0;
  double ple = 2.2;
  double rcs_re = 1.0;
  double rcs_im = 0.0;
  double p_dbm = 30.0;
  double pa_dbm = 15.0;
  double sigma2_dbm = -70.0;
  double sigmaz2_dbm = -30.0;
  double amax_db = 20.0;
  double pfa = 1e-3;

  SweepKind sweep = SweepKind::none;
  std::vector<int> sweep_values;
  std::vector<SchemeId> schemes{SchemeId::joint_optimal};
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  int grid_points = kDefaultGridPoints;
  std::string output_path = "results.csv";

  /// Scene in SI units for the base point (no sweep applied).
  SceneParams scene() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, int line, const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }  // 0 when not tied to a config line

private:
  std::string field_;
  int line_;
};

/// Parses `key = value` lines on top of `base`. '#' starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});

/// Built-in sweeps: fig2 (T sweep, joint vs SNR design), fig3 (T sweep, all schemes), fig4 (N sweep).
std::vector<std::string> preset_names();
std::optional<ExperimentConfig> preset(std::string_view name);

struct ResultRow {
  std::string scheme;
  int t = 0;
  int n = 0;
  double a_max_db = 0.0;
  double pfa = 0.0;
  double a0_opt = 0.0;
  double px_opt_w = 0.0;
  std::optional<double> lambda1;
  std::optional<double> g;
  double pd_exact = 0.0;  // the scheme's score
  std::optional<double> pd_approx;
  std::optional<double> pd_mc;
  std::optional<double> pd_mc_stderr;
};

/// Evaluates every (scheme, sweep value); rows are ordered scheme-major.
/// Throws InfeasibleProblem / DegenerateDesign for unsolvable points.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

/// CSV number rendering: 12 significant digits, "." decimal, locale independent.
std::string format_number(double v);

/// Runs and writes config.output_path. Exit codes: 0 ok, 2 bad config,
/// 3 infeasible scheme, 1 I/O failure. Diagnostics go to `err`.
int run(const ExperimentConfig& config, std::ostream& err);

}  // namespace irsdetect
