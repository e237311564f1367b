#include "irsdetect/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "irsdetect/errors.hpp"
#include "irsdetect/montecarlo.hpp"

namespace irsdetect {

namespace {

constexpr std::string_view kCsvHeader =
    "scheme,T,N,a_max_db,pfa,a0_opt,px_opt_w,lambda1,g,pd_exact,pd_approx,pd_mc,pd_mc_stderr";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& field, int line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError(field, line, "cannot parse '" + text + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(field, line, "value must be finite");
  }
  return value;
}

// "1:20" (inclusive range), "8,16,32", or a mix such as "1:4,8,16".
std::vector<int> parse_int_list(const std::string& text, const std::string& field, int line) {
  std::vector<int> values;
  for (const std::string& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      values.push_back(parse_number<int>(item, field, line));
      continue;
    }
    const int lo = parse_number<int>(trim(item.substr(0, colon)), field, line);
    const int hi = parse_number<int>(trim(item.substr(colon + 1)), field, line);
    if (hi < lo) throw ConfigError(field, line, "range end precedes range start");
    for (int v = lo; v <= hi; ++v) values.push_back(v);
  }
  return values;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;

template <class T>
Setter number_field(T ExperimentConfig::*member, const char* name) {
  return [member, name](ExperimentConfig& c, const std::string& v, int line) {
    c.*member = parse_number<T>(v, name, line);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> m;
    m["mt"] = number_field(&ExperimentConfig::mt, "mt");
    m["mr"] = number_field(&ExperimentConfig::mr, "mr");
    m["n"] = number_field(&ExperimentConfig::n, "n");
    m["t"] = number_field(&ExperimentConfig::t, "t");
    m["theta0_deg"] = number_field(&ExperimentConfig::theta0_deg, "theta0_deg");
    m["theta1_deg"] = number_field(&ExperimentConfig::theta1_deg, "theta1_deg");
    m["theta2_deg"] = number_field(&ExperimentConfig::theta2_deg, "theta2_deg");
    m["d1"] = number_field(&ExperimentConfig::d1, "d1");
    m["d2"] = number_field(&ExperimentConfig::d2, "d2");
    m["k0_db"] = number_field(&ExperimentConfig::k0_db, "k0_db");
    m["d_ref"] = number_field(&ExperimentConfig::d_ref, "d_ref");
    m["ple"] = number_field(&ExperimentConfig::ple, "ple");
    m["rcs_re"] = number_field(&ExperimentConfig::rcs_re, "rcs_re");
    m["rcs_im"] = number_field(&ExperimentConfig::rcs_im, "rcs_im");
    m["p_dbm"] = number_field(&ExperimentConfig::p_dbm, "p_dbm");
    m["pa_dbm"] = number_field(&ExperimentConfig::pa_dbm, "pa_dbm");
    m["sigma2_dbm"] = number_field(&ExperimentConfig::sigma2_dbm, "sigma2_dbm");
    m["sigmaz2_dbm"] = number_field(&ExperimentConfig::sigmaz2_dbm, "sigmaz2_dbm");
    m["amax_db"] = number_field(&ExperimentConfig::amax_db, "amax_db");
    m["pfa"] = number_field(&ExperimentConfig::pfa, "pfa");
    m["trials"] = number_field(&ExperimentConfig::trials, "trials");
    m["seed"] = number_field(&ExperimentConfig::seed, "seed");
    m["grid_points"] = number_field(&ExperimentConfig::grid_points, "grid_points");
    m["output"] = [](ExperimentConfig& c, const std::string& v, int) { c.output_path = v; };
    m["sweep"] = [](ExperimentConfig& c, const std::string& v, int line) {
      if (v == "none") c.sweep = SweepKind::none;
      else if (v == "symbols") c.sweep = SweepKind::symbols;
      else if (v == "elements") c.sweep = SweepKind::elements;
      else throw ConfigError("sweep", line, "expected none, symbols or elements");
    };
    m["sweep_values"] = [](ExperimentConfig& c, const std::string& v, int line) {
      c.sweep_values = v.empty() ? std::vector<int>{} : parse_int_list(v, "sweep_values", line);
    };
    m["schemes"] = [](ExperimentConfig& c, const std::string& v, int line) {
      c.schemes.clear();
      if (v.empty()) return;
      for (const std::string& name : split(v, ',')) {
        const auto id = parse_scheme(name);
        if (!id) throw ConfigError("schemes", line, "unknown scheme '" + name + "'");
        c.schemes.push_back(*id);
      }
    };
    return m;
  }();
  return table;
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("read_csv: bad number '" + s + "'");
  return v;
}

double parse_required(const std::string& s) {
  const auto v = parse_optional(s);
  if (!v) throw std::runtime_error("read_csv: missing required value");
  return *v;
}

struct Task {
  std::size_t scheme_index;
  std::size_t point_index;
};

ResultRow evaluate(const ExperimentConfig& cfg, SchemeId scheme, std::size_t point_index,
                   const SceneParams& scene) {
  const std::uint64_t point_seed = derive_seed(cfg.seed, point_index);
  const SchemeResult res = scheme_solution(scheme, scene, cfg.grid_points, point_seed);

  ResultRow row;
  row.scheme = std::string(scheme_name(scheme));
  row.t = scene.t;
  row.n = scene.n;
  row.a_max_db = cfg.amax_db;
  row.pfa = scene.pfa;
  row.a0_opt = res.solution.a0;
  row.px_opt_w = res.solution.px;
  row.pd_exact = res.pd;
  const DesignPoint& design = res.solution.design;
  if (design.scene.sigmaz2 > 0) {
    const DetectionStats st = compute_noncentrality(design);
    row.lambda1 = st.lambda1;
    row.g = st.g;
  } else {
    row.g = 0.0;
  }
  if (res.detector == DetectorKind::np_optimal) row.pd_approx = res.solution.pd_approx_value;
  if (cfg.trials > 0) {
    // Stream 2^32 + point keeps Monte Carlo draws apart from the phase draws.
    const std::uint64_t mc_seed =
        derive_seed(derive_seed(cfg.seed, (1ULL << 32) + point_index), static_cast<std::uint64_t>(scheme));
    const RateEstimates est = estimate_rates(design, res.detector, scene.pfa, cfg.trials, mc_seed);
    row.pd_mc = est.pd_hat.value;
    row.pd_mc_stderr = est.pd_hat.std_error;
  }
  return row;
}

}  // namespace

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         "field '" + field + "': " + message),
      field_(std::move(field)),
      line_(line) {}

SceneParams ExperimentConfig::scene() const {
  SceneParams s;
  s.mt = mt;
  s.mr = mr;
  s.n = n;
  s.t = t;
  s.theta0 = deg_to_rad(theta0_deg);
  s.theta1 = deg_to_rad(theta1_deg);
  s.theta2 = deg_to_rad(theta2_deg);
  s.d1 = d1;
  s.d2 = d2;
  s.k0 = db_to_power_ratio(k0_db);
  s.d_ref = d_ref;
  s.ple = ple;
  s.rcs = Complex(rcs_re, rcs_im);
  s.p = dbm_to_watts(p_dbm);
  s.pa = dbm_to_watts(pa_dbm);
  s.sigma2 = dbm_to_watts(sigma2_dbm);
  s.sigmaz2 = dbm_to_watts(sigmaz2_dbm);
  s.amax = db_to_amplitude(amax_db);
  s.pfa = pfa;
  return s;
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ConfigError(field, 0, msg);
  };
  check(mt >= 1, "mt", "must be >= 1");
  check(mr >= 1, "mr", "must be >= 1");
  check(n >= 1, "n", "must be >= 1");
  check(t >= 1, "t", "must be >= 1");
  for (double v : {theta0_deg, theta1_deg, theta2_deg, d1, d2, k0_db, d_ref, ple, rcs_re, rcs_im,
                   p_dbm, pa_dbm, sigma2_dbm, sigmaz2_dbm, amax_db, pfa})
    check(std::isfinite(v), "scene", "all scene values must be finite");
  check(d1 > 0, "d1", "must be > 0");
  check(d2 > 0, "d2", "must be > 0");
  check(d_ref > 0, "d_ref", "must be > 0");
  check(ple > 0, "ple", "must be > 0");
  check(pfa > 0 && pfa < 1, "pfa", "must lie in (0, 1)");
  check(!schemes.empty(), "schemes", "at least one scheme is required");
  check(trials == 0 || trials >= 1000, "trials", "must be 0 (disabled) or >= 1000");
  check(grid_points >= 2, "grid_points", "must be >= 2");
  check(!output_path.empty(), "output", "must not be empty");
  if (sweep != SweepKind::none) {
    check(!sweep_values.empty(), "sweep_values", "must not be empty when a sweep is selected");
    check(std::adjacent_find(sweep_values.begin(), sweep_values.end(),
                             [](int a, int b) { return b <= a; }) == sweep_values.end(),
          "sweep_values", "must be strictly increasing");
    check(sweep_values.front() >= 1, "sweep_values", "must be >= 1");
  }
  try {
    scene().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scene", 0, e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(text, lineno, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, lineno, "unknown key");
    it->second(base, value, lineno);
  }
  return base;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

std::optional<ExperimentConfig> preset(std::string_view name) {
  ExperimentConfig c;
  c.n = 16;
  c.amax_db = 20.0;
  if (name == "fig2") {
    c.sweep = SweepKind::symbols;
    for (int t = 1; t <= 20; ++t) c.sweep_values.push_back(t);
    c.schemes = {SchemeId::joint_optimal, SchemeId::snr_detector};
    c.output_path = "fig2.csv";
    return c;
  }
  if (name == "fig3") {
    c.sweep = SweepKind::symbols;
    for (int t = 1; t <= 20; ++t) c.sweep_values.push_back(t);
    c.schemes = all_schemes();
    c.output_path = "fig3.csv";
    return c;
  }
  if (name == "fig4") {
    c.t = 8;
    c.sweep = SweepKind::elements;
    for (int n = 8; n <= 64; n += 8) c.sweep_values.push_back(n);
    c.schemes = all_schemes();
    c.output_path = "fig4.csv";
    return c;
  }
  return std::nullopt;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SceneParams base = config.scene();

  std::vector<SceneParams> points;
  if (config.sweep == SweepKind::none) {
    points.push_back(base);
  } else {
    for (int v : config.sweep_values) {
      SceneParams s = base;
      (config.sweep == SweepKind::symbols ? s.t : s.n) = v;
      points.push_back(s);
    }
  }

  std::vector<Task> tasks;
  for (std::size_t si = 0; si < config.schemes.size(); ++si)
    for (std::size_t pi = 0; pi < points.size(); ++pi) tasks.push_back({si, pi});

  std::vector<ResultRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = evaluate(config, config.schemes[tasks[i].scheme_index], tasks[i].point_index,
                           points[tasks[i].point_index]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::size_t>(worker_count(), tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.scheme << ',' << r.t << ',' << r.n << ',' << format_number(r.a_max_db) << ','
        << format_number(r.pfa) << ',' << format_number(r.a0_opt) << ','
        << format_number(r.px_opt_w) << ',' << optional_number(r.lambda1) << ','
        << optional_number(r.g) << ',' << format_number(r.pd_exact) << ','
        << optional_number(r.pd_approx) << ',' << optional_number(r.pd_mc) << ','
        << optional_number(r.pd_mc_stderr) << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("read_csv: missing or unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 13) throw std::runtime_error("read_csv: expected 13 fields");
    ResultRow r;
    r.scheme = f[0];
    r.t = std::stoi(f[1]);
    r.n = std::stoi(f[2]);
    r.a_max_db = parse_required(f[3]);
    r.pfa = parse_required(f[4]);
    r.a0_opt = parse_required(f[5]);
    r.px_opt_w = parse_required(f[6]);
    r.lambda1 = parse_optional(f[7]);
    r.g = parse_optional(f[8]);
    r.pd_exact = parse_required(f[9]);
    r.pd_approx = parse_optional(f[10]);
    r.pd_mc = parse_optional(f[11]);
    r.pd_mc_stderr = parse_optional(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

int run(const ExperimentConfig& config, std::ostream& err) {
  std::vector<ResultRow> rows;
  try {
    rows = run_experiment(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleProblem& e) {
    err << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateDesign& e) {
    err << "infeasible: " << e.what() << '\n';
    return 3;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    err << "cannot open " << config.output_path << " for writing\n";
    return 1;
  }
  write_csv(out, rows);
  out.flush();
  if (!out) {
    err << "write to " << config.output_path << " failed\n";
    return 1;
  }
  return 0;
}

}  // namespace irsdetect
