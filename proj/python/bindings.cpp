#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irsdetect/baselines.hpp"
#include "irsdetect/errors.hpp"
#include "irsdetect/experiment.hpp"
#include "irsdetect/montecarlo.hpp"
#include "irsdetect/numstats.hpp"

namespace py = pybind11;
using namespace irsdetect;

namespace {

py::dict row_to_dict(const ResultRow& r) {
  py::dict d;
  auto opt = [](const std::optional<double>& v) -> py::object {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
  };
  d["scheme"] = r.scheme;
  d["T"] = r.t;
  d["N"] = r.n;
  d["a_max_db"] = r.a_max_db;
  d["pfa"] = r.pfa;
  d["a0_opt"] = r.a0_opt;
  d["px_opt_w"] = r.px_opt_w;
  d["lambda1"] = opt(r.lambda1);
  d["g"] = opt(r.g);
  d["pd_exact"] = r.pd_exact;
  d["pd_approx"] = opt(r.pd_approx);
  d["pd_mc"] = opt(r.pd_mc);
  d["pd_mc_stderr"] = opt(r.pd_mc_stderr);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Active-IRS target detection: detector statistics, joint design, benchmarks";

  py::register_exception<DegenerateDesign>(m, "DegenerateDesign", PyExc_ValueError);
  py::register_exception<InfeasibleProblem>(m, "InfeasibleProblem", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SceneParams>(m, "SceneParams")
      .def(py::init<>())
      .def_readwrite("mt", &SceneParams::mt)
      .def_readwrite("mr", &SceneParams::mr)
      .def_readwrite("n", &SceneParams::n)
      .def_readwrite("t", &SceneParams::t)
      .def_readwrite("theta0", &SceneParams::theta0)
      .def_readwrite("theta1", &SceneParams::theta1)
      .def_readwrite("theta2", &SceneParams::theta2)
      .def_readwrite("d1", &SceneParams::d1)
      .def_readwrite("d2", &SceneParams::d2)
      .def_readwrite("k0", &SceneParams::k0)
      .def_readwrite("d_ref", &SceneParams::d_ref)
      .def_readwrite("ple", &SceneParams::ple)
      .def_readwrite("rcs", &SceneParams::rcs)
      .def_readwrite("p", &SceneParams::p)
      .def_readwrite("pa", &SceneParams::pa)
      .def_readwrite("sigma2", &SceneParams::sigma2)
      .def_readwrite("sigmaz2", &SceneParams::sigmaz2)
      .def_readwrite("amax", &SceneParams::amax)
      .def_readwrite("pfa", &SceneParams::pfa)
      .def("validate", &SceneParams::validate, py::arg("allow_zero_reflection_noise") = false);

  m.def("dbm_to_watts", &dbm_to_watts);
  m.def("watts_to_dbm", &watts_to_dbm);
  m.def("db_to_amplitude", &db_to_amplitude);
  m.def("steering", &steering, py::arg("angle"), py::arg("k"));
  m.def("path_loss", &path_loss, py::arg("d"), py::arg("scene"));
  m.def("channel_g", &channel_g);
  m.def("target_alpha", &target_alpha);

  m.def("gaussian_q", &gaussian_q);
  m.def("gaussian_q_inv", &gaussian_q_inv);
  m.def("ncx2_tail", [](int dof, double lam, double x) { return ncx2_tail({dof, lam}, x); },
        py::arg("dof"), py::arg("lam"), py::arg("x"));
  m.def("ncx2_tail_inv", [](int dof, double lam, double p) { return ncx2_tail_inv({dof, lam}, p); },
        py::arg("dof"), py::arg("lam"), py::arg("p"));
  m.def("ncx2_pdf", [](int dof, double lam, double x) { return ncx2_pdf({dof, lam}, x); },
        py::arg("dof"), py::arg("lam"), py::arg("x"));

  py::class_<TransmitCovariance>(m, "TransmitCovariance")
      .def_static("rank_one", &TransmitCovariance::rank_one)
      .def_static("isotropic", &TransmitCovariance::isotropic)
      .def_static("mrt", &TransmitCovariance::mrt)
      .def_property_readonly("is_isotropic",
                             [](const TransmitCovariance& r) { return r.kind == TransmitCovariance::Kind::isotropic; })
      .def_readonly("power", &TransmitCovariance::power)
      .def("dense", &TransmitCovariance::dense);

  py::class_<DesignPoint>(m, "DesignPoint")
      .def(py::init<>())
      .def_readwrite("scene", &DesignPoint::scene)
      .def_readwrite("phases", &DesignPoint::phases)
      .def_readwrite("amp", &DesignPoint::amp)
      .def_readwrite("rx", &DesignPoint::rx)
      .def("amplification_power", &DesignPoint::amplification_power)
      .def("feasible", &DesignPoint::feasible, py::arg("rel_slack") = 1e-9);

  py::class_<DetectionStats>(m, "DetectionStats")
      .def_readonly("t", &DetectionStats::t)
      .def_readonly("k1", &DetectionStats::k1)
      .def_readonly("lambda1", &DetectionStats::lambda1)
      .def_readonly("lambda2", &DetectionStats::lambda2)
      .def_readonly("g", &DetectionStats::g)
      .def_readonly("p_theta0", &DetectionStats::p_theta0)
      .def_readonly("threshold", &DetectionStats::threshold)
      .def("raw_threshold", &DetectionStats::raw_threshold);

  m.def("optimal_phases", &optimal_phases);
  m.def("optimal_px", &optimal_px, py::arg("scene"), py::arg("a0"));
  m.def("aligned_design", &aligned_design, py::arg("scene"), py::arg("a0"), py::arg("px"));
  m.def("beam_power_theta0", &beam_power_theta0);
  m.def("compute_stats", &compute_stats, py::arg("design"), py::arg("pfa"));
  m.def("stats_from_parameters", &stats_from_parameters, py::arg("t"), py::arg("lambda1"),
        py::arg("g"), py::arg("pfa"));
  m.def("pd_exact", &pd_exact, py::arg("stats"), py::arg("t"), py::arg("pfa"));
  m.def("pd_approx", &pd_approx, py::arg("stats"), py::arg("t"), py::arg("pfa"));
  m.def("np_statistic", &np_statistic, py::arg("y"), py::arg("design"), py::arg("x_symbols"));
  m.def("make_symbols", &make_symbols);

  py::class_<JointSolution>(m, "JointSolution")
      .def_readonly("design", &JointSolution::design)
      .def_readonly("a0", &JointSolution::a0)
      .def_readonly("px", &JointSolution::px)
      .def_readonly("pd_approx_value", &JointSolution::pd_approx_value)
      .def_readonly("pd_exact_value", &JointSolution::pd_exact_value)
      .def_property_readonly("grid_trace", [](const JointSolution& s) {
        py::list out;
        for (const auto& g : s.grid_trace) out.append(py::make_tuple(g.a0, g.px, g.objective));
        return out;
      });
  m.def("solve_p1", &solve_p1, py::arg("scene"), py::arg("grid_points") = kDefaultGridPoints);
  m.def("solve_p3", &solve_p3, py::arg("scene"), py::arg("grid_points") = kDefaultGridPoints);

  py::enum_<SchemeId>(m, "SchemeId")
      .value("joint_optimal", SchemeId::joint_optimal)
      .value("snr_detector", SchemeId::snr_detector)
      .value("reflective_only", SchemeId::reflective_only)
      .value("transmit_only", SchemeId::transmit_only)
      .value("semi_passive", SchemeId::semi_passive);
  py::enum_<DetectorKind>(m, "DetectorKind")
      .value("np_optimal", DetectorKind::np_optimal)
      .value("matched_filter", DetectorKind::matched_filter);

  py::class_<SchemeResult>(m, "SchemeResult")
      .def_readonly("scheme", &SchemeResult::scheme)
      .def_readonly("detector", &SchemeResult::detector)
      .def_readonly("solution", &SchemeResult::solution)
      .def_readonly("pd", &SchemeResult::pd)
      .def_readonly("deflection", &SchemeResult::deflection);
  m.def("scheme_solution", &scheme_solution, py::arg("scheme"), py::arg("scene"),
        py::arg("grid_points") = kDefaultGridPoints, py::arg("seed") = 0);
  m.def("sensing_snr", &sensing_snr);
  m.def("matched_filter_pd", &matched_filter_pd, py::arg("deflection"), py::arg("pfa"));

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("value", &McEstimate::value)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("trials", &McEstimate::trials)
      .def_readonly("seed", &McEstimate::seed);
  m.def(
      "estimate_rates",
      [](const DesignPoint& d, DetectorKind det, double pfa, std::int64_t trials, std::uint64_t seed) {
        RateEstimates r;
        {
          py::gil_scoped_release release;
          r = estimate_rates(d, det, pfa, trials, seed);
        }
        return py::make_tuple(r.pfa_hat, r.pd_hat);
      },
      py::arg("design"), py::arg("detector"), py::arg("pfa"), py::arg("trials"), py::arg("seed"),
      "Returns (pfa_hat, pd_hat).");

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("grid_points", &ExperimentConfig::grid_points)
      .def_readwrite("sweep_values", &ExperimentConfig::sweep_values)
      .def_readwrite("schemes", &ExperimentConfig::schemes)
      .def_readwrite("output_path", &ExperimentConfig::output_path)
      .def("scene", &ExperimentConfig::scene)
      .def("validate", &ExperimentConfig::validate);
  m.def("preset_names", &preset_names);
  m.def("preset", &preset);
  m.def(
      "parse_config",
      [](const std::string& text, const std::optional<ExperimentConfig>& base) {
        std::istringstream in(text);
        return parse_config(in, base.value_or(ExperimentConfig{}));
      },
      py::arg("text"), py::arg("base") = py::none());
  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg) {
        std::vector<ResultRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      "Rows as dicts keyed by the CSV columns; None marks an empty cell.");
  m.def("experiment_csv", [](const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    {
      py::gil_scoped_release release;
      rows = run_experiment(cfg);
    }
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
  });
}
