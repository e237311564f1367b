#include "irsdetect/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "irsdetect/errors.hpp"
#include "irsdetect/numstats.hpp"
#include "irsdetect/rng.hpp"

namespace irsdetect {

namespace {

constexpr std::array<std::pair<SchemeId, std::string_view>, 5> kSchemeNames{{
    {SchemeId::joint_optimal, "joint_optimal"},
    {SchemeId::snr_detector, "snr_detector"},
    {SchemeId::reflective_only, "reflective_only"},
    {SchemeId::transmit_only, "transmit_only"},
    {SchemeId::semi_passive, "semi_passive"},
}};

SchemeResult score_np(SchemeId id, JointSolution sol, const SceneParams& scene) {
  const DetectionStats st = compute_stats(sol.design, scene.pfa);
  sol.pd_approx_value = pd_approx(st, scene.t, scene.pfa);
  sol.pd_exact_value = pd_exact(st, scene.t, scene.pfa);
  SchemeResult r;
  r.scheme = id;
  r.detector = DetectorKind::np_optimal;
  r.pd = sol.pd_exact_value;
  r.solution = std::move(sol);
  return r;
}

SchemeResult score_matched_filter(SchemeId id, JointSolution sol, const SceneParams& scene) {
  SchemeResult r;
  r.scheme = id;
  r.detector = DetectorKind::matched_filter;
  r.deflection = deflection(sol.design);
  r.pd = matched_filter_pd(r.deflection, scene.pfa);
  sol.pd_exact_value = r.pd;
  sol.pd_approx_value = std::numeric_limits<double>::quiet_NaN();
  r.solution = std::move(sol);
  return r;
}

JointSolution snr_design(const SceneParams& scene, int grid_points) {
  if (!(scene.pa > 0)) throw InfeasibleProblem("amplification budget P_A is zero");
  auto objective = [&](double a0) {
    return sensing_snr(aligned_design(scene, a0, optimal_px(scene, a0)));
  };
  const ScalarSearchResult s = maximize_on_log_grid(objective, max_uniform_gain(scene), grid_points);
  JointSolution sol;
  sol.a0 = s.argmax;
  sol.px = optimal_px(scene, sol.a0);
  sol.design = aligned_design(scene, sol.a0, sol.px);
  for (const auto& [a0, v] : s.trace) sol.grid_trace.push_back({a0, optimal_px(scene, a0), v});
  return sol;
}

JointSolution reflective_only_design(const SceneParams& scene, int grid_points) {
  if (!(scene.pa > 0)) throw InfeasibleProblem("amplification budget P_A is zero");
  // Isotropic R_x = (P / Mt) I puts e^T R_x e* = P on the IRS direction.
  const double per_gain = path_loss(scene.d1, scene) * scene.p + scene.sigmaz2;
  const double a0_max =
      std::min(scene.amax, std::sqrt(scene.pa / (per_gain * scene.n)) * (1 - 1e-9));
  auto make = [&](double a0) {
    DesignPoint d;
    d.scene = scene;
    d.phases = optimal_phases(scene);
    d.amp.assign(static_cast<std::size_t>(scene.n), a0);
    d.rx = TransmitCovariance::isotropic(scene.mt, scene.p);
    return d;
  };
  auto objective = [&](double a0) {
    return pd_approx(compute_noncentrality(make(a0)), scene.t, scene.pfa);
  };
  const ScalarSearchResult s = maximize_on_log_grid(objective, a0_max, grid_points);
  JointSolution sol;
  sol.a0 = s.argmax;
  sol.px = scene.p;
  sol.design = make(sol.a0);
  for (const auto& [a0, v] : s.trace) sol.grid_trace.push_back({a0, scene.p, v});
  return sol;
}

JointSolution transmit_only_design(const SceneParams& scene, std::uint64_t seed) {
  if (!(scene.pa > 0)) throw InfeasibleProblem("amplification budget P_A is zero");
  // Full-power MRT with the largest gain the amplification budget still admits.
  const double per_gain = path_loss(scene.d1, scene) * scene.mt * scene.p + scene.sigmaz2;
  const double a0 = std::min(scene.amax, std::sqrt(scene.pa / (per_gain * scene.n)) * (1 - 1e-12));
  JointSolution sol;
  sol.a0 = a0;
  sol.px = scene.p;
  sol.design.scene = scene;
  sol.design.phases = random_phases(scene.n, seed);
  sol.design.amp.assign(static_cast<std::size_t>(scene.n), a0);
  sol.design.rx = TransmitCovariance::mrt(scene, scene.p);
  return sol;
}

JointSolution semi_passive_design(const SceneParams& scene) {
  SceneParams passive = scene;
  passive.sigmaz2 = 0.0;
  passive.p = scene.p + scene.pa;
  passive.amax = 1.0;
  JointSolution sol;
  sol.a0 = 1.0;
  sol.px = passive.p;
  sol.design = aligned_design(passive, 1.0, passive.p);
  return sol;
}

}  // namespace

std::string_view scheme_name(SchemeId id) {
  for (const auto& [k, name] : kSchemeNames)
    if (k == id) return name;
  return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  for (const auto& [k, n] : kSchemeNames)
    if (n == name) return k;
  return std::nullopt;
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> ids{SchemeId::joint_optimal, SchemeId::snr_detector,
                                         SchemeId::reflective_only, SchemeId::transmit_only,
                                         SchemeId::semi_passive};
  return ids;
}

double sensing_snr(const DesignPoint& design) {
  const SceneParams& sc = design.scene;
  const double alpha2 = std::norm(target_alpha(sc));
  return alpha2 * beam_power_theta0(design) /
         (alpha2 * design.amp_energy() * sc.sigmaz2 + sc.sigma2);
}

double deflection(const DesignPoint& design) {
  const SceneParams& sc = design.scene;
  const double alpha2 = std::norm(target_alpha(sc));
  return sc.mr * sc.t * alpha2 * beam_power_theta0(design) /
         (sc.sigma2 + alpha2 * sc.mr * design.amp_energy() * sc.sigmaz2);
}

double matched_filter_pd(double deflection, double pfa) {
  if (!(deflection >= 0)) throw std::invalid_argument("matched_filter_pd: deflection must be >= 0");
  if (!(pfa > 0 && pfa <= 1)) throw std::invalid_argument("matched_filter_pd: pfa must lie in (0, 1]");
  if (pfa == 1) return 1.0;
  return gaussian_q(gaussian_q_inv(pfa) - std::sqrt(2.0 * deflection));
}

double matched_filter_false_alarm(double g, double pfa) {
  if (!(g >= 0)) throw std::invalid_argument("matched_filter_false_alarm: g must be >= 0");
  if (!(pfa > 0 && pfa < 1)) throw std::invalid_argument("matched_filter_false_alarm: pfa must lie in (0, 1)");
  return gaussian_q(gaussian_q_inv(pfa) * std::sqrt(1.0 + g));
}

std::vector<double> random_phases(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (double& ph : phases) ph = 2.0 * std::numbers::pi * rng.uniform_open0();
  return phases;
}

SchemeResult scheme_solution(SchemeId scheme, const SceneParams& scene, int grid_points,
                             std::uint64_t seed) {
  scene.validate();
  switch (scheme) {
    case SchemeId::joint_optimal:
      return score_np(scheme, solve_p1(scene, grid_points), scene);
    case SchemeId::snr_detector:
      return score_matched_filter(scheme, snr_design(scene, grid_points), scene);
    case SchemeId::reflective_only:
      return score_np(scheme, reflective_only_design(scene, grid_points), scene);
    case SchemeId::transmit_only:
      return score_np(scheme, transmit_only_design(scene, seed), scene);
    case SchemeId::semi_passive:
      return score_matched_filter(scheme, semi_passive_design(scene), scene);
  }
  throw std::invalid_argument("scheme_solution: unknown scheme");
}

}  // namespace irsdetect
