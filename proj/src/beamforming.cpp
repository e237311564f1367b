#include "irsdetect/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "irsdetect/errors.hpp"

namespace irsdetect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Lower end of the a0 grid relative to a0_max.
constexpr double kGridSpan = 1e-4;

}  // namespace

std::vector<double> optimal_phases(const SceneParams& scene) {
  std::vector<double> phases(static_cast<std::size_t>(scene.n));
  const double step = -std::numbers::pi * (std::sin(scene.theta0) + std::sin(scene.theta2));
  for (int i = 0; i < scene.n; ++i) {
    double ph = std::fmod(step * i, kTwoPi);
    if (ph < 0) ph += kTwoPi;
    if (ph >= kTwoPi) ph = 0.0;
    phases[i] = ph;
  }
  return phases;
}

double optimal_px_for_energy(const SceneParams& scene, double amp_energy) {
  if (!(amp_energy > 0)) return scene.p;
  const double gain = path_loss(scene.d1, scene) * scene.mt;
  const double px = (scene.pa / amp_energy - scene.sigmaz2) / gain;
  return std::clamp(px, 0.0, scene.p);
}

double optimal_px(const SceneParams& scene, double a0) {
  return optimal_px_for_energy(scene, scene.n * a0 * a0);
}

double max_uniform_gain(const SceneParams& scene) {
  double cap = scene.amax;
  if (scene.sigmaz2 > 0)
    cap = std::min(cap, std::sqrt(scene.pa / (scene.n * scene.sigmaz2)) * (1 - 1e-9));
  return cap;
}

DesignPoint aligned_design(const SceneParams& scene, double a0, double px) {
  DesignPoint d;
  d.scene = scene;
  d.phases = optimal_phases(scene);
  d.amp.assign(static_cast<std::size_t>(scene.n), a0);
  d.rx = TransmitCovariance::mrt(scene, px);
  return d;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > rel_tol * (std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

ScalarSearchResult maximize_on_log_grid(const std::function<double(double)>& objective,
                                        double a0_max, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid search needs at least 2 points");
  if (!(a0_max > 0)) throw InfeasibleProblem("empty feasible region for the amplification gain");

  ScalarSearchResult res;
  res.trace.reserve(static_cast<std::size_t>(grid_points));
  const double log_lo = std::log(a0_max * kGridSpan);
  const double log_hi = std::log(a0_max);
  std::size_t best = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double a0 =
        i == grid_points - 1 ? a0_max : std::exp(log_lo + (log_hi - log_lo) * i / (grid_points - 1));
    const double v = objective(a0);
    res.trace.emplace_back(a0, v);
    if (v > res.trace[best].second) best = static_cast<std::size_t>(i);
  }
  res.argmax = res.trace[best].first;
  res.value = res.trace[best].second;

  // Refine inside the neighbouring cells; keep the grid point unless strictly improved.
  const double lo = res.trace[best == 0 ? 0 : best - 1].first;
  const double hi = res.trace[std::min(best + 1, res.trace.size() - 1)].first;
  if (hi > lo) {
    const double refined = golden_section_maximize(objective, lo, hi);
    const double v = objective(refined);
    if (v > res.value) {
      res.argmax = refined;
      res.value = v;
    }
  }
  return res;
}

JointSolution solve_p3(const SceneParams& scene, int grid_points) {
  scene.validate();
  if (!(scene.pa > 0)) throw InfeasibleProblem("amplification budget P_A is zero");
  const double a0_max = max_uniform_gain(scene);

  auto objective = [&](double a0) {
    const DesignPoint d = aligned_design(scene, a0, optimal_px(scene, a0));
    return pd_approx(compute_noncentrality(d), scene.t, scene.pfa);
  };
  const ScalarSearchResult search = maximize_on_log_grid(objective, a0_max, grid_points);

  JointSolution sol;
  sol.a0 = search.argmax;
  sol.px = optimal_px(scene, sol.a0);
  sol.design = aligned_design(scene, sol.a0, sol.px);
  const DetectionStats st = compute_stats(sol.design, scene.pfa);
  sol.pd_approx_value = pd_approx(st, scene.t, scene.pfa);
  sol.pd_exact_value = pd_exact(st, scene.t, scene.pfa);
  sol.grid_trace.reserve(search.trace.size());
  for (const auto& [a0, v] : search.trace) sol.grid_trace.push_back({a0, optimal_px(scene, a0), v});
  return sol;
}

JointSolution solve_p1(const SceneParams& scene, int grid_points) {
  // Transmit beam and phases are closed form; only the gain needs a search.
  return solve_p3(scene, grid_points);
}

}  // namespace irsdetect
