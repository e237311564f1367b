#pragma once

#include <functional>
#include <vector>

#include "irsdetect/detector.hpp"

namespace irsdetect {

inline constexpr int kDefaultGridPoints = 512;

struct GridSample {
  double a0 = 0.0;
  double px = 0.0;
  double objective = 0.0;
};

/// Joint transmit / reflect design with uniform amplification a0.
struct JointSolution {
  DesignPoint design;
  double a0 = 0.0;
  double px = 0.0;
  double pd_approx_value = 0.0;
  double pd_exact_value = 0.0;
  std::vector<GridSample> grid_trace;  // objective is pd_approx for the joint solver
};

/// Phases that co-phase the BS -> IRS -> target paths:
/// phi_n = -pi (n - 1)(sin theta0 + sin theta2), wrapped to [0, 2 pi).
std::vector<double> optimal_phases(const SceneParams& scene);

/// Largest BS power allowed by both budgets for total gain energy `amp_energy`.
double optimal_px_for_energy(const SceneParams& scene, double amp_energy);
/// Same, for the uniform gain a0 on all N elements.
double optimal_px(const SceneParams& scene, double a0);

/// Largest feasible uniform gain: min(amax, sqrt(P_A / (N sigma_z^2))) shrunk by 1e-9.
double max_uniform_gain(const SceneParams& scene);

/// MRT + aligned phases + uniform gain a0 at BS power px.
DesignPoint aligned_design(const SceneParams& scene, double a0, double px);

/// Maximizes `objective(a0)` over (0, a0_max]: log-spaced grid of
/// `grid_points` samples followed by golden-section refinement around the
/// best cell. Returns (best a0, best value) and fills `trace`.
struct ScalarSearchResult {
  double argmax = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> trace;
};
ScalarSearchResult maximize_on_log_grid(const std::function<double(double)>& objective,
                                        double a0_max, int grid_points);

/// Golden-section search for a maximum of `f` on [lo, hi].
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol = 1e-10);

/// Amplification subproblem: uniform gain, tight power budget, 1-D search over a0.
JointSolution solve_p3(const SceneParams& scene, int grid_points = kDefaultGridPoints);

/// Full joint design: MRT transmit beam, aligned phases, solve_p3 for the gain.
JointSolution solve_p1(const SceneParams& scene, int grid_points = kDefaultGridPoints);

}  // namespace irsdetect
