#include "doctest.h"

#include <cmath>
#include <random>

#include "irsdetect/baselines.hpp"
#include "irsdetect/beamforming.hpp"
#include "irsdetect/errors.hpp"
#include "oracles.hpp"

using namespace irsdetect;
using doctest::Approx;

namespace {

double alignment(const SceneParams& sc, const std::vector<double>& phases) {
  const ComplexVector e0 = oracle::steer(sc.theta0, sc.n);
  const ComplexVector e2 = oracle::steer(sc.theta2, sc.n);
  Complex s{0, 0};
  for (int i = 0; i < sc.n; ++i) s += e0(i) * std::polar(1.0, phases[i]) * e2(i);
  return std::abs(s);
}

double pd_approx_of(const DesignPoint& d) {
  return pd_approx(compute_noncentrality(d), d.scene.t, d.scene.pfa);
}

// Random feasible design: random direction, phases and gains scaled into the budgets.
DesignPoint random_feasible(const SceneParams& sc, std::mt19937_64& gen) {
  DesignPoint d = oracle::random_design(sc, gen);
  const double used = d.amplification_power();
  if (used > sc.pa) {
    const double s = std::sqrt(sc.pa / used) * (1 - 1e-12);
    for (double& a : d.amp) a *= s;
  }
  return d;
}

}  // namespace

TEST_CASE("optimal_phases") {
  SceneParams sc;
  sc.theta0 = sc.theta2 = 0;
  for (double ph : optimal_phases(sc)) CHECK(ph == 0.0);

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ang(-1.5, 1.5);
  for (int rep = 0; rep < 50; ++rep) {
    SceneParams s;
    s.n = 1 + rep;
    s.theta0 = ang(gen);
    s.theta2 = ang(gen);
    const auto ph = optimal_phases(s);
    for (double p : ph) {
      CHECK(p >= 0);
      CHECK(p < 2 * std::numbers::pi);
    }
    CHECK(alignment(s, ph) == Approx(s.n).epsilon(1e-9));
  }
}

TEST_CASE("random phases align far worse than optimal ones") {
  const SceneParams sc;
  CHECK(alignment(sc, optimal_phases(sc)) == Approx(16.0).epsilon(1e-12));

  // Mean of |e^T Phi e| for random phases against an independent sampler.
  const int draws = 20000;
  double lib = 0, lib_sq = 0, ref = 0;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < draws; ++k) {
    const double v = alignment(sc, random_phases(sc.n, 1000 + k));
    lib += v;
    lib_sq += v * v;
    std::vector<double> ph(sc.n);
    for (double& p : ph) p = u(gen);
    ref += alignment(sc, ph);
  }
  lib /= draws;
  ref /= draws;
  const double se = std::sqrt((lib_sq / draws - lib * lib) / draws);
  CHECK(std::abs(lib - ref) < 3 * std::sqrt(2.0) * se);
  CHECK(lib < 16.0 / 3);
}

TEST_CASE("optimal_px") {
  const SceneParams sc;
  const double unclamped = (sc.pa / 1600.0 - sc.sigmaz2) / (oracle::path_loss(sc.d1, sc) * sc.mt);
  CHECK(unclamped > 87.9);
  CHECK(unclamped < 88.0);
  CHECK(optimal_px(sc, 10.0) == sc.p);
  CHECK(optimal_px(sc, std::sqrt(sc.pa / (sc.n * sc.sigmaz2))) == Approx(0.0).epsilon(1e-12));
  CHECK(optimal_px(sc, 1e-6) == sc.p);

  SceneParams tight = sc;
  tight.pa = 1e-3;
  const double a0 = 7.5;
  const double px = optimal_px(tight, a0);
  CHECK(px > 0);
  CHECK(px < tight.p);
  CHECK(aligned_design(tight, a0, px).amplification_power() == Approx(tight.pa).epsilon(1e-12));
}

TEST_CASE("golden section and grid search") {
  auto f = [](double x) { return -(std::log(x) - 0.3) * (std::log(x) - 0.3); };
  CHECK(golden_section_maximize(f, 0.5, 3.0) == Approx(std::exp(0.3)).epsilon(1e-6));
  const auto res = maximize_on_log_grid(f, 10.0, 64);
  CHECK(res.argmax == Approx(std::exp(0.3)).epsilon(1e-6));
  CHECK(res.trace.size() == 64);
  CHECK(res.trace.back().first == 10.0);
  CHECK_THROWS_AS(maximize_on_log_grid(f, 10.0, 1), std::invalid_argument);
}

TEST_CASE("solve_p1 at defaults") {
  const SceneParams sc;
  const JointSolution sol = solve_p1(sc);
  CHECK(sol.design.feasible());
  CHECK(sol.grid_trace.size() == static_cast<std::size_t>(kDefaultGridPoints));
  for (const auto& s : sol.grid_trace) CHECK(s.objective <= sol.pd_approx_value + 1e-15);
  // One of the power constraints is tight.
  const bool amp_tight = std::abs(sol.design.amplification_power() - sc.pa) <= 1e-6 * sc.pa;
  const bool bs_tight = std::abs(sol.px - sc.p) <= 1e-6 * sc.p;
  CHECK((amp_tight || bs_tight));
  CHECK(sol.pd_exact_value >= sc.pfa);

  SUBCASE("dominates random feasible designs") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 100; ++rep) {
      const DesignPoint d = random_feasible(sc, gen);
      REQUIRE(d.feasible());
      CHECK(pd_approx_of(d) <= sol.pd_approx_value + 1e-12);
    }
  }
  SUBCASE("grid doubling") {
    const JointSolution fine = solve_p1(sc, 2 * kDefaultGridPoints);
    CHECK(std::abs(fine.pd_approx_value - sol.pd_approx_value) < 1e-4);
  }
}

TEST_CASE("solve_p1 with an unlimited amplification budget") {
  SceneParams sc;
  sc.pa = 1e6;
  const JointSolution sol = solve_p1(sc);
  CHECK(sol.design.feasible());
  std::mt19937_64 gen(6);
  for (int rep = 0; rep < 100; ++rep) CHECK(pd_approx_of(random_feasible(sc, gen)) <= sol.pd_approx_value + 1e-12);
  // a0 = amax only if the objective peaks there.
  const double at_cap = pd_approx_of(aligned_design(sc, sc.amax, optimal_px(sc, sc.amax)));
  if (sol.a0 == Approx(sc.amax)) CHECK(at_cap >= sol.pd_approx_value - 1e-12);
  else CHECK(at_cap <= sol.pd_approx_value);
}

TEST_CASE("solve_p3 errors") {
  SceneParams sc;
  sc.pa = 0.0;
  CHECK_THROWS_AS(solve_p3(sc), InfeasibleProblem);
  CHECK_THROWS_AS(solve_p3(SceneParams{}, 1), std::invalid_argument);
}

TEST_CASE("solve_p3 against a dense brute-force grid") {
  SceneParams sc;
  sc.sigmaz2 = 1e-2;  // reflection noise dominates every gain
  sc.pa = 1.0;
  const JointSolution sol = solve_p3(sc, 256);
  const double a0_max = max_uniform_gain(sc);
  double best = 0;
  const int pts = 2560;
  for (int i = 0; i < pts; ++i) {
    const double a0 = a0_max * std::pow(1e-4, 1.0 - double(i) / (pts - 1));
    best = std::max(best, pd_approx_of(aligned_design(sc, a0, optimal_px(sc, a0))));
  }
  CHECK(sol.pd_approx_value >= best - 1e-12);
  CHECK(sol.pd_approx_value - best < 1e-4);
}

TEST_CASE("single element, single symbol: exhaustive 2-D search") {
  SceneParams sc;
  sc.n = 1;
  sc.t = 1;
  sc.pfa = 0.1;
  sc.pa = 1e-4;
  const JointSolution sol = solve_p3(sc);
  double best = 0;
  const double amax = std::min(sc.amax, std::sqrt(sc.pa / sc.sigmaz2));
  for (int i = 1; i <= 600; ++i) {
    const double a0 = amax * std::pow(1e-4, 1.0 - i / 600.0);
    for (int j = 0; j <= 600; ++j) {
      const double px = sc.p * j / 600.0;
      const DesignPoint d = aligned_design(sc, a0, px);
      if (!d.feasible()) continue;
      best = std::max(best, pd_approx_of(d));
    }
  }
  CHECK(sol.pd_approx_value >= best - 1e-12);
  CHECK(sol.pd_approx_value - best < 1e-3);
}

TEST_CASE("uniform gains dominate at equal energy") {
  const SceneParams sc;
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> amp(sc.n);
    for (double& a : amp) a = sc.amax * u(gen);
    double s = 0;
    for (double a : amp) s += a * a;
    const double cap = sc.pa / sc.sigmaz2 * (1 - 1e-9);
    if (s > cap) {
      for (double& a : amp) a *= std::sqrt(cap / s);
      s = cap;
    }
    const double px = optimal_px_for_energy(sc, s);
    DesignPoint skew = aligned_design(sc, 1.0, px);
    skew.amp = amp;
    const DesignPoint flat = aligned_design(sc, std::sqrt(s / sc.n), px);
    CHECK(skew.feasible());
    CHECK(flat.feasible());
    CHECK(pd_approx_of(flat) >= pd_approx_of(skew) - 1e-12);
  }
}

TEST_CASE("MRT and aligned phases maximize the beam power") {
  const SceneParams sc;
  const DesignPoint best = aligned_design(sc, 3.0, 0.6);
  const double p_best = beam_power_theta0(best);
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 100; ++rep) {
    DesignPoint d = best;
    const DesignPoint r = oracle::random_design(sc, gen);
    d.rx = TransmitCovariance::rank_one(r.rx.direction, best.rx.power);
    CHECK(beam_power_theta0(d) <= p_best * (1 + 1e-12));
    DesignPoint e = best;
    e.phases = r.phases;
    CHECK(beam_power_theta0(e) <= p_best * (1 + 1e-12));
  }
}
