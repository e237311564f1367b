#include "irsdetect/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsdetect {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("SceneParams: ") + what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void SceneParams::validate(bool allow_zero_reflection_noise) const {
  require(mt >= 1, "mt must be >= 1");
  require(mr >= 1, "mr must be >= 1");
  require(n >= 1, "n must be >= 1");
  require(t >= 1, "t must be >= 1");
  require(finite(theta0) && finite(theta1) && finite(theta2), "angles must be finite");
  require(finite(d1) && d1 > 0, "d1 must be > 0");
  require(finite(d2) && d2 > 0, "d2 must be > 0");
  require(finite(k0) && k0 > 0, "k0 must be > 0");
  require(finite(d_ref) && d_ref > 0, "d_ref must be > 0");
  require(finite(ple) && ple > 0, "ple must be > 0");
  require(finite(rcs.real()) && finite(rcs.imag()), "rcs must be finite");
  require(finite(p) && p > 0, "p must be > 0");
  // pa == 0 is a valid scene with an empty beamforming feasible region;
  // the solvers report it as InfeasibleProblem.
  require(finite(pa) && pa >= 0, "pa must be >= 0");
  require(finite(sigma2) && sigma2 > 0, "sigma2 must be > 0");
  if (allow_zero_reflection_noise)
    require(finite(sigmaz2) && sigmaz2 >= 0, "sigmaz2 must be >= 0");
  else
    require(finite(sigmaz2) && sigmaz2 > 0, "sigmaz2 must be > 0");
  require(finite(amax) && amax > 0, "amax must be > 0");
  require(pfa > 0 && pfa < 1, "pfa must lie in (0, 1)");
}

double dbm_to_watts(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double db_to_amplitude(double x_db) { return std::pow(10.0, x_db / 20.0); }

double db_to_power_ratio(double x_db) { return std::pow(10.0, x_db / 10.0); }

ComplexVector steering(double angle, int k) {
  if (k < 1) throw std::invalid_argument("steering: k must be >= 1");
  ComplexVector e(k);
  const double step = std::numbers::pi * std::sin(angle);
  e(0) = Complex(1.0, 0.0);
  for (int i = 1; i < k; ++i) e(i) = std::polar(1.0, step * i);
  return e;
}

double path_loss(double d, const SceneParams& params) {
  if (!(d > 0)) throw std::invalid_argument("path_loss: distance must be > 0");
  return params.k0 * std::pow(d / params.d_ref, -params.ple);
}

ComplexMatrix channel_g(const SceneParams& params) {
  params.validate(true);
  const double gain = std::sqrt(path_loss(params.d1, params));
  return gain * steering(params.theta2, params.n) * steering(params.theta1, params.mt).transpose();
}

Complex target_alpha(const SceneParams& params) {
  return params.rcs * path_loss(params.d2, params);
}

double amplification_power(const SceneParams& params, double rx_power_along_theta1,
                           std::span<const double> amp) {
  if (!(rx_power_along_theta1 >= 0))
    throw std::invalid_argument("amplification_power: rx power must be >= 0");
  double energy = 0.0;
  for (double a : amp) {
    if (!(a >= 0)) throw std::invalid_argument("amplification_power: gains must be >= 0");
    energy += a * a;
  }
  return (path_loss(params.d1, params) * rx_power_along_theta1 + params.sigmaz2) * energy;
}

}  // namespace irsdetect
