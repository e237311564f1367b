#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace irsdetect {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Physical description of the BS / active IRS / target geometry.
///
/// Everything is in SI units: angles in radians, distances in meters,
/// powers in watts, gains linear. Defaults: 8 transmit antennas, 8 IRS
/// sensors, 16 reflecting elements, 120 m BS-IRS link, 10 m IRS-target
/// link, all angles 45 degrees.
struct SceneParams {
  int mt = 8;   ///< BS transmit antennas
  int mr = 8;   ///< IRS receive sensors
  int n = 16;   ///< IRS reflecting elements
  int t = 8;    ///< sensing symbols per block

  double theta0 = std::numbers::pi / 4;  ///< target w.r.t. IRS
  double theta1 = std::numbers::pi / 4;  ///< IRS w.r.t. BS transmit array
  double theta2 = std::numbers::pi / 4;  ///< BS w.r.t. IRS reflecting array

  double d1 = 120.0;  ///< BS-IRS distance
  double d2 = 10.0;   ///< IRS-target distance

  double k0 = 1e-3;    ///< path loss at the reference distance (-30 dB)
  double d_ref = 1.0;  ///< reference distance
  double ple = 2.2;    ///< path-loss exponent

  Complex rcs{1.0, 0.0};  ///< target radar cross section

  double p = 1.0;                    ///< BS power budget (30 dBm)
  double pa = 0.031622776601683794;  ///< IRS amplification power budget (15 dBm)
  double sigma2 = 1e-10;             ///< sensor noise power (-70 dBm)
  double sigmaz2 = 1e-6;             ///< reflection noise power (-30 dBm)
  double amax = 10.0;                ///< per-element amplitude cap (20 dB)
  double pfa = 1e-3;                 ///< target false-alarm probability

  static SceneParams defaults() { return {}; }

  /// Throws std::invalid_argument on the first violated constraint.
  /// Zero reflection noise is only legal for passive (baseline) evaluation.
  void validate(bool allow_zero_reflection_noise = false) const;
};

double dbm_to_watts(double x_dbm);
double watts_to_dbm(double watts);
double db_to_amplitude(double x_db);
double db_to_power_ratio(double x_db);

/// ULA response with half-wavelength spacing: element i is exp(j*pi*i*sin(angle)).
ComplexVector steering(double angle, int k);

/// K0 * (d / d_ref)^(-ple).
double path_loss(double d, const SceneParams& params);

/// BS-IRS channel sqrt(L(d1)) e(theta2, N) e^T(theta1, Mt), N x Mt.
ComplexMatrix channel_g(const SceneParams& params);

/// Round-trip target coefficient alpha = rcs * L(d2).
Complex target_alpha(const SceneParams& params);

/// Power drawn by the amplifiers: (L(d1) * rx_power_along_theta1 + sigma_z^2) * sum(a_n^2).
/// `rx_power_along_theta1` is e^T(theta1) R_x e*(theta1).
double amplification_power(const SceneParams& params, double rx_power_along_theta1,
                           std::span<const double> amp);

}  // namespace irsdetect
