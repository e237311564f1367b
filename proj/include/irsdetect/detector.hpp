#pragma once

#include <vector>

#include "irsdetect/scene.hpp"

namespace irsdetect {

/// Sample covariance of the BS transmit block.
///
/// Optimal designs are rank one (a unit-norm direction w with power p,
/// R_x = p w w^H); the reflective-only benchmark uses the isotropic
/// covariance (p / Mt) I. No dense matrix is stored.
struct TransmitCovariance {
  enum class Kind { rank_one, isotropic };

  Kind kind = Kind::rank_one;
  ComplexVector direction;  // unit norm, Mt entries (rank_one only)
  int mt = 0;
  double power = 0.0;  // tr(R_x)

  static TransmitCovariance rank_one(const ComplexVector& direction, double power);
  static TransmitCovariance isotropic(int mt, double power);
  /// MRT toward the IRS: direction e*(theta1, Mt) / sqrt(Mt).
  static TransmitCovariance mrt(const SceneParams& scene, double power);

  /// row^T R_x conj(row) for a length-Mt row vector.
  double quadratic(const ComplexVector& row) const;
  ComplexMatrix dense() const;
};

/// One candidate joint design (transmit covariance, IRS phases and gains).
struct DesignPoint {
  SceneParams scene;
  std::vector<double> phases;  // radians, length N
  std::vector<double> amp;     // linear gains, length N
  TransmitCovariance rx;

  /// sum a_n^2
  double amp_energy() const;
  /// e^T(theta1) R_x e*(theta1)
  double rx_power_along_theta1() const;
  /// Left side of the amplification power constraint.
  double amplification_power() const;
  /// Constraints on phases, gains, BS power and IRS power, with relative slack.
  bool feasible(double rel_slack = 1e-9) const;
  /// Dimension and range checks; throws std::invalid_argument.
  void validate() const;
};

/// Row vector b with s(t) = b^T x(t) = e^T(theta0, N) A Phi G x(t).
ComplexVector irs_transmit_row(const DesignPoint& design);

/// Beam power toward the target, e^T(theta0,N) A Phi G R_x G^H Phi^H A^H e*(theta0,N).
double beam_power_theta0(const DesignPoint& design);

/// Scalars of the normalized detector statistics.
///
/// Under H0 the normalized statistic is chi^2_{2T}(lambda1), under H1 the
/// H1-normalized statistic is chi^2_{2T}(lambda2) with lambda2 = lambda1 (1 + g).
struct DetectionStats {
  int t = 1;
  int mr = 1;
  double k1 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double g = 0.0;
  double p_theta0 = 0.0;
  double threshold = 0.0;          // on the H0-normalized statistic
  double offset_per_symbol = 0.0;  // (1 - k1 Mr)^2 |alpha|^2 P(theta0) / (sigma^2 k1)

  /// Detection threshold on the raw statistic T(y).
  double raw_threshold() const;
};

/// Stats from (t, lambda1, g) alone; enough for pd_exact / pd_approx.
DetectionStats stats_from_parameters(int t, double lambda1, double g, double pfa);

/// All scalars except the threshold (left NaN); cheap, used inside searches.
DetectionStats compute_noncentrality(const DesignPoint& design);

/// Throws DegenerateDesign when sigma_z^2 = 0, alpha = 0 or all gains vanish.
DetectionStats compute_stats(const DesignPoint& design, double pfa);

/// Exact P_D at false-alarm probability pfa (non-central chi-squared tails).
double pd_exact(const DetectionStats& stats, int t, double pfa);

/// Large-T Gaussian approximation of pd_exact, clamped to [0, 1].
double pd_approx(const DetectionStats& stats, int t, double pfa);

/// Neyman-Pearson statistic y^H C (C + s^2 I)^-1 y / s^2 + 2 Re{u1^H (C + s^2 I)^-1 y}
/// in its O(Mr T) rank-one form. y is Mr x T, x_symbols is Mt x T.
double np_statistic(const ComplexMatrix& y, const DesignPoint& design,
                    const ComplexMatrix& x_symbols);

/// Precomputed NP detector for a fixed design and symbol block; reused
/// across Monte Carlo trials.
class NpDetector {
public:
  NpDetector(const DesignPoint& design, const ComplexMatrix& x_symbols);

  double statistic(const ComplexMatrix& y) const;

private:
  ComplexVector target_rx_;  // e(theta0, Mr)
  ComplexVector weighted_s_; // conj(alpha s(t))
  double quad_coef_ = 0.0;   // k1 / sigma^2
  double lin_coef_ = 0.0;    // 2 (1 - k1 Mr) / sigma^2
};

double normalized_statistic_h0(double raw, const DetectionStats& stats, int t);
double normalized_statistic_h1(double raw, const DetectionStats& stats, int t);

}  // namespace irsdetect
