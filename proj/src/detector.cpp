#include "irsdetect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <stdexcept>

#include "irsdetect/errors.hpp"
#include "irsdetect/numstats.hpp"

namespace irsdetect {

namespace {

void check_pfa(double pfa, const char* where) {
  if (!(pfa > 0 && pfa <= 1))
    throw std::invalid_argument(std::string(where) + ": pfa must lie in (0, 1]");
}

struct NoiseTerms {
  double alpha2;   // |alpha|^2
  double energy;   // sum a_n^2
  double refl;     // c = sigma_z^2 |alpha|^2 sum a_n^2
  double k1;       // c / (sigma^2 + c Mr)
  double residue;  // 1 - k1 Mr = sigma^2 / (sigma^2 + c Mr)
};

NoiseTerms noise_terms(const DesignPoint& design) {
  const SceneParams& sc = design.scene;
  NoiseTerms nt{};
  nt.alpha2 = std::norm(target_alpha(sc));
  nt.energy = design.amp_energy();
  if (sc.sigmaz2 <= 0 || nt.energy <= 0 || nt.alpha2 <= 0)
    throw DegenerateDesign(
        "NP detector needs reflection noise, a nonzero target coefficient and nonzero "
        "amplification; score this design with the matched filter");
  nt.refl = sc.sigmaz2 * nt.alpha2 * nt.energy;
  const double total = sc.sigma2 + nt.refl * sc.mr;
  nt.k1 = nt.refl / total;
  nt.residue = sc.sigma2 / total;
  return nt;
}

}  // namespace

TransmitCovariance TransmitCovariance::rank_one(const ComplexVector& direction, double power) {
  if (direction.size() < 1) throw std::invalid_argument("TransmitCovariance: empty direction");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("TransmitCovariance: direction must have unit norm");
  if (!(power >= 0)) throw std::invalid_argument("TransmitCovariance: power must be >= 0");
  TransmitCovariance rx;
  rx.kind = Kind::rank_one;
  rx.direction = direction;
  rx.mt = static_cast<int>(direction.size());
  rx.power = power;
  return rx;
}

TransmitCovariance TransmitCovariance::isotropic(int mt, double power) {
  if (mt < 1) throw std::invalid_argument("TransmitCovariance: mt must be >= 1");
  if (!(power >= 0)) throw std::invalid_argument("TransmitCovariance: power must be >= 0");
  TransmitCovariance rx;
  rx.kind = Kind::isotropic;
  rx.mt = mt;
  rx.power = power;
  return rx;
}

TransmitCovariance TransmitCovariance::mrt(const SceneParams& scene, double power) {
  ComplexVector w = steering(scene.theta1, scene.mt).conjugate() / std::sqrt(double(scene.mt));
  return rank_one(w, power);
}

double TransmitCovariance::quadratic(const ComplexVector& row) const {
  if (row.size() != mt) throw std::invalid_argument("TransmitCovariance: dimension mismatch");
  if (kind == Kind::isotropic) return power / mt * row.squaredNorm();
  return power * std::norm(row.cwiseProduct(direction).sum());
}

ComplexMatrix TransmitCovariance::dense() const {
  if (kind == Kind::isotropic) return ComplexMatrix::Identity(mt, mt) * (power / mt);
  return power * direction * direction.adjoint();
}

double DesignPoint::amp_energy() const {
  double s = 0.0;
  for (double a : amp) s += a * a;
  return s;
}

double DesignPoint::rx_power_along_theta1() const {
  return rx.quadratic(steering(scene.theta1, scene.mt));
}

double DesignPoint::amplification_power() const {
  return irsdetect::amplification_power(scene, rx_power_along_theta1(), amp);
}

void DesignPoint::validate() const {
  scene.validate(true);
  const auto n = static_cast<std::size_t>(scene.n);
  if (phases.size() != n || amp.size() != n)
    throw std::invalid_argument("DesignPoint: phases and amp must have N entries");
  for (double ph : phases)
    if (!std::isfinite(ph)) throw std::invalid_argument("DesignPoint: phases must be finite");
  for (double a : amp)
    if (!(a >= 0) || !std::isfinite(a))
      throw std::invalid_argument("DesignPoint: gains must be finite and >= 0");
  if (rx.mt != scene.mt) throw std::invalid_argument("DesignPoint: transmit covariance is not Mt x Mt");
  if (!(rx.power >= 0)) throw std::invalid_argument("DesignPoint: transmit power must be >= 0");
}

bool DesignPoint::feasible(double rel_slack) const {
  validate();
  for (double a : amp)
    if (a > scene.amax * (1 + rel_slack)) return false;
  if (rx.power > scene.p * (1 + rel_slack)) return false;
  return amplification_power() <= scene.pa * (1 + rel_slack);
}

ComplexVector irs_transmit_row(const DesignPoint& design) {
  design.validate();
  const SceneParams& sc = design.scene;
  const ComplexVector e0 = steering(sc.theta0, sc.n);
  const ComplexVector e2 = steering(sc.theta2, sc.n);
  Complex gain{0.0, 0.0};
  for (int i = 0; i < sc.n; ++i)
    gain += e0(i) * design.amp[i] * std::polar(1.0, design.phases[i]) * e2(i);
  return std::sqrt(path_loss(sc.d1, sc)) * gain * steering(sc.theta1, sc.mt);
}

double beam_power_theta0(const DesignPoint& design) {
  return design.rx.quadratic(irs_transmit_row(design));
}

double DetectionStats::raw_threshold() const {
  return threshold * k1 * mr / 2.0 - offset_per_symbol * t;
}

DetectionStats stats_from_parameters(int t, double lambda1, double g, double pfa) {
  if (t < 1) throw std::invalid_argument("stats_from_parameters: t must be >= 1");
  if (!(lambda1 >= 0) || !(g >= 0))
    throw std::invalid_argument("stats_from_parameters: lambda1 and g must be >= 0");
  check_pfa(pfa, "stats_from_parameters");
  DetectionStats st;
  st.t = t;
  st.lambda1 = lambda1;
  st.g = g;
  st.lambda2 = lambda1 * (1 + g);
  st.threshold = ncx2_tail_inv({2 * t, lambda1}, pfa);
  return st;
}

DetectionStats compute_noncentrality(const DesignPoint& design) {
  design.validate();
  const SceneParams& sc = design.scene;
  const NoiseTerms nt = noise_terms(design);

  DetectionStats st;
  st.t = sc.t;
  st.mr = sc.mr;
  st.k1 = nt.k1;
  st.p_theta0 = beam_power_theta0(design);
  st.lambda1 = 2.0 * sc.sigma2 * sc.t * st.p_theta0 /
               (nt.energy * nt.energy * sc.mr * sc.sigmaz2 * sc.sigmaz2 * nt.alpha2);
  st.g = nt.alpha2 * sc.mr * nt.energy * sc.sigmaz2 / sc.sigma2;
  st.lambda2 = st.lambda1 * (1 + st.g);
  st.offset_per_symbol = nt.residue * nt.residue * nt.alpha2 * st.p_theta0 / (sc.sigma2 * nt.k1);
  st.threshold = std::numeric_limits<double>::quiet_NaN();
  return st;
}

DetectionStats compute_stats(const DesignPoint& design, double pfa) {
  check_pfa(pfa, "compute_stats");
  DetectionStats st = compute_noncentrality(design);
  st.threshold = ncx2_tail_inv({2 * st.t, st.lambda1}, pfa);
  return st;
}

double pd_exact(const DetectionStats& stats, int t, double pfa) {
  if (t < 1) throw std::invalid_argument("pd_exact: t must be >= 1");
  check_pfa(pfa, "pd_exact");
  const double scale = 1.0 + stats.g;
  const double tau = ncx2_tail_inv({2 * t, stats.lambda1}, pfa);
  return ncx2_tail({2 * t, stats.lambda1 * scale}, tau / scale);
}

double pd_approx(const DetectionStats& stats, int t, double pfa) {
  if (t < 1) throw std::invalid_argument("pd_approx: t must be >= 1");
  check_pfa(pfa, "pd_approx");
  if (pfa == 1) return 1.0;
  const double g = stats.g;
  const double lam = stats.lambda1;
  const double td = t;
  const double q = gaussian_q_inv(pfa);
  const double num = std::sqrt(td + lam) * q - g * td - lam * ((1 + g) * (1 + g) - 1) / 2.0;
  const double den = (1 + g) * std::sqrt(td + lam * (1 + g));
  return std::clamp(gaussian_q(num / den), 0.0, 1.0);
}

NpDetector::NpDetector(const DesignPoint& design, const ComplexMatrix& x_symbols) {
  const SceneParams& sc = design.scene;
  if (x_symbols.rows() != sc.mt || x_symbols.cols() != sc.t)
    throw std::invalid_argument("np_statistic: x_symbols must be Mt x T");
  const NoiseTerms nt = noise_terms(design);
  const Complex alpha = target_alpha(sc);
  const ComplexVector row = irs_transmit_row(design);
  target_rx_ = steering(sc.theta0, sc.mr);
  weighted_s_ = (alpha * (row.transpose() * x_symbols)).conjugate().transpose();
  quad_coef_ = nt.k1 / sc.sigma2;
  lin_coef_ = 2.0 * nt.residue / sc.sigma2;
}

double NpDetector::statistic(const ComplexMatrix& y) const {
  if (y.rows() != target_rx_.size() || y.cols() != weighted_s_.size())
    throw std::invalid_argument("np_statistic: y must be Mr x T");
  double quad = 0.0, lin = 0.0;
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    const Complex proj = target_rx_.dot(y.col(t));  // e^H y(t)
    quad += std::norm(proj);
    lin += (weighted_s_(t) * proj).real();
  }
  return quad_coef_ * quad + lin_coef_ * lin;
}

double np_statistic(const ComplexMatrix& y, const DesignPoint& design,
                    const ComplexMatrix& x_symbols) {
  return NpDetector(design, x_symbols).statistic(y);
}

double normalized_statistic_h0(double raw, const DetectionStats& stats, int t) {
  return (raw + stats.offset_per_symbol * t) / (stats.k1 * stats.mr / 2.0);
}

double normalized_statistic_h1(double raw, const DetectionStats& stats, int t) {
  return (raw + stats.offset_per_symbol * t) / (stats.k1 * stats.mr * (1 + stats.g) / 2.0);
}

}  // namespace irsdetect
