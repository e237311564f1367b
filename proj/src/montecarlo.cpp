#include "irsdetect/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "irsdetect/errors.hpp"
#include "irsdetect/numstats.hpp"

namespace irsdetect {

namespace {

constexpr std::int64_t kPartitionTrials = 2048;

// Everything about the echo model that does not change between draws.
class EchoModel {
public:
  EchoModel(const DesignPoint& design, const ComplexMatrix& x_symbols)
      : sc_(design.scene), alpha_(target_alpha(design.scene)) {
    design.validate();
    if (x_symbols.rows() != sc_.mt || x_symbols.cols() != sc_.t)
      throw std::invalid_argument("sample_received: x_symbols must be Mt x T");
    target_rx_ = steering(sc_.theta0, sc_.mr);
    const ComplexVector e0 = steering(sc_.theta0, sc_.n);
    reflect_.resize(sc_.n);
    for (int i = 0; i < sc_.n; ++i)
      reflect_(i) = e0(i) * design.amp[i] * std::polar(1.0, design.phases[i]);
    s_ = (irs_transmit_row(design).transpose() * x_symbols).transpose();
    sigma_z2_ = sc_.sigmaz2;
  }

  // Draw order per symbol: N reflection-noise entries (H1 only), then Mr sensor-noise entries.
  void sample(Hypothesis hyp, ComplexGaussian& rng, ComplexMatrix& y) const {
    y.resize(sc_.mr, sc_.t);
    for (int t = 0; t < sc_.t; ++t) {
      Complex echo{0.0, 0.0};
      if (hyp == Hypothesis::h1) {
        Complex refl{0.0, 0.0};
        for (int i = 0; i < sc_.n; ++i) refl += reflect_(i) * rng(sigma_z2_);
        echo = alpha_ * (s_(t) + refl);
      }
      for (int m = 0; m < sc_.mr; ++m) y(m, t) = echo * target_rx_(m) + rng(sc_.sigma2);
    }
  }

  const ComplexVector& target_rx() const { return target_rx_; }
  const ComplexVector& s() const { return s_; }
  Complex alpha() const { return alpha_; }

private:
  SceneParams sc_;
  Complex alpha_;
  ComplexVector target_rx_;
  ComplexVector reflect_;  // e0_n a_n exp(j phi_n)
  ComplexVector s_;        // s(t) = e^T(theta0) A Phi G x(t)
  double sigma_z2_ = 0.0;
};

// Decision rule reduced to "score > cut" plus a randomized fallback for a
// statistic that carries no information.
struct Decision {
  std::function<double(const ComplexMatrix&)> score;
  double cut = 0.0;
  bool randomized = false;
  double pfa = 0.0;
};

Decision np_decision(const DesignPoint& design, const ComplexMatrix& x, double pfa) {
  const DetectionStats st = compute_stats(design, pfa);
  auto det = std::make_shared<NpDetector>(design, x);
  const int t = design.scene.t;
  Decision d;
  d.score = [det, st, t](const ComplexMatrix& y) {
    return normalized_statistic_h0(det->statistic(y), st, t);
  };
  d.cut = st.threshold;
  return d;
}

// 2 Re{u1^H (C + sigma^2 I)^-1 y} / sqrt(2 eps), compared with Q^-1(pfa).
Decision matched_filter_decision(const EchoModel& model, const DesignPoint& design, double pfa) {
  const SceneParams& sc = design.scene;
  const double eps = deflection(design);
  Decision d;
  d.pfa = pfa;
  if (!(eps > 0)) {
    d.randomized = true;
    return d;
  }
  const double alpha2 = std::norm(model.alpha());
  const double total = sc.sigma2 + alpha2 * sc.sigmaz2 * design.amp_energy() * sc.mr;
  const double scale = 2.0 / (total * std::sqrt(2.0 * eps));
  ComplexVector weights = (model.alpha() * model.s()).conjugate();
  ComplexVector e = model.target_rx();
  d.score = [weights, e, scale](const ComplexMatrix& y) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < y.cols(); ++t) acc += (weights(t) * e.dot(y.col(t))).real();
    return scale * acc;
  };
  d.cut = gaussian_q_inv(pfa);
  return d;
}

}  // namespace

McEstimate McEstimate::from_counts(std::int64_t hits, std::int64_t trials, std::uint64_t seed) {
  if (trials <= 0) throw std::invalid_argument("McEstimate: trials must be positive");
  McEstimate e;
  e.trials = trials;
  e.seed = seed;
  e.value = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.value * (1 - e.value) / static_cast<double>(trials));
  return e;
}

ComplexMatrix make_symbols(const DesignPoint& design) {
  design.validate();
  const SceneParams& sc = design.scene;
  const TransmitCovariance& rx = design.rx;
  ComplexMatrix x(sc.mt, sc.t);
  if (rx.kind == TransmitCovariance::Kind::rank_one) {
    const double amp = std::sqrt(rx.power);
    for (int t = 0; t < sc.t; ++t)
      x.col(t) = amp * std::polar(1.0, std::numbers::pi * t * t / sc.t) * rx.direction;
    return x;
  }
  const int m = sc.mt;
  ComplexVector zc(m);
  for (int i = 0; i < m; ++i) {
    const double k = m % 2 == 0 ? double(i) * i : double(i) * (i + 1);
    zc(i) = std::polar(1.0, -std::numbers::pi * k / m);
  }
  const ComplexVector derotate = steering(sc.theta1, m).conjugate();
  const double amp = std::sqrt(rx.power / m);
  for (int t = 0; t < sc.t; ++t)
    for (int i = 0; i < m; ++i) x(i, t) = amp * derotate(i) * zc((i + t) % m);
  return x;
}

ComplexMatrix sample_received(Hypothesis hyp, const DesignPoint& design,
                              const ComplexMatrix& x_symbols, ComplexGaussian& rng) {
  ComplexMatrix y;
  EchoModel(design, x_symbols).sample(hyp, rng, y);
  return y;
}

int worker_count() {
  if (const char* env = std::getenv("IRSDETECT_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RateEstimates estimate_rates(const DesignPoint& design, DetectorKind detector, double pfa,
                             std::int64_t trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("estimate_rates: at least 1000 trials required");
  if (!(pfa > 0 && pfa < 1)) throw std::invalid_argument("estimate_rates: pfa must lie in (0, 1)");

  const ComplexMatrix x = make_symbols(design);
  const EchoModel model(design, x);
  const Decision decision = detector == DetectorKind::np_optimal
                                ? np_decision(design, x, pfa)
                                : matched_filter_decision(model, design, pfa);

  const std::int64_t parts = (trials + kPartitionTrials - 1) / kPartitionTrials;
  std::vector<std::int64_t> fa(static_cast<std::size_t>(parts), 0);
  std::vector<std::int64_t> det(static_cast<std::size_t>(parts), 0);
  std::atomic<std::int64_t> next{0};

  auto work = [&] {
    ComplexMatrix y;
    for (std::int64_t p = next++; p < parts; p = next++) {
      ComplexGaussian rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
      const std::int64_t begin = p * kPartitionTrials;
      const std::int64_t count = std::min(kPartitionTrials, trials - begin);
      std::int64_t h0_hits = 0, h1_hits = 0;
      for (std::int64_t i = 0; i < count; ++i) {
        for (Hypothesis hyp : {Hypothesis::h0, Hypothesis::h1}) {
          model.sample(hyp, rng, y);
          const bool hit = decision.randomized ? rng.engine().uniform() < decision.pfa
                                               : decision.score(y) > decision.cut;
          (hyp == Hypothesis::h0 ? h0_hits : h1_hits) += hit ? 1 : 0;
        }
      }
      fa[static_cast<std::size_t>(p)] = h0_hits;
      det[static_cast<std::size_t>(p)] = h1_hits;
    }
  };

  const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), parts));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::int64_t fa_total = 0, det_total = 0;
  for (std::int64_t p = 0; p < parts; ++p) {
    fa_total += fa[static_cast<std::size_t>(p)];
    det_total += det[static_cast<std::size_t>(p)];
  }
  return {McEstimate::from_counts(fa_total, trials, seed),
          McEstimate::from_counts(det_total, trials, seed)};
}

}  // namespace irsdetect
