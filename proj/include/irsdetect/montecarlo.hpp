#pragma once

#include <cstdint>

#include "irsdetect/baselines.hpp"
#include "irsdetect/rng.hpp"

namespace irsdetect {

enum class Hypothesis { h0, h1 };

/// Empirical probability with its binomial standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  static McEstimate from_counts(std::int64_t hits, std::int64_t trials, std::uint64_t seed);
};

struct RateEstimates {
  McEstimate pfa_hat;
  McEstimate pd_hat;
};

/// Known BS symbol block (Mt x T) whose sample covariance realizes design.rx.
///
/// Rank-one covariances use x(t) = sqrt(p) w exp(j pi t^2 / T). The isotropic
/// covariance uses cyclic shifts of a Zadoff-Chu sequence de-rotated by
/// e*(theta1): every symbol puts exactly p on the IRS direction, and the
/// sample covariance equals (p / Mt) I whenever T is a multiple of Mt.
ComplexMatrix make_symbols(const DesignPoint& design);

/// One draw of the Mr x T received block under `hyp`.
ComplexMatrix sample_received(Hypothesis hyp, const DesignPoint& design,
                              const ComplexMatrix& x_symbols, ComplexGaussian& rng);

/// Empirical false-alarm and detection rates for `detector` on `design`.
///
/// Thresholds come from the analytic calibration. Trials are split into fixed
/// partitions of 2048 with seeds derive_seed(seed, partition), so results are
/// identical for any worker count.
RateEstimates estimate_rates(const DesignPoint& design, DetectorKind detector, double pfa,
                             std::int64_t trials, std::uint64_t seed);

/// Worker threads: IRSDETECT_WORKERS if set, else hardware concurrency.
int worker_count();

}  // namespace irsdetect
