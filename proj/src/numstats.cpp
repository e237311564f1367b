#include "irsdetect/numstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace irsdetect {

namespace {

// Per-side bound on the discarded Poisson mass.
constexpr double kTruncation = 1e-13;
// Recurrences are re-anchored from the log domain this often.
constexpr int kAnchorEvery = 32;

double log_poisson(double mean, long k) {
  return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

// x^a e^{-x} / Gamma(a + 1): the step between consecutive upper regularized
// incomplete gamma functions, Q(a + 1, x) = Q(a, x) + step(a, x).
double log_gamma_step(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a + 1.0);
}

// Sum_k w_k Q(a + k, y) over the Poisson(mean) weights w_k.
double poisson_mixture_tail(double a, double y, double mean) {
  const long mode = static_cast<long>(std::floor(mean));
  const double q_mode = boost::math::gamma_q(a + static_cast<double>(mode), y);
  const double w_mode = std::exp(log_poisson(mean, mode));

  double sum = w_mode * q_mode;

  // Upward: weights fall once k > mean; remaining mass after k is bounded by
  // w_k r / (1 - r) with r = mean / (k + 1).
  {
    double w = w_mode, q = q_mode, step = 0.0;
    for (long k = mode;; ++k) {
      const double r = mean / static_cast<double>(k + 1);
      if (r < 1.0 && w * r / (1.0 - r) < kTruncation) break;
      const double ak = a + static_cast<double>(k);
      if ((k - mode) % kAnchorEvery == 0) {
        w = std::exp(log_poisson(mean, k));
        step = std::exp(log_gamma_step(ak, y));
        if (k != mode) q = boost::math::gamma_q(ak, y);
      }
      q = std::min(1.0, q + step);
      w *= r;
      step *= y / (ak + 1.0);
      sum += w * q;
    }
  }

  // Downward: Q(a + k - 1) = Q(a + k) - step(a + k - 1). Mass below k is
  // bounded by w_k r / (1 - r) with r = k / mean.
  {
    double w = w_mode, q = q_mode, step = 0.0;
    for (long k = mode; k > 0; --k) {
      const double r = static_cast<double>(k) / mean;
      if (r < 1.0 && w * r / (1.0 - r) < kTruncation) break;
      const double prev = a + static_cast<double>(k - 1);
      if ((mode - k) % kAnchorEvery == 0) {
        w = std::exp(log_poisson(mean, k));
        step = std::exp(log_gamma_step(prev, y));
        if (k != mode) q = boost::math::gamma_q(a + static_cast<double>(k), y);
      }
      q = std::max(0.0, q - step);
      w *= r;
      step *= prev / y;
      sum += w * q;
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

// Log of the Bessel series term (z/2)^(2k+v) / (k! Gamma(k+v+1)).
double log_bessel_term(double v, double log_half_z, long k) {
  const double kd = static_cast<double>(k);
  return (2.0 * kd + v) * log_half_z - std::lgamma(kd + 1.0) - std::lgamma(kd + v + 1.0);
}

}  // namespace

void NoncentralChi2::validate() const {
  if (dof < 2 || dof % 2 != 0)
    throw std::invalid_argument("NoncentralChi2: dof must be a positive even integer");
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw std::invalid_argument("NoncentralChi2: lambda must be finite and >= 0");
}

double gaussian_q(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("gaussian_q: non-finite input");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double gaussian_q_inv(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("gaussian_q_inv: p must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double ncx2_tail(const NoncentralChi2& dist, double x) {
  dist.validate();
  if (!(x >= 0)) throw std::invalid_argument("ncx2_tail: x must be >= 0");
  if (x == 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = dist.dof / 2.0;
  const double y = x / 2.0;
  if (dist.lambda == 0) return boost::math::gamma_q(a, y);
  return poisson_mixture_tail(a, y, dist.lambda / 2.0);
}

double ncx2_tail_inv(const NoncentralChi2& dist, double p) {
  dist.validate();
  if (!(p > 0 && p <= 1)) throw std::invalid_argument("ncx2_tail_inv: p must lie in (0, 1)");
  if (p == 1) return 0.0;

  const double dof = dist.dof;
  double lo = 0.0;
  double hi = dist.lambda + dof + 40.0 * std::sqrt(2.0 * dof + 4.0 * dist.lambda) + 40.0;
  // The bracket holds for every p the double tail can resolve; widen for the rest.
  while (ncx2_tail(dist, hi) > p) {
    lo = hi;
    hi *= 2.0;
  }
  // Bisect down to adjacent doubles; the tail is monotone so this is exact
  // up to the evaluation error of ncx2_tail itself.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ncx2_tail(dist, mid) > p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double log_bessel_i(double v, double z) {
  if (!(v >= 0) || !(z >= 0)) throw std::invalid_argument("log_bessel_i: v, z must be >= 0");
  if (z == 0) return v == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (z < 500.0) return std::log(boost::math::cyl_bessel_i(v, z));

  // Power series summed in the log domain around its largest term.
  const double log_half_z = std::log(z / 2.0);
  const double peak = 0.5 * (std::sqrt(v * v + z * z) - v);
  const long k0 = static_cast<long>(std::floor(peak));
  const double top = log_bessel_term(v, log_half_z, k0);
  double sum = 1.0;
  for (long k = k0 + 1;; ++k) {
    const double rel = std::exp(log_bessel_term(v, log_half_z, k) - top);
    sum += rel;
    if (rel < 1e-17) break;
  }
  for (long k = k0 - 1; k >= 0; --k) {
    const double rel = std::exp(log_bessel_term(v, log_half_z, k) - top);
    sum += rel;
    if (rel < 1e-17) break;
  }
  return top + std::log(sum);
}

double ncx2_pdf(const NoncentralChi2& dist, double x) {
  dist.validate();
  if (x < 0) return 0.0;
  const double nu = dist.dof;
  const double lambda = dist.lambda;
  if (lambda == 0) {
    const double a = nu / 2.0;
    if (x == 0) return a == 1.0 ? 0.5 : 0.0;
    return std::exp((a - 1.0) * std::log(x) - x / 2.0 - a * std::numbers::ln2 - std::lgamma(a));
  }
  if (x == 0) return nu == 2 ? 0.5 * std::exp(-lambda / 2.0) : 0.0;
  const double order = nu / 2.0 - 1.0;
  const double log_density = -std::numbers::ln2 + 0.25 * (nu - 2.0) * std::log(x / lambda) -
                             0.5 * (x + lambda) + log_bessel_i(order, std::sqrt(lambda * x));
  return std::exp(log_density);
}

}  // namespace irsdetect
