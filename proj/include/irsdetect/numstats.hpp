#pragma once

namespace irsdetect {

/// Non-central chi-squared law with an even number of degrees of freedom.
struct NoncentralChi2 {
  int dof = 2;
  double lambda = 0.0;

  void validate() const;
};

/// Standard normal right tail, 0.5 * erfc(x / sqrt(2)).
double gaussian_q(double x);
double gaussian_q_inv(double p);

/// Right tail P(X > x), evaluated as a Poisson(lambda/2) mixture of central
/// chi-squared tails with a certified truncation error below 1e-13.
double ncx2_tail(const NoncentralChi2& dist, double x);

/// Smallest x with ncx2_tail(dist, x) <= p, found by bisection on
/// [0, lambda + dof + 40 sqrt(2 dof + 4 lambda) + 40]. p = 1 maps to 0.
double ncx2_tail_inv(const NoncentralChi2& dist, double p);

/// Density through the modified-Bessel closed form; 0 for x < 0.
double ncx2_pdf(const NoncentralChi2& dist, double x);

/// log I_v(z) for v >= 0, z >= 0, without overflow for large z.
double log_bessel_i(double v, double z);

}  // namespace irsdetect
