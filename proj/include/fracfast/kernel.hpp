#pragma once

#include <vector>

namespace fracfast {

/// Reference evaluation of the kernel shape function (1 - tau)^(-alpha).
/// Only valid on |tau| <= 1/3, the interval every compressed subinterval
/// maps into after the midpoint rescaling.
double kernel_shape(double alpha, double tau);

/// Binomial-series weights of (1 - tau)^(-alpha) about tau = 0:
/// w_0 = 1, w_k = w_{k-1} * (alpha + k - 1) / k.
std::vector<double> taylor_weights(double alpha, int degree);

/// Degree-K polynomial approximant of the kernel shape function together
/// with a certified sup-norm error on [-1/3, 1/3].
struct KernelPolynomial {
  double alpha = 0.0;
  int degree = 0;
  std::vector<double> weights;  // w_0 .. w_K
  double eps = 0.0;             // certified sup error, 0 until certify_eps ran

  double operator()(double tau) const;  // Horner evaluation
};

/// Sup of |kernel_shape - poly| over a uniform grid of `samples` points in
/// [-1/3, 1/3], inflated by 1% to absorb sampling gaps. Stores the result
/// in poly.eps and returns it.
double certify_eps(KernelPolynomial& poly, int samples = 4097);

/// Convenience: weights + certification in one call.
KernelPolynomial make_kernel(double alpha, int degree, int samples = 4097);

}  // namespace fracfast
