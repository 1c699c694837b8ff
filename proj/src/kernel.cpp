#include "fracfast/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfast {

namespace {
constexpr double kTauBound = 1.0 / 3.0;
}

double kernel_shape(double alpha, double tau) {
  if (std::abs(tau) > kTauBound + 1e-15) {
    throw std::domain_error("kernel_shape: |tau| exceeds 1/3");
  }
  return std::pow(1.0 - tau, -alpha);
}

std::vector<double> taylor_weights(double alpha, int degree) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("taylor_weights: alpha must lie in (0,1)");
  }
  if (degree < 0) {
    throw std::domain_error("taylor_weights: degree must be nonnegative");
  }
  std::vector<double> w(static_cast<std::size_t>(degree) + 1);
  w[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    w[k] = w[k - 1] * (alpha + k - 1) / k;
  }
  return w;
}

double KernelPolynomial::operator()(double tau) const {
  double acc = 0.0;
  for (std::size_t k = weights.size(); k-- > 0;) {
    acc = acc * tau + weights[k];
  }
  return acc;
}

double certify_eps(KernelPolynomial& poly, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("certify_eps: need at least 2 samples");
  }
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double tau = -kTauBound + (2.0 * kTauBound * s) / (samples - 1);
    const double err = std::abs(kernel_shape(poly.alpha, tau) - poly(tau));
    if (err > sup) sup = err;
  }
  poly.eps = 1.01 * sup;
  return poly.eps;
}

KernelPolynomial make_kernel(double alpha, int degree, int samples) {
  KernelPolynomial poly;
  poly.alpha = alpha;
  poly.degree = degree;
  poly.weights = taylor_weights(alpha, degree);
  certify_eps(poly, samples);
  return poly;
}

}  // namespace fracfast
