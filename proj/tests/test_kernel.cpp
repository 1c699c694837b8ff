#include <doctest.h>

#include <cmath>

#include "fracfast/kernel.hpp"
#include "test_util.hpp"

using namespace fracfast;

namespace {

// Independent route to the binomial-series weights: w_k = Gamma(alpha+k) /
// (Gamma(alpha) * k!), evaluated through lgamma.
double binomial_weight_oracle(double alpha, int k) {
  return std::exp(std::lgamma(alpha + k) - std::lgamma(alpha) - std::lgamma(k + 1.0));
}

}  // namespace

TEST_CASE("taylor weights match the binomial-coefficient oracle") {
  CHECK(taylor_weights(0.7, 0) == std::vector<double>{1.0});

  const auto w2 = taylor_weights(0.5, 2);
  CHECK(w2[0] == 1.0);
  CHECK(w2[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w2[2] == doctest::Approx(0.375).epsilon(1e-15));

  const auto w4 = taylor_weights(0.5, 4);
  CHECK(w4[3] == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(w4[4] == doctest::Approx(0.2734375).epsilon(1e-15));

  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto w = taylor_weights(alpha, 12);
    for (int k = 0; k <= 12; ++k) {
      CHECK(w[k] == doctest::Approx(binomial_weight_oracle(alpha, k)).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(taylor_weights(0.0, 3), std::domain_error);
  CHECK_THROWS_AS(taylor_weights(1.0, 3), std::domain_error);
  CHECK_THROWS_AS(taylor_weights(0.5, -1), std::domain_error);
}

TEST_CASE("weight recurrence w_k * k = w_{k-1} * (alpha + k - 1)") {
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto w = taylor_weights(alpha, 12);
    for (int k = 1; k <= 12; ++k) {
      CHECK(testutil::rel_diff(w[k] * k, w[k - 1] * (alpha + k - 1)) < 1e-14);
      CHECK(w[k] > 0.0);
      CHECK(w[k] < w[k - 1]);  // ratio (alpha+k-1)/k < 1 for alpha in (0,1)
    }
  }
}

TEST_CASE("kernel shape closed-form values and domain guard") {
  CHECK(kernel_shape(0.5, 0.0) == 1.0);
  CHECK(kernel_shape(0.5, 1.0 / 3.0) ==
        doctest::Approx(std::pow(2.0 / 3.0, -0.5)).epsilon(1e-15));
  CHECK(kernel_shape(0.9, -1.0 / 3.0) ==
        doctest::Approx(std::pow(4.0 / 3.0, -0.9)).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_shape(0.5, 0.34), std::domain_error);
  CHECK_THROWS_AS(kernel_shape(0.5, -0.5), std::domain_error);
}

TEST_CASE("certified eps for the default pairings") {
  // Dense-grid sup oracle: the remainder of the degree-4 series at +1/3 is
  // (2/3)^(-1/2) - P4(1/3); the sampled sup picks it up and the 1% margin
  // sits on top.
  auto p4 = make_kernel(0.5, 4);
  double tail = std::pow(2.0 / 3.0, -0.5);
  for (int k = 4; k >= 0; --k) tail -= taylor_weights(0.5, 4)[k] / std::pow(3.0, k);
  CHECK(p4.eps == doctest::Approx(1.01 * tail).epsilon(1e-6));
  CHECK(p4.eps > 1.3e-3);
  CHECK(p4.eps < 1.6e-3);

  auto p9 = make_kernel(0.5, 9);
  CHECK(p9.eps > 1e-6);
  CHECK(p9.eps < 1e-5);
}

TEST_CASE("certification is self-consistent and monotone in the degree") {
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    double prev = 0.0;
    for (int degree = 0; degree <= 12; ++degree) {
      auto poly = make_kernel(alpha, degree);
      // Re-check on a denser grid than certification used.
      double sup = 0.0;
      const int dense = 16385;
      for (int s = 0; s < dense; ++s) {
        const double tau = -1.0 / 3.0 + (2.0 / 3.0) * s / (dense - 1);
        sup = std::max(sup, std::abs(kernel_shape(alpha, tau) - poly(tau)));
      }
      CHECK(sup <= poly.eps);
      if (degree > 0) CHECK(poly.eps <= prev);
      prev = poly.eps;
    }
  }
}

TEST_CASE("certify_eps rejects degenerate sampling") {
  auto poly = make_kernel(0.5, 4);
  CHECK_THROWS_AS(certify_eps(poly, 1), std::invalid_argument);
}
