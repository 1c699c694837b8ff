#include <doctest.h>

#include <random>
#include <vector>

#include "fracfast/banded.hpp"
#include "test_util.hpp"

using namespace fracfast;

TEST_CASE("Thomas solver matches dense elimination on dominant systems") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 50;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> sub(n - 1), diag(n), sup(n - 1), rhs(n);
    std::vector<double> dense(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
      diag[i] = 4.0 + uni(rng);
      rhs[i] = uni(rng);
      dense[i * n + i] = diag[i];
      if (i + 1 < n) {
        sub[i] = uni(rng);
        sup[i] = uni(rng);
        dense[(i + 1) * n + i] = sub[i];
        dense[i * n + i + 1] = sup[i];
      }
    }
    auto want = testutil::dense_solve(dense, rhs);
    std::vector<double> x = rhs;
    solve_tridiag(sub, diag, sup, x);
    for (int i = 0; i < n; ++i) CHECK(testutil::rel_diff(x[i], want[i]) < 1e-12);
  }
}

TEST_CASE("banded LU with pivoting matches dense elimination") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = 40;
  for (int trial = 0; trial < 5; ++trial) {
    BandedMatrix band(n, 2, 2);
    std::vector<double> dense(n * n, 0.0), rhs(n);
    for (int r = 0; r < n; ++r) {
      rhs[r] = uni(rng);
      for (int c = std::max(0, r - 2); c <= std::min(n - 1, r + 2); ++c) {
        const double v = uni(rng) + (r == c ? 0.5 : 0.0);
        band.at(r, c) = v;
        dense[r * n + c] = v;
      }
    }
    auto want = testutil::dense_solve(dense, rhs);
    std::vector<double> x = rhs;
    band.solve(x);
    for (int i = 0; i < n; ++i) CHECK(testutil::rel_diff(x[i], want[i]) < 1e-9);
  }
}

TEST_CASE("banded LU handles boundary-closure shaped rows") {
  // Rows 0 and n-1 reach two columns inward with a weak diagonal, the way
  // the absorbing-boundary rows do; pivoting keeps this stable.
  const int n = 30;
  BandedMatrix band(n, 2, 2);
  std::vector<double> dense(n * n, 0.0), rhs(n);
  auto put = [&](int r, int c, double v) {
    band.at(r, c) = v;
    dense[r * n + c] = v;
  };
  put(0, 0, -2000.0);
  put(0, 1, -40.0);
  put(0, 2, 2000.0);
  put(n - 1, n - 3, -2000.0);
  put(n - 1, n - 2, 40.0);
  put(n - 1, n - 1, 2000.0);
  for (int r = 1; r < n - 1; ++r) {
    put(r, r - 1, -1.0e5);
    put(r, r, 2.0e5 + 12.0);
    put(r, r + 1, -1.0e5);
  }
  for (int r = 0; r < n; ++r) rhs[r] = std::sin(1.0 + r);
  auto want = testutil::dense_solve(dense, rhs);
  std::vector<double> x = rhs;
  band.solve(x);
  for (int i = 0; i < n; ++i) CHECK(testutil::rel_diff(x[i], want[i]) < 1e-9);

  BandedMatrix singular(3, 1, 1);
  std::vector<double> b{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(singular.solve(b), std::runtime_error);
}
