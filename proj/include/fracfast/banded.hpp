#pragma once

#include <span>
#include <vector>

namespace fracfast {

/// Thomas elimination for a diagonally dominant tridiagonal system.
/// `sub` and `sup` have size n-1, `diag` and `rhs` size n; the solution is
/// written into `rhs`. All inputs are consumed as scratch.
void solve_tridiag(std::span<double> sub, std::span<double> diag,
                   std::span<double> sup, std::span<double> rhs);

/// General banded matrix with `kl` sub- and `ku` superdiagonals, solved by
/// LU with partial pivoting (row swaps stay inside the band, which widens
/// the upper bandwidth to kl + ku during factorization). Used for the
/// absorbing-boundary systems whose corner rows are not diagonally dominant.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  double& at(int row, int col);        // |row - col| must fit in the band
  double get(int row, int col) const;  // 0 outside the band
  void clear();

  /// Factor in place and solve; `rhs` receives the solution.
  /// Throws std::runtime_error when a pivot collapses.
  void solve(std::span<double> rhs);

 private:
  int n_, kl_, ku_;
  int stride_;                  // kl + ku + kl + 1 rows of storage
  std::vector<double> store_;   // column-major band, LAPACK-style layout
};

}  // namespace fracfast
