#include "fracfast/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfast {

void solve_tridiag(std::span<double> sub, std::span<double> diag,
                   std::span<double> sup, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || sub.size() + 1 != n || sup.size() + 1 != n) {
    throw std::invalid_argument("solve_tridiag: shape mismatch");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i - 1] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  }
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), stride_(2 * kl + ku + 1),
      store_(static_cast<std::size_t>(stride_) * n, 0.0) {
  if (n < 1 || kl < 0 || ku < 0) {
    throw std::invalid_argument("BandedMatrix: bad shape");
  }
}

double& BandedMatrix::at(int row, int col) {
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || row - col > kl_ ||
      col - row > ku_) {
    throw std::out_of_range("BandedMatrix::at outside the band");
  }
  // Entry (row, col) lives at offset kl + ku + row - col of column col.
  return store_[static_cast<std::size_t>(col) * stride_ + kl_ + ku_ + row - col];
}

double BandedMatrix::get(int row, int col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || row - col > kl_ ||
      col - row > ku_ + kl_) {
    return 0.0;
  }
  return store_[static_cast<std::size_t>(col) * stride_ + kl_ + ku_ + row - col];
}

void BandedMatrix::clear() { store_.assign(store_.size(), 0.0); }

void BandedMatrix::solve(std::span<double> rhs) {
  if (static_cast<int>(rhs.size()) != n_) {
    throw std::invalid_argument("BandedMatrix::solve: rhs size mismatch");
  }
  const int width = kl_ + ku_;  // upper fill width after pivoting
  auto entry = [&](int row, int col) -> double& {
    return store_[static_cast<std::size_t>(col) * stride_ + kl_ + ku_ + row - col];
  };

  for (int k = 0; k < n_; ++k) {
    // Partial pivot within the kl rows below the diagonal.
    int pivot = k;
    double best = std::abs(entry(k, k));
    const int last_row = std::min(n_ - 1, k + kl_);
    for (int r = k + 1; r <= last_row; ++r) {
      const double v = std::abs(entry(r, k));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("BandedMatrix::solve: singular system");
    if (pivot != k) {
      const int last_col = std::min(n_ - 1, k + width);
      for (int c = k; c <= last_col; ++c) std::swap(entry(k, c), entry(pivot, c));
      std::swap(rhs[k], rhs[pivot]);
    }
    const double d = entry(k, k);
    const int last_col = std::min(n_ - 1, k + width);
    for (int r = k + 1; r <= last_row; ++r) {
      const double m = entry(r, k) / d;
      if (m == 0.0) continue;
      for (int c = k + 1; c <= last_col; ++c) entry(r, c) -= m * entry(k, c);
      rhs[r] -= m * rhs[k];
      entry(r, k) = 0.0;
    }
  }
  for (int k = n_ - 1; k >= 0; --k) {
    double acc = rhs[k];
    const int last_col = std::min(n_ - 1, k + width);
    for (int c = k + 1; c <= last_col; ++c) acc -= entry(k, c) * rhs[c];
    rhs[k] = acc / entry(k, k);
  }
}

}  // namespace fracfast
