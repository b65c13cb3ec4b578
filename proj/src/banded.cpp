#include "nhsw/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nhsw {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(kl + ku + 1) {
  if (n <= 0) throw std::invalid_argument("banded matrix dimension must be positive");
  if (kl < 0 || ku < 0 || kl > kMaxBandwidth || ku > kMaxBandwidth)
    throw std::invalid_argument("banded matrix bandwidth must be in [0, 2]");
  band_.assign(static_cast<std::size_t>(n_ * width_), 0.0);
}

void BandedMatrix::add(int row, int col, double value) {
  if (row < 0 || row >= n_ || col < 0 || col >= n_)
    throw std::out_of_range("banded matrix index out of range");
  if (in_band(row, col)) {
    band(row, col) += value;
    return;
  }
  for (auto& c : corners_) {
    if (c.row == row && c.col == col) {
      c.value += value;
      return;
    }
  }
  corners_.push_back({row, col, value});
}

void BandedMatrix::set_identity_row(int row) {
  for (int col = std::max(0, row - kl_); col <= std::min(n_ - 1, row + ku_); ++col)
    band(row, col) = col == row ? 1.0 : 0.0;
  corners_.erase(std::remove_if(corners_.begin(), corners_.end(),
                                [row](const Corner& c) { return c.row == row; }),
                 corners_.end());
}

double BandedMatrix::at(int row, int col) const {
  if (in_band(row, col)) return band(row, col);
  double v = 0.0;
  for (const auto& c : corners_)
    if (c.row == row && c.col == col) v += c.value;
  return v;
}

std::vector<double> BandedMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("vector size mismatch");
  std::vector<double> y(x.size(), 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      s += band(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  for (const auto& c : corners_)
    y[static_cast<std::size_t>(c.row)] += c.value * x[static_cast<std::size_t>(c.col)];
  return y;
}

bool BandedMatrix::diagonally_dominant() const {
  std::vector<double> off(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      if (j != i) off[static_cast<std::size_t>(i)] += std::abs(band(i, j));
  for (const auto& c : corners_) off[static_cast<std::size_t>(c.row)] += std::abs(c.value);
  for (int i = 0; i < n_; ++i)
    if (!(std::abs(band(i, i)) > off[static_cast<std::size_t>(i)])) return false;
  return true;
}

std::vector<std::vector<double>> BandedMatrix::dense() const {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n_),
                                     std::vector<double>(static_cast<std::size_t>(n_), 0.0));
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = band(i, j);
  for (const auto& c : corners_)
    a[static_cast<std::size_t>(c.row)][static_cast<std::size_t>(c.col)] += c.value;
  return a;
}

std::vector<double> BandedMatrix::solve_band(const std::vector<double>& lu,
                                             const std::vector<int>& ipiv,
                                             std::vector<double> b) const {
  const lapack_int ldab = 2 * kl_ + ku_ + 1;
  const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, lu.data(), ldab,
                                         ipiv.data(), b.data(), n_);
  if (info != 0) throw std::runtime_error("banded back-substitution failed");
  return b;
}

std::vector<double> BandedMatrix::solve(const std::vector<double>& b) const {
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("vector size mismatch");

  // LAPACK band storage: column-major, with kl extra rows for fill-in.
  const lapack_int ldab = 2 * kl_ + ku_ + 1;
  std::vector<double> lu(static_cast<std::size_t>(ldab * n_), 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      lu[static_cast<std::size_t>(kl_ + ku_ + i - j + j * ldab)] = band(i, j);
  std::vector<int> ipiv(static_cast<std::size_t>(n_));
  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, lu.data(), ldab, ipiv.data());
  if (info != 0)
    throw std::runtime_error("banded factorization is singular at pivot " + std::to_string(info));

  std::vector<double> x = solve_band(lu, ipiv, b);

  if (!corners_.empty()) {
    // A = B + U V^T with one rank-one term per distinct corner column.
    std::vector<int> cols;
    for (const auto& c : corners_)
      if (std::find(cols.begin(), cols.end(), c.col) == cols.end()) cols.push_back(c.col);
    const int m = static_cast<int>(cols.size());
    std::vector<std::vector<double>> z(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      std::vector<double> u(static_cast<std::size_t>(n_), 0.0);
      for (const auto& c : corners_)
        if (c.col == cols[static_cast<std::size_t>(k)]) u[static_cast<std::size_t>(c.row)] += c.value;
      z[static_cast<std::size_t>(k)] = solve_band(lu, ipiv, std::move(u));
    }
    // small system (I + V^T Z) y = V^T x, column-major
    std::vector<double> s(static_cast<std::size_t>(m * m), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      const auto cr = static_cast<std::size_t>(cols[static_cast<std::size_t>(r)]);
      for (int k = 0; k < m; ++k)
        s[static_cast<std::size_t>(r + k * m)] = z[static_cast<std::size_t>(k)][cr] + (r == k ? 1.0 : 0.0);
      rhs[static_cast<std::size_t>(r)] = x[cr];
    }
    std::vector<int> piv(static_cast<std::size_t>(m));
    if (LAPACKE_dgesv(LAPACK_COL_MAJOR, m, 1, s.data(), m, piv.data(), rhs.data(), m) != 0)
      throw std::runtime_error("periodic corner correction is singular");
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n_; ++i)
        x[static_cast<std::size_t>(i)] -= z[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                                          rhs[static_cast<std::size_t>(k)];
  }

  // Normwise backward error: the check must not depend on the conditioning,
  // which grows like 1/dx^2 for the dispersive operators.
  const std::vector<double> ax = multiply(x);
  std::vector<double> row_sum(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
      row_sum[static_cast<std::size_t>(i)] += std::abs(band(i, j));
  for (const auto& c : corners_) row_sum[static_cast<std::size_t>(c.row)] += std::abs(c.value);
  double res = 0.0, bnorm = 0.0, anorm = 0.0, xnorm = 0.0;
  for (int i = 0; i < n_; ++i) {
    const auto k = static_cast<std::size_t>(i);
    res = std::max(res, std::abs(ax[k] - b[k]));
    bnorm = std::max(bnorm, std::abs(b[k]));
    anorm = std::max(anorm, row_sum[k]);
    xnorm = std::max(xnorm, std::abs(x[k]));
  }
  const double scale = anorm * xnorm + bnorm;
  if (!(res <= 1e-10 * scale)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "banded solve residual %.3e exceeds 1e-10 (|A||x| + |b|) = %.3e",
                  res, 1e-10 * scale);
    throw std::runtime_error(buf);
  }
  return x;
}

}  // namespace nhsw
