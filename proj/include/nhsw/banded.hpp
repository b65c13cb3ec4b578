#pragma once

#include <vector>

namespace nhsw {

/// Square matrix with at most two sub- and super-diagonals, plus an optional
/// set of far-off-band "corner" entries produced by periodic wrap-around.
/// The band is factored with LAPACK; corners are folded in with a low-rank
/// Woodbury correction.
class BandedMatrix {
 public:
  static constexpr int kMaxBandwidth = 2;

  BandedMatrix(int n, int kl = kMaxBandwidth, int ku = kMaxBandwidth);

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  /// Accumulates value into entry (row, col). Entries outside the band are
  /// stored as corners.
  void add(int row, int col, double value);
  /// Replaces row with the identity row.
  void set_identity_row(int row);
  double at(int row, int col) const;

  std::vector<double> multiply(const std::vector<double>& x) const;

  /// Solves A x = b. Throws std::runtime_error if the factorization is
  /// singular or the backward-error check
  /// ||Ax - b|| <= 1e-10 (||A|| ||x|| + ||b||) fails (infinity norms).
  std::vector<double> solve(const std::vector<double>& b) const;

  /// True when |a_ii| > sum_{j != i} |a_ij| for every row.
  bool diagonally_dominant() const;

  std::vector<std::vector<double>> dense() const;
  bool has_corners() const { return !corners_.empty(); }

 private:
  struct Corner {
    int row;
    int col;
    double value;
  };

  bool in_band(int row, int col) const { return col - row <= ku_ && row - col <= kl_; }
  double& band(int row, int col) { return band_[static_cast<std::size_t>(row * width_ + (col - row + kl_))]; }
  double band(int row, int col) const {
    return band_[static_cast<std::size_t>(row * width_ + (col - row + kl_))];
  }
  std::vector<double> solve_band(const std::vector<double>& lu, const std::vector<int>& ipiv,
                                 std::vector<double> b) const;

  int n_;
  int kl_;
  int ku_;
  int width_;
  std::vector<double> band_;  // row-major, width_ = kl + ku + 1 entries per row
  std::vector<Corner> corners_;
};

}  // namespace nhsw
