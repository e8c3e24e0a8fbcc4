#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dch {

/// Square band matrix in LAPACK general-band layout, with the extra kl
/// super-diagonals that partial pivoting fills in.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t size, std::size_t lower, std::size_t upper);

  std::size_t size() const { return size_; }
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }

  /// Entry (row, col); must lie inside the band.
  double& operator()(std::size_t row, std::size_t col);
  double operator()(std::size_t row, std::size_t col) const;
  bool in_band(std::size_t row, std::size_t col) const;

  void set_zero();
  /// y = A x, using the unfactored entries.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Solves A x = rhs in place with partial pivoting. Destroys the matrix.
  /// Throws NoConvergence if the matrix is exactly singular.
  void solve_in_place(std::span<double> rhs);

 private:
  std::size_t index(std::size_t row, std::size_t col) const {
    return col * ld_ + (lower_ + upper_ + row - col);
  }

  std::size_t size_;
  std::size_t lower_;
  std::size_t upper_;
  std::size_t ld_;
  std::vector<double> data_;
  std::vector<int> pivots_;
};

}  // namespace dch
