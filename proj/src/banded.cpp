#include "dch/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "dch/errors.hpp"

namespace dch {

BandedMatrix::BandedMatrix(std::size_t size, std::size_t lower, std::size_t upper)
    : size_(size),
      lower_(lower),
      upper_(upper),
      ld_(2 * lower + upper + 1),
      data_(ld_ * size, 0.0),
      pivots_(size, 0) {}

bool BandedMatrix::in_band(std::size_t row, std::size_t col) const {
  if (row >= size_ || col >= size_) return false;
  return row <= col + lower_ && col <= row + upper_;
}

double& BandedMatrix::operator()(std::size_t row, std::size_t col) {
  return data_[index(row, col)];
}

double BandedMatrix::operator()(std::size_t row, std::size_t col) const {
  return data_[index(row, col)];
}

void BandedMatrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j0 = i > lower_ ? i - lower_ : 0;
    const std::size_t j1 = std::min(size_ - 1, i + upper_);
    double sum = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) sum += (*this)(i, j) * x[j];
    y[i] = sum;
  }
}

void BandedMatrix::solve_in_place(std::span<double> rhs) {
  const auto n = static_cast<lapack_int>(size_);
  const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, static_cast<lapack_int>(lower_),
                                        static_cast<lapack_int>(upper_), 1, data_.data(),
                                        static_cast<lapack_int>(ld_), pivots_.data(), rhs.data(), n);
  if (info > 0)
    throw NoConvergence("banded matrix is singular at pivot " + std::to_string(info));
  if (info < 0) throw Error("dgbsv rejected argument " + std::to_string(-info));
}

}  // namespace dch
