#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ampsym/errors.hpp"

namespace ampsym {

using Cx = std::complex<double>;

// Dense complex matrix, row-major. Indices are 0-based in the API; file
// formats and CLI output use 1-based labels.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> entries);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Cx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Cx& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Cx> entries() const { return entries_; }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Cx> entries_;
};

inline constexpr std::size_t kMaxPermanentSize = 30;
inline constexpr std::size_t kMaxNaivePermanentSize = 10;

// det(m) by LU with partial pivoting on modulus. A pivot of modulus below
// 1e-300 yields exactly 0.
Cx determinant(const CMatrix& m);

// perm(m) by Ryser's inclusion-exclusion in the n*2^(n-1) form: proper
// subsets of the first n-1 columns are visited in Gray-code order and the
// running row sums are updated in O(n) per subset. Requires n <= 30.
Cx permanent_ryser(const CMatrix& m);

// perm(m) by direct enumeration of S_n; the oracle for permanent_ryser.
// Requires n <= 10.
Cx permanent_naive(const CMatrix& m);

CMatrix matmul(const CMatrix& a, const CMatrix& b);

}  // namespace ampsym
