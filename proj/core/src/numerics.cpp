#include "ampsym/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace ampsym {

namespace {

void require_square(const CMatrix& m, const char* op) {
  if (!m.square() || m.rows() == 0) {
    throw DimensionError(std::string(op) + ": requires a square matrix with n >= 1, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("CMatrix: " + std::to_string(entries_.size()) +
                         " entries for a " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " matrix");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Cx determinant(const CMatrix& m) {
  require_square(m, "determinant");
  const std::size_t n = m.rows();
  std::vector<Cx> a(m.entries().begin(), m.entries().end());

  double sign = 1.0;
  Cx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double mag = std::abs(a[r * n + k]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best < 1e-300) return 0.0;  // degenerate input
    if (pivot != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a[pivot * n + c], a[k * n + c]);
      sign = -sign;
    }
    det *= a[k * n + k];
    for (std::size_t r = k + 1; r < n; ++r) {
      const Cx f = a[r * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) a[r * n + c] -= f * a[k * n + c];
    }
  }
  return sign * det;
}

// Nijenhuis-Wilf form of Ryser's formula:
//   perm(A) = (-1)^(n-1) * 2 * sum_{S subset of first n-1 columns}
//             (-1)^|S| * prod_i (x_i + sum_{j in S} a_ij),
// with x_i = a_i(n-1) - (sum_j a_ij)/2. Each Gray-code step toggles one
// column in/out of the running row sums.
Cx permanent_ryser(const CMatrix& m) {
  require_square(m, "permanent_ryser");
  const std::size_t n = m.rows();
  if (n > kMaxPermanentSize) {
    throw SizeLimitError("permanent_ryser: n = " + std::to_string(n) +
                         " exceeds the limit of " + std::to_string(kMaxPermanentSize));
  }

  std::vector<Cx> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    Cx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j);
    row[i] = m(i, n - 1) - 0.5 * s;
  }

  Cx prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) prod *= row[i];
  Cx total = prod;  // S = {} contributes with sign +1

  double subset_sign = 1.0;
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(k));
    const std::uint64_t bit = std::uint64_t{1} << j;
    const bool insert = !(gray & bit);
    gray ^= bit;
    subset_sign = -subset_sign;

    prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      row[i] += insert ? m(i, j) : -m(i, j);
      prod *= row[i];
    }
    total += subset_sign * prod;
  }

  const double front = (n % 2 == 0) ? -2.0 : 2.0;  // (-1)^(n-1) * 2
  return front * total;
}

Cx permanent_naive(const CMatrix& m) {
  require_square(m, "permanent_naive");
  const std::size_t n = m.rows();
  if (n > kMaxNaivePermanentSize) {
    throw SizeLimitError("permanent_naive: n = " + std::to_string(n) +
                         " exceeds the limit of " + std::to_string(kMaxNaivePermanentSize));
  }

  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  Cx total = 0.0;
  do {
    Cx term = 1.0;
    for (std::size_t j = 0; j < n; ++j) term *= m(j, image[j]);
    total += term;
  } while (std::next_permutation(image.begin(), image.end()));
  return total;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Cx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

}  // namespace ampsym
