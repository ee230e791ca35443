#include "ampsym/numerics.hpp"

#include "doctest.h"
#include "support/testers.hpp"

using namespace ampsym;
using testers::rel_error;

namespace {

CMatrix mat2(Cx a, Cx b, Cx c, Cx d) { return CMatrix(2, 2, {a, b, c, d}); }

}  // namespace

TEST_CASE("determinant of small matrices") {
  CHECK(determinant(mat2(1, 2, 3, 4)) == Cx(-2.0));
  CHECK(determinant(CMatrix::identity(4)) == Cx(1.0));
  CHECK(determinant(CMatrix(1, 1, {Cx(0.25, -0.5)})) == Cx(0.25, -0.5));
}

TEST_CASE("determinant matches the signed permutation-sum oracle") {
  SampleStream rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix m = testers::random_matrix(rng, 6, 6);
    CHECK(rel_error(determinant(m), testers::determinant_permsum(m)) < 1e-10);
  }
  for (std::size_t n = 1; n <= 8; ++n) {
    const CMatrix m = testers::random_matrix(rng, n, n);
    CHECK(rel_error(determinant(m), testers::determinant_permsum(m)) < 1e-10);
  }
}

TEST_CASE("determinant rejects non-square input") {
  CHECK_THROWS_AS(determinant(CMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(determinant(CMatrix(0, 0)), DimensionError);
}

TEST_CASE("determinant of multiplied matrices factors") {
  SampleStream rng(102);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = testers::random_matrix(rng, 5, 5);
    const CMatrix b = testers::random_matrix(rng, 5, 5);
    CHECK(rel_error(determinant(matmul(a, b)), determinant(a) * determinant(b)) < 1e-9);
  }
}

TEST_CASE("determinant with two identical columns is zero") {
  SampleStream rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix m = testers::random_matrix(rng, 5, 5);
    for (std::size_t r = 0; r < 5; ++r) m(r, 3) = m(r, 1);
    CHECK(std::abs(determinant(m)) <= 1e-12);
  }
}

TEST_CASE("permanent of small matrices") {
  CHECK(permanent_ryser(mat2(1, 2, 3, 4)) == Cx(10.0));
  CHECK(permanent_naive(mat2(1, 2, 3, 4)) == Cx(10.0));
  CHECK(permanent_naive(mat2(0, 1, 1, 0)) == Cx(1.0));
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    CHECK(permanent_ryser(CMatrix::identity(n)) == Cx(1.0));
  }
}

TEST_CASE("permanent and determinant agree on 1x1") {
  const CMatrix m(1, 1, {Cx(0.3, 0.7)});
  CHECK(permanent_ryser(m) == determinant(m));
  CHECK(permanent_naive(m) == determinant(m));
}

TEST_CASE("Ryser permanent matches the permutation-sum oracle") {
  SampleStream rng(104);
  const CMatrix m7 = testers::random_matrix(rng, 7, 7);
  CHECK(rel_error(permanent_ryser(m7), testers::permanent_permsum(m7)) < 1e-10);

  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const CMatrix m = testers::random_matrix(rng, n, n);
      CHECK(rel_error(permanent_ryser(m), permanent_naive(m)) < 1e-10);
    }
  }
}

TEST_CASE("naive and Ryser permanents agree on a 5x5") {
  SampleStream rng(105);
  const CMatrix m = testers::random_matrix(rng, 5, 5);
  CHECK(rel_error(permanent_ryser(m), permanent_naive(m)) < 1e-12);
}

TEST_CASE("permanent size limits") {
  CHECK_THROWS_AS(permanent_ryser(CMatrix(31, 31)), SizeLimitError);
  CHECK_THROWS_AS(permanent_naive(CMatrix(11, 11)), SizeLimitError);
  CHECK_THROWS_AS(permanent_ryser(CMatrix(2, 3)), DimensionError);
}

TEST_CASE("matmul identities and associativity") {
  SampleStream rng(106);
  const CMatrix u = testers::random_matrix(rng, 4, 4);
  CHECK(matmul(CMatrix::identity(4), u) == u);
  CHECK(matmul(u, CMatrix::identity(4)) == u);

  const CMatrix a = testers::random_matrix(rng, 4, 4);
  const CMatrix b = testers::random_matrix(rng, 4, 4);
  const CMatrix c = testers::random_matrix(rng, 4, 4);
  const CMatrix left = matmul(matmul(a, b), c);
  const CMatrix right = matmul(a, matmul(b, c));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(left(i, j) - right(i, j)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(matmul(CMatrix(2, 3), CMatrix(2, 3)), DimensionError);
}

TEST_CASE("CMatrix entry count must match its shape") {
  CHECK_THROWS_AS(CMatrix(2, 2, {Cx(1.0)}), DimensionError);
}
