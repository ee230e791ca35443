#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ampsym/errors.hpp"

namespace ampsym {

inline constexpr int kMaxPermutationSize = 10;

// Element of the symmetric group S_n. images()[j] is the 0-based image of
// position j; serialization is 1-based, e.g. "(2,3,1)".
class Permutation {
 public:
  static Permutation identity(int n);
  // Validates that images is a bijection on {0..n-1}.
  static Permutation from_images(std::vector<int> images);

  int size() const { return static_cast<int>(images_.size()); }
  int image(int j) const { return images_[static_cast<std::size_t>(j)]; }
  std::span<const int> images() const { return images_; }

  bool is_identity() const;
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  friend class PermutationStream;
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
  std::vector<int> images_;
};

// +1 for even permutations, -1 for odd, by cycle decomposition.
int parity(const Permutation& p);

// (p o q)(j) = p(q(j)).
Permutation compose(const Permutation& p, const Permutation& q);

// Streams the n! elements of S_n in lexicographic order of their image
// tuples, identity first. The stream position is the stable permutation
// index used in amplitude vectors, file formats and reports.
class PermutationStream {
 public:
  explicit PermutationStream(int n);  // requires 1 <= n <= 10

  // Returns the next permutation, or nullptr when exhausted. The pointee
  // is invalidated by the following call.
  const Permutation* next();

  std::uint64_t emitted() const { return emitted_; }

 private:
  Permutation current_;
  bool exhausted_ = false;
  bool first_ = true;
  std::uint64_t emitted_ = 0;
};

// Materializes iterate order; convenient for n small enough to hold.
std::vector<Permutation> all_permutations(int n);

std::uint64_t factorial(int n);

// Recovers n from a vector of length n!, or -1 if the length is not a
// factorial of any n <= 10. Length 1 is taken as n = 1.
int factorial_inverse(std::uint64_t length);

namespace detail {
// parity() of every element of S_n in iterate order, memoized. Backs the
// brute-force H sums.
std::span<const std::int8_t> parity_table(int n);
}  // namespace detail

}  // namespace ampsym
