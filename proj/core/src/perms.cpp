#include "ampsym/perms.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>

namespace ampsym {

namespace {

void require_size(int n, const char* op) {
  if (n < 1 || n > kMaxPermutationSize) {
    throw SizeLimitError(std::string(op) + ": n = " + std::to_string(n) +
                         " outside 1.." + std::to_string(kMaxPermutationSize));
  }
}

}  // namespace

Permutation Permutation::identity(int n) {
  require_size(n, "Permutation::identity");
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::from_images(std::vector<int> images) {
  const int n = static_cast<int>(images.size());
  require_size(n, "Permutation::from_images");
  std::vector<char> seen(images.size(), 0);
  for (int v : images) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw ValidationError("Permutation: images must be a bijection on {0.." +
                            std::to_string(n - 1) + "}");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const {
  for (int j = 0; j < size(); ++j) {
    if (images_[static_cast<std::size_t>(j)] != j) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::string out = "(";
  for (int j = 0; j < size(); ++j) {
    if (j > 0) out += ',';
    out += std::to_string(image(j) + 1);
  }
  out += ')';
  return out;
}

int parity(const Permutation& p) {
  const int n = p.size();
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  int cycles = 0;
  for (int j = 0; j < n; ++j) {
    if (visited[static_cast<std::size_t>(j)]) continue;
    ++cycles;
    int k = j;
    while (!visited[static_cast<std::size_t>(k)]) {
      visited[static_cast<std::size_t>(k)] = 1;
      k = p.image(k);
    }
  }
  return ((n - cycles) % 2 == 0) ? +1 : -1;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) {
    throw DimensionError("compose: sizes " + std::to_string(p.size()) + " and " +
                         std::to_string(q.size()) + " differ");
  }
  std::vector<int> images(static_cast<std::size_t>(p.size()));
  for (int j = 0; j < p.size(); ++j) {
    images[static_cast<std::size_t>(j)] = p.image(q.image(j));
  }
  return Permutation::from_images(std::move(images));
}

namespace {

std::vector<int> identity_images_for_iterate(int n) {
  require_size(n, "iterate");
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  return images;
}

}  // namespace

PermutationStream::PermutationStream(int n)
    : current_(Permutation(identity_images_for_iterate(n))) {}

const Permutation* PermutationStream::next() {
  if (exhausted_) return nullptr;
  if (first_) {
    first_ = false;
    ++emitted_;
    return &current_;
  }
  if (!std::next_permutation(current_.images_.begin(), current_.images_.end())) {
    exhausted_ = true;
    return nullptr;
  }
  ++emitted_;
  return &current_;
}

std::vector<Permutation> all_permutations(int n) {
  PermutationStream stream(n);
  std::vector<Permutation> out;
  out.reserve(factorial(n));
  while (const Permutation* p = stream.next()) out.push_back(*p);
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

int factorial_inverse(std::uint64_t length) {
  for (int n = 1; n <= kMaxPermutationSize; ++n) {
    if (factorial(n) == length) return n;
  }
  return -1;
}

namespace detail {

std::span<const std::int8_t> parity_table(int n) {
  require_size(n, "parity_table");
  static std::array<std::vector<std::int8_t>, kMaxPermutationSize + 1> tables;
  static std::array<std::once_flag, kMaxPermutationSize + 1> flags;
  auto& slot = tables[static_cast<std::size_t>(n)];
  std::call_once(flags[static_cast<std::size_t>(n)], [&slot, n] {
    slot.reserve(factorial(n));
    PermutationStream stream(n);
    while (const Permutation* p = stream.next()) {
      slot.push_back(static_cast<std::int8_t>(parity(*p)));
    }
  });
  return slot;
}

}  // namespace detail

}  // namespace ampsym
