#pragma once

#include <complex>
#include <cstdint>

namespace ampsym {

// Counter-based deterministic sample stream: output i is splitmix64(seed +
// i * golden-gamma). The seed-to-sample mapping is part of the report
// contract and must stay stable within a release.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  // Uniform in the closed disc of the given radius, by rejection.
  std::complex<double> next_disc(double radius = 1.0) {
    for (;;) {
      const double re = next_symmetric();
      const double im = next_symmetric();
      if (re * re + im * im <= 1.0) return {radius * re, radius * im};
    }
  }

  // Uniform index in [0, n). The modulo bias is irrelevant at the sample
  // counts used here.
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace ampsym
