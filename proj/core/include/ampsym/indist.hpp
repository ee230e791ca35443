#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ampsym/errors.hpp"
#include "ampsym/numerics.hpp"
#include "ampsym/perms.hpp"

namespace ampsym {

// sigma = 0 sums all permutations with weight +1 (permanent), sigma = 1
// weights them by sgn (determinant). These two values exhaust the
// consistent choices; nothing else is constructible here.
enum class Statistics : int { boson = 0, fermion = 1 };

inline int sigma(Statistics s) { return static_cast<int>(s); }
std::string to_string(Statistics s);

// The tuple of outcome labels registered by the N detectors at one
// measurement time. Labels are 0-based internally and 1-based in all file
// formats and CLI output. Repeats are allowed; see h_fast on what they
// imply.
class Configuration {
 public:
  explicit Configuration(std::vector<int> labels);
  static Configuration from_one_based(std::vector<int> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  int label(int j) const { return labels_[static_cast<std::size_t>(j)]; }
  std::span<const int> labels() const { return labels_; }

  bool has_repeats() const;
  // Labels in ascending order; the canonical representative of all
  // reorderings of the same detector events.
  Configuration canonical() const;

  std::string to_string() const;  // 1-based, e.g. "(1,2)"

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration& a, const Configuration& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  std::vector<int> labels_;
};

// Single-particle amplitude table of one stage: entry (m, l) is the
// amplitude of one particle's transition l -> m. Every entry must lie in
// the closed unit disc (up to 1e-12).
class StageMatrix {
 public:
  explicit StageMatrix(CMatrix u);

  const CMatrix& matrix() const { return u_; }
  std::size_t destinations() const { return u_.rows(); }
  std::size_t sources() const { return u_.cols(); }
  Cx amp(int dest, int source) const {
    return u_(static_cast<std::size_t>(dest), static_cast<std::size_t>(source));
  }

 private:
  CMatrix u_;
};

inline constexpr int kMaxBosonParticles = 30;
inline constexpr int kMaxFermionParticles = 500;
inline constexpr int kMaxProbeParticles = 8;

// Amplitude of the distinguishable-particle transition in which the
// particle measured at source slot j is later found at destination slot
// pi(j): the product over j of u(to[pi(j)], from[j]).
Cx alpha_pi(const StageMatrix& stage, const Configuration& from, const Configuration& to,
            const Permutation& pi);

// All N! distinguishable-transition amplitudes in iterate order; the input
// convention of h_bruteforce.
std::vector<Cx> alpha_vector(const StageMatrix& stage, const Configuration& from,
                             const Configuration& to);

// H by direct summation: sum_i sgn(pi_i)^sigma * alphas[i], with alphas in
// iterate order. The reference route against the kernel-backed h_fast.
Cx h_bruteforce(std::span<const Cx> alphas, Statistics stats);

// H through the dense kernels: permanent (sigma = 0) or determinant
// (sigma = 1) of B with B[j][i] = u(to[i], from[j]). The convention fixes
// the transpose ambiguity so that the identity permutation carries
// coefficient +1; both kernels are transpose-invariant, so the choice is
// observationally neutral. Repeated labels are accepted; for fermions they
// force a repeated row or column and hence a zero amplitude.
Cx h_fast(const StageMatrix& stage, const Configuration& from, const Configuration& to,
          Statistics stats);

// Two-stage amplitude through an atomic intermediate configuration m:
// h_fast(stage1, l, m) * h_fast(stage2, m, n). The product side of the
// G-product law.
Cx g_two_stage(const StageMatrix& stage1, const StageMatrix& stage2, const Configuration& l,
               const Configuration& m, const Configuration& n, Statistics stats);

// Coefficient of every permutation in H, obtained by probing h_bruteforce
// with indicator amplitude vectors. Equals sgn(pi)^sigma. Requires n <= 8.
std::map<Permutation, double> q_coefficients(int n, Statistics stats);

// Modulus product of per-block H values for a stage whose amplitude is zero
// between different blocks of the given particle partition. Equals |h_fast|
// on the full stage (tested, not assumed). Throws BlockError if the
// partition contradicts the zero structure.
double isolation_factor(const StageMatrix& stage, const Configuration& from,
                        const Configuration& to, Statistics stats,
                        const std::vector<std::vector<int>>& blocks);

}  // namespace ampsym
