#include "ampsym/indist.hpp"

#include <algorithm>
#include <cmath>

namespace ampsym {

namespace {

constexpr double kStageEntryTolerance = 1e-12;

void require_same_size(const Configuration& from, const Configuration& to,
                       const char* op) {
  if (from.size() != to.size()) {
    throw DimensionError(std::string(op) + ": configuration sizes " +
                         std::to_string(from.size()) + " and " + std::to_string(to.size()) +
                         " differ");
  }
}

void require_labels_in_range(const StageMatrix& stage, const Configuration& from,
                             const Configuration& to, const char* op) {
  for (int j = 0; j < from.size(); ++j) {
    if (from.label(j) >= static_cast<int>(stage.sources())) {
      throw DimensionError(std::string(op) + ": source label " +
                           std::to_string(from.label(j) + 1) + " outside 1.." +
                           std::to_string(stage.sources()));
    }
  }
  for (int i = 0; i < to.size(); ++i) {
    if (to.label(i) >= static_cast<int>(stage.destinations())) {
      throw DimensionError(std::string(op) + ": destination label " +
                           std::to_string(to.label(i) + 1) + " outside 1.." +
                           std::to_string(stage.destinations()));
    }
  }
}

// B[j][i] = u(to[i], from[j]); see h_fast.
CMatrix transition_submatrix(const StageMatrix& stage, const Configuration& from,
                             const Configuration& to) {
  const std::size_t n = static_cast<std::size_t>(from.size());
  CMatrix b(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      b(j, i) = stage.amp(to.label(static_cast<int>(i)), from.label(static_cast<int>(j)));
    }
  }
  return b;
}

}  // namespace

std::string to_string(Statistics s) {
  return s == Statistics::boson ? "boson" : "fermion";
}

Configuration::Configuration(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw ValidationError("Configuration: at least one label required");
  }
  for (int v : labels_) {
    if (v < 0) throw ValidationError("Configuration: negative label");
  }
}

Configuration Configuration::from_one_based(std::vector<int> labels) {
  for (int& v : labels) {
    if (v < 1) throw ValidationError("Configuration: labels are 1-based");
    --v;
  }
  return Configuration(std::move(labels));
}

bool Configuration::has_repeats() const {
  std::vector<int> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

Configuration Configuration::canonical() const {
  std::vector<int> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  return Configuration(std::move(sorted));
}

std::string Configuration::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (j > 0) out += ',';
    out += std::to_string(labels_[j] + 1);
  }
  out += ')';
  return out;
}

StageMatrix::StageMatrix(CMatrix u) : u_(std::move(u)) {
  for (const Cx& z : u_.entries()) {
    if (!(std::abs(z) <= 1.0 + kStageEntryTolerance)) {
      throw ValidationError("StageMatrix: entry modulus " + std::to_string(std::abs(z)) +
                            " outside the closed unit disc");
    }
  }
}

Cx alpha_pi(const StageMatrix& stage, const Configuration& from, const Configuration& to,
            const Permutation& pi) {
  require_same_size(from, to, "alpha_pi");
  if (pi.size() != from.size()) {
    throw DimensionError("alpha_pi: permutation size " + std::to_string(pi.size()) +
                         " does not match configuration size " + std::to_string(from.size()));
  }
  require_labels_in_range(stage, from, to, "alpha_pi");
  Cx product = 1.0;
  for (int j = 0; j < from.size(); ++j) {
    product *= stage.amp(to.label(pi.image(j)), from.label(j));
  }
  return product;
}

std::vector<Cx> alpha_vector(const StageMatrix& stage, const Configuration& from,
                             const Configuration& to) {
  require_same_size(from, to, "alpha_vector");
  require_labels_in_range(stage, from, to, "alpha_vector");
  const int n = from.size();
  std::vector<Cx> alphas;
  alphas.reserve(factorial(n));
  PermutationStream stream(n);
  while (const Permutation* pi = stream.next()) {
    Cx product = 1.0;
    for (int j = 0; j < n; ++j) product *= stage.amp(to.label(pi->image(j)), from.label(j));
    alphas.push_back(product);
  }
  return alphas;
}

Cx h_bruteforce(std::span<const Cx> alphas, Statistics stats) {
  const int n = factorial_inverse(alphas.size());
  if (n < 0) {
    throw ShapeError("h_bruteforce: length " + std::to_string(alphas.size()) +
                     " is not N! for any N <= " + std::to_string(kMaxPermutationSize));
  }
  Cx total = 0.0;
  if (stats == Statistics::boson) {
    for (const Cx& a : alphas) total += a;
    return total;
  }
  const std::span<const std::int8_t> signs = detail::parity_table(n);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (signs[i] > 0) {
      total += alphas[i];
    } else {
      total -= alphas[i];
    }
  }
  return total;
}

Cx h_fast(const StageMatrix& stage, const Configuration& from, const Configuration& to,
          Statistics stats) {
  require_same_size(from, to, "h_fast");
  require_labels_in_range(stage, from, to, "h_fast");
  const int n = from.size();
  const int limit = stats == Statistics::boson ? kMaxBosonParticles : kMaxFermionParticles;
  if (n > limit) {
    throw SizeLimitError("h_fast: " + std::to_string(n) + " particles exceeds the " +
                         to_string(stats) + " limit of " + std::to_string(limit));
  }
  const CMatrix b = transition_submatrix(stage, from, to);
  return stats == Statistics::boson ? permanent_ryser(b) : determinant(b);
}

Cx g_two_stage(const StageMatrix& stage1, const StageMatrix& stage2, const Configuration& l,
               const Configuration& m, const Configuration& n, Statistics stats) {
  return h_fast(stage1, l, m, stats) * h_fast(stage2, m, n, stats);
}

std::map<Permutation, double> q_coefficients(int n, Statistics stats) {
  if (n < 1 || n > kMaxProbeParticles) {
    throw SizeLimitError("q_coefficients: n = " + std::to_string(n) + " outside 1.." +
                         std::to_string(kMaxProbeParticles));
  }
  const std::vector<Permutation> perms = all_permutations(n);
  std::vector<Cx> probe(perms.size(), Cx(0.0));
  std::map<Permutation, double> out;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    probe[k] = 1.0;
    const Cx h = h_bruteforce(probe, stats);
    probe[k] = 0.0;
    out.emplace(perms[k], h.real());
  }
  return out;
}

double isolation_factor(const StageMatrix& stage, const Configuration& from,
                        const Configuration& to, Statistics stats,
                        const std::vector<std::vector<int>>& blocks) {
  require_same_size(from, to, "isolation_factor");
  require_labels_in_range(stage, from, to, "isolation_factor");
  const int n = from.size();

  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int j : blocks[b]) {
      if (j < 0 || j >= n || owner[static_cast<std::size_t>(j)] != -1) {
        throw BlockError("isolation_factor: blocks must partition the particle indices");
      }
      owner[static_cast<std::size_t>(j)] = static_cast<int>(b);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (owner[static_cast<std::size_t>(j)] == -1) {
      throw BlockError("isolation_factor: particle " + std::to_string(j + 1) +
                       " is in no block");
    }
  }

  // Cross-block amplitudes must vanish, in both directions.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (owner[static_cast<std::size_t>(i)] == owner[static_cast<std::size_t>(j)]) continue;
      if (stage.amp(to.label(i), from.label(j)) != 0.0) {
        throw BlockError("isolation_factor: nonzero amplitude from source slot " +
                         std::to_string(j + 1) + " to destination slot " +
                         std::to_string(i + 1) + " crosses blocks");
      }
    }
  }

  double factor = 1.0;
  for (const std::vector<int>& block : blocks) {
    std::vector<int> sub_from, sub_to;
    sub_from.reserve(block.size());
    sub_to.reserve(block.size());
    for (int j : block) {
      sub_from.push_back(from.label(j));
      sub_to.push_back(to.label(j));
    }
    const Cx h = h_fast(stage, Configuration(std::move(sub_from)),
                        Configuration(std::move(sub_to)), stats);
    factor *= std::abs(h);
  }
  return factor;
}

}  // namespace ampsym
