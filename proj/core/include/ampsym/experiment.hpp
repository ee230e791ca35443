#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ampsym/indist.hpp"

namespace ampsym {

// What the detectors registered at one inner measurement time: a single
// atomic configuration, an explicit coarse-graining over several, or the
// coarse-graining over every distinct-label configuration (sum_distinct).
struct IntermediateSpec {
  enum class Kind { atomic, coarse, sum_distinct };
  Kind kind = Kind::atomic;
  std::vector<Configuration> configurations;  // 1 for atomic, >= 1 for coarse

  static IntermediateSpec atomic(Configuration c);
  static IntermediateSpec coarse(std::vector<Configuration> cs);
  static IntermediateSpec sum_distinct();
};

// A run of N indistinguishable particles through a chain of stages.
// intermediates has one entry per inner measurement time (stages - 1).
struct Experiment {
  Statistics stats = Statistics::boson;
  std::vector<StageMatrix> stages;
  Configuration initial{std::vector<int>{0}};
  std::vector<IntermediateSpec> intermediates;
  std::vector<Configuration> finals;
  bool finals_all_distinct = false;  // expand finals over C(M, N) canonical tuples
  bool normalize = false;            // rescale probabilities over the listed finals
};

// Dimension-chain and bound checks; throws on violation.
void validate_experiment(const Experiment& x);

// Amplitude of the full sequence for an experiment with exactly one final
// configuration: every coarse intermediate is expanded into its atomic
// configurations and the per-choice stage products are summed.
Cx sequence_amplitude(const Experiment& x);

struct OutcomeRow {
  Configuration final;
  Cx amplitude;
  double probability;
};

struct OutcomeDistribution {
  std::vector<OutcomeRow> rows;  // ordered by configuration
  bool normalized = false;
  // Finals with repeated labels: their probabilities are raw |H|^2, with no
  // occupancy weighting applied.
  std::vector<Configuration> repeated_label_warnings;
};

// One row per final configuration. When normalize is set the probabilities
// are rescaled to sum to 1 over the listed finals ("conditional on listed
// outcomes"); amplitudes are always raw.
OutcomeDistribution distribution(const Experiment& x);

struct ComposeCheckReport {
  std::size_t finals_checked = 0;
  std::size_t intermediates_summed = 0;
  double max_residual = 0.0;
};

// Consistency of stage composition for a two-stage fermion experiment whose
// intermediate outcome is coarse-grained over all distinct N-subsets: the
// coarse sum of stage products must equal h_fast on the matrix-product
// stage (the Cauchy-Binet identity). Bosons are unsupported: the analogous
// sum needs repeated-occupancy configurations with occupancy weights.
ComposeCheckReport compose_check(const Experiment& x);

// All canonical (ascending) distinct-label configurations of n particles
// over m outcomes, in lexicographic order.
std::vector<Configuration> distinct_configurations(int m, int n);

// Parses the experiment file format:
//   { "statistics": "boson"|"fermion",
//     "stages": [ [[ [re,im], ... ] rows... ], ... ],
//     "initial": [1,2,...],
//     "intermediates": [ {"atomic":[...]} | {"coarse":[[...],...]} | "sum_distinct", ... ],
//     "finals": [ [..], .. ] | "all_distinct",
//     "normalize": true|false }
// Labels are 1-based. Malformed input raises ParseError with a line/path
// diagnostic.
Experiment parse_experiment(const std::string& text);
Experiment parse_experiment(std::istream& in);

}  // namespace ampsym
