#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ampsym/errors.hpp"
#include "ampsym/numerics.hpp"

namespace ampsym::seq {

// One recorded measurement outcome. labels lists the atomic outcomes this
// record does not distinguish between (sorted, distinct); a single label
// means the outcome is atomic, several mean it is coarse-grained.
struct Outcome {
  std::vector<int> labels;
  double time = 0.0;

  bool atomic() const { return labels.size() == 1; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// The operational counterpart of a path: a time-ordered outcome record with
// the amplitude of the recorded process. `reversible` marks records whose
// measurements immediately follow one another in time, the only case in
// which the reversal operator applies.
struct AtomicSequence {
  std::vector<Outcome> outcomes;
  Cx amplitude;
  bool reversible = false;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Series {
  ExprPtr left, right;
};
struct Parallel {
  ExprPtr left, right;
};
struct Reverse {
  ExprPtr child;
};

struct Expr {
  std::variant<AtomicSequence, Series, Parallel, Reverse> node;
};

ExprPtr atom(AtomicSequence a);
// Atom recording the given single-label outcomes at consecutive unit-spaced
// times starting at t0.
ExprPtr atom_chain(Cx amplitude, std::span<const int> labels, double t0 = 0.0,
                   bool reversible = false);
ExprPtr series(ExprPtr left, ExprPtr right);
ExprPtr parallel(ExprPtr left, ExprPtr right);
ExprPtr reverse(ExprPtr child);

// Outcome of structural validation: pass, or the first violated rule in a
// depth-first left-to-right walk, with the node path it occurred at.
struct ValidationReport {
  bool ok = true;
  std::string rule;  // e.g. "series-junction-mismatch"
  std::string path;  // e.g. "root/left/child"
};

// Structural rules:
//   - atoms have >= 2 outcomes, strictly increasing times, amplitude in the
//     closed unit disc (up to 1e-12);
//   - series children share an atomic junction outcome and have atomic
//     endpoint outcomes;
//   - parallel children record the same times and identical outcomes except
//     at exactly one non-terminal position;
//   - reversal requires every atom underneath to be reversible.
ValidationReport validate(const Expr& e);
inline ValidationReport validate(const ExprPtr& e) { return validate(*e); }

// Feynman's rules: parallel sums, series multiplies, reversal conjugates.
// Throws StructureError when validation fails. Sums are not clamped to the
// unit disc; range enforcement is the caller's concern.
Cx evaluate(const Expr& e);
inline Cx evaluate(const ExprPtr& e) { return evaluate(*e); }

// |evaluate(e)|^2.
double probability(const Expr& e);
inline double probability(const ExprPtr& e) { return probability(*e); }

// The outcome record of a valid expression: series concatenates, parallel
// coarse-grains the differing outcome, reversal mirrors the record.
std::vector<Outcome> outcome_trace(const Expr& e);

// Textual expression format: atom(<re>,<im>), ser(a,b), par(a,b), rev(e).
// Atoms carry only amplitudes; parsing lays out a canonical outcome record
// (times, labels, reversibility) so the result always validates. Parallel
// combinations whose canonical layouts cannot differ in a single outcome
// are rejected with a ParseError.
ExprPtr parse(std::string_view text);
std::string to_text(const Expr& e);
inline std::string to_text(const ExprPtr& e) { return to_text(*e); }

}  // namespace ampsym::seq
