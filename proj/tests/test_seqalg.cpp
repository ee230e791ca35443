#include "ampsym/seqalg.hpp"

#include <cmath>

#include "doctest.h"
#include "support/seq_gen.hpp"
#include "support/testers.hpp"

using namespace ampsym;
using namespace ampsym::seq;

namespace {

ExprPtr chain(Cx amp, std::initializer_list<int> labels, double t0 = 0.0,
              bool reversible = false) {
  return atom_chain(amp, std::vector<int>(labels), t0, reversible);
}

// Every parallel partial sum stays in the closed unit disc.
bool partial_sums_in_disc(const Expr& e) {
  bool ok = true;
  auto walk = [&ok](auto&& self, const Expr& node) -> Cx {
    return std::visit(
        [&](const auto& n) -> Cx {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, AtomicSequence>) return n.amplitude;
          if constexpr (std::is_same_v<T, Series>) return self(self, *n.left) * self(self, *n.right);
          if constexpr (std::is_same_v<T, Reverse>) return std::conj(self(self, *n.child));
          if constexpr (std::is_same_v<T, Parallel>) {
            const Cx sum = self(self, *n.left) + self(self, *n.right);
            if (std::abs(sum) > 1.0 + 1e-12) ok = false;
            return sum;
          }
        },
        node.node);
  };
  walk(walk, e);
  return ok;
}

}  // namespace

TEST_CASE("series multiplies amplitudes") {
  const ExprPtr e = series(chain(Cx(0.5), {1, 2}), chain(Cx(0.0, 0.6), {2, 3}, 1.0));
  REQUIRE(validate(e).ok);
  CHECK(evaluate(e) == Cx(0.0, 0.3));
}

TEST_CASE("parallel sums amplitudes") {
  const ExprPtr e = parallel(chain(Cx(0.3), {1, 2, 3}), chain(Cx(0.4), {1, 4, 3}));
  REQUIRE(validate(e).ok);
  CHECK(evaluate(e) == Cx(0.3 + 0.4));
}

TEST_CASE("reversal conjugates") {
  const ExprPtr e = reverse(chain(Cx(0.6, 0.8), {1, 2}, 0.0, true));
  REQUIRE(validate(e).ok);
  CHECK(evaluate(e) == Cx(0.6, -0.8));
}

TEST_CASE("probability is the squared modulus") {
  CHECK(probability(chain(Cx(0.6, 0.8), {1, 2})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(probability(chain(Cx(0.0), {1, 2})) == 0.0);
  const ExprPtr destructive =
      parallel(chain(Cx(0.5), {1, 2, 3}), chain(Cx(-0.5), {1, 4, 3}));
  CHECK(probability(destructive) == 0.0);
}

TEST_CASE("validation accepts atoms and matching series") {
  CHECK(validate(chain(Cx(0.5), {1, 2})).ok);
  CHECK(validate(series(chain(Cx(0.5), {1, 2}), chain(Cx(0.5), {2, 3}, 1.0))).ok);
}

TEST_CASE("series junction mismatch is reported with a path") {
  const ExprPtr e = series(chain(Cx(0.5), {1, 2}), chain(Cx(0.5), {5, 3}, 1.0));
  const ValidationReport report = validate(e);
  CHECK_FALSE(report.ok);
  CHECK(report.rule == "series-junction-mismatch");
  CHECK(report.path == "root");
  CHECK_THROWS_AS(evaluate(e), StructureError);
}

TEST_CASE("series junction must be atomic") {
  AtomicSequence left;
  left.outcomes = {Outcome{{1}, 0.0}, Outcome{{2, 3}, 1.0}};
  left.amplitude = 0.5;
  AtomicSequence right;
  right.outcomes = {Outcome{{2, 3}, 1.0}, Outcome{{4}, 2.0}};
  right.amplitude = 0.5;
  const ValidationReport report = validate(series(atom(left), atom(right)));
  CHECK_FALSE(report.ok);
  CHECK(report.rule == "series-junction-not-atomic");
}

TEST_CASE("parallel rejects bad shapes") {
  SUBCASE("no difference") {
    const auto report =
        validate(parallel(chain(Cx(0.1), {1, 2, 3}), chain(Cx(0.2), {1, 2, 3})));
    CHECK(report.rule == "parallel-no-difference");
  }
  SUBCASE("multiple differences") {
    const auto report =
        validate(parallel(chain(Cx(0.1), {1, 2, 3, 4}), chain(Cx(0.2), {1, 5, 6, 4})));
    CHECK(report.rule == "parallel-multiple-differences");
  }
  SUBCASE("terminal difference") {
    const auto report =
        validate(parallel(chain(Cx(0.1), {1, 2, 3}), chain(Cx(0.2), {1, 2, 4})));
    CHECK(report.rule == "parallel-terminal-difference");
  }
  SUBCASE("time mismatch") {
    const auto report =
        validate(parallel(chain(Cx(0.1), {1, 2, 3}), chain(Cx(0.2), {1, 4, 3}, 0.5)));
    CHECK(report.rule == "parallel-time-mismatch");
  }
}

TEST_CASE("atom rules") {
  CHECK(validate(chain(Cx(1.5), {1, 2})).rule == "atom-amplitude-outside-disc");
  CHECK(validate(chain(Cx(0.5), {1})).rule == "atom-too-few-outcomes");
  AtomicSequence backwards;
  backwards.outcomes = {Outcome{{1}, 1.0}, Outcome{{2}, 0.0}};
  backwards.amplitude = 0.5;
  CHECK(validate(atom(backwards)).rule == "atom-times-not-increasing");
}

TEST_CASE("reversal requires the reversible flag") {
  const auto report = validate(reverse(chain(Cx(0.5), {1, 2})));
  CHECK_FALSE(report.ok);
  CHECK(report.rule == "reverse-not-reversible");
  CHECK(validate(reverse(chain(Cx(0.5), {1, 2}, 0.0, true))).ok);
}

TEST_CASE("double reversal is the identity, exactly") {
  SampleStream rng(301);
  for (int t = 0; t < 50; ++t) {
    const ExprPtr e = testers::random_expr(rng, 3);
    CHECK(evaluate(reverse(reverse(e))) == evaluate(e));
  }
}

TEST_CASE("parallel commutes exactly") {
  SampleStream rng(302);
  for (int t = 0; t < 50; ++t) {
    const std::string a = testers::random_expr_text(rng, 2);
    const std::string b = testers::random_expr_text(rng, 2);
    ExprPtr ab, ba;
    try {
      ab = parse("par(" + a + "," + b + ")");
      ba = parse("par(" + b + "," + a + ")");
    } catch (const ParseError&) {
      continue;
    }
    CHECK(evaluate(ab) == evaluate(ba));
  }
}

TEST_CASE("series associates to relative 1e-12") {
  SampleStream rng(303);
  int checked = 0;
  while (checked < 50) {
    const std::string a = testers::random_expr_text(rng, 2);
    const std::string b = testers::random_expr_text(rng, 2);
    const std::string c = testers::random_expr_text(rng, 2);
    ExprPtr left, right;
    try {
      left = parse("ser(ser(" + a + "," + b + ")," + c + ")");
      right = parse("ser(" + a + ",ser(" + b + "," + c + "))");
    } catch (const ParseError&) {
      continue;
    }
    CHECK(testers::rel_error(evaluate(left), evaluate(right)) < 1e-12);
    ++checked;
  }
}

TEST_CASE("reversal of a series conjugates the product") {
  const ExprPtr s =
      series(chain(Cx(0.5, 0.2), {1, 2}, 0.0, true), chain(Cx(0.1, -0.7), {2, 3}, 1.0, true));
  CHECK(evaluate(reverse(s)) == std::conj(evaluate(s)));
}

TEST_CASE("probability stays in range when partial sums stay in the disc") {
  SampleStream rng(304);
  int checked = 0;
  while (checked < 100) {
    const ExprPtr e = testers::random_expr(rng, 3);
    if (!partial_sums_in_disc(*e)) continue;
    const double p = probability(e);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-9);
    ++checked;
  }
}

TEST_CASE("textual format evaluates by the Feynman rules") {
  CHECK(evaluate(parse("ser(atom(0.5,0),atom(0,0.6))")) == Cx(0.0, 0.3));
  CHECK(evaluate(parse("par(atom(0.3,0),atom(0.4,0))")) == Cx(0.3 + 0.4));
  CHECK(evaluate(parse("rev(atom(0.6,0.8))")) == Cx(0.6, -0.8));
}

TEST_CASE("parsed expressions always validate") {
  SampleStream rng(305);
  for (int t = 0; t < 200; ++t) {
    const ExprPtr e = testers::random_expr(rng, 4);
    const ValidationReport report = validate(e);
    CHECK(report.ok);
    if (!report.ok) {
      CAPTURE(to_text(e));
      CAPTURE(report.rule);
    }
  }
}

TEST_CASE("textual round trip preserves the amplitude") {
  SampleStream rng(306);
  for (int t = 0; t < 50; ++t) {
    const ExprPtr e = testers::random_expr(rng, 3);
    const ExprPtr reparsed = parse(to_text(e));
    CHECK(evaluate(reparsed) == evaluate(e));
  }
}

TEST_CASE("malformed expressions are rejected") {
  CHECK_THROWS_AS(parse("ser(atom(0.5,0)"), ParseError);
  CHECK_THROWS_AS(parse("foo(1,2)"), ParseError);
  CHECK_THROWS_AS(parse("atom(0.5)"), ParseError);
  CHECK_THROWS_AS(parse("atom(0.5,0) trailing"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("incompatible parallel coarse-grainings are rejected at parse time") {
  // The left child coarse-grains its position 2, the right its position 1;
  // no single-outcome difference exists.
  const std::string left = "ser(atom(0.1,0),par(atom(0.2,0),atom(0.3,0)))";
  const std::string right = "ser(par(atom(0.2,0),atom(0.3,0)),atom(0.1,0))";
  CHECK_THROWS_AS(parse("par(" + left + "," + right + ")"), ParseError);
}
