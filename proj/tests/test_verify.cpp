#include "ampsym/verify.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/testers.hpp"

using namespace ampsym;
using namespace ampsym::verify;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("g-product check passes for both statistics") {
  CHECK(check_g_product(2, 100, 7, Statistics::fermion).pass);
  CHECK(check_g_product(3, 50, 7, Statistics::boson).pass);
  CHECK(check_g_product(4, 25, 7, Statistics::fermion).pass);
  CHECK_THROWS_AS(check_g_product(5, 10, 7, Statistics::boson), SizeLimitError);
}

TEST_CASE("corrupting one Gamma entry is detected") {
  SampleStream rng(601);
  const int n = 2;
  const StageMatrix u1(testers::random_matrix(rng, n, n));
  const StageMatrix u2(testers::random_matrix(rng, n, n));
  const Configuration l = testers::random_distinct_config(rng, n, n);
  const Configuration m = testers::random_distinct_config(rng, n, n);
  const Configuration r = testers::random_distinct_config(rng, n, n);
  const std::vector<Cx> alphas = alpha_vector(u1, l, m);
  const std::vector<Cx> betas = alpha_vector(u2, m, r);
  CMatrix gamma(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) gamma(i, j) = alphas[i] * betas[j];
  }
  const Cx product = g_two_stage(u1, u2, l, m, r, Statistics::fermion);
  CHECK(g_product_residual(gamma, product, Statistics::fermion) <= 1e-12);
  gamma(0, 1) += 0.1;
  CHECK(g_product_residual(gamma, product, Statistics::fermion) >= 0.09);
}

TEST_CASE("additivity check is exact up to 1e-12") {
  CHECK(check_additivity(3, 100, 11, Statistics::boson).pass);
  CHECK(check_additivity(2, 100, 11, Statistics::fermion).pass);
  const CheckReport r = check_additivity(6, 50, 11, Statistics::fermion);
  CHECK(r.pass);
  CHECK(r.tolerance == 1e-12);

  // alpha' = 0 leaves no residual at all.
  std::vector<Cx> a = {Cx(0.3, 0.2), Cx(-0.1, 0.4)};
  std::vector<Cx> zero = {Cx(0.0), Cx(0.0)};
  std::vector<Cx> sum = a;
  for (Statistics stats : {Statistics::boson, Statistics::fermion}) {
    CHECK(h_bruteforce(sum, stats) == h_bruteforce(a, stats) + h_bruteforce(zero, stats));
  }
}

TEST_CASE("conjugation holds exactly for real coefficients") {
  CHECK(check_conjugation(HVariant{0.0, false}, 4, 100, 13).pass);
  CHECK(check_conjugation(HVariant{kPi, false}, 4, 100, 13).pass);
  CHECK(check_conjugation(HVariant{0.0, true}, 3, 100, 13).pass);
  CHECK(check_conjugation(HVariant{kPi, true}, 2, 100, 13).pass);
}

TEST_CASE("the anyon witness fails conjugation with residual 2") {
  const CheckReport r = check_conjugation(HVariant{kPi / 2, false}, 2, 64, 17);
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("anyonic variants violate conjugation by 2|sin theta||alpha21|") {
  SampleStream rng(602);
  for (int t = 0; t < 20; ++t) {
    const double theta = 0.15 + 3.0 * rng.next_unit();
    if (std::abs(std::sin(theta)) < 0.1) continue;
    const CheckReport r = check_conjugation(HVariant{theta, false}, 2, 32, 19 + t);
    // The fixed witness alpha = (0,1) guarantees a residual of 2|sin theta|.
    CHECK(r.max_residual >= 2.0 * std::abs(std::sin(theta)) - 1e-9);
    CHECK(r.max_residual >= 0.1);
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("anyonic variants require n = 2") {
  CHECK_THROWS_AS(check_conjugation(HVariant{kPi / 2, false}, 3, 10, 23), ValidationError);
}

TEST_CASE("isolation check passes at 1e-12") {
  const CheckReport boson = check_isolation(Statistics::boson, 29, 100);
  CHECK(boson.pass);
  CHECK(boson.tolerance == 1e-12);
  CHECK(check_isolation(Statistics::fermion, 29, 100).pass);
}

TEST_CASE("equal-amplitude fermion block interferes destructively") {
  // H over the N = 3 vector with u12 = u21 = 0.5 on a transposition pair.
  std::vector<Cx> alphas(6, Cx(0.0));
  alphas[0] = 0.5;  // identity
  alphas[2] = 0.5;  // (2,1,3), one transposition away
  CHECK(std::abs(h_bruteforce(alphas, Statistics::fermion)) <= 1e-15);
  CHECK(std::abs(h_bruteforce(alphas, Statistics::boson)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cauchy pair accepts exactly the derivation's solutions") {
  CHECK(check_cauchy_pair(CauchyCandidate::id(), 1000, 31).pass);
  CHECK(check_cauchy_pair(CauchyCandidate::conj(), 1000, 31).pass);

  const CheckReport zero = check_cauchy_pair(CauchyCandidate::zero(), 1000, 31);
  CHECK(zero.pass);
  CHECK(zero.note == "inadmissible: f(1) = 1");

  const CheckReport half = check_cauchy_pair(CauchyCandidate::scale(0.5), 1000, 31);
  CHECK_FALSE(half.pass);
  CHECK(half.max_residual >= 0.1);  // f(1*1) - f(1)^2 = 0.25 at the anchor

  const CheckReport phase = check_cauchy_pair(CauchyCandidate::phase(kPi / 3), 1000, 31);
  CHECK_FALSE(phase.pass);
  CHECK(phase.max_residual >= 0.1);

  CHECK(check_cauchy_pair(CauchyCandidate::scale(1.0), 100, 31).pass);  // scale(1) = id
  CHECK_FALSE(check_cauchy_pair(CauchyCandidate::scale(0.7), 100, 31).pass);
  CHECK_FALSE(check_cauchy_pair(CauchyCandidate::phase(1.0), 100, 31).pass);
}

TEST_CASE("q-parity checks are exact") {
  const CheckReport fermion = check_q_parity(5, Statistics::fermion);
  CHECK(fermion.pass);
  CHECK(fermion.max_residual == 0.0);
  CHECK(fermion.tolerance == 0.0);
  CHECK(fermion.samples == 120);
  CHECK(check_q_parity(5, Statistics::boson).pass);
  CHECK(check_q_parity(2, Statistics::fermion).pass);
}

TEST_CASE("run_suite composes deterministically") {
  SuiteConfig config;
  config.suites = {"all"};
  config.seed = 42;
  const std::vector<CheckReport> reports = run_suite(config);
  CHECK(reports.size() > 30);
  CHECK(all_required_pass(reports));

  int unexpected_failures = 0, expected_failures = 0;
  for (const CheckReport& r : reports) {
    if (r.pass) continue;
    (r.expected_fail ? expected_failures : unexpected_failures)++;
  }
  CHECK(unexpected_failures == 0);
  CHECK(expected_failures == 3);  // anyon witness + two excluded cauchy candidates

  // Same seed, same rendered reports.
  const std::vector<CheckReport> again = run_suite(config);
  REQUIRE(again.size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(render_text(again[i]) == render_text(reports[i]));
  }
}

TEST_CASE("the anyon suite contains exactly the expected-fail witness") {
  SuiteConfig config;
  config.suites = {"anyon"};
  const std::vector<CheckReport> reports = run_suite(config);
  REQUIRE(reports.size() == 1);
  CHECK_FALSE(reports[0].pass);
  CHECK(reports[0].expected_fail);
  CHECK(reports[0].max_residual >= 0.1);
  CHECK(all_required_pass(reports));
  CHECK(render_text(reports[0]).find("expected-fail (anyon exclusion)") != std::string::npos);
}

TEST_CASE("empty suite selection runs nothing") {
  CHECK(run_suite(SuiteConfig{}).empty());
}

TEST_CASE("unknown suites and tolerance targets are rejected") {
  SuiteConfig config;
  config.suites = {"nosuch"};
  CHECK_THROWS_AS(run_suite(config), ValidationError);

  config.suites = {"qparity"};
  config.tolerance_overrides = {{"nosuch", 1e-6}};
  CHECK_THROWS_AS(run_suite(config), ValidationError);
}

TEST_CASE("tolerance overrides rewrite the verdict") {
  SuiteConfig config;
  config.suites = {"anyon"};
  config.tolerance_overrides = {{"anyon", 10.0}};
  const std::vector<CheckReport> reports = run_suite(config);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].pass);  // residual 2 now under the loosened tolerance
}

TEST_CASE("report rendering carries all fields") {
  CheckReport report;
  report.name = "demo_check";
  report.samples = 12;
  report.max_residual = 3.25e-13;
  report.tolerance = 1e-12;
  report.pass = true;
  report.note = "inadmissible: f(1) = 1";
  const std::string line = render_text(report);
  CHECK(line.find("demo_check") == 0);
  CHECK(line.find("12") != std::string::npos);
  CHECK(line.find("pass") != std::string::npos);
  CHECK(line.find("[note: inadmissible: f(1) = 1]") != std::string::npos);

  const std::string json = render_json(report);
  CHECK(json.find("\"name\":\"demo_check\"") != std::string::npos);
  CHECK(json.find("\"verdict\":\"pass\"") != std::string::npos);
}

TEST_CASE("witnesses list the worst inputs first") {
  const CheckReport r = check_cauchy_pair(CauchyCandidate::scale(0.5), 200, 37);
  REQUIRE(!r.witnesses.empty());
  CHECK(r.witnesses.size() <= 5);
  CHECK(r.witnesses[0].find("residual") != std::string::npos);
}

TEST_CASE("h_variant reduces to the statistics sums at theta in {0, pi}") {
  SampleStream rng(603);
  for (int n = 2; n <= 4; ++n) {
    std::vector<Cx> alphas(factorial(n));
    for (Cx& z : alphas) z = rng.next_disc();
    CHECK(std::abs(h_variant(alphas, HVariant{0.0, false}) -
                   h_bruteforce(alphas, Statistics::boson)) <= 1e-15);
    CHECK(std::abs(h_variant(alphas, HVariant{kPi, false}) -
                   h_bruteforce(alphas, Statistics::fermion)) <= 1e-12);
  }
}
