#include "ampsym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ampsym/rng.hpp"

namespace ampsym::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::string cx_str(Cx z) { return fmt("%.6g%+.6gi", z.real(), z.imag()); }

// Accumulates residuals and keeps the five worst inputs.
class ResidualTracker {
 public:
  void add(double residual, std::string description) {
    ++samples_;
    max_ = std::max(max_, residual);
    worst_.emplace_back(residual, std::move(description));
    std::sort(worst_.begin(), worst_.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (worst_.size() > 5) worst_.resize(5);
  }

  CheckReport finish(std::string name, double tolerance) const {
    CheckReport report;
    report.name = std::move(name);
    report.samples = samples_;
    report.max_residual = max_;
    report.tolerance = tolerance;
    report.pass = max_ <= tolerance;
    for (const auto& [residual, description] : worst_) {
      report.witnesses.push_back(fmt("residual %.3e: ", residual) + description);
    }
    return report;
  }

 private:
  std::size_t samples_ = 0;
  double max_ = 0.0;
  std::vector<std::pair<double, std::string>> worst_;
};

StageMatrix random_stage(SampleStream& rng, std::size_t rows, std::size_t cols) {
  CMatrix u(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) u(r, c) = rng.next_disc();
  }
  return StageMatrix(std::move(u));
}

Configuration random_distinct_configuration(SampleStream& rng, int m, int n) {
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) pool[static_cast<std::size_t>(j)] = j;
  for (int j = 0; j < n; ++j) {
    const auto k = j + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(m - j)));
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(k)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  return Configuration(std::move(pool));
}

std::vector<Cx> random_amplitude_vector(SampleStream& rng, std::uint64_t length) {
  std::vector<Cx> out(length);
  for (Cx& z : out) z = rng.next_disc();
  return out;
}

int permutation_index(const Permutation& target) {
  PermutationStream stream(target.size());
  int index = 0;
  while (const Permutation* p = stream.next()) {
    if (*p == target) return index;
    ++index;
  }
  throw ValidationError("permutation_index: not found");
}

}  // namespace

namespace {

// Folds theta into [0, 2*pi).
double normalized_theta(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

}  // namespace

Cx h_variant(std::span<const Cx> alphas, const HVariant& v) {
  const int n = factorial_inverse(alphas.size());
  if (n < 0) {
    throw ShapeError("h_variant: length " + std::to_string(alphas.size()) +
                     " is not N! for any N");
  }
  const double theta = normalized_theta(v.theta);
  const Cx odd_coefficient(std::cos(theta), std::sin(theta));
  const std::span<const std::int8_t> signs = detail::parity_table(n);
  Cx total = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const Cx a = v.conjugated ? std::conj(alphas[i]) : alphas[i];
    total += signs[i] > 0 ? a : odd_coefficient * a;
  }
  return total;
}

double g_product_residual(const CMatrix& gamma, Cx h_product, Statistics stats) {
  if (!gamma.square()) throw DimensionError("g_product_residual: Gamma must be square");
  const int n = factorial_inverse(gamma.rows());
  if (n < 0) {
    throw ShapeError("g_product_residual: Gamma side " + std::to_string(gamma.rows()) +
                     " is not N! for any N");
  }
  const std::span<const std::int8_t> signs = detail::parity_table(n);
  Cx brute = 0.0;
  for (std::size_t i = 0; i < gamma.rows(); ++i) {
    const double si = stats == Statistics::fermion ? signs[i] : 1;
    for (std::size_t j = 0; j < gamma.cols(); ++j) {
      const double sj = stats == Statistics::fermion ? signs[j] : 1;
      brute += si * sj * gamma(i, j);
    }
  }
  return std::abs(brute - h_product);
}

CheckReport check_g_product(int n, int trials, std::uint64_t seed, Statistics stats) {
  if (n < 2 || n > 4) {
    throw SizeLimitError("check_g_product: n = " + std::to_string(n) + " outside 2..4");
  }
  SampleStream rng(seed);
  ResidualTracker tracker;
  const std::uint64_t nf = factorial(n);
  for (int t = 0; t < trials; ++t) {
    const int m = n + (t % 2);  // alternate square and padded outcome spaces
    const StageMatrix stage1 = random_stage(rng, m, m);
    const StageMatrix stage2 = random_stage(rng, m, m);
    const Configuration l = random_distinct_configuration(rng, m, n);
    const Configuration mid = random_distinct_configuration(rng, m, n);
    const Configuration r = random_distinct_configuration(rng, m, n);

    const std::vector<Cx> alphas = alpha_vector(stage1, l, mid);
    const std::vector<Cx> betas = alpha_vector(stage2, mid, r);
    CMatrix gamma(nf, nf);
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = 0; j < nf; ++j) gamma(i, j) = alphas[i] * betas[j];
    }
    const Cx product = g_two_stage(stage1, stage2, l, mid, r, stats);
    tracker.add(g_product_residual(gamma, product, stats),
                fmt("trial %d: l=%s m=%s n=%s", t, l.to_string().c_str(),
                    mid.to_string().c_str(), r.to_string().c_str()));
  }
  return tracker.finish(fmt("g_product_n%d_%s", n, to_string(stats).c_str()),
                        kKernelTolerance);
}

CheckReport check_additivity(int n, int trials, std::uint64_t seed, Statistics stats) {
  if (n < 1 || n > 6) {
    throw SizeLimitError("check_additivity: n = " + std::to_string(n) + " outside 1..6");
  }
  SampleStream rng(seed);
  ResidualTracker tracker;
  const std::uint64_t nf = factorial(n);
  for (int t = 0; t < trials; ++t) {
    const std::vector<Cx> a = random_amplitude_vector(rng, nf);
    const std::vector<Cx> b = random_amplitude_vector(rng, nf);
    std::vector<Cx> sum(nf);
    for (std::size_t i = 0; i < nf; ++i) sum[i] = a[i] + b[i];
    const Cx lhs = h_bruteforce(sum, stats);
    const Cx rhs = h_bruteforce(a, stats) + h_bruteforce(b, stats);
    tracker.add(std::abs(lhs - rhs), fmt("trial %d", t));
  }
  return tracker.finish(fmt("additivity_n%d_%s", n, to_string(stats).c_str()),
                        kExactTolerance);
}

CheckReport check_conjugation(const HVariant& variant, int n, int trials,
                              std::uint64_t seed) {
  const double theta = normalized_theta(variant.theta);
  const bool real_coefficients = theta == 0.0 || theta == kPi;
  if (!real_coefficients && n != 2) {
    throw ValidationError("check_conjugation: anyonic variants are probed at n = 2");
  }
  if (n < 2 || n > 6) {
    throw SizeLimitError("check_conjugation: n = " + std::to_string(n) + " outside 2..6");
  }

  SampleStream rng(seed);
  ResidualTracker tracker;
  const std::uint64_t nf = factorial(n);
  auto probe = [&](std::span<const Cx> alphas, const std::string& description) {
    std::vector<Cx> conjugated(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) conjugated[i] = std::conj(alphas[i]);
    const Cx lhs = std::conj(h_variant(alphas, variant));
    const Cx rhs = h_variant(conjugated, variant);
    tracker.add(std::abs(lhs - rhs), description);
  };

  if (n == 2) {
    const std::vector<Cx> witness = {0.0, 1.0};
    probe(witness, "alpha=(0,1)");
  }
  for (int t = 0; t < trials; ++t) {
    const std::vector<Cx> alphas = random_amplitude_vector(rng, nf);
    probe(alphas, n == 2 ? fmt("trial %d: alpha=(%s, %s)", t, cx_str(alphas[0]).c_str(),
                               cx_str(alphas[1]).c_str())
                         : fmt("trial %d", t));
  }

  std::string name;
  if (theta == 0.0) {
    name = fmt("conjugation_boson_n%d", n);
  } else if (theta == kPi) {
    name = fmt("conjugation_fermion_n%d", n);
  } else {
    name = fmt("anyon_theta_%.4g", theta);
  }
  if (variant.conjugated) name += "_conjugated";
  return tracker.finish(std::move(name), kExactTolerance);
}

CheckReport check_isolation(Statistics stats, std::uint64_t seed, int trials) {
  SampleStream rng(seed);
  ResidualTracker tracker;
  const double sign = stats == Statistics::fermion ? -1.0 : 1.0;

  auto probe_two = [&](Cx z) {
    const std::vector<Cx> direct = {z, Cx(0.0)};
    const std::vector<Cx> indirect = {Cx(0.0), z};
    tracker.add(std::abs(std::abs(h_bruteforce(direct, stats)) - std::abs(z)),
                "H(z,0) with z=" + cx_str(z));
    tracker.add(std::abs(std::abs(h_bruteforce(indirect, stats)) - std::abs(z)),
                "H(0,z) with z=" + cx_str(z));
  };

  auto probe_three = [&](Cx u12, Cx u21, const Permutation& pi, const Permutation& tau) {
    std::vector<Cx> alphas(6, Cx(0.0));
    const Permutation moved = compose(tau, pi);
    alphas[static_cast<std::size_t>(permutation_index(pi))] = u12;
    alphas[static_cast<std::size_t>(permutation_index(moved))] = u21;
    const double expected = std::abs(u12 + sign * u21);
    tracker.add(std::abs(std::abs(h_bruteforce(alphas, stats)) - expected),
                fmt("u12=%s u21=%s pi=%s tau=%s", cx_str(u12).c_str(), cx_str(u21).c_str(),
                    pi.to_string().c_str(), tau.to_string().c_str()));
  };

  auto random_transposition = [&](int n) {
    const int a = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(n - 1)));
    if (b >= a) ++b;
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) images[static_cast<std::size_t>(j)] = j;
    std::swap(images[static_cast<std::size_t>(a)], images[static_cast<std::size_t>(b)]);
    return Permutation::from_images(std::move(images));
  };

  const std::vector<Permutation> all3 = all_permutations(3);
  probe_two(Cx(0.0));
  probe_three(Cx(0.5), Cx(0.5), Permutation::identity(3), random_transposition(3));
  for (int t = 0; t < trials; ++t) {
    probe_two(rng.next_disc() * rng.next_disc());  // z = uv, a product of amplitudes
    const Permutation& pi = all3[rng.next_index(all3.size())];
    probe_three(rng.next_disc(), rng.next_disc(), pi, random_transposition(3));
  }
  return tracker.finish(fmt("isolation_%s", to_string(stats).c_str()), kExactTolerance);
}

Cx CauchyCandidate::apply(Cx z) const {
  switch (kind) {
    case Kind::identity:
      return z;
    case Kind::conjugation:
      return std::conj(z);
    case Kind::zero:
      return 0.0;
    case Kind::scale:
      return parameter * z;
    case Kind::phase:
      return Cx(std::cos(parameter), std::sin(parameter)) * z;
  }
  return z;
}

std::string CauchyCandidate::name() const {
  switch (kind) {
    case Kind::identity:
      return "cauchy_id";
    case Kind::conjugation:
      return "cauchy_conj";
    case Kind::zero:
      return "cauchy_zero";
    case Kind::scale: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "cauchy_scale_%.4g", parameter);
      return buf;
    }
    case Kind::phase: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "cauchy_phase_%.4g", parameter);
      return buf;
    }
  }
  return "cauchy";
}

CheckReport check_cauchy_pair(const CauchyCandidate& candidate, int samples,
                              std::uint64_t seed) {
  SampleStream rng(seed);
  ResidualTracker tracker;

  auto multiplicative = [&](Cx z1, Cx z2) {
    const double residual =
        std::abs(candidate.apply(z1 * z2) - candidate.apply(z1) * candidate.apply(z2));
    tracker.add(residual, "f(z1 z2) with z1=" + cx_str(z1) + " z2=" + cx_str(z2));
  };

  // The derivation pins the candidate at these points directly.
  multiplicative(Cx(1.0), Cx(1.0));
  multiplicative(Cx(0.0, 1.0), Cx(0.0, 1.0));
  multiplicative(Cx(1.0), Cx(0.0, 1.0));

  for (int t = 0; t < samples; ++t) {
    const Cx z1 = rng.next_disc(0.5);
    const Cx z2 = rng.next_disc(0.5);
    const double additive =
        std::abs(candidate.apply(z1 + z2) - candidate.apply(z1) - candidate.apply(z2));
    tracker.add(additive, "f(z1+z2) with z1=" + cx_str(z1) + " z2=" + cx_str(z2));
    multiplicative(z1, z2);
  }

  CheckReport report = tracker.finish(candidate.name(), kExactTolerance);
  if (candidate.kind == CauchyCandidate::Kind::zero) {
    report.note = "inadmissible: f(1) = 1";
  }
  return report;
}

CheckReport check_q_parity(int n, Statistics stats) {
  ResidualTracker tracker;
  for (const auto& [pi, coefficient] : q_coefficients(n, stats)) {
    const double expected =
        stats == Statistics::fermion ? static_cast<double>(parity(pi)) : 1.0;
    tracker.add(std::abs(coefficient - expected), "pi=" + pi.to_string());
  }
  return tracker.finish(fmt("q_parity_n%d_%s", n, to_string(stats).c_str()),
                        /*tolerance=*/0.0);
}

namespace {

struct CatalogEntry {
  std::string family;
  std::string name;
  bool expected_fail = false;
  std::string fail_note;
  std::function<CheckReport(std::uint64_t)> run;
};

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> catalog;
  const Statistics kinds[] = {Statistics::boson, Statistics::fermion};

  for (int n = 2; n <= 4; ++n) {
    for (Statistics stats : kinds) {
      catalog.push_back({"gproduct", fmt("g_product_n%d_%s", n, to_string(stats).c_str()),
                         false, "",
                         [n, stats](std::uint64_t seed) {
                           return check_g_product(n, 100, seed, stats);
                         }});
    }
  }
  for (int n = 2; n <= 6; ++n) {
    for (Statistics stats : kinds) {
      catalog.push_back({"additivity", fmt("additivity_n%d_%s", n, to_string(stats).c_str()),
                         false, "",
                         [n, stats](std::uint64_t seed) {
                           return check_additivity(n, 100, seed, stats);
                         }});
    }
  }
  for (int n = 2; n <= 6; ++n) {
    for (Statistics stats : kinds) {
      const double theta = stats == Statistics::boson ? 0.0 : kPi;
      catalog.push_back(
          {"conjugation", fmt("conjugation_%s_n%d", to_string(stats).c_str(), n), false, "",
           [theta, n](std::uint64_t seed) {
             return check_conjugation(HVariant{theta, false}, n, 100, seed);
           }});
    }
  }
  for (Statistics stats : kinds) {
    catalog.push_back({"isolation", fmt("isolation_%s", to_string(stats).c_str()), false, "",
                       [stats](std::uint64_t seed) {
                         return check_isolation(stats, seed, 100);
                       }});
  }

  const CauchyCandidate cauchy_pass[] = {CauchyCandidate::id(), CauchyCandidate::conj(),
                                         CauchyCandidate::zero()};
  for (const CauchyCandidate& candidate : cauchy_pass) {
    catalog.push_back({"cauchy", candidate.name(), false, "",
                       [candidate](std::uint64_t seed) {
                         return check_cauchy_pair(candidate, 1000, seed);
                       }});
  }
  const CauchyCandidate cauchy_fail[] = {CauchyCandidate::scale(0.5),
                                         CauchyCandidate::phase(kPi / 3)};
  for (const CauchyCandidate& candidate : cauchy_fail) {
    catalog.push_back({"cauchy", candidate.name(), true, "excluded candidate",
                       [candidate](std::uint64_t seed) {
                         return check_cauchy_pair(candidate, 1000, seed);
                       }});
  }

  for (int n = 2; n <= 6; ++n) {
    for (Statistics stats : kinds) {
      catalog.push_back({"qparity", fmt("q_parity_n%d_%s", n, to_string(stats).c_str()),
                         false, "",
                         [n, stats](std::uint64_t) { return check_q_parity(n, stats); }});
    }
  }

  catalog.push_back({"anyon", fmt("anyon_theta_%.4g", kPi / 2), true, "anyon exclusion",
                     [](std::uint64_t seed) {
                       return check_conjugation(HVariant{kPi / 2, false}, 2, 64, seed);
                     }});
  return catalog;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> instance = build_catalog();
  return instance;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const CatalogEntry& entry : catalog()) {
      if (out.empty() || out.back() != entry.family) out.push_back(entry.family);
    }
    return out;
  }();
  return names;
}

std::vector<CheckReport> run_suite(const SuiteConfig& config) {
  const std::vector<std::string>& known = suite_names();
  std::vector<std::string> selected;
  for (const std::string& suite : config.suites) {
    if (suite == "all") {
      selected = known;
      break;
    }
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
      throw ValidationError("run_suite: unknown suite '" + suite + "'");
    }
    selected.push_back(suite);
  }

  std::map<std::string, double> overrides = config.tolerance_overrides;
  for (const auto& [name, value] : overrides) {
    bool matched = std::find(known.begin(), known.end(), name) != known.end();
    for (const CatalogEntry& entry : catalog()) matched |= entry.name == name;
    if (!matched) throw ValidationError("run_suite: unknown tolerance target '" + name + "'");
    if (!(value > 0.0) && value != 0.0) {
      throw ValidationError("run_suite: tolerance for '" + name + "' must be >= 0");
    }
  }

  std::vector<CheckReport> reports;
  const auto& entries = catalog();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const CatalogEntry& entry = entries[k];
    if (std::find(selected.begin(), selected.end(), entry.family) == selected.end()) {
      continue;
    }
    CheckReport report = entry.run(config.seed + k);
    report.expected_fail = entry.expected_fail;
    if (!entry.fail_note.empty()) report.note = entry.fail_note;
    auto it = overrides.find(report.name);
    if (it == overrides.end()) it = overrides.find(entry.family);
    if (it != overrides.end()) {
      report.tolerance = it->second;
      report.pass = report.max_residual <= report.tolerance;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

bool all_required_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& report : reports) {
    if (!report.expected_fail && !report.pass) return false;
  }
  return true;
}

std::string render_text(const CheckReport& report) {
  std::string line = fmt("%-26s %7zu   %.3e   %.3e   %s", report.name.c_str(),
                         report.samples, report.max_residual, report.tolerance,
                         report.pass ? "pass" : "fail");
  if (report.expected_fail) {
    line += "  [expected-fail (" + report.note + ")]";
  } else if (!report.note.empty()) {
    line += "  [note: " + report.note + "]";
  }
  return line;
}

std::string render_json(const CheckReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["samples"] = report.samples;
  j["max_residual"] = report.max_residual;
  j["tolerance"] = report.tolerance;
  j["verdict"] = report.pass ? "pass" : "fail";
  j["expected_fail"] = report.expected_fail;
  if (!report.note.empty()) j["note"] = report.note;
  j["witnesses"] = report.witnesses;
  return j.dump();
}

}  // namespace ampsym::verify
