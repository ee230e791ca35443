// ampsym command-line tool: outcome distributions from experiment files,
// the functional-equation verification suites, and kernel benchmarks.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ampsym/experiment.hpp"
#include "ampsym/indist.hpp"
#include "ampsym/numerics.hpp"
#include "ampsym/rng.hpp"
#include "ampsym/verify.hpp"

namespace {

using namespace ampsym;

constexpr std::uint64_t kBenchSeed = 0xB3A5E5EEDull;

nlohmann::json config_json(const Configuration& c) {
  nlohmann::json out = nlohmann::json::array();
  for (int label : c.labels()) out.push_back(label + 1);
  return out;
}

std::string render_distribution_text(const Experiment& x, const OutcomeDistribution& d) {
  std::string out;
  out += "statistics: " + to_string(x.stats) + "\n";
  out += "stages: " + std::to_string(x.stages.size()) + "\n";
  out += "initial: " + x.initial.to_string() + "\n";
  out += std::string("normalized: ") + (d.normalized ? "yes" : "no") + "\n";
  for (const Configuration& c : d.repeated_label_warnings) {
    out += "warning: final " + c.to_string() +
           " has repeated labels; probability is raw |H|^2\n";
  }

  std::size_t width = 5;  // "final"
  for (const OutcomeRow& row : d.rows) {
    width = std::max(width, row.final.to_string().size());
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-*s  %16s  %16s  %13s\n", static_cast<int>(width),
                "final", "amplitude_re", "amplitude_im", "probability");
  out += line;
  for (const OutcomeRow& row : d.rows) {
    std::snprintf(line, sizeof line, "%-*s  %16.12f  %16.12f  %13.9f\n",
                  static_cast<int>(width), row.final.to_string().c_str(),
                  row.amplitude.real(), row.amplitude.imag(), row.probability);
    out += line;
  }
  return out;
}

std::string render_distribution_machine(const Experiment& x, const OutcomeDistribution& d) {
  std::string out;
  nlohmann::json header;
  header["type"] = "header";
  header["statistics"] = to_string(x.stats);
  header["stages"] = x.stages.size();
  header["initial"] = config_json(x.initial);
  header["normalized"] = d.normalized;
  header["repeated_label_finals"] = nlohmann::json::array();
  for (const Configuration& c : d.repeated_label_warnings) {
    header["repeated_label_finals"].push_back(config_json(c));
  }
  out += header.dump() + "\n";
  for (const OutcomeRow& row : d.rows) {
    nlohmann::json j;
    j["type"] = "row";
    j["final"] = config_json(row.final);
    j["amplitude"] = {row.amplitude.real(), row.amplitude.imag()};
    j["probability"] = row.probability;
    out += j.dump() + "\n";
  }
  return out;
}

int cmd_prob(const std::string& path, bool normalize, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.c_str());
    return 2;
  }
  Experiment x = parse_experiment(in);
  if (normalize) x.normalize = true;
  const OutcomeDistribution d = distribution(x);
  const std::string out = format == "machine" ? render_distribution_machine(x, d)
                                              : render_distribution_text(x, d);
  std::fwrite(out.data(), 1, out.size(), stdout);
  return 0;
}

int cmd_verify(const std::string& suites, std::uint64_t seed,
               const std::vector<std::string>& tolerance_args, const std::string& format) {
  verify::SuiteConfig config;
  config.seed = seed;
  std::size_t start = 0;
  while (start <= suites.size() && !suites.empty()) {
    const std::size_t comma = suites.find(',', start);
    const std::string name = suites.substr(start, comma - start);
    if (!name.empty()) config.suites.push_back(name);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (const std::string& spec : tolerance_args) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("--tol expects NAME=VALUE, got '" + spec + "'");
    }
    char* end = nullptr;
    const double value = std::strtod(spec.c_str() + eq + 1, &end);
    if (end == spec.c_str() + eq + 1 || *end != '\0') {
      throw ValidationError("--tol expects a numeric value in '" + spec + "'");
    }
    config.tolerance_overrides[spec.substr(0, eq)] = value;
  }

  const std::vector<verify::CheckReport> reports = verify::run_suite(config);
  std::string out;
  std::size_t passed = 0, expected_failures = 0;
  for (const verify::CheckReport& report : reports) {
    out += (format == "machine" ? verify::render_json(report)
                                : verify::render_text(report)) +
           "\n";
    if (report.pass) ++passed;
    if (!report.pass && report.expected_fail) ++expected_failures;
  }
  if (format != "machine") {
    out += "suite: " + std::to_string(reports.size()) + " checks, " +
           std::to_string(passed) + " passed, " + std::to_string(expected_failures) +
           " expected failures\n";
  }
  std::fwrite(out.data(), 1, out.size(), stdout);
  return verify::all_required_pass(reports) ? 0 : 1;
}

struct BenchRow {
  std::string kind;
  int n;
  int reps;
  double median_seconds;
};

double median_of(std::vector<double> times) {
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  if (times.size() % 2 == 1) return times[mid];
  return 0.5 * (times[mid - 1] + times[mid]);
}

template <typename Fn>
BenchRow bench_one(const std::string& kind, int n, int reps, Fn&& fn) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return BenchRow{kind, n, reps, median_of(std::move(times))};
}

int cmd_bench(const std::string& kind, int min_n, int max_n, int reps,
              const std::string& format) {
  if (min_n < 1 || max_n < min_n || reps < 1) {
    throw ValidationError("bench: need 1 <= min <= max and reps >= 1");
  }
  const int limit = kind == "determinant" ? 2000 : static_cast<int>(kMaxPermanentSize);
  if (max_n > limit) {
    throw SizeLimitError("bench: n = " + std::to_string(max_n) + " exceeds the " + kind +
                         " limit of " + std::to_string(limit));
  }

  std::vector<BenchRow> rows;
  for (int n = min_n; n <= max_n; ++n) {
    SampleStream rng(kBenchSeed + static_cast<std::uint64_t>(n));
    CMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rng.next_disc();
    }
    if (kind == "permanent") {
      volatile double sink = 0.0;
      rows.push_back(bench_one(kind, n, reps, [&] { sink = std::abs(permanent_ryser(m)); }));
      (void)sink;
    } else if (kind == "determinant") {
      volatile double sink = 0.0;
      rows.push_back(bench_one(kind, n, reps, [&] { sink = std::abs(determinant(m)); }));
      (void)sink;
    } else {
      const StageMatrix stage{m};
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) labels[static_cast<std::size_t>(j)] = j;
      const Configuration c{labels};
      volatile double sink = 0.0;
      rows.push_back(bench_one("h_fast_boson", n, reps, [&] {
        sink = std::abs(h_fast(stage, c, c, Statistics::boson));
      }));
      rows.push_back(bench_one("h_fast_fermion", n, reps, [&] {
        sink = std::abs(h_fast(stage, c, c, Statistics::fermion));
      }));
      (void)sink;
    }
  }

  std::string out;
  if (format == "machine") {
    for (const BenchRow& row : rows) {
      nlohmann::json j;
      j["kind"] = row.kind;
      j["n"] = row.n;
      j["reps"] = row.reps;
      j["median_seconds"] = row.median_seconds;
      j["ops_per_second"] = row.median_seconds > 0 ? 1.0 / row.median_seconds : 0.0;
      out += j.dump() + "\n";
    }
  } else {
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %5s %5s %15s %15s\n", "kind", "n", "reps",
                  "median_seconds", "ops_per_second");
    out += line;
    for (const BenchRow& row : rows) {
      std::snprintf(line, sizeof line, "%-16s %5d %5d %15.9f %15.1f\n", row.kind.c_str(),
                    row.n, row.reps, row.median_seconds,
                    row.median_seconds > 0 ? 1.0 / row.median_seconds : 0.0);
      out += line;
    }
  }
  std::fwrite(out.data(), 1, out.size(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ampsym: transition amplitudes for systems of indistinguishable particles"};
  app.require_subcommand(1);

  std::string prob_path;
  bool prob_normalize = false;
  std::string prob_format = "text";
  CLI::App* prob = app.add_subcommand("prob", "outcome distribution of an experiment file");
  prob->add_option("file", prob_path, "experiment file (JSON)")->required();
  prob->add_flag("--normalize", prob_normalize, "normalize over the listed finals");
  prob->add_option("--format", prob_format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string verify_suites = "all";
  std::uint64_t verify_seed = verify::kDefaultSeed;
  std::vector<std::string> verify_tols;
  std::string verify_format = "text";
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the functional-equation verification suites");
  verify_cmd->add_option("--suite", verify_suites,
                         "all or a comma-separated subset of: gproduct, additivity, "
                         "conjugation, isolation, cauchy, qparity, anyon");
  verify_cmd->add_option("--seed", verify_seed, "sampling seed (default 42)");
  verify_cmd->add_option("--tol", verify_tols, "NAME=VALUE tolerance override")
      ->take_all();
  verify_cmd->add_option("--format", verify_format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string bench_kind;
  int bench_min = 2, bench_max = 8, bench_reps = 5;
  std::string bench_format = "text";
  CLI::App* bench = app.add_subcommand("bench", "time the permanent/determinant kernels");
  bench->add_option("--kind", bench_kind, "permanent, determinant or h_fast")
      ->required()
      ->check(CLI::IsMember({"permanent", "determinant", "h_fast"}));
  bench->add_option("--min", bench_min, "smallest matrix size");
  bench->add_option("--max", bench_max, "largest matrix size");
  bench->add_option("--reps", bench_reps, "repetitions per size");
  bench->add_option("--format", bench_format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prob->parsed()) return cmd_prob(prob_path, prob_normalize, prob_format);
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_suites, verify_seed, verify_tols, verify_format);
    }
    return cmd_bench(bench_kind, bench_min, bench_max, bench_reps, bench_format);
  } catch (const SizeLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
