#include "ampsym/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace ampsym {

namespace {

using nlohmann::json;

std::vector<Configuration> expand_intermediate(const IntermediateSpec& spec,
                                               int dimension, int particles) {
  switch (spec.kind) {
    case IntermediateSpec::Kind::atomic:
    case IntermediateSpec::Kind::coarse:
      return spec.configurations;
    case IntermediateSpec::Kind::sum_distinct:
      return distinct_configurations(dimension, particles);
  }
  return {};
}

void check_bounds(const Configuration& c, int dimension, const std::string& what) {
  for (int j = 0; j < c.size(); ++j) {
    if (c.label(j) >= dimension) {
      throw DimensionError(what + ": label " + std::to_string(c.label(j) + 1) +
                           " outside 1.." + std::to_string(dimension));
    }
  }
}

}  // namespace

IntermediateSpec IntermediateSpec::atomic(Configuration c) {
  return {Kind::atomic, {std::move(c)}};
}

IntermediateSpec IntermediateSpec::coarse(std::vector<Configuration> cs) {
  return {Kind::coarse, std::move(cs)};
}

IntermediateSpec IntermediateSpec::sum_distinct() { return {Kind::sum_distinct, {}}; }

void validate_experiment(const Experiment& x) {
  if (x.stages.empty()) throw ValidationError("experiment: at least one stage required");
  const int n = x.initial.size();

  for (std::size_t k = 1; k < x.stages.size(); ++k) {
    if (x.stages[k].sources() != x.stages[k - 1].destinations()) {
      throw DimensionError("experiment: stage " + std::to_string(k + 1) +
                           " source dimension " + std::to_string(x.stages[k].sources()) +
                           " does not match stage " + std::to_string(k) +
                           " destination dimension " +
                           std::to_string(x.stages[k - 1].destinations()));
    }
  }

  check_bounds(x.initial, static_cast<int>(x.stages.front().sources()), "initial");

  if (x.intermediates.size() != x.stages.size() - 1) {
    throw ValidationError("experiment: " + std::to_string(x.intermediates.size()) +
                          " intermediates for " + std::to_string(x.stages.size()) +
                          " stages (need stages - 1)");
  }
  for (std::size_t t = 0; t < x.intermediates.size(); ++t) {
    const IntermediateSpec& spec = x.intermediates[t];
    const int dim = static_cast<int>(x.stages[t].destinations());
    const std::string what = "intermediate " + std::to_string(t + 1);
    if (spec.kind == IntermediateSpec::Kind::atomic && spec.configurations.size() != 1) {
      throw ValidationError(what + ": atomic requires exactly one configuration");
    }
    if (spec.kind == IntermediateSpec::Kind::coarse) {
      if (spec.configurations.empty()) {
        throw ValidationError(what + ": coarse list must be non-empty");
      }
      std::vector<Configuration> sorted = spec.configurations;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError(what + ": coarse configurations must be distinct");
      }
    }
    for (const Configuration& c : spec.configurations) {
      if (c.size() != n) {
        throw DimensionError(what + ": configuration size " + std::to_string(c.size()) +
                             " does not match " + std::to_string(n) + " particles");
      }
      check_bounds(c, dim, what);
    }
  }

  const int final_dim = static_cast<int>(x.stages.back().destinations());
  for (const Configuration& c : x.finals) {
    if (c.size() != n) {
      throw DimensionError("final " + c.to_string() + ": size does not match " +
                           std::to_string(n) + " particles");
    }
    check_bounds(c, final_dim, "final " + c.to_string());
  }
  if (x.finals_all_distinct && final_dim < n) {
    throw ValidationError("experiment: all_distinct finals need at least " +
                          std::to_string(n) + " outcomes, stage has " +
                          std::to_string(final_dim));
  }
}

Cx sequence_amplitude(const Experiment& x) {
  validate_experiment(x);
  if (x.finals.size() != 1 || x.finals_all_distinct) {
    throw ValidationError("sequence_amplitude: exactly one final configuration required");
  }

  // Choice lists per inner time, in listed (or canonical) order; the
  // summation order is fixed so results are reproducible.
  std::vector<std::vector<Configuration>> choices;
  choices.reserve(x.intermediates.size());
  for (std::size_t t = 0; t < x.intermediates.size(); ++t) {
    choices.push_back(expand_intermediate(x.intermediates[t],
                                          static_cast<int>(x.stages[t].destinations()),
                                          x.initial.size()));
    if (choices.back().empty()) {
      throw ValidationError("intermediate " + std::to_string(t + 1) + ": empty coarse set");
    }
  }

  Cx total = 0.0;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    Cx product = 1.0;
    const Configuration* prev = &x.initial;
    for (std::size_t k = 0; k < x.stages.size(); ++k) {
      const Configuration& next =
          k < choices.size() ? choices[k][pick[k]] : x.finals.front();
      product *= h_fast(x.stages[k], *prev, next, x.stats);
      prev = &next;
    }
    total += product;

    std::size_t t = 0;
    while (t < pick.size() && ++pick[t] == choices[t].size()) {
      pick[t] = 0;
      ++t;
    }
    if (t == pick.size()) break;
  }
  return total;
}

OutcomeDistribution distribution(const Experiment& x) {
  validate_experiment(x);

  std::vector<Configuration> finals = x.finals;
  if (x.finals_all_distinct) {
    finals = distinct_configurations(static_cast<int>(x.stages.back().destinations()),
                                     x.initial.size());
  }
  if (finals.empty()) throw ValidationError("distribution: finals must be non-empty");
  std::sort(finals.begin(), finals.end());

  OutcomeDistribution out;
  out.rows.reserve(finals.size());
  Experiment single = x;
  single.finals_all_distinct = false;
  for (const Configuration& f : finals) {
    single.finals = {f};
    const Cx amp = sequence_amplitude(single);
    out.rows.push_back(OutcomeRow{f, amp, std::norm(amp)});
    if (f.has_repeats()) out.repeated_label_warnings.push_back(f);
  }

  if (x.normalize) {
    double total = 0.0;
    for (const OutcomeRow& row : out.rows) total += row.probability;
    if (total <= 0.0) {
      throw ValidationError("distribution: cannot normalize, total probability is zero");
    }
    for (OutcomeRow& row : out.rows) row.probability /= total;
    out.normalized = true;
  }
  return out;
}

ComposeCheckReport compose_check(const Experiment& x) {
  validate_experiment(x);
  if (x.stats != Statistics::fermion) {
    throw ValidationError(
        "compose_check: bosons are unsupported (the full coarse-graining needs "
        "repeated-occupancy configurations with occupancy weights)");
  }
  if (x.stages.size() != 2) {
    throw ValidationError("compose_check: exactly two stages required");
  }
  const int n = x.initial.size();
  const int mid_dim = static_cast<int>(x.stages[0].destinations());
  const std::vector<Configuration> subsets = distinct_configurations(mid_dim, n);

  const IntermediateSpec& spec = x.intermediates.front();
  if (spec.kind == IntermediateSpec::Kind::coarse ||
      spec.kind == IntermediateSpec::Kind::atomic) {
    std::vector<Configuration> canon;
    canon.reserve(spec.configurations.size());
    for (const Configuration& c : spec.configurations) canon.push_back(c.canonical());
    std::sort(canon.begin(), canon.end());
    if (canon != subsets) {
      throw ValidationError(
          "compose_check: the intermediate must coarse-grain over all distinct "
          "N-subsets (use \"sum_distinct\")");
    }
  }

  std::vector<Configuration> finals = x.finals;
  if (x.finals_all_distinct) {
    finals = distinct_configurations(static_cast<int>(x.stages.back().destinations()), n);
  }
  if (finals.empty()) throw ValidationError("compose_check: finals must be non-empty");

  const StageMatrix combined(matmul(x.stages[1].matrix(), x.stages[0].matrix()));

  ComposeCheckReport report;
  report.intermediates_summed = subsets.size();
  for (const Configuration& f : finals) {
    Cx coarse_sum = 0.0;
    for (const Configuration& m : subsets) {
      coarse_sum += h_fast(x.stages[0], x.initial, m, x.stats) *
                    h_fast(x.stages[1], m, f, x.stats);
    }
    const Cx direct = h_fast(combined, x.initial, f, x.stats);
    report.max_residual = std::max(report.max_residual, std::abs(coarse_sum - direct));
    ++report.finals_checked;
  }
  return report;
}

std::vector<Configuration> distinct_configurations(int m, int n) {
  if (n < 1 || n > m) return {};
  std::vector<Configuration> out;
  std::vector<int> combo(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) combo[static_cast<std::size_t>(j)] = j;
  for (;;) {
    out.emplace_back(combo);
    int j = n - 1;
    while (j >= 0 && combo[static_cast<std::size_t>(j)] == m - n + j) --j;
    if (j < 0) break;
    ++combo[static_cast<std::size_t>(j)];
    for (int k = j + 1; k < n; ++k) {
      combo[static_cast<std::size_t>(k)] = combo[static_cast<std::size_t>(k - 1)] + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// File format.

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw ParseError("experiment file, " + path + ": " + what);
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

Configuration config_from_json(const json& j, const std::string& path, int particles) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty label array");
  std::vector<int> labels;
  labels.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& v = j[i];
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      parse_fail(path + "[" + std::to_string(i) + "]", "labels are 1-based integers");
    }
    labels.push_back(v.get<int>());
  }
  if (particles >= 0 && static_cast<int>(labels.size()) != particles) {
    parse_fail(path, "expected " + std::to_string(particles) + " labels, got " +
                         std::to_string(labels.size()));
  }
  return Configuration::from_one_based(std::move(labels));
}

StageMatrix stage_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) parse_fail(path + "[0]", "expected a non-empty row of [re,im] pairs");
  CMatrix u(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      parse_fail(path + "[" + std::to_string(r) + "]",
                 "row length " + std::to_string(row.is_array() ? row.size() : 0) +
                     " does not match row 0 length " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        parse_fail(path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                   "expected an [re,im] pair");
      }
      u(r, c) = Cx(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  try {
    return StageMatrix(std::move(u));
  } catch (const ValidationError& e) {
    parse_fail(path, e.what());
  }
}

}  // namespace

Experiment parse_experiment(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("experiment file, line " + std::to_string(line_of_offset(text, e.byte)) +
                     ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("experiment file: expected a JSON object");

  Experiment x;

  if (!root.contains("statistics")) parse_fail("statistics", "missing");
  const json& stats = root.at("statistics");
  if (stats == "boson") {
    x.stats = Statistics::boson;
  } else if (stats == "fermion") {
    x.stats = Statistics::fermion;
  } else {
    parse_fail("statistics", "expected \"boson\" or \"fermion\"");
  }

  if (!root.contains("stages") || !root.at("stages").is_array() || root.at("stages").empty()) {
    parse_fail("stages", "expected a non-empty array of stage matrices");
  }
  for (std::size_t k = 0; k < root.at("stages").size(); ++k) {
    x.stages.push_back(stage_from_json(root.at("stages")[k], "stages[" + std::to_string(k) + "]"));
  }

  if (!root.contains("initial")) parse_fail("initial", "missing");
  x.initial = config_from_json(root.at("initial"), "initial", -1);
  const int n = x.initial.size();

  if (root.contains("intermediates")) {
    const json& mids = root.at("intermediates");
    if (!mids.is_array()) parse_fail("intermediates", "expected an array");
    for (std::size_t t = 0; t < mids.size(); ++t) {
      const json& entry = mids[t];
      const std::string path = "intermediates[" + std::to_string(t) + "]";
      if (entry.is_string() && entry == "sum_distinct") {
        x.intermediates.push_back(IntermediateSpec::sum_distinct());
      } else if (entry.is_object() && entry.contains("atomic")) {
        x.intermediates.push_back(
            IntermediateSpec::atomic(config_from_json(entry.at("atomic"), path + ".atomic", n)));
      } else if (entry.is_object() && entry.contains("coarse")) {
        const json& list = entry.at("coarse");
        if (!list.is_array() || list.empty()) {
          parse_fail(path + ".coarse", "expected a non-empty array of configurations");
        }
        std::vector<Configuration> cs;
        for (std::size_t i = 0; i < list.size(); ++i) {
          cs.push_back(config_from_json(list[i], path + ".coarse[" + std::to_string(i) + "]", n));
        }
        x.intermediates.push_back(IntermediateSpec::coarse(std::move(cs)));
      } else {
        parse_fail(path, "expected {\"atomic\":...}, {\"coarse\":...} or \"sum_distinct\"");
      }
    }
  }

  if (!root.contains("finals")) parse_fail("finals", "missing");
  const json& finals = root.at("finals");
  if (finals.is_string() && finals == "all_distinct") {
    x.finals_all_distinct = true;
  } else if (finals.is_array() && !finals.empty()) {
    for (std::size_t i = 0; i < finals.size(); ++i) {
      x.finals.push_back(config_from_json(finals[i], "finals[" + std::to_string(i) + "]", n));
    }
  } else {
    parse_fail("finals", "expected a non-empty array of configurations or \"all_distinct\"");
  }

  if (root.contains("normalize")) {
    if (!root.at("normalize").is_boolean()) parse_fail("normalize", "expected true or false");
    x.normalize = root.at("normalize").get<bool>();
  }

  try {
    validate_experiment(x);
  } catch (const Error& e) {
    throw ParseError(std::string("experiment file: ") + e.what());
  }
  return x;
}

Experiment parse_experiment(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

}  // namespace ampsym
