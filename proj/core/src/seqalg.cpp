#include "ampsym/seqalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>

namespace ampsym::seq {

namespace {

constexpr double kDiscTolerance = 1e-12;

struct Trace {
  std::vector<Outcome> outcomes;
  bool reversible = true;  // every atom underneath is reversible
};

struct TraceOrError {
  std::optional<Trace> trace;
  std::string rule;
  std::string path;

  static TraceOrError fail(std::string rule, std::string path) {
    return {std::nullopt, std::move(rule), std::move(path)};
  }
};

bool labels_sorted_distinct(const std::vector<int>& labels) {
  if (labels.empty()) return false;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] <= labels[i - 1]) return false;
  }
  return true;
}

TraceOrError trace_of(const Expr& e, const std::string& path);

TraceOrError trace_atom(const AtomicSequence& a, const std::string& path) {
  if (a.outcomes.size() < 2) return TraceOrError::fail("atom-too-few-outcomes", path);
  for (const Outcome& o : a.outcomes) {
    if (!labels_sorted_distinct(o.labels)) {
      return TraceOrError::fail("atom-outcome-labels-invalid", path);
    }
  }
  for (std::size_t i = 1; i < a.outcomes.size(); ++i) {
    if (!(a.outcomes[i].time > a.outcomes[i - 1].time)) {
      return TraceOrError::fail("atom-times-not-increasing", path);
    }
  }
  if (std::abs(a.amplitude) > 1.0 + kDiscTolerance) {
    return TraceOrError::fail("atom-amplitude-outside-disc", path);
  }
  return {Trace{a.outcomes, a.reversible}, {}, {}};
}

TraceOrError trace_series(const Series& s, const std::string& path) {
  TraceOrError left = trace_of(*s.left, path + "/left");
  if (!left.trace) return left;
  TraceOrError right = trace_of(*s.right, path + "/right");
  if (!right.trace) return right;

  const std::vector<Outcome>& tl = left.trace->outcomes;
  const std::vector<Outcome>& tr = right.trace->outcomes;
  if (!(tl.front().atomic() && tr.back().atomic())) {
    return TraceOrError::fail("series-endpoint-not-atomic", path);
  }
  if (!tl.back().atomic() || !tr.front().atomic()) {
    return TraceOrError::fail("series-junction-not-atomic", path);
  }
  if (tl.back() != tr.front()) {
    return TraceOrError::fail("series-junction-mismatch", path);
  }

  Trace out;
  out.outcomes = tl;
  out.outcomes.insert(out.outcomes.end(), tr.begin() + 1, tr.end());
  out.reversible = left.trace->reversible && right.trace->reversible;
  return {std::move(out), {}, {}};
}

TraceOrError trace_parallel(const Parallel& p, const std::string& path) {
  TraceOrError left = trace_of(*p.left, path + "/left");
  if (!left.trace) return left;
  TraceOrError right = trace_of(*p.right, path + "/right");
  if (!right.trace) return right;

  const std::vector<Outcome>& tl = left.trace->outcomes;
  const std::vector<Outcome>& tr = right.trace->outcomes;
  if (tl.size() != tr.size()) return TraceOrError::fail("parallel-shape-mismatch", path);

  std::size_t differing = tl.size();
  for (std::size_t i = 0; i < tl.size(); ++i) {
    if (tl[i].time != tr[i].time) return TraceOrError::fail("parallel-time-mismatch", path);
    if (tl[i].labels == tr[i].labels) continue;
    if (differing != tl.size()) {
      return TraceOrError::fail("parallel-multiple-differences", path);
    }
    differing = i;
  }
  if (differing == tl.size()) return TraceOrError::fail("parallel-no-difference", path);
  if (differing == 0 || differing == tl.size() - 1) {
    return TraceOrError::fail("parallel-terminal-difference", path);
  }

  Trace out;
  out.outcomes = tl;
  std::vector<int> merged = tl[differing].labels;
  merged.insert(merged.end(), tr[differing].labels.begin(), tr[differing].labels.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  out.outcomes[differing].labels = std::move(merged);
  out.reversible = left.trace->reversible && right.trace->reversible;
  return {std::move(out), {}, {}};
}

TraceOrError trace_reverse(const Reverse& r, const std::string& path) {
  TraceOrError child = trace_of(*r.child, path + "/child");
  if (!child.trace) return child;
  if (!child.trace->reversible) {
    return TraceOrError::fail("reverse-not-reversible", path);
  }

  // Mirror the record; times are reflected about the interval so they keep
  // increasing.
  const std::vector<Outcome>& tc = child.trace->outcomes;
  const double t0 = tc.front().time;
  const double t1 = tc.back().time;
  Trace out;
  out.outcomes.reserve(tc.size());
  for (std::size_t i = tc.size(); i-- > 0;) {
    out.outcomes.push_back(Outcome{tc[i].labels, t0 + t1 - tc[i].time});
  }
  out.reversible = true;
  return {std::move(out), {}, {}};
}

TraceOrError trace_of(const Expr& e, const std::string& path) {
  return std::visit(
      [&](const auto& node) -> TraceOrError {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomicSequence>) return trace_atom(node, path);
        if constexpr (std::is_same_v<T, Series>) return trace_series(node, path);
        if constexpr (std::is_same_v<T, Parallel>) return trace_parallel(node, path);
        if constexpr (std::is_same_v<T, Reverse>) return trace_reverse(node, path);
      },
      e.node);
}

Cx evaluate_unchecked(const Expr& e) {
  return std::visit(
      [](const auto& node) -> Cx {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomicSequence>) return node.amplitude;
        if constexpr (std::is_same_v<T, Series>) {
          return evaluate_unchecked(*node.left) * evaluate_unchecked(*node.right);
        }
        if constexpr (std::is_same_v<T, Parallel>) {
          return evaluate_unchecked(*node.left) + evaluate_unchecked(*node.right);
        }
        if constexpr (std::is_same_v<T, Reverse>) {
          return std::conj(evaluate_unchecked(*node.child));
        }
      },
      e.node);
}

}  // namespace

ExprPtr atom(AtomicSequence a) { return std::make_shared<const Expr>(Expr{std::move(a)}); }

ExprPtr atom_chain(Cx amplitude, std::span<const int> labels, double t0, bool reversible) {
  AtomicSequence a;
  a.amplitude = amplitude;
  a.reversible = reversible;
  a.outcomes.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    a.outcomes.push_back(Outcome{{labels[i]}, t0 + static_cast<double>(i)});
  }
  return atom(std::move(a));
}

ExprPtr series(ExprPtr left, ExprPtr right) {
  return std::make_shared<const Expr>(Expr{Series{std::move(left), std::move(right)}});
}

ExprPtr parallel(ExprPtr left, ExprPtr right) {
  return std::make_shared<const Expr>(Expr{Parallel{std::move(left), std::move(right)}});
}

ExprPtr reverse(ExprPtr child) {
  return std::make_shared<const Expr>(Expr{Reverse{std::move(child)}});
}

ValidationReport validate(const Expr& e) {
  TraceOrError result = trace_of(e, "root");
  if (result.trace) return {};
  return {false, std::move(result.rule), std::move(result.path)};
}

Cx evaluate(const Expr& e) {
  ValidationReport report = validate(e);
  if (!report.ok) {
    throw StructureError("evaluate: " + report.rule + " at " + report.path);
  }
  return evaluate_unchecked(e);
}

double probability(const Expr& e) { return std::norm(evaluate(e)); }

std::vector<Outcome> outcome_trace(const Expr& e) {
  TraceOrError result = trace_of(e, "root");
  if (!result.trace) {
    throw StructureError("outcome_trace: " + result.rule + " at " + result.path);
  }
  return std::move(result.trace->outcomes);
}

// ---------------------------------------------------------------------------
// Textual format.

namespace {

struct PNode {
  enum Kind { kAtom, kSer, kPar, kRev } kind = kAtom;
  Cx amp;
  std::unique_ptr<PNode> a, b;
  int minlen = 0;
  int len = 0;
  int split = 0;                             // kSer: length of the left slice
  int diff_pos = -1;                         // kPar
  bool inject_fresh = false;                 // kPar: children need a seeded difference
  int fresh_label = 0;                       // kPar, when inject_fresh
  std::map<int, std::vector<int>> additions;  // position -> coarse labels added
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<PNode> run() {
    auto node = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("sequence expression, offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected atom/ser/par/rev");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) fail("non-finite number");
    return v;
  }

  std::unique_ptr<PNode> parse_expr() {
    const std::string name = ident();
    auto node = std::make_unique<PNode>();
    expect('(');
    if (name == "atom") {
      node->kind = PNode::kAtom;
      const double re = number();
      expect(',');
      const double im = number();
      node->amp = Cx(re, im);
    } else if (name == "ser" || name == "par") {
      node->kind = name == "ser" ? PNode::kSer : PNode::kPar;
      node->a = parse_expr();
      expect(',');
      node->b = parse_expr();
    } else if (name == "rev") {
      node->kind = PNode::kRev;
      node->a = parse_expr();
    } else {
      fail("unknown operator '" + name + "'");
    }
    expect(')');
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int compute_minlen(PNode& n) {
  switch (n.kind) {
    case PNode::kAtom:
      return n.minlen = 2;
    case PNode::kSer:
      return n.minlen = compute_minlen(*n.a) + compute_minlen(*n.b) - 1;
    case PNode::kPar:
      return n.minlen = std::max({3, compute_minlen(*n.a), compute_minlen(*n.b)});
    case PNode::kRev:
      return n.minlen = compute_minlen(*n.a);
  }
  return 0;
}

// Atoms absorb any extra length, so every subtree can realize any length
// >= its minlen; series hand the whole slack to their left child.
void assign_lengths(PNode& n, int len) {
  n.len = len;
  switch (n.kind) {
    case PNode::kAtom:
      break;
    case PNode::kSer:
      n.split = n.a->minlen + (len - n.minlen);
      assign_lengths(*n.a, n.split);
      assign_lengths(*n.b, n.b->minlen);
      break;
    case PNode::kPar:
      assign_lengths(*n.a, len);
      assign_lengths(*n.b, len);
      break;
    case PNode::kRev:
      assign_lengths(*n.a, len);
      break;
  }
}

void merge_additions(std::map<int, std::vector<int>>& into,
                     const std::map<int, std::vector<int>>& from, int offset) {
  for (const auto& [pos, labels] : from) {
    std::vector<int>& slot = into[pos + offset];
    slot.insert(slot.end(), labels.begin(), labels.end());
    std::sort(slot.begin(), slot.end());
  }
}

// Decides, bottom-up, where each parallel node's children will differ once
// laid out over a common base record. Children whose internal
// coarse-grainings land at more than one distinct position cannot be made
// to differ in a single outcome and are rejected.
void plan_parallels(PNode& n, int& fresh) {
  switch (n.kind) {
    case PNode::kAtom:
      return;
    case PNode::kSer:
      plan_parallels(*n.a, fresh);
      plan_parallels(*n.b, fresh);
      merge_additions(n.additions, n.a->additions, 0);
      merge_additions(n.additions, n.b->additions, n.split - 1);
      return;
    case PNode::kRev: {
      plan_parallels(*n.a, fresh);
      for (const auto& [pos, labels] : n.a->additions) n.additions[n.len - 1 - pos] = labels;
      return;
    }
    case PNode::kPar: {
      plan_parallels(*n.a, fresh);
      plan_parallels(*n.b, fresh);
      std::set<int> differing;
      for (const auto& [pos, labels] : n.a->additions) {
        auto it = n.b->additions.find(pos);
        if (it == n.b->additions.end() || it->second != labels) differing.insert(pos);
      }
      for (const auto& [pos, labels] : n.b->additions) {
        if (!n.a->additions.count(pos)) differing.insert(pos);
      }
      if (differing.size() > 1) {
        throw ParseError(
            "sequence expression: parallel children coarse-grain at different "
            "positions and cannot differ in a single outcome");
      }
      merge_additions(n.additions, n.a->additions, 0);
      merge_additions(n.additions, n.b->additions, 0);
      if (differing.size() == 1) {
        n.diff_pos = *differing.begin();
      } else {
        n.diff_pos = 1;
        n.inject_fresh = true;
        n.fresh_label = fresh++;
        n.additions[n.diff_pos].push_back(n.fresh_label);
        std::sort(n.additions[n.diff_pos].begin(), n.additions[n.diff_pos].end());
      }
      return;
    }
  }
}

ExprPtr build_expr(const PNode& n, std::vector<Outcome> base) {
  switch (n.kind) {
    case PNode::kAtom: {
      AtomicSequence a;
      a.outcomes = std::move(base);
      a.amplitude = n.amp;
      a.reversible = true;
      return atom(std::move(a));
    }
    case PNode::kSer: {
      std::vector<Outcome> left(base.begin(), base.begin() + n.split);
      std::vector<Outcome> right(base.begin() + n.split - 1, base.end());
      return series(build_expr(*n.a, std::move(left)), build_expr(*n.b, std::move(right)));
    }
    case PNode::kRev: {
      const double t0 = base.front().time;
      const double t1 = base.back().time;
      std::vector<Outcome> mirrored(base.rbegin(), base.rend());
      for (Outcome& o : mirrored) o.time = t0 + t1 - o.time;
      return reverse(build_expr(*n.a, std::move(mirrored)));
    }
    case PNode::kPar: {
      std::vector<Outcome> right = base;
      if (n.inject_fresh) right[n.diff_pos].labels = {n.fresh_label};
      return parallel(build_expr(*n.a, std::move(base)), build_expr(*n.b, std::move(right)));
    }
  }
  throw StructureError("unreachable");
}

void format_expr(const Expr& e, std::string& out) {
  std::visit(
      [&out](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomicSequence>) {
          char buf[80];
          std::snprintf(buf, sizeof buf, "atom(%.17g,%.17g)", node.amplitude.real(),
                        node.amplitude.imag());
          out += buf;
        } else if constexpr (std::is_same_v<T, Series>) {
          out += "ser(";
          format_expr(*node.left, out);
          out += ',';
          format_expr(*node.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Parallel>) {
          out += "par(";
          format_expr(*node.left, out);
          out += ',';
          format_expr(*node.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Reverse>) {
          out += "rev(";
          format_expr(*node.child, out);
          out += ')';
        }
      },
      e.node);
}

}  // namespace

ExprPtr parse(std::string_view text) {
  Parser parser(text);
  std::unique_ptr<PNode> root = parser.run();
  compute_minlen(*root);
  assign_lengths(*root, root->minlen);
  int fresh = root->len + 1;
  plan_parallels(*root, fresh);

  std::vector<Outcome> base(static_cast<std::size_t>(root->len));
  for (int p = 0; p < root->len; ++p) {
    base[static_cast<std::size_t>(p)] = Outcome{{p + 1}, static_cast<double>(p)};
  }
  return build_expr(*root, std::move(base));
}

std::string to_text(const Expr& e) {
  std::string out;
  format_expr(e, out);
  return out;
}

}  // namespace ampsym::seq
