#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dvrtrace/corpus.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/io.hpp"
#include "dvrtrace/verdict.hpp"

namespace dvrtrace {

enum class Outcome { Ok, InvalidInput, CapabilitySkip, Violation };

/// Process exit code for an outcome; capability skips only fail under
/// --strict.
inline int exit_code(Outcome o, bool strict) {
  switch (o) {
    case Outcome::Ok: return 0;
    case Outcome::Violation: return 1;
    case Outcome::InvalidInput: return 2;
    case Outcome::CapabilitySkip: return strict ? 3 : 0;
  }
  return 1;
}

struct StageNote {
  std::string stage;
  std::string message;
};

struct AnalysisReport {
  json input;
  std::string dvr;
  std::size_t rank = 0;
  std::string input_error;
  std::vector<std::string> violations;  // table laws
  std::optional<json> fiber;
  std::optional<json> trace;
  std::optional<json> cotangent;
  std::optional<TheoremVerdict> verdict;
  std::vector<StageNote> capability;
  std::vector<std::string> defects;  // inconsistencies, theorem violations
  std::map<std::string, double> timing_ms;

  Outcome outcome() const {
    if (!input_error.empty() || !violations.empty()) return Outcome::InvalidInput;
    if (!defects.empty()) return Outcome::Violation;
    if (!capability.empty()) return Outcome::CapabilitySkip;
    return Outcome::Ok;
  }

  json to_json(bool with_timing = true) const {
    json j;
    j["input"] = input;
    if (!input_error.empty()) j["input_error"] = input_error;
    j["dvr"] = dvr;
    j["rank"] = rank;
    j["validation"] = {{"ok", violations.empty()}, {"violations", violations}};
    j["fiber"] = fiber ? *fiber : json();
    j["trace"] = trace ? *trace : json();
    j["cotangent"] = cotangent ? *cotangent : json();
    j["verdict"] = verdict ? verdict_to_json(*verdict) : json();
    json caps = json::array();
    for (const auto& c : capability) caps.push_back({{"stage", c.stage}, {"message", c.message}});
    j["capability"] = caps;
    j["defects"] = defects;
    if (with_timing) j["timing_ms"] = timing_ms;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "algebra of rank " << rank << " over " << dvr << "\n";
    if (!input_error.empty()) os << "input error: " << input_error << "\n";
    for (const auto& v : violations) os << "table violation: " << v << "\n";
    if (fiber) {
      os << "closed fiber: " << (*fiber)["factors"].size() << " local factor(s), " << (*fiber)["geometric_points"]
         << " geometric point(s)\n";
      for (const auto& f : (*fiber)["factors"])
        os << "  dim " << f["dim"] << "  e " << f["e"] << "  k(p) = k[T]/(" << f["residue_field"].get<std::string>()
           << ")  sep " << f["separable_degree"] << "  h " << f["h"] << (f["tame"].get<bool>() ? "  tame" : "  wild")
           << (f["separable"].get<bool>() ? "" : "  inseparable") << "\n";
    }
    if (trace) {
      os << "trace form: f = " << (*trace)["f"].dump() << ", elementary divisor exponents " << (*trace)["exponents"].dump()
         << ((*trace)["generically_etale"].get<bool>() ? "" : " (not generically etale)") << "\n";
    }
    if (cotangent) os << "regular: " << ((*cotangent)["regular"].get<bool>() ? "yes" : "no") << "\n";
    if (verdict) os << "verdict: " << verdict->summary() << "\n";
    for (const auto& c : capability) os << "capability limit in " << c.stage << ": " << c.message << "\n";
    for (const auto& d : defects) os << "DEFECT: " << d << "\n";
    return os.str();
  }
};

/// Re-derives the verdict from the serialized sub-reports.
inline std::optional<TheoremVerdict> verdict_from_reports(std::size_t rank, const json& fiber, const json& trace,
                                                          const json& cotangent) {
  TheoremVerdict v;
  v.rank = rank;
  v.f = trace["f"].is_string() ? Valuation::infinity() : Valuation(trace["f"].get<std::int64_t>());
  v.geometric_points = fiber["geometric_points"];
  const auto deficit = static_cast<std::int64_t>(rank) - static_cast<std::int64_t>(v.geometric_points);
  v.slack = v.f.is_finite() ? Valuation(v.f.value() - deficit) : Valuation::infinity();
  v.regular = cotangent["regular"];
  v.tame = true;
  v.separable = true;
  for (const auto& f : fiber["factors"]) {
    v.tame = v.tame && f["tame"].get<bool>();
    v.separable = v.separable && f["separable"].get<bool>();
  }
  bool small = trace["generically_etale"].get<bool>();
  for (const auto& e : trace["exponents"]) small = small && e.get<std::int64_t>() <= 1;
  v.cokernel_defined_over_residue = small;
  v.cond1 = v.f.is_finite() && v.f.value() == deficit;
  v.cond2 = v.regular && v.tame && v.separable;
  v.cond3 = v.tame && v.separable && v.cokernel_defined_over_residue;
  v.consistent = v.cond1 == v.cond2 && v.cond2 == v.cond3 && v.slack >= Valuation(0);
  return v;
}

namespace detail {

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& sink, std::string name)
      : sink_(sink), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    sink_[name_] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

template <DvrBackend D>
void analyze_algebra(const FiniteFlatAlgebra<D>& A, AnalysisReport& rep) {
  rep.dvr = A.backend().descriptor().name();
  rep.rank = A.rank();
  {
    StageClock c(rep.timing_ms, "validate");
    for (const auto& v : A.validate()) rep.violations.push_back(v.to_string());
  }
  if (!rep.violations.empty()) return;

  std::optional<FiberReport<typename D::Residue>> fiber;
  try {
    StageClock c(rep.timing_ms, "fiber");
    fiber = analyze_fiber(A.base_change_fiber());
    rep.fiber = fiber_to_json(*fiber);
  } catch (const CapabilityError& e) {
    rep.capability.push_back({"fiber", e.what()});
  }

  std::optional<TraceProfile<typename D::Scalar>> trace;
  {
    StageClock c(rep.timing_ms, "trace");
    trace = trace_profile(A);
    rep.trace = trace_to_json(*trace);
  }
  if (!fiber) return;

  StageClock c(rep.timing_ms, "cotangent");
  const auto cot = cotangent_report(A, *fiber);
  rep.cotangent = cotangent_to_json(cot);
  rep.verdict = verdict_from(A.rank(), *fiber, *trace, cot);
  if (!rep.verdict->consistent) rep.defects.push_back("theorem violation: " + rep.verdict->summary());
  const auto audit = verdict_from_reports(A.rank(), *rep.fiber, *rep.trace, *rep.cotangent);
  if (!audit || !(*audit == *rep.verdict)) rep.defects.push_back("verdict is not recomputable from its sub-reports");
}

}  // namespace detail

/// parse -> validate -> fiber -> trace profile -> cotangent -> verdict.
/// Never throws: every failure is recorded in the report.
inline AnalysisReport analyze(const json& doc) {
  AnalysisReport rep;
  rep.input = doc;
  detail::StageClock total(rep.timing_ms, "total");
  try {
    AnyAlgebra A = document_to_algebra(doc);
    std::visit([&rep](const auto& alg) { detail::analyze_algebra(alg, rep); }, A);
  } catch (const InvalidInput& e) {
    rep.input_error = e.what();
  } catch (const CapabilityError& e) {
    rep.capability.push_back({"parse", e.what()});
  } catch (const InternalInconsistency& e) {
    rep.defects.push_back(std::string("internal inconsistency: ") + e.what());
  } catch (const std::exception& e) {
    rep.defects.push_back(std::string("unexpected failure: ") + e.what());
  }
  return rep;
}

struct SuiteSummary {
  std::size_t instances = 0;
  std::size_t equality = 0;
  std::size_t strict = 0;
  std::size_t infinite_f = 0;
  std::size_t capability_skips = 0;
  std::size_t violations = 0;
  std::size_t invalid = 0;
  std::vector<std::string> lines;

  Outcome outcome() const {
    if (violations) return Outcome::Violation;
    if (invalid) return Outcome::InvalidInput;
    if (capability_skips) return Outcome::CapabilitySkip;
    return Outcome::Ok;
  }

  json to_json() const {
    return {{"instances", instances},   {"equality", equality},
            {"strict", strict},         {"infinite_f", infinite_f},
            {"capability_skips", capability_skips}, {"violations", violations},
            {"invalid", invalid}};
  }
};

/// Analyzes every document; per-instance failures are tallied, never
/// thrown.
inline SuiteSummary run_suite(const std::vector<json>& corpus) {
  SuiteSummary s;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const AnalysisReport r = analyze(corpus[i]);
    ++s.instances;
    std::string line = "#" + std::to_string(i) + " " + r.dvr + " rk " + std::to_string(r.rank) + ": ";
    switch (r.outcome()) {
      case Outcome::InvalidInput:
        ++s.invalid;
        line += "invalid input: " + (r.input_error.empty() ? r.violations.front() : r.input_error);
        break;
      case Outcome::Violation:
        ++s.violations;
        line += r.defects.front();
        break;
      case Outcome::CapabilitySkip:
        ++s.capability_skips;
        line += "skipped (" + r.capability.front().stage + "): " + r.capability.front().message;
        break;
      case Outcome::Ok:
        line += r.verdict->summary();
        if (r.verdict->f.is_infinite())
          ++s.infinite_f;
        else if (r.verdict->cond1)
          ++s.equality;
        else
          ++s.strict;
        break;
    }
    s.lines.push_back(std::move(line));
  }
  return s;
}

/// One row of the quadratic example X^2 - 2aX - b over Z_(2).
struct GridRow {
  long long a = 0, b = 0;
  long long a_used = 0, b_used = 0;  // after the normalizing substitution
  bool gram_matches = false;
  bool q_defined[2] = {false, false};  // {computed, predicted}
  bool regular[2] = {false, false};
  bool separable[2] = {false, false};
  bool tame[2] = {false, false};
  Valuation f;

  bool matches() const {
    return gram_matches && q_defined[0] == q_defined[1] && regular[0] == regular[1] && separable[0] == separable[1] &&
           tame[0] == tame[1];
  }
};

/// If b is a unit then X -> X + 1 makes it even: a' = a - 1, b' = b + 2a - 1.
/// The residue field F_2 is perfect, so b in k^2 always and this is the only
/// normalization needed.
inline std::pair<long long, long long> normalize_quadratic(long long a, long long b) {
  if (b % 2 == 0) return {a, b};
  return {a - 1, b + 2 * a - 1};
}

inline GridRow grid_row(long long a, long long b) {
  const IntegersAtP R(2);
  GridRow row;
  row.a = a;
  row.b = b;
  std::tie(row.a_used, row.b_used) = normalize_quadratic(a, b);
  const Rational A_(row.a_used), B_(row.b_used), two(2);
  Poly<Rational> f(R.zero(), {-B_, -two * A_, R.one()});
  const auto alg = FiniteFlatAlgebra<IntegersAtP>::from_monogenic(R, f);
  const auto th = analyze_theorem(alg);
  const Matrix<Rational>& G = th.trace.gram;
  row.gram_matches = G(0, 0) == two && G(0, 1) == two * A_ && G(1, 0) == two * A_ &&
                     G(1, 1) == two * (two * A_ * A_ + B_);
  row.f = th.trace.f;
  const Valuation vb = R.valuation(B_);
  row.q_defined[0] = th.trace.cokernel_defined_over_residue;
  row.q_defined[1] = R.valuation(A_ * A_ + B_) == Valuation(0);
  row.regular[0] = th.cotangent.regular;
  row.regular[1] = vb <= Valuation(1);
  row.separable[0] = th.fiber.separable;
  row.separable[1] = vb >= Valuation(1);
  row.tame[0] = th.fiber.tame;
  row.tame[1] = vb == Valuation(0);
  return row;
}

inline std::vector<GridRow> grid_example(std::uint64_t p, const std::vector<long long>& as,
                                         const std::vector<long long>& bs) {
  if (p != 2) throw InvalidInput("the quadratic example is stated for residue characteristic 2; use --p 2");
  std::vector<GridRow> rows;
  for (auto a : as)
    for (auto b : bs) rows.push_back(grid_row(a, b));
  return rows;
}

}  // namespace dvrtrace
