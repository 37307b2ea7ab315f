#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/fiber.hpp"
#include "dvrtrace/invariants.hpp"

namespace dvrtrace {

/// The inequality f >= rk A - #geometric points and the three conditions of
/// the equality case, each evaluated from its own sub-report.
struct TheoremVerdict {
  std::size_t rank = 0;
  Valuation f;
  std::size_t geometric_points = 0;
  Valuation slack;  // f - (rk - count); infinite when f is
  bool regular = false;
  bool tame = false;
  bool separable = false;
  bool cokernel_defined_over_residue = false;
  bool cond1 = false;  // equality
  bool cond2 = false;  // regular, tame, separable residue fields
  bool cond3 = false;  // tame, separable residue fields, m_R Q = 0
  bool consistent = false;

  std::string summary() const {
    return "rk=" + std::to_string(rank) + " f=" + f.to_string() + " points=" + std::to_string(geometric_points) +
           " slack=" + slack.to_string() + " cond=" + (cond1 ? "T" : "F") + (cond2 ? "T" : "F") + (cond3 ? "T" : "F") +
           (consistent ? "" : " INCONSISTENT");
  }
};

/// Pure function of the sub-reports; also used to audit stored verdicts.
template <class S, class K>
TheoremVerdict verdict_from(std::size_t rank, const FiberReport<K>& fiber, const TraceProfile<S>& trace,
                            const CotangentReport<S>& cotangent) {
  TheoremVerdict v;
  v.rank = rank;
  v.f = trace.f;
  v.geometric_points = fiber.geometric_points;
  const auto deficit = static_cast<std::int64_t>(rank) - static_cast<std::int64_t>(fiber.geometric_points);
  v.slack = trace.f.is_finite() ? Valuation(trace.f.value() - deficit) : Valuation::infinity();
  v.regular = cotangent.regular;
  v.tame = fiber.tame;
  v.separable = fiber.separable;
  v.cokernel_defined_over_residue = trace.cokernel_defined_over_residue;
  v.cond1 = trace.f.is_finite() && trace.f.value() == deficit;
  v.cond2 = v.regular && v.tame && v.separable;
  v.cond3 = v.tame && v.separable && v.cokernel_defined_over_residue;
  v.consistent = v.cond1 == v.cond2 && v.cond2 == v.cond3 && v.slack >= Valuation(0);
  return v;
}

inline bool operator==(const TheoremVerdict& a, const TheoremVerdict& b) {
  return a.rank == b.rank && a.f == b.f && a.geometric_points == b.geometric_points && a.slack == b.slack &&
         a.regular == b.regular && a.tame == b.tame && a.separable == b.separable &&
         a.cokernel_defined_over_residue == b.cokernel_defined_over_residue && a.cond1 == b.cond1 &&
         a.cond2 == b.cond2 && a.cond3 == b.cond3 && a.consistent == b.consistent;
}

template <DvrBackend D>
struct TheoremAnalysis {
  FiberReport<typename D::Residue> fiber;
  TraceProfile<typename D::Scalar> trace;
  CotangentReport<typename D::Scalar> cotangent;
  TheoremVerdict verdict;
};

/// Fiber analysis, trace profile, cotangent report and verdict. Capability
/// errors from the fiber analysis propagate; an inconsistent verdict is
/// returned, not thrown, so callers can report it.
template <DvrBackend D>
TheoremAnalysis<D> analyze_theorem(const FiniteFlatAlgebra<D>& A) {
  auto fiber = analyze_fiber(A.base_change_fiber());
  auto trace = trace_profile(A);
  auto cot = cotangent_report(A, fiber);
  auto v = verdict_from(A.rank(), fiber, trace, cot);
  return {std::move(fiber), std::move(trace), std::move(cot), v};
}

template <DvrBackend D>
TheoremVerdict theorem_verdict(const FiniteFlatAlgebra<D>& A) {
  return analyze_theorem(A).verdict;
}

}  // namespace dvrtrace
