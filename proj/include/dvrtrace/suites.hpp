#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dvrtrace/corpus.hpp"
#include "dvrtrace/extension.hpp"
#include "dvrtrace/harness.hpp"

namespace dvrtrace {

/// Outcome of one property suite.
struct SuiteResult {
  explicit SuiteResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t applicable = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;
  std::vector<std::string> failures;

  bool ok(std::size_t min_applicable = 1) const { return failures.empty() && applicable >= min_applicable && passed == applicable; }
  void check(bool cond, const std::string& what) {
    ++applicable;
    if (cond)
      ++passed;
    else if (failures.size() < 8)
      failures.push_back(what);
    else if (failures.size() == 8)
      failures.push_back("...");
  }
  std::string line() const {
    return name + ": " + std::to_string(passed) + "/" + std::to_string(applicable) + " passed" +
           (skipped ? ", " + std::to_string(skipped) + " skipped" : "");
  }
};

/// Calls fn(algebra, label) for each instance of the corpus, typed by backend.
template <class Fn>
void for_each_algebra(const CorpusSpec& spec, Fn&& fn) {
  spec.validate();
  for (std::size_t i = 0; i < spec.count; ++i) {
    detail::CorpusRng rng(spec.seed, i);
    const DvrDescriptor d = spec.backends[rng.below(spec.backends.size())];
    std::visit([&](const auto& R) { fn(corpus_algebra(R, spec, rng), "#" + std::to_string(i) + " " + d.name()); },
               make_backend(d));
  }
}

/// Mixed corpus over every backend: general instances plus local ones (all
/// non-leading coefficients in m_R, so the fiber is k[x]/(x^n)).
inline std::vector<CorpusSpec> lemma_corpora(std::uint64_t seed) {
  CorpusSpec general;
  general.seed = seed;
  general.backends = {{DvrKind::IntegersAtP, 2, 1}, {DvrKind::IntegersAtP, 3, 1}, {DvrKind::IntegersAtP, 5, 1},
                      power_series_descriptor(2),   power_series_descriptor(4),   power_series_descriptor(3),
                      {DvrKind::ImperfectSeries, 2, 1}};
  general.degree_max = 4;
  general.count = 120;
  CorpusSpec local = general;
  local.seed = seed + 1;
  local.valuation_min = 1;
  local.valuation_max = 3;
  local.product = 0;
  local.count = 140;
  return {general, local};
}

/// Runs fn(A, label, fiber) on every instance whose fiber can be analyzed.
template <class Fn>
std::size_t for_each_analyzed(const std::vector<CorpusSpec>& specs, Fn&& fn) {
  std::size_t skipped = 0;
  for (const auto& spec : specs)
    for_each_algebra(spec, [&](const auto& A, const std::string& label) {
      try {
        const auto fiber = analyze_fiber(A.base_change_fiber());
        fn(A, label, fiber);
      } catch (const CapabilityError&) {
        ++skipped;
      }
    });
  return skipped;
}

/// tr_{B_i/k} = e tr_{k(p)/k} o pi on every basis element, every factor.
inline SuiteResult fiber_trace_suite(std::uint64_t seed) {
  SuiteResult r("fiber trace formula");
  r.skipped = for_each_analyzed(lemma_corpora(seed), [&](const auto& A, const std::string& label, const auto& fiber) {
    const auto B = A.base_change_fiber();
    bool ok = true;
    for (const auto& f : fiber.factors) ok = ok && fiber_trace_check(B, f);
    r.check(ok, label);
  });
  return r;
}

/// gcd(h, char) = 1 exactly when tame with separable residue field.
inline SuiteResult tameness_h_suite(std::uint64_t seed) {
  SuiteResult r("tameness and h");
  r.skipped = for_each_analyzed(lemma_corpora(seed), [&](const auto&, const std::string& label, const auto& fiber) {
    bool ok = true;
    for (const auto& f : fiber.factors) {
      const bool coprime = std::gcd<std::uint64_t>(f.h, fiber.characteristic) == 1;
      ok = ok && coprime == f.combined && f.combined == (f.tame && f.separable);
      ok = ok && f.dim == f.ramification * f.residue_degree && f.h == f.ramification * (f.residue_degree / f.separable_degree);
    }
    r.check(ok, label);
  });
  return r;
}

/// Local fiber: trace of every element of the maximal ideal lies in m_R. The
/// ideal's R-generators suffice since the trace is R-linear; a few random
/// combinations are checked as well.
inline SuiteResult kernel_of_trace_suite(std::uint64_t seed) {
  SuiteResult r("kernel of the trace");
  r.skipped = for_each_analyzed(lemma_corpora(seed), [&](const auto& A, const std::string& label, const auto& fiber) {
    if (!fiber.is_local()) return;
    const auto& R = A.backend();
    const auto gens = maximal_ideal_module(A, fiber.factors.front());
    bool ok = true;
    auto combo = A.table().zero_vector();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      ok = ok && R.valuation(A.trace(gens[i])) >= Valuation(1);
      combo = vec_add(combo, vec_scale(gens[i], R.from_int(static_cast<long long>(2 * i + 1))));
      ok = ok && R.valuation(A.trace(combo)) >= Valuation(1);
    }
    r.check(ok, label);
  });
  return r;
}

/// Local fiber: tr_{A/R} is onto R exactly when gcd(h, char) = 1. Onto means
/// some basis element has unit trace.
inline SuiteResult surjectivity_suite(std::uint64_t seed) {
  SuiteResult r("surjectivity of the trace");
  r.skipped = for_each_analyzed(lemma_corpora(seed), [&](const auto& A, const std::string& label, const auto& fiber) {
    if (!fiber.is_local()) return;
    const auto& R = A.backend();
    bool onto = false;
    for (std::size_t i = 0; i < A.rank(); ++i) onto = onto || R.valuation(A.table().basis_trace(i)) == Valuation(0);
    const bool coprime = std::gcd<std::uint64_t>(fiber.factors.front().h, fiber.characteristic) == 1;
    r.check(onto == coprime, label + (onto ? " onto" : " not onto"));
  });
  return r;
}

inline std::size_t lcm_of_residue_degrees(const FiberReport<GF>& fiber) {
  std::size_t m = 1;
  for (const auto& f : fiber.factors) m = std::lcm(m, f.residue_degree);
  return m;
}

/// Monogenic instances over finite residue fields: sum of separable degrees,
/// distinct roots of f-bar, and the number of local factors after extending
/// k_R by M = lcm of residue degrees all agree. The extended fiber is
/// decomposed by the general table path.
inline SuiteResult geometric_fiber_suite(std::uint64_t seed, std::size_t count = 100) {
  SuiteResult r("geometric fiber");
  CorpusSpec spec;
  spec.seed = seed;
  spec.backends = {{DvrKind::IntegersAtP, 2, 1}, {DvrKind::IntegersAtP, 3, 1}, {DvrKind::IntegersAtP, 5, 1},
                   power_series_descriptor(2), power_series_descriptor(4)};
  spec.degree_max = 5;
  spec.valuation_max = 1;
  spec.product = 0;
  spec.table = 0;
  spec.count = count;
  for_each_algebra(spec, [&](const auto& A, const std::string& label) {
    if constexpr (std::is_same_v<typename std::decay_t<decltype(A)>::Residue, GF>) {
      const auto B = A.base_change_fiber();
      const auto fiber = analyze_fiber(B);
      const std::size_t points = fiber.geometric_points;
      const std::size_t roots = squarefree_part_degree(*B.monogenic);
      const auto M = static_cast<unsigned>(lcm_of_residue_degrees(fiber));
      auto ext = extend_fiber(B, M);
      ext.monogenic.reset();
      const auto parts = decompose_local(ext);
      bool all_rational = true;
      for (const auto& p : parts) all_rational = all_rational && p.residue_poly.degree() == 1;
      r.check(points == roots && parts.size() == points && all_rational,
              label + ": points " + std::to_string(points) + ", roots " + std::to_string(roots) + ", factors over degree " +
                  std::to_string(M) + " extension " + std::to_string(parts.size()));
    }
  });
  return r;
}

/// Local factors of the extension whose idempotent lies under the image of
/// an original idempotent e (e' e = e').
inline bool idempotent_below(const StructureTable<GF>& t, const Vec<GF>& small, const Vec<GF>& big) {
  return t.multiply(small, big) == small;
}

/// F_q[t]_(t) instances: h of every factor survives k_R -> F_{q^m}.
inline SuiteResult h_invariance_suite(std::uint64_t seed, std::size_t count = 50) {
  SuiteResult r("invariance of h");
  CorpusSpec spec;
  spec.seed = seed;
  spec.backends = {power_series_descriptor(2), power_series_descriptor(3), power_series_descriptor(4)};
  spec.degree_max = 4;
  spec.valuation_max = 2;
  spec.count = count;
  for_each_algebra(spec, [&](const auto& A, const std::string& label) {
    if constexpr (std::is_same_v<std::decay_t<decltype(A)>, FiniteFlatAlgebra<FiniteSeries>>) {
      const auto fiber = analyze_fiber(A.base_change_fiber());
      bool ok = true;
      for (unsigned m : {2u, 3u}) {
        const auto E = extend_residue(A, m);
        const auto EB = E.base_change_fiber();
        const auto ext = analyze_fiber(EB);
        const GFEmbedding emb(A.backend().residue_zero(), m);
        std::vector<std::size_t> covered(fiber.factors.size(), 0);
        for (const auto& g : ext.factors) {
          bool matched = false;
          for (std::size_t i = 0; i < fiber.factors.size(); ++i) {
            Vec<GF> big;
            for (const auto& c : fiber.factors[i].idempotent) big.push_back(emb(c));
            if (idempotent_below(EB.table, g.idempotent, big)) {
              matched = true;
              covered[i] += g.dim;
              ok = ok && g.h == fiber.factors[i].h;
            }
          }
          ok = ok && matched;
        }
        for (std::size_t i = 0; i < fiber.factors.size(); ++i) ok = ok && covered[i] == fiber.factors[i].dim;
      }
      r.check(ok, label);
    }
  });
  return r;
}

/// f = v(det) = sum of Smith exponents on every finite instance; etale triple
/// equivalence everywhere.
inline SuiteResult smith_length_suite(std::uint64_t seed) {
  SuiteResult r("f equals Smith length; etale equivalence");
  r.skipped = for_each_analyzed(lemma_corpora(seed), [&](const auto& A, const std::string& label, const auto& fiber) {
    const auto tp = trace_profile(A);
    bool ok = !tp.f.is_finite() || tp.f.value() == tp.smith.length();
    bool zero = tp.generically_etale;
    for (auto e : tp.smith.exponents) zero = zero && e == 0;
    const bool f0 = tp.f == Valuation(0);
    const bool all_points = fiber.geometric_points == A.rank();
    ok = ok && f0 == zero && f0 == all_points;
    r.check(ok, label + " f=" + tp.f.to_string());
  });
  return r;
}

/// f and the exponent sequence survive random unimodular basis changes.
inline SuiteResult basis_invariance_suite(std::uint64_t seed, std::size_t instances = 10, std::size_t changes = 20) {
  SuiteResult r("basis-change invariance");
  CorpusSpec spec;
  spec.seed = seed;
  spec.backends = {{DvrKind::IntegersAtP, 2, 1}, {DvrKind::IntegersAtP, 3, 1}, power_series_descriptor(2),
                   power_series_descriptor(4)};
  spec.degree_max = 4;
  spec.table = 0;
  spec.count = instances;
  for_each_algebra(spec, [&](const auto& A, const std::string& label) {
    const auto base = trace_profile(A);
    detail::CorpusRng rng(seed ^ 0xba5eULL, A.rank());
    for (std::size_t k = 0; k < changes; ++k) {
      const auto moved = A.change_basis(detail::random_unimodular(A.backend(), rng, A.rank()));
      const auto tp = trace_profile(moved);
      r.check(tp.f == base.f && tp.smith.exponents == base.smith.exponents,
              label + " change " + std::to_string(k) + ": f " + base.f.to_string() + " -> " + tp.f.to_string());
    }
  });
  return r;
}

/// f(A x A') = f(A) + f(A') when both are finite.
inline SuiteResult additivity_suite(std::uint64_t seed, std::size_t pairs = 25) {
  SuiteResult r("product additivity");
  CorpusSpec spec;
  spec.seed = seed;
  spec.backends = {{DvrKind::IntegersAtP, 2, 1}, {DvrKind::IntegersAtP, 3, 1}, power_series_descriptor(2),
                   power_series_descriptor(4), {DvrKind::ImperfectSeries, 2, 1}};
  spec.degree_max = 3;
  spec.product = 0;
  spec.table = 0;
  spec.count = 4 * pairs;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < spec.count && seen < pairs; ++i) {
    detail::CorpusRng rng(spec.seed, i);
    const DvrDescriptor d = spec.backends[rng.below(spec.backends.size())];
    std::visit(
        [&](const auto& R) {
          const auto A = corpus_algebra(R, spec, rng);
          const auto B = corpus_algebra(R, spec, rng);
          const auto fa = f_invariant(A), fb = f_invariant(B);
          if (fa.is_infinite() || fb.is_infinite()) return;
          ++seen;
          const auto fab = f_invariant(std::decay_t<decltype(A)>::product(A, B));
          r.check(fab == fa + fb, "#" + std::to_string(i) + " " + d.name() + ": " + fab.to_string() + " vs " +
                                      fa.to_string() + " + " + fb.to_string());
        },
        make_backend(d));
  }
  return r;
}

}  // namespace dvrtrace
