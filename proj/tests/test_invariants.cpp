#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dvrtrace;
using fx::mono;
using fx::s;

namespace {

Matrix<Rational> zmat(const std::vector<std::vector<long>>& rows) {
  const Rational z(0);
  Matrix<Rational> M(rows.size(), rows.empty() ? 0 : rows[0].size(), z);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = Rational(mpq_class(rows[i][j]));
  return M;
}

void combos(std::size_t n, std::size_t k, std::size_t from, std::vector<std::size_t>& cur,
            std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    combos(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Smith exponents from determinantal divisors: d_k = min v(k x k minor),
// e_k = d_k - d_{k-1}. Minors by Leibniz expansion.
std::vector<long> smith_by_minors(const Matrix<Rational>& M, unsigned long p) {
  std::vector<long> out;
  long prev = 0;
  for (std::size_t k = 1; k <= std::min(M.rows(), M.cols()); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    combos(M.rows(), k, 0, cur, rs);
    combos(M.cols(), k, 0, cur, cs);
    long best = -1;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        Matrix<Rational> sub(k, k, M.zero());
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = M(r[i], c[j]);
        const long v = oracle::padic(oracle::leibniz_det(sub, M.zero()).value(), p);
        if (v >= 0 && (best < 0 || v < best)) best = v;
      }
    if (best < 0) break;
    out.push_back(best - prev);
    prev = best;
  }
  return out;
}

bool is_diagonal(const Matrix<Rational>& D) {
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      if (i != j && !D(i, j).is_zero()) return false;
  return true;
}

}  // namespace

TEST(Smith, Examples) {
  const IntegersAtP Z3(3), Z2(2);
  EXPECT_EQ(smith_over_dvr(Z3, zmat({{2, 0}, {0, 6}})).exponents, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(smith_over_dvr(Z2, zmat({{2, 0}, {0, 4}})).exponents, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(smith_over_dvr(Z2, zmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).exponents,
            (std::vector<std::int64_t>{0, 0, 0}));
  const auto sing = smith_over_dvr(Z3, zmat({{2, 4}, {1, 2}}));
  EXPECT_EQ(sing.exponents, (std::vector<std::int64_t>{0}));
  EXPECT_EQ(sing.rank_deficiency, 1u);
  EXPECT_EQ(smith_over_dvr(Z3, zmat({{0, 0}, {0, 0}})).rank_deficiency, 2u);
}

TEST(Smith, KillsTorsionOverPowerSeries) {
  const auto R = make_power_series(3);
  Matrix<FiniteSeries::Scalar> M(2, 2, R.zero());
  M(0, 0) = s(R, "t");
  M(0, 1) = s(R, "1+t");
  M(1, 0) = s(R, "t^2");
  M(1, 1) = s(R, "t");
  // det = t^2 - t^2 - t^3 = -t^3.
  const auto sp = smith_over_dvr(R, M);
  EXPECT_EQ(sp.exponents, (std::vector<std::int64_t>{0, 3}));
  EXPECT_EQ(sp.left * M * sp.right, sp.diagonal);
}

// Witnesses and exponents on random integer matrices, square and
// rectangular, against the determinantal-divisor oracle.
TEST(Smith, RandomAgainstMinors) {
  std::mt19937_64 rng(17);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const IntegersAtP R(p);
    for (int it = 0; it < 60; ++it) {
      const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
      std::vector<std::vector<long>> m(rows, std::vector<long>(cols));
      for (auto& r : m)
        for (auto& x : r) x = static_cast<long>(rng() % 3 == 0 ? 0 : (rng() % 41)) - 20;
      if (rng() % 4 == 0 && rows > 1) m[rows - 1] = m[0];
      const auto M = zmat(m);
      const auto sp = smith_over_dvr(R, M);
      EXPECT_TRUE(is_diagonal(sp.diagonal));
      EXPECT_EQ(sp.left * M * sp.right, sp.diagonal);
      EXPECT_EQ(oracle::padic(oracle::leibniz_det(sp.left, R.zero()).value(), p), 0);
      EXPECT_EQ(oracle::padic(oracle::leibniz_det(sp.right, R.zero()).value(), p), 0);
      for (std::size_t k = 0; k < sp.exponents.size(); ++k)
        EXPECT_EQ(R.valuation(sp.diagonal(k, k)), Valuation(sp.exponents[k]));
      EXPECT_TRUE(std::is_sorted(sp.exponents.begin(), sp.exponents.end()));
      const auto expect = smith_by_minors(M, p);
      EXPECT_EQ(std::vector<long>(sp.exponents.begin(), sp.exponents.end()), expect);
      EXPECT_EQ(sp.rank_deficiency, std::min(rows, cols) - expect.size());
    }
  }
}

// The truncated elimination with an automatic precision gives the same
// exponents as the minors, including singular and rectangular matrices.
TEST(Smith, TruncatedAgainstMinors) {
  std::mt19937_64 rng(23);
  for (unsigned long p : {2ul, 3ul}) {
    const IntegersAtP R(p);
    for (int it = 0; it < 60; ++it) {
      const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
      std::vector<std::vector<long>> m(rows, std::vector<long>(cols));
      for (auto& r : m)
        for (auto& x : r) x = static_cast<long>(rng() % 2 == 0 ? 0 : (rng() % 65)) - 32;
      if (rng() % 3 == 0 && rows > 1) m[rows - 1] = m[0];
      const auto M = zmat(m);
      const auto expect = smith_by_minors(M, p);
      const auto sp = smith_exponents(R, M);
      EXPECT_EQ(std::vector<long>(sp.exponents.begin(), sp.exponents.end()), expect);
      EXPECT_EQ(sp.rank_deficiency, std::min(rows, cols) - expect.size());
      EXPECT_GT(smith_precision(R, M), static_cast<unsigned>(expect.empty() ? 0 : expect.back()));
    }
  }
  // Precision below the largest exponent loses it, as documented.
  const IntegersAtP Z2(2);
  EXPECT_EQ(smith_modulo(Z2, zmat({{2, 0}, {0, 8}}), 3).exponents, (std::vector<std::int64_t>{1}));
}

// Fraction-free determinant against Leibniz, including singular and
// non-integral inputs, and the precision bound it yields.
TEST(Smith, DeterminantAgainstLeibniz) {
  std::mt19937_64 rng(23);
  const IntegersAtP R(3);
  for (int it = 0; it < 80; ++it) {
    const std::size_t n = rng() % 5;
    Matrix<Rational> M(n, n, R.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        M(i, j) = Rational(mpq_class(static_cast<long>(rng() % 19) - 9, 1 + 3 * (rng() % 2) + rng() % 2));
    if (n > 1 && rng() % 3 == 0)
      for (std::size_t j = 0; j < n; ++j) M(n - 1, j) = M(0, j);
    const auto det = exact_determinant(R, M);
    EXPECT_EQ(det, n == 0 ? Rational(1) : oracle::leibniz_det(M, R.zero()));
  }
  const auto sing = zmat({{3, 9, 1}, {6, 18, 2}, {9, 0, 1}});
  EXPECT_TRUE(exact_determinant(R, sing).is_zero());
  EXPECT_EQ(smith_precision(R, zmat({{9, 0}, {0, 3}})), 4u);
  EXPECT_EQ(smith_exponents(R, sing).exponents, (std::vector<std::int64_t>{0, 1}));
}

TEST(TraceInvariant, Examples) {
  const IntegersAtP Z3(3), Z2(2);
  EXPECT_EQ(f_invariant(mono(Z3, {"-3", "0", "1"})), Valuation(1));
  EXPECT_EQ(f_invariant(mono(Z3, {"-3", "0", "0", "1"})), Valuation(5));
  EXPECT_EQ(f_invariant(mono(Z2, {"-2", "0", "1"})), Valuation(3));
  EXPECT_EQ(f_invariant(mono(Z2, {"-2", "-2", "1"})), Valuation(2));
  EXPECT_EQ(f_invariant(mono(Z2, {"-8", "0", "1"})), Valuation(5));
  EXPECT_EQ(f_invariant(mono(Z3, {"1", "0", "1"})), Valuation(0));
  const auto K = make_imperfect_series(2);
  EXPECT_TRUE(f_invariant(mono(K, {"u", "0", "1"})).is_infinite());
  EXPECT_FALSE(is_generically_etale(mono(K, {"u", "0", "1"})));
  const auto T2 = make_power_series(2);
  EXPECT_TRUE(f_invariant(mono(T2, {"t", "0", "1"})).is_infinite());
  EXPECT_TRUE(is_generically_etale(mono(Z2, {"-2", "0", "1"})));
}

TEST(TraceInvariant, CokernelFlag) {
  const IntegersAtP Z3(3), Z2(2);
  const auto tp = trace_profile(mono(Z2, {"-2", "-2", "1"}));
  EXPECT_EQ(tp.smith.exponents, (std::vector<std::int64_t>{1, 1}));
  EXPECT_TRUE(tp.cokernel_defined_over_residue);
  EXPECT_FALSE(cokernel_defined_over_residue(mono(Z2, {"-2", "0", "1"})));
  EXPECT_TRUE(cokernel_defined_over_residue(mono(Z3, {"-3", "0", "1"})));
  EXPECT_TRUE(cokernel_defined_over_residue(mono(Z3, {"1", "0", "1"})));
  EXPECT_TRUE(trace_profile(mono(Z3, {"1", "0", "1"})).etale);
  const auto K = make_imperfect_series(2);
  EXPECT_FALSE(cokernel_defined_over_residue(mono(K, {"u", "0", "1"})));
}

// f against v(det) by Leibniz expansion of an independently built Gram matrix.
TEST(TraceInvariant, MatchesLeibnizOnCorpus) {
  CorpusSpec spec;
  spec.seed = 3;
  spec.backends = {{DvrKind::IntegersAtP, 2, 1}, {DvrKind::IntegersAtP, 3, 1}};
  spec.degree_max = 4;
  spec.count = 40;
  for_each_algebra(spec, [&](const auto& A, const std::string& label) {
    using A_t = std::decay_t<decltype(A)>;
    if constexpr (std::is_same_v<A_t, FiniteFlatAlgebra<IntegersAtP>>) {
      const auto& t = A.table();
      const std::size_t n = A.rank();
      Matrix<Rational> G(n, n, Rational(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const auto xy = t.multiply(t.basis(i), t.basis(j));
          Rational tr(0);
          for (std::size_t k = 0; k < n; ++k) tr = tr + t.multiply(xy, t.basis(k))[k];
          G(i, j) = tr;
        }
      const long v = oracle::padic(oracle::leibniz_det(G, Rational(0)).value(), A.backend().prime().get_ui());
      const auto f = f_invariant(A);
      if (v < 0)
        EXPECT_TRUE(f.is_infinite()) << label;
      else
        EXPECT_EQ(f, Valuation(v)) << label;
    }
  });
}

TEST(Cotangent, MaximalIdealAndDimension) {
  const IntegersAtP Z2(2), Z3(3);
  const auto A = mono(Z2, {"-8", "0", "1"});
  const auto fiber = analyze_fiber(A.base_change_fiber());
  ASSERT_EQ(fiber.factors.size(), 1u);
  const auto gens = maximal_ideal_module(A, fiber.factors[0]);
  // p = (2, x) has colength 1 in Z_2^2.
  EXPECT_EQ(colength(Z2, gens, 2), 1);
  EXPECT_EQ(cotangent_dimension(A, fiber.factors[0], gens), 2u);

  const auto B = mono(Z3, {"-3", "0", "1"});
  const auto fb = analyze_fiber(B.base_change_fiber());
  EXPECT_EQ(cotangent_dimension(B, fb.factors[0], maximal_ideal_module(B, fb.factors[0])), 1u);
}

TEST(Cotangent, RegularityExamples) {
  const IntegersAtP Z2(2), Z3(3);
  auto reg = [](const auto& A) { return is_regular(A, analyze_fiber(A.base_change_fiber())); };
  EXPECT_TRUE(reg(mono(Z3, {"-3", "0", "1"})));
  EXPECT_TRUE(reg(mono(Z2, {"-2", "0", "1"})));
  EXPECT_TRUE(reg(mono(Z2, {"-2", "-2", "1"})));
  EXPECT_FALSE(reg(mono(Z2, {"-8", "0", "1"})));
  EXPECT_FALSE(reg(mono(Z3, {"-9", "0", "1"})));
  EXPECT_TRUE(reg(mono(Z3, {"1", "0", "1"})));
  EXPECT_FALSE(reg(mono(Z3, {"0", "0", "1"})));
  // R x R is etale, R[X]/(X^2) is not regular.
  EXPECT_TRUE(reg(FiniteFlatAlgebra<IntegersAtP>::product(mono(Z3, {"0", "1"}), mono(Z3, {"0", "1"}))));
  const auto K = make_imperfect_series(2);
  EXPECT_TRUE(reg(mono(K, {"u", "0", "1"})));
  const auto T = make_power_series(3);
  EXPECT_TRUE(reg(mono(T, {"-t", "0", "0", "1"})));
  EXPECT_FALSE(reg(mono(T, {"-t^2", "0", "0", "1"})));
}

TEST(Cotangent, ShortcutAgreesOnCorpus) {
  std::size_t checked = 0;
  for (const auto& spec : lemma_corpora(9)) {
    for_each_algebra(spec, [&](const auto& A, const std::string& label) {
      if (!A.monogenic_poly()) return;
      const auto fiber = analyze_fiber(A.base_change_fiber());
      const auto rep = cotangent_report(A, fiber);
      ASSERT_EQ(rep.monogenic_shortcut.size(), fiber.factors.size()) << label;
      for (std::size_t i = 0; i < fiber.factors.size(); ++i) {
        EXPECT_EQ(rep.monogenic_shortcut[i], rep.ideals[i].regular) << label;
        ++checked;
      }
    });
  }
  EXPECT_GT(checked, 100u);
}

TEST(Invariance, BasisChangeAndProducts) {
  const IntegersAtP Z2(2);
  detail::CorpusRng rng(1, 0);
  const std::vector<FiniteFlatAlgebra<IntegersAtP>> algs{mono(Z2, {"-2", "-2", "1"}), mono(Z2, {"-8", "0", "1"}),
                                                          mono(Z2, {"1", "1", "1"}), mono(Z2, {"-2", "0", "0", "1"})};
  for (const auto& A : algs) {
    const auto v = theorem_verdict(A);
    for (int k = 0; k < 5; ++k) {
      const auto B = A.change_basis(detail::random_unimodular(Z2, rng, A.rank()));
      EXPECT_EQ(theorem_verdict(B), v);
    }
  }
  for (const auto& A : algs)
    for (const auto& B : algs) {
      const auto P = FiniteFlatAlgebra<IntegersAtP>::product(A, B);
      const auto va = theorem_verdict(A), vb = theorem_verdict(B), vp = theorem_verdict(P);
      EXPECT_EQ(vp.f, va.f + vb.f);
      EXPECT_EQ(vp.geometric_points, va.geometric_points + vb.geometric_points);
      EXPECT_EQ(vp.regular, va.regular && vb.regular);
      EXPECT_EQ(vp.cond1, va.cond1 && vb.cond1);
    }
}
