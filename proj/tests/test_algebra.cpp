#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dvrtrace;
using fx::mono;
using fx::s;

namespace {

using ZAlg = FiniteFlatAlgebra<IntegersAtP>;

Vec<Rational> zv(std::initializer_list<long long> xs) {
  Vec<Rational> v;
  for (auto x : xs) v.push_back(Rational(x));
  return v;
}

}  // namespace

TEST(Monogenic, PaperQuadraticTable) {
  const IntegersAtP R(2);
  for (long long a : {0, 1, 3})
    for (long long b : {2, 4, 6, 12}) {
      const auto A = mono(R, {std::to_string(-b), std::to_string(-2 * a), "1"});
      // X * X = 2a X + b.
      EXPECT_EQ(A.table().multiply(zv({0, 1}), zv({0, 1})), zv({b, 2 * a}));
      EXPECT_EQ(A.trace(zv({0, 1})), Rational(2 * a));
      EXPECT_EQ(A.trace(zv({b, 2 * a})), Rational(4 * a * a + 2 * b));
      const auto G = A.trace_gram();
      EXPECT_EQ(G(0, 0), Rational(2));
      EXPECT_EQ(G(0, 1), Rational(2 * a));
      EXPECT_EQ(G(1, 1), Rational(4 * a * a + 2 * b));
    }
}

TEST(Monogenic, SmallExamples) {
  const IntegersAtP R(3);
  const auto one = mono(R, {"-1", "1"});
  EXPECT_EQ(one.rank(), 1u);
  EXPECT_EQ(one.table().multiply(zv({1}), zv({1})), zv({1}));
  const auto A = mono(R, {"-3", "0", "1"});
  EXPECT_EQ(A.table().multiply(zv({0, 1}), zv({0, 1})), zv({3, 0}));
  EXPECT_THROW(mono(R, {"1", "3"}), InvalidInput);
  EXPECT_THROW(mono(R, {"1"}), InvalidInput);
}

TEST(Product, RanksAddAndBlocksStayDiagonal) {
  const IntegersAtP R(3);
  const auto A = mono(R, {"-3", "0", "1"});
  const auto B = mono(R, {"-1", "1"});
  const auto P = ZAlg::product(A, B);
  EXPECT_EQ(P.rank(), 3u);
  EXPECT_EQ(P.table().unit(), zv({1, 0, 1}));
  EXPECT_TRUE(P.validate().empty());
  const auto G = P.trace_gram();
  EXPECT_EQ(G(0, 2), Rational(0));
  EXPECT_EQ(G(1, 1), Rational(6));
  EXPECT_EQ(G(2, 2), Rational(1));
  const auto RR = ZAlg::product(B, B);
  EXPECT_EQ(RR.rank(), 2u);
  EXPECT_EQ(RR.table().multiply(zv({2, 3}), zv({5, 7})), zv({10, 21}));
  EXPECT_THROW(ZAlg::product(A, mono(IntegersAtP(5), {"-1", "1"})), InvalidInput);
}

TEST(Validate, ReportsBrokenLaws) {
  const IntegersAtP R(3);
  EXPECT_TRUE(mono(R, {"1", "2", "0", "1"}).validate().empty());

  auto c = mono(R, {"-3", "0", "1"}).table().constants();
  // x0 x1 != x1 x0
  c[(0 * 2 + 1) * 2 + 0] = Rational(1);
  auto bad = ZAlg::from_table(R, StructureTable<Rational>(2, c, zv({1, 0}), R.zero()));
  auto v = bad.validate();
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, Violation::Kind::Commutativity);
  EXPECT_EQ(v.front().indices, (std::vector<std::size_t>{0, 1}));

  // Symmetric but not associative: x1 x1 = x0 + x1 with x0 not a unit.
  std::vector<Rational> d(8, Rational(0));
  d[(0 * 2 + 0) * 2 + 0] = Rational(1);
  d[(1 * 2 + 1) * 2 + 1] = Rational(1);
  d[(1 * 2 + 1) * 2 + 0] = Rational(1);
  d[(0 * 2 + 1) * 2 + 1] = Rational(1);
  d[(1 * 2 + 0) * 2 + 1] = Rational(1);
  d[(0 * 2 + 0) * 2 + 1] = Rational(1);
  auto nonassoc = ZAlg::from_table(R, StructureTable<Rational>(2, d, zv({1, 0}), R.zero()));
  bool named_triple = false;
  for (const auto& x : nonassoc.validate())
    named_triple = named_triple || (x.kind == Violation::Kind::Associativity && x.indices.size() == 3);
  EXPECT_TRUE(named_triple);

  auto c2 = mono(R, {"-3", "0", "1"}).table().constants();
  auto wrong_unit = ZAlg::from_table(R, StructureTable<Rational>(2, c2, zv({0, 1}), R.zero()));
  bool unit_law = false;
  for (const auto& x : wrong_unit.validate()) unit_law = unit_law || x.kind == Violation::Kind::UnitLaw;
  EXPECT_TRUE(unit_law);
}

TEST(Validate, FlagsEntriesOutsideTheRing) {
  const IntegersAtP R(3);
  auto c = mono(R, {"-3", "0", "1"}).table().constants();
  c[(1 * 2 + 1) * 2 + 0] = Rational(mpq_class(1, 3));
  auto bad = ZAlg::from_table(R, StructureTable<Rational>(2, c, zv({1, 0}), R.zero()));
  ASSERT_FALSE(bad.validate().empty());
  EXPECT_EQ(bad.validate().front().kind, Violation::Kind::NotIntegral);
}

TEST(MultOperator, Examples) {
  const IntegersAtP R(3);
  const auto A = mono(R, {"-3", "0", "1"});
  const auto M = A.mult_operator(zv({0, 1}));
  EXPECT_EQ(M(0, 0), Rational(0));
  EXPECT_EQ(M(0, 1), Rational(3));
  EXPECT_EQ(M(1, 0), Rational(1));
  EXPECT_EQ(M(1, 1), Rational(0));
  EXPECT_EQ(A.mult_operator(A.table().unit()), Matrix<Rational>::identity(2, R.zero()));
  EXPECT_EQ(A.mult_operator(zv({2, 5})) , A.mult_operator(zv({2, 0})) + A.mult_operator(zv({0, 5})));
  EXPECT_THROW(A.mult_operator(zv({1, 2, 3})), std::invalid_argument);
}

TEST(Trace, Examples) {
  const IntegersAtP R(3);
  const auto A = mono(R, {"-3", "0", "1"});
  EXPECT_EQ(A.trace(zv({1, 0})), Rational(2));
  EXPECT_EQ(A.trace(zv({3, 0})), Rational(6));
  const auto G = A.trace_gram();
  EXPECT_EQ(G, Matrix<Rational>::from_columns({zv({2, 0}), zv({0, 6})}, 2, R.zero()));
}

TEST(BaseChange, FiberExamples) {
  const IntegersAtP R(3);
  const auto B = mono(R, {"-3", "0", "1"}).base_change_fiber();
  ASSERT_TRUE(B.monogenic);
  EXPECT_EQ(*B.monogenic, fx::fp(3, {0, 0, 1}));
  EXPECT_EQ(*mono(R, {"1", "0", "1"}).base_change_fiber().monogenic, fx::fp(3, {1, 0, 1}));
}

TEST(MinPoly, Examples) {
  const auto B = fiber_from_monogenic(fx::fp(3, {0, 0, 1}));
  const GF z = gf_zero(3);
  EXPECT_EQ(min_poly(B.table, Vec<GF>{z, z.one_like()}), fx::fp(3, {0, 0, 1}));
  EXPECT_EQ(min_poly(B.table, B.table.unit()), fx::fp(3, {-1, 1}));
  const auto C = fiber_from_monogenic(fx::fp(3, {-1, 0, 1}));
  EXPECT_EQ(min_poly(C.table, Vec<GF>{z, z.one_like()}), fx::fp(3, {-1, 0, 1}));
}

// Properties on seeded random algebras of every backend.
template <class D>
void check_trace_properties(const D& R, std::uint64_t seed) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.backends = {R.descriptor()};
  spec.count = 15;
  spec.degree_max = 4;
  for_each_algebra(spec, [&](const auto& A, const std::string& label) {
    using A_t = std::decay_t<decltype(A)>;
    if constexpr (std::is_same_v<A_t, FiniteFlatAlgebra<D>>) {
      EXPECT_TRUE(A.validate().empty()) << label;
      const auto B = A.base_change_fiber();
      const auto G = A.trace_gram();
      EXPECT_TRUE(G.is_symmetric()) << label;
      const auto GB = B.table.trace_gram();
      for (std::size_t i = 0; i < A.rank(); ++i) {
        const auto x = A.table().basis(i);
        const auto M = A.mult_operator(x);
        auto diag = R.zero();
        for (std::size_t k = 0; k < A.rank(); ++k) diag = diag + M(k, k);
        EXPECT_EQ(A.trace(x), diag);
        EXPECT_EQ(R.reduce(A.trace(x)), B.table.trace(A.reduce(x))) << label;
        for (std::size_t j = 0; j < A.rank(); ++j) EXPECT_EQ(R.reduce(G(i, j)), GB(i, j)) << label;
      }
      const auto a = A.table().basis(0), b = A.table().basis(A.rank() - 1);
      const auto r = R.from_int(7);
      EXPECT_EQ(A.trace(vec_add(vec_scale(a, r), b)), r * A.trace(a) + A.trace(b));
      EXPECT_EQ(A.trace(A.table().unit()), R.from_int(static_cast<long long>(A.rank())));
    }
  });
}

TEST(TraceProperties, LinearityAndBaseChange) {
  check_trace_properties(IntegersAtP(2), 1);
  check_trace_properties(IntegersAtP(5), 2);
  check_trace_properties(make_power_series(4), 3);
  check_trace_properties(make_power_series(3), 4);
  check_trace_properties(make_imperfect_series(2), 5);
}

TEST(TraceProperties, ProductGramIsBlockDiagonal) {
  const auto R = make_power_series(2);
  const auto A = mono(R, {"t", "1", "1"});
  const auto B = mono(R, {"1+t", "0", "t", "1"});
  const auto P = FiniteFlatAlgebra<FiniteSeries>::product(A, B);
  const auto G = P.trace_gram(), GA = A.trace_gram(), GB = B.trace_gram();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      if (i < 2 && j < 2)
        EXPECT_EQ(G(i, j), GA(i, j));
      else if (i >= 2 && j >= 2)
        EXPECT_EQ(G(i, j), GB(i - 2, j - 2));
      else
        EXPECT_TRUE(G(i, j).is_zero());
    }
}

TEST(ChangeBasis, RejectsNonUnimodular) {
  const IntegersAtP R(3);
  const auto A = mono(R, {"-3", "0", "1"});
  auto P = Matrix<Rational>::identity(2, R.zero());
  P(1, 1) = Rational(3);
  EXPECT_THROW(A.change_basis(P), InvalidInput);
  P(1, 1) = Rational(2);
  P(0, 1) = Rational(5);
  const auto moved = A.change_basis(P);
  EXPECT_TRUE(moved.validate().empty());
  EXPECT_EQ(moved.trace(moved.table().unit()), Rational(2));
}
