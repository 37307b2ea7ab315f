#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dvrtrace;
using fx::mono;

namespace {

json zp_doc(unsigned p, const std::vector<long long>& coeffs) {
  return {{"dvr", {{"kind", "Zp"}, {"p", p}}}, {"algebra", {{"kind", "monogenic"}, {"poly", coeffs}}}};
}

}  // namespace

TEST(Verdict, SpotCases) {
  const IntegersAtP Z3(3), Z2(2);
  auto v = theorem_verdict(mono(Z3, {"-3", "0", "1"}));
  EXPECT_EQ(v.f, Valuation(1));
  EXPECT_EQ(v.geometric_points, 1u);
  EXPECT_EQ(v.slack, Valuation(0));
  EXPECT_TRUE(v.cond1 && v.cond2 && v.cond3 && v.consistent);

  v = theorem_verdict(mono(Z2, {"-2", "0", "1"}));
  EXPECT_EQ(v.f, Valuation(3));
  EXPECT_EQ(v.slack, Valuation(2));
  EXPECT_TRUE(v.regular);
  EXPECT_FALSE(v.cond1 || v.cond2 || v.cond3);
  EXPECT_TRUE(v.consistent);

  v = theorem_verdict(mono(Z2, {"-2", "-2", "1"}));
  EXPECT_EQ(v.f, Valuation(2));
  EXPECT_EQ(v.slack, Valuation(1));
  EXPECT_TRUE(v.cokernel_defined_over_residue);
  EXPECT_FALSE(v.tame);
  EXPECT_FALSE(v.cond1 || v.cond2 || v.cond3);
  EXPECT_TRUE(v.consistent);

  v = theorem_verdict(mono(Z3, {"1", "0", "1"}));
  EXPECT_EQ(v.f, Valuation(0));
  EXPECT_EQ(v.geometric_points, 2u);
  EXPECT_EQ(v.slack, Valuation(0));
  EXPECT_TRUE(v.cond1 && v.cond2 && v.cond3 && v.consistent);
}

TEST(Analyze, RankOneIsEtale) {
  const auto r = analyze(zp_doc(5, {-1, 1}));
  EXPECT_EQ(r.outcome(), Outcome::Ok);
  ASSERT_TRUE(r.verdict);
  EXPECT_EQ(r.verdict->f, Valuation(0));
  EXPECT_EQ(r.verdict->geometric_points, 1u);
  EXPECT_TRUE(r.verdict->cond1 && r.verdict->cond2 && r.verdict->cond3);
}

TEST(Analyze, PaperQuadratic) {
  // a = 1, b = 2: X^2 - 2X - 2.
  const auto r = analyze(zp_doc(2, {-2, -2, 1}));
  ASSERT_EQ(r.outcome(), Outcome::Ok);
  EXPECT_TRUE((*r.cotangent)["regular"].get<bool>());
  EXPECT_TRUE((*r.trace)["cokernel_defined_over_residue"].get<bool>());
  EXPECT_TRUE((*r.fiber)["factors"][0]["separable"].get<bool>());
  EXPECT_FALSE((*r.fiber)["factors"][0]["tame"].get<bool>());
  const auto row = grid_row(1, 2);
  EXPECT_TRUE(row.matches());
}

TEST(Analyze, ImperfectQuadratic) {
  const json doc = {{"dvr", {{"kind", "kut"}, {"p", 2}}}, {"algebra", {{"kind", "monogenic"}, {"poly", {"u", 0, 1}}}}};
  const auto r = analyze(doc);
  ASSERT_EQ(r.outcome(), Outcome::Ok);
  EXPECT_EQ((*r.trace)["f"], "inf");
  EXPECT_FALSE((*r.trace)["generically_etale"].get<bool>());
  EXPECT_TRUE(r.verdict->slack.is_infinite());
  EXPECT_FALSE(r.verdict->cond1 || r.verdict->cond2 || r.verdict->cond3);
  EXPECT_TRUE(r.verdict->consistent);
}

TEST(Analyze, InvalidInputs) {
  EXPECT_EQ(analyze(json::parse(R"({"dvr":{"kind":"Zp","p":4},"algebra":{"kind":"monogenic","poly":[1,1]}})")).outcome(),
            Outcome::InvalidInput);
  EXPECT_EQ(analyze(json::parse(R"({"dvr":{"kind":"Zp","p":3},"algebra":{"kind":"monogenic","poly":[1,2]}})")).outcome(),
            Outcome::InvalidInput);
  EXPECT_EQ(analyze(json::parse(R"({"algebra":{}})")).outcome(), Outcome::InvalidInput);
  EXPECT_EQ(analyze(json::parse(R"({"dvr":{"kind":"kt","q":6},"algebra":{"kind":"monogenic","poly":[0,1]}})")).outcome(),
            Outcome::InvalidInput);
  const auto bad = analyze(json::parse(
      R"({"dvr":{"kind":"Zp","p":3},"algebra":{"kind":"table","rank":2,"constants":[1,0,0,1,0,0,0,1],"unit":[1,0]}})"));
  EXPECT_EQ(bad.outcome(), Outcome::InvalidInput);
  EXPECT_FALSE(bad.violations.empty());
  EXPECT_THROW(grid_example(3, {0}, {2}), InvalidInput);
  EXPECT_EQ(exit_code(Outcome::InvalidInput, false), 2);
  EXPECT_EQ(exit_code(Outcome::CapabilitySkip, false), 0);
  EXPECT_EQ(exit_code(Outcome::CapabilitySkip, true), 3);
  EXPECT_EQ(exit_code(Outcome::Violation, false), 1);
}

TEST(Analyze, ImperfectTableIsCapabilitySkip) {
  const json doc = json::parse(
      R"({"dvr":{"kind":"kut","p":2},"algebra":{"kind":"table","rank":2,"constants":[1,0,0,1,0,1,"u",0],"unit":[1,0]}})");
  const auto r = analyze(doc);
  EXPECT_EQ(r.outcome(), Outcome::CapabilitySkip);
  ASSERT_EQ(r.capability.size(), 1u);
  EXPECT_EQ(r.capability[0].stage, "fiber");
  EXPECT_TRUE(r.trace.has_value());
  EXPECT_FALSE(r.verdict.has_value());
}

TEST(Report, ReplayIsBitExact) {
  CorpusSpec spec;
  spec.seed = 5;
  spec.backends = parse_backend_list("Zp:2,Zp:3,kt:4,kut:2");
  spec.count = 25;
  for (const auto& doc : generate_corpus(spec)) {
    const auto first = analyze(doc);
    const auto again = analyze(first.to_json()["input"]);
    EXPECT_EQ(first.to_json(false).dump(), again.to_json(false).dump());
    // Serialize the algebra again and compare.
    const auto round = std::visit([](const auto& A) { return document_from_algebra(A); }, document_to_algebra(doc));
    EXPECT_EQ(round["algebra"], doc["algebra"]);
  }
}

TEST(Report, VerdictAuditedFromSubReports) {
  for (const auto& doc : {zp_doc(3, {-3, 0, 1}), zp_doc(2, {-2, 0, 1}), zp_doc(2, {-8, 0, 1}), zp_doc(5, {1, 0, 0, 1})}) {
    const auto r = analyze(doc);
    ASSERT_TRUE(r.verdict);
    const auto j = r.to_json();
    const auto v = verdict_from_reports(j["rank"], j["fiber"], j["trace"], j["cotangent"]);
    ASSERT_TRUE(v);
    EXPECT_EQ(*v, *r.verdict);
    EXPECT_EQ(j["verdict"]["cond1"], r.verdict->cond1);
  }
}

TEST(Corpus, Deterministic) {
  CorpusSpec spec;
  spec.backends = parse_backend_list("Zp:2,kt:2");
  spec.count = 10;
  EXPECT_EQ(generate_corpus(spec), generate_corpus(spec));
  CorpusSpec other = spec;
  other.seed = 43;
  EXPECT_NE(generate_corpus(spec), generate_corpus(other));
  // Instances do not depend on count.
  CorpusSpec longer = spec;
  longer.count = 20;
  const auto a = generate_corpus(spec), b = generate_corpus(longer);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Corpus, ShapesFollowTheSpec) {
  CorpusSpec spec;
  spec.seed = 8;
  spec.backends = parse_backend_list("Zp:3,kt:3");
  spec.count = 60;
  spec.degree_min = 2;
  spec.degree_max = 4;
  spec.monogenic = 1;
  spec.product = 1;
  spec.table = 0;
  std::size_t products = 0;
  for (const auto& doc : generate_corpus(spec)) {
    const auto& alg = doc["algebra"];
    if (alg["kind"] == "monogenic") {
      const auto n = alg["poly"].size() - 1;
      EXPECT_GE(n, 2u);
      EXPECT_LE(n, 4u);
      EXPECT_EQ(alg["poly"].back(), "1");
    } else {
      ASSERT_EQ(alg["kind"], "product");
      ++products;
      std::size_t sum = 0;
      for (const auto& f : alg["factors"]) sum += f["poly"].size() - 1;
      const auto r = analyze(doc);
      EXPECT_EQ(r.rank, sum);
    }
  }
  EXPECT_GT(products, 10u);
  CorpusSpec bad = spec;
  bad.degree_min = 6;
  bad.degree_max = 2;
  EXPECT_THROW(generate_corpus(bad), InvalidInput);
  bad = spec;
  bad.valuation_min = -1;
  EXPECT_THROW(generate_corpus(bad), InvalidInput);
}

TEST(Suite, SpotCorpus) {
  const auto s = run_suite({zp_doc(3, {-3, 0, 1}), zp_doc(3, {1, 0, 1}), zp_doc(2, {-2, 0, 1})});
  EXPECT_EQ(s.instances, 3u);
  EXPECT_EQ(s.equality, 2u);
  EXPECT_EQ(s.strict, 1u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_EQ(s.outcome(), Outcome::Ok);
  const auto e = run_suite({});
  EXPECT_EQ(e.instances, 0u);
  EXPECT_EQ(e.outcome(), Outcome::Ok);
}

TEST(Grid, AllRowsMatch) {
  const auto rows = grid_example(2, {0, 1, 3}, {2, 4, 6, 12});
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.matches()) << r.a << "," << r.b;
    EXPECT_EQ(r.a_used, r.a);
  }
  // An odd b is moved into m_R first.
  const auto odd = grid_row(1, 3);
  EXPECT_EQ(odd.a_used, 0);
  EXPECT_EQ(odd.b_used, 4);
  EXPECT_TRUE(odd.matches());
}
