#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvrtrace/dvrtrace.hpp"

using namespace dvrtrace;

namespace {

int run_analyze(const std::string& path, const std::string& format, bool strict, bool timing) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "cannot open " << path << "\n";
      return 2;
    }
    buf << in.rdbuf();
  }
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return 2;
  }
  const AnalysisReport rep = analyze(doc);
  if (format == "json")
    std::cout << rep.to_json(timing).dump(2) << "\n";
  else
    std::cout << rep.to_text();
  return exit_code(rep.outcome(), strict);
}

int run_grid(std::uint64_t p, const std::vector<long long>& as, const std::vector<long long>& bs,
             const std::string& format) {
  std::vector<GridRow> rows;
  try {
    rows = grid_example(p, as, bs);
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  bool all = true;
  json out = json::array();
  auto yn = [](bool b) { return b ? "yes" : "no "; };
  if (format == "text")
    std::cout << "   a    b |  a'   b' |  f  | mQ=0 reg sep tame | gram | match\n";
  for (const auto& r : rows) {
    all = all && r.matches();
    if (format == "json") {
      out.push_back({{"a", r.a}, {"b", r.b}, {"a_used", r.a_used}, {"b_used", r.b_used},
                     {"f", valuation_to_json(r.f)}, {"gram_matches", r.gram_matches},
                     {"cokernel_defined_over_residue", {r.q_defined[0], r.q_defined[1]}},
                     {"regular", {r.regular[0], r.regular[1]}}, {"separable", {r.separable[0], r.separable[1]}},
                     {"tame", {r.tame[0], r.tame[1]}}, {"matches", r.matches()}});
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "%4lld %4lld | %3lld %4lld | %3s | %s  %s %s %s  | %s  | %s\n", r.a, r.b,
                    r.a_used, r.b_used, r.f.to_string().c_str(), yn(r.q_defined[0]), yn(r.regular[0]),
                    yn(r.separable[0]), yn(r.tame[0]), yn(r.gram_matches), r.matches() ? "ok" : "MISMATCH");
      std::cout << line;
    }
  }
  if (format == "json") std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

int run_suite_cmd(const CorpusSpec& spec, bool strict, bool verbose, const std::string& format) {
  SuiteSummary s;
  try {
    s = run_suite(generate_corpus(spec));
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (format == "json") {
    std::cout << s.to_json().dump(2) << "\n";
  } else {
    for (const auto& l : s.lines)
      if (verbose || l.find("INCONSISTENT") != std::string::npos || l.find("skipped") != std::string::npos ||
          l.find("invalid") != std::string::npos)
        std::cout << l << "\n";
    std::cout << s.to_json().dump() << "\n";
  }
  // Corpus documents are generated, so an invalid one is a harness defect.
  if (s.invalid) return 1;
  return exit_code(s.outcome(), strict);
}

int run_selftest(std::uint64_t seed) {
  const std::vector<SuiteResult> results{
      fiber_trace_suite(seed),       tameness_h_suite(seed),        kernel_of_trace_suite(seed),
      surjectivity_suite(seed),      geometric_fiber_suite(seed),   h_invariance_suite(seed),
      smith_length_suite(seed),      basis_invariance_suite(seed),  additivity_suite(seed)};
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.ok() ? "[pass] " : "[FAIL] ") << r.line() << "\n";
    for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    ok = ok && r.ok();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-form invariants of finite flat algebras over discrete valuation rings"};
  app.require_subcommand(1);

  std::string path, format = "text";
  bool strict = false, no_timing = false;
  auto* an = app.add_subcommand("analyze", "Analyze one algebra document");
  an->add_option("file", path, "Input JSON document, or - for stdin")->required();
  an->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  an->add_flag("--strict", strict, "Exit 3 when a capability limit is reached");
  an->add_flag("--no-timing", no_timing, "Omit stage timings from JSON output");

  std::uint64_t p = 2;
  std::vector<long long> as{0, 1, 3}, bs{2, 4, 6, 12};
  auto* grid = app.add_subcommand("grid-example", "Quadratic example X^2 - 2aX - b over Z_(p)");
  grid->add_option("--p", p);
  grid->add_option("--a-list", as)->delimiter(',');
  grid->add_option("--b-list", bs)->delimiter(',');
  grid->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CorpusSpec spec;
  std::string backends = "Zp:2,Zp:3,Zp:5,kt:2,kt:4,kut:2";
  bool verbose = false;
  auto* suite = app.add_subcommand("suite", "Sweep a seeded random corpus");
  suite->add_option("--seed", spec.seed);
  suite->add_option("--count", spec.count);
  suite->add_option("--backends", backends);
  suite->add_option("--degree-min", spec.degree_min);
  suite->add_option("--degree-max", spec.degree_max);
  suite->add_option("--valuation-min", spec.valuation_min);
  suite->add_option("--valuation-max", spec.valuation_max);
  std::vector<unsigned> mix;
  suite->add_option("--mix", mix, "Weights monogenic,product,table")->delimiter(',')->expected(3);
  suite->add_flag("--strict", strict);
  suite->add_flag("--verbose", verbose, "Print every instance");
  suite->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  std::uint64_t self_seed = 7;
  auto* self = app.add_subcommand("selftest", "Run the lemma-level property suites");
  self->add_option("--seed", self_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*an) return run_analyze(path, format, strict, !no_timing);
  if (*grid) return run_grid(p, as, bs, format);
  if (*suite) {
    try {
      spec.backends = parse_backend_list(backends);
      if (!mix.empty()) {
        spec.monogenic = mix[0];
        spec.product = mix[1];
        spec.table = mix[2];
      }
    } catch (const InvalidInput& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    return run_suite_cmd(spec, strict, verbose, format);
  }
  if (*self) return run_selftest(self_seed);
  return 2;
}
