#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/fiber.hpp"
#include "dvrtrace/invariants.hpp"
#include "dvrtrace/parse.hpp"
#include "dvrtrace/verdict.hpp"

namespace dvrtrace {

using json = nlohmann::json;

using AnyBackend = std::variant<IntegersAtP, FiniteSeries, ImperfectSeries>;
using AnyAlgebra =
    std::variant<FiniteFlatAlgebra<IntegersAtP>, FiniteFlatAlgebra<FiniteSeries>, FiniteFlatAlgebra<ImperfectSeries>>;

namespace detail {

inline std::uint64_t read_count(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() <= 0)
    throw InvalidInput(std::string("expected a positive integer \"") + key + "\"");
  return j[key].get<std::uint64_t>();
}

inline std::string scalar_text(const json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  if (j.is_string()) return j.get<std::string>();
  throw InvalidInput("scalar must be an integer or a string, got " + j.dump());
}

}  // namespace detail

/// {"kind":"Zp","p":2}, {"kind":"kt","q":9}, {"kind":"kut","p":2}.
inline DvrDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw InvalidInput("dvr must be {\"kind\": ...}");
  const std::string kind = j["kind"];
  try {
    if (kind == "Zp") {
      const auto p = detail::read_count(j, "p");
      if (!detail::is_small_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not a supported prime");
      return {DvrKind::IntegersAtP, p, 1};
    }
    if (kind == "kt") return power_series_descriptor(detail::read_count(j, "q"));
    if (kind == "kut") {
      const auto p = detail::read_count(j, "p");
      if (!detail::is_small_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not a supported prime");
      return {DvrKind::ImperfectSeries, p, 1};
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  throw InvalidInput("unknown dvr kind \"" + kind + "\"");
}

inline json descriptor_to_json(const DvrDescriptor& d) {
  switch (d.kind) {
    case DvrKind::IntegersAtP: return {{"kind", "Zp"}, {"p", d.p}};
    case DvrKind::PowerSeries: return {{"kind", "kt"}, {"q", d.q()}};
    case DvrKind::ImperfectSeries: return {{"kind", "kut"}, {"p", d.p}};
  }
  return {};
}

inline AnyBackend make_backend(const DvrDescriptor& d) {
  switch (d.kind) {
    case DvrKind::IntegersAtP: return IntegersAtP(d.p);
    case DvrKind::PowerSeries: return make_power_series(d.q());
    case DvrKind::ImperfectSeries: return make_imperfect_series(d.p);
  }
  throw InvalidInput("unknown dvr kind");
}

template <DvrBackend D>
typename D::Scalar scalar_from_json(const D& R, const json& j) {
  return parse_scalar(R, detail::scalar_text(j));
}

/// Coefficient array, constant term first.
template <DvrBackend D>
Poly<typename D::Scalar> poly_from_json(const D& R, const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("polynomial must be a nonempty coefficient array");
  std::vector<typename D::Scalar> c;
  for (const auto& x : j) c.push_back(scalar_from_json(R, x));
  return Poly<typename D::Scalar>(R.zero(), std::move(c));
}

template <DvrBackend D>
FiniteFlatAlgebra<D> algebra_from_json(const D& R, const json& j) {
  using A = FiniteFlatAlgebra<D>;
  using S = typename D::Scalar;
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InvalidInput("algebra must be {\"kind\": \"monogenic\" | \"product\" | \"table\", ...}");
  const std::string kind = j["kind"];
  if (kind == "monogenic") {
    if (!j.contains("poly")) throw InvalidInput("monogenic algebra needs \"poly\"");
    return A::from_monogenic(R, poly_from_json(R, j["poly"]));
  }
  if (kind == "product") {
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
      throw InvalidInput("product algebra needs a nonempty \"factors\" array");
    A acc = algebra_from_json(R, j["factors"][0]);
    for (std::size_t i = 1; i < j["factors"].size(); ++i) acc = A::product(acc, algebra_from_json(R, j["factors"][i]));
    return acc;
  }
  if (kind == "table") {
    const std::size_t n = detail::read_count(j, "rank");
    if (n > 16) throw InvalidInput("rank " + std::to_string(n) + " exceeds the supported bound 16");
    if (!j.contains("constants") || !j["constants"].is_array()) throw InvalidInput("table algebra needs \"constants\"");
    std::vector<S> c;
    const json& cj = j["constants"];
    if (cj.size() == n * n * n && !cj[0].is_array()) {
      for (const auto& x : cj) c.push_back(scalar_from_json(R, x));
    } else {
      if (cj.size() != n) throw InvalidInput("constants must be n*n*n flat or nested n x n x n");
      for (const auto& row : cj) {
        if (!row.is_array() || row.size() != n) throw InvalidInput("constants must be nested n x n x n");
        for (const auto& cell : row) {
          if (!cell.is_array() || cell.size() != n) throw InvalidInput("constants must be nested n x n x n");
          for (const auto& x : cell) c.push_back(scalar_from_json(R, x));
        }
      }
    }
    Vec<S> unit(n, R.zero());
    if (j.contains("unit")) {
      if (!j["unit"].is_array() || j["unit"].size() != n) throw InvalidInput("unit must have length rank");
      for (std::size_t i = 0; i < n; ++i) unit[i] = scalar_from_json(R, j["unit"][i]);
    } else {
      unit[0] = R.one();
    }
    return A::from_table(R, StructureTable<S>(n, std::move(c), std::move(unit), R.zero()));
  }
  throw InvalidInput("unknown algebra kind \"" + kind + "\"");
}

/// Parses {"dvr": ..., "algebra": ...}.
inline AnyAlgebra document_to_algebra(const json& doc) {
  if (!doc.is_object() || !doc.contains("dvr") || !doc.contains("algebra"))
    throw InvalidInput("input document needs \"dvr\" and \"algebra\"");
  return std::visit([&](const auto& R) -> AnyAlgebra { return algebra_from_json(R, doc["algebra"]); },
                    make_backend(descriptor_from_json(doc["dvr"])));
}

template <DvrBackend D>
json algebra_to_json(const FiniteFlatAlgebra<D>& A) {
  using A_t = FiniteFlatAlgebra<D>;
  switch (A.provenance()) {
    case A_t::Provenance::Monogenic: {
      json c = json::array();
      for (const auto& x : A.monogenic_poly()->coeffs()) c.push_back(format_scalar(x));
      return {{"kind", "monogenic"}, {"poly", c}};
    }
    case A_t::Provenance::Product: {
      json f = json::array();
      for (const auto& comp : A.components()) f.push_back(algebra_to_json(comp));
      return {{"kind", "product"}, {"factors", f}};
    }
    case A_t::Provenance::Table: break;
  }
  json c = json::array(), u = json::array();
  for (const auto& x : A.table().constants()) c.push_back(format_scalar(x));
  for (const auto& x : A.table().unit()) u.push_back(format_scalar(x));
  return {{"kind", "table"}, {"rank", A.rank()}, {"constants", c}, {"unit", u}};
}

template <DvrBackend D>
json document_from_algebra(const FiniteFlatAlgebra<D>& A) {
  return {{"dvr", descriptor_to_json(A.backend().descriptor())}, {"algebra", algebra_to_json(A)}};
}

inline json valuation_to_json(const Valuation& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

template <class T>
json matrix_to_json(const Matrix<T>& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(M(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

template <Field K>
json fiber_to_json(const FiberReport<K>& rep) {
  json factors = json::array();
  for (const auto& f : rep.factors)
    factors.push_back({{"dim", f.dim},
                       {"e", f.ramification},
                       {"residue_degree", f.residue_degree},
                       {"separable_degree", f.separable_degree},
                       {"inseparable_exponent", f.inseparable_exponent},
                       {"h", f.h},
                       {"tame", f.tame},
                       {"separable", f.separable},
                       {"residue_field", f.residue_poly.to_string("T")}});
  return {{"rank", rep.rank},
          {"characteristic", rep.characteristic},
          {"geometric_points", rep.geometric_points},
          {"tame", rep.tame},
          {"separable", rep.separable},
          {"factors", factors}};
}

template <class S>
json trace_to_json(const TraceProfile<S>& tp) {
  return {{"gram", matrix_to_json(tp.gram)},
          {"determinant", tp.determinant.to_string()},
          {"f", valuation_to_json(tp.f)},
          {"exponents", tp.smith.exponents},
          {"rank_deficiency", tp.smith.rank_deficiency},
          {"generically_etale", tp.generically_etale},
          {"etale", tp.etale},
          {"cokernel_defined_over_residue", tp.cokernel_defined_over_residue}};
}

template <class S>
json cotangent_to_json(const CotangentReport<S>& cr) {
  json ideals = json::array();
  for (const auto& e : cr.ideals) {
    json gens = json::array();
    for (const auto& g : e.generators) {
      json v = json::array();
      for (const auto& x : g) v.push_back(x.to_string());
      gens.push_back(v);
    }
    ideals.push_back({{"dimension", e.dimension}, {"regular", e.regular}, {"generators", gens}});
  }
  json out = {{"regular", cr.regular}, {"ideals", ideals}};
  if (!cr.monogenic_shortcut.empty()) out["monogenic_shortcut"] = cr.monogenic_shortcut;
  return out;
}

inline json verdict_to_json(const TheoremVerdict& v) {
  return {{"rank", v.rank},
          {"f", valuation_to_json(v.f)},
          {"geometric_points", v.geometric_points},
          {"slack", valuation_to_json(v.slack)},
          {"regular", v.regular},
          {"tame", v.tame},
          {"separable", v.separable},
          {"cokernel_defined_over_residue", v.cokernel_defined_over_residue},
          {"cond1", v.cond1},
          {"cond2", v.cond2},
          {"cond3", v.cond3},
          {"consistent", v.consistent}};
}

}  // namespace dvrtrace
