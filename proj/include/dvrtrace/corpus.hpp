#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/io.hpp"

namespace dvrtrace {

/// Parameters of a pseudorandom corpus. Each instance draws from its own
/// generator seeded by (seed, index), so instances are reproducible in
/// isolation.
struct CorpusSpec {
  std::uint64_t seed = 42;
  std::vector<DvrDescriptor> backends;
  unsigned degree_min = 1;
  unsigned degree_max = 5;
  int valuation_min = 0;
  int valuation_max = 3;
  std::size_t count = 100;
  // Relative weights of the three constructions.
  unsigned monogenic = 6;
  unsigned product = 2;
  unsigned table = 2;

  void validate() const {
    if (backends.empty()) throw InvalidInput("corpus needs at least one backend");
    if (degree_min < 1 || degree_min > degree_max || degree_max > 8)
      throw InvalidInput("degree range must satisfy 1 <= min <= max <= 8");
    if (valuation_min < 0 || valuation_min > valuation_max || valuation_max > 16)
      throw InvalidInput("valuation range must satisfy 0 <= min <= max <= 16");
    if (monogenic + product + table == 0) throw InvalidInput("construction mix has zero total weight");
    if (product > 0 && degree_max < 2) throw InvalidInput("products need degree_max >= 2");
  }
};

/// "Zp:2,kt:4,kut:2" -> descriptors.
inline std::vector<DvrDescriptor> parse_backend_list(const std::string& text) {
  std::vector<DvrDescriptor> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw InvalidInput("backend \"" + item + "\" must look like Zp:2, kt:4 or kut:2");
    const std::string kind = item.substr(0, colon);
    std::uint64_t n = 0;
    try {
      n = std::stoull(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("backend \"" + item + "\" has a malformed number");
    }
    out.push_back(descriptor_from_json({{"kind", kind}, {kind == "kt" ? "q" : "p", n}}));
    start = end + 1;
  }
  return out;
}

namespace detail {

class CorpusRng {
 public:
  CorpusRng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    gen_.seed(seq);
  }
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 gen_;
};

inline Rational random_unit(const IntegersAtP& R, CorpusRng& rng) {
  const std::uint64_t p = R.descriptor().p;
  auto draw = [&] {
    std::int64_t v;
    do v = rng.between(1, static_cast<std::int64_t>(2 * p * p + 2));
    while (v % static_cast<std::int64_t>(p) == 0);
    return v;
  };
  Rational x(static_cast<long long>(draw()));
  if (rng.below(4) == 0) x = x / Rational(static_cast<long long>(draw()));
  return rng.below(2) ? -x : x;
}

inline GF random_nonzero(const GF& z, CorpusRng& rng) { return z.from_index(1 + rng.below(z.size() - 1)); }

inline FpU random_nonzero(const FpU& z, CorpusRng& rng) {
  // A small nonzero polynomial in u.
  const GF c = z.coeff_zero();
  for (;;) {
    Poly<GF> f(c, {c.from_index(rng.below(c.size())), c.from_index(rng.below(c.size()))});
    if (!f.is_zero()) return FpU(f);
  }
}

template <Field K>
typename PowerSeriesAt<K>::Scalar random_unit(const PowerSeriesAt<K>& R, CorpusRng& rng) {
  const K z = R.residue_zero();
  std::vector<K> c{random_nonzero(z, rng)};
  for (unsigned i = 0, extra = static_cast<unsigned>(rng.below(3)); i < extra; ++i)
    c.push_back(rng.below(2) ? random_nonzero(z, rng) : z);
  return typename PowerSeriesAt<K>::Scalar(Poly<K>(z, std::move(c)));
}

/// pi^v times a unit, with v drawn from [lo, hi + 1]; the top value stands for
/// a zero coefficient.
template <DvrBackend D>
typename D::Scalar random_scalar(const D& R, CorpusRng& rng, int lo, int hi) {
  const auto v = rng.between(lo, hi + 1);
  if (v > hi) return R.zero();
  return R.uniformizer_power(static_cast<unsigned>(v)) * random_unit(R, rng);
}

template <DvrBackend D>
FiniteFlatAlgebra<D> random_monogenic(const D& R, CorpusRng& rng, unsigned deg, int lo, int hi) {
  std::vector<typename D::Scalar> c;
  for (unsigned i = 0; i < deg; ++i) c.push_back(random_scalar(R, rng, lo, hi));
  c.push_back(R.one());
  return FiniteFlatAlgebra<D>::from_monogenic(R, Poly<typename D::Scalar>(R.zero(), std::move(c)));
}

// Units with no t-dependence keep basis changes over k[t] from inflating
// degrees.
inline Rational small_unit(const IntegersAtP& R, CorpusRng& rng) { return random_unit(R, rng); }
template <Field K>
typename PowerSeriesAt<K>::Scalar small_unit(const PowerSeriesAt<K>& R, CorpusRng& rng) {
  return PowerSeriesAt<K>::Scalar::constant(random_nonzero(R.residue_zero(), rng));
}

template <DvrBackend D>
typename D::Scalar small_scalar(const D& R, CorpusRng& rng) {
  switch (rng.below(3)) {
    case 0: return R.zero();
    case 1: return small_unit(R, rng);
    default: return R.uniformizer() * small_unit(R, rng);
  }
}

/// L U with L unitriangular and U upper triangular with unit diagonal:
/// invertible over R by construction.
template <DvrBackend D>
Matrix<typename D::Scalar> random_unimodular(const D& R, CorpusRng& rng, std::size_t n) {
  using S = typename D::Scalar;
  Matrix<S> L = Matrix<S>::identity(n, R.zero()), U = Matrix<S>::identity(n, R.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j) L(i, j) = small_scalar(R, rng);
      if (i < j) U(i, j) = small_scalar(R, rng);
      if (i == j) U(i, j) = small_unit(R, rng);
    }
  return L * U;
}

}  // namespace detail

/// One corpus instance as an input document. Tables are random unimodular
/// basis changes of monogenic or product algebras; imperfect-residue
/// backends get monogenic instances in place of tables.
template <DvrBackend D>
FiniteFlatAlgebra<D> corpus_algebra(const D& R, const CorpusSpec& spec, detail::CorpusRng& rng) {
  using A = FiniteFlatAlgebra<D>;
  const unsigned total = spec.monogenic + spec.product + spec.table;
  const auto pick = rng.below(total);
  auto degree = [&](unsigned lo, unsigned hi) { return static_cast<unsigned>(rng.between(lo, hi)); };
  auto product = [&] {
    const unsigned d1 = degree(1, spec.degree_max - 1);
    const unsigned d2 = degree(1, spec.degree_max - d1);
    return A::product(detail::random_monogenic(R, rng, d1, spec.valuation_min, spec.valuation_max),
                      detail::random_monogenic(R, rng, d2, spec.valuation_min, spec.valuation_max));
  };
  auto monogenic = [&] {
    return detail::random_monogenic(R, rng, degree(spec.degree_min, spec.degree_max), spec.valuation_min,
                                    spec.valuation_max);
  };
  if (pick < spec.monogenic) return monogenic();
  if (pick < spec.monogenic + spec.product) return product();
  if constexpr (!FiniteField<typename D::Residue>) {
    return monogenic();
  } else {
    const A base = (spec.degree_max >= 2 && rng.below(2)) ? product() : monogenic();
    const A moved = base.change_basis(detail::random_unimodular(R, rng, base.rank()));
    return A::from_table(R, moved.table());
  }
}

inline json corpus_document(const CorpusSpec& spec, std::size_t index) {
  detail::CorpusRng rng(spec.seed, index);
  const DvrDescriptor d = spec.backends[rng.below(spec.backends.size())];
  json doc = std::visit([&](const auto& R) { return document_from_algebra(corpus_algebra(R, spec, rng)); },
                        make_backend(d));
  doc["meta"] = {{"seed", spec.seed}, {"index", index}};
  return doc;
}

inline std::vector<json> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<json> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(corpus_document(spec, i));
  return out;
}

}  // namespace dvrtrace
