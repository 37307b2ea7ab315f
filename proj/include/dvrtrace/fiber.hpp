#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/factor.hpp"
#include "dvrtrace/matrix.hpp"

namespace dvrtrace {

/// Number of seeded random combinations tried after the structured
/// candidates when splitting or certifying a factor.
inline constexpr std::size_t kSplittingRandomBudget = 512;

/// One local factor B_i = e_i B of the closed fiber, with its residue field
/// k(p) = K[T]/(g) where T maps to the primitive element.
template <Field K>
struct LocalFactor {
  Vec<K> idempotent;
  std::size_t dim = 0;
  std::vector<Vec<K>> nilradical;
  Poly<K> residue_poly;
  Vec<K> primitive;
  // B -> k(p), coordinates over 1, T, ..., T^{r-1}.
  Matrix<K> residue_map;

  std::size_t residue_degree = 0;    // [k(p) : k_R]
  std::size_t separable_degree = 0;  // [F_p : k_R]
  unsigned inseparable_exponent = 0; // [k(p) : F_p] = char^exponent
  std::size_t ramification = 0;      // e
  std::size_t h = 0;
  bool tame = false;
  bool separable = false;
  bool combined = false;  // gcd(h, char) = 1

  explicit LocalFactor(const K& zero) : residue_poly(zero), residue_map(0, 0, zero) {}
};

template <Field K>
struct FiberReport {
  std::vector<LocalFactor<K>> factors;
  std::size_t rank = 0;
  std::size_t geometric_points = 0;
  std::uint64_t characteristic = 0;
  bool tame = true;
  bool separable = true;

  bool is_local() const { return factors.size() == 1; }
};

namespace detail {

template <Field K>
Vec<K> eval_at(const StructureTable<K>& t, const Vec<K>& unit, const Poly<K>& f, const Vec<K>& b) {
  Vec<K> acc = t.zero_vector();
  for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = vec_add(t.multiply(acc, b), vec_scale(unit, f.coeffs()[i]));
  return acc;
}

// Coordinates in B of the polynomial a(x) reduced modulo f, for monogenic B.
template <Field K>
Vec<K> poly_coords(const Poly<K>& a, const Poly<K>& f) {
  const Poly<K> r = a % f;
  Vec<K> v;
  for (int i = 0; i < f.degree(); ++i) v.push_back(r.coeff(static_cast<std::size_t>(i)));
  return v;
}

template <Field K>
Poly<K> coords_poly(const Vec<K>& v, const K& zero) {
  return Poly<K>(zero, v);
}

}  // namespace detail

/// Basis of the ideal eB, taken from the products e x_j.
template <Field K>
std::vector<Vec<K>> ideal_basis(const StructureTable<K>& t, const Vec<K>& e) {
  std::vector<Vec<K>> gens;
  for (std::size_t j = 0; j < t.rank(); ++j) gens.push_back(t.multiply(e, t.basis(j)));
  std::vector<Vec<K>> out;
  for (auto i : independent_subset(gens, t.zero())) out.push_back(gens[i]);
  return out;
}

/// Minimal polynomial of b inside eB, where e acts as the identity.
template <Field K>
Poly<K> min_poly_in(const StructureTable<K>& t, const Vec<K>& e, const Vec<K>& b) {
  std::vector<Vec<K>> powers{e};
  for (;;) {
    const Vec<K> next = t.multiply(powers.back(), b);
    auto c = solve(Matrix<K>::from_columns(powers, t.rank(), t.zero()), next);
    if (c) {
      std::vector<K> coeffs;
      for (const auto& x : *c) coeffs.push_back(-x);
      coeffs.push_back(t.zero().one_like());
      return Poly<K>(t.zero(), std::move(coeffs));
    }
    powers.push_back(next);
  }
}

/// Nilradical of eB over a finite field: kernel of y -> y^Q with Q a power of
/// q at least dim eB. The map is F_q-linear since lambda^q = lambda.
template <FiniteField K>
std::vector<Vec<K>> nilradical(const StructureTable<K>& t, const Vec<K>& e) {
  const std::vector<Vec<K>> V = ideal_basis(t, e);
  mpz_class Q(static_cast<unsigned long>(t.zero().size()));
  while (Q < static_cast<unsigned long>(V.size())) Q *= static_cast<unsigned long>(t.zero().size());
  std::vector<Vec<K>> images;
  for (const auto& v : V) images.push_back(t.power(v, Q));
  std::vector<Vec<K>> out;
  for (const auto& c : kernel(Matrix<K>::from_columns(images, t.rank(), t.zero()))) {
    Vec<K> n = t.zero_vector();
    for (std::size_t j = 0; j < V.size(); ++j) n = vec_add(n, vec_scale(V[j], c[j]));
    out.push_back(std::move(n));
  }
  return out;
}

/// Nilradical of the local factor k[x]/(g^a) inside a monogenic B: the ideal
/// generated by g e.
template <Field K>
std::vector<Vec<K>> nilradical_monogenic(const Poly<K>& f, const Poly<K>& g, const Vec<K>& e) {
  const Poly<K> ge = g * detail::coords_poly(e, f.field_zero());
  std::vector<Vec<K>> gens;
  for (int j = 0; j < f.degree(); ++j)
    gens.push_back(detail::poly_coords(ge * Poly<K>::monomial(f.field_one(), static_cast<std::size_t>(j)), f));
  std::vector<Vec<K>> out;
  for (auto i : independent_subset(gens, f.field_zero())) out.push_back(gens[i]);
  return out;
}

/// Deterministic element sequence: basis vectors, pairwise sums, pairwise
/// products, then seeded random combinations.
template <Field K>
std::vector<Vec<K>> candidate_elements(const StructureTable<K>& t) {
  const std::size_t n = t.rank();
  std::vector<Vec<K>> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(t.basis(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(vec_add(t.basis(i), t.basis(j)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.push_back(t.multiply(t.basis(i), t.basis(j)));
  if constexpr (FiniteField<K>) {
    std::mt19937_64 rng(0xd1ce'5eedULL + n);
    const std::uint64_t q = t.zero().size();
    for (std::size_t s = 0; s < kSplittingRandomBudget; ++s) {
      Vec<K> v = t.zero_vector();
      for (auto& x : v) x = t.zero().from_index(rng() % q);
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// Fills residue_map from the decomposition eB = N + span(1, T, ..., T^{r-1}).
template <Field K>
void build_residue_map(const StructureTable<K>& t, LocalFactor<K>& f) {
  const std::size_t r = static_cast<std::size_t>(f.residue_poly.degree());
  std::vector<Vec<K>> cols = f.nilradical;
  Vec<K> pw = f.idempotent;
  for (std::size_t j = 0; j < r; ++j) {
    cols.push_back(pw);
    pw = t.multiply(pw, f.primitive);
  }
  const Matrix<K> M = Matrix<K>::from_columns(cols, t.rank(), t.zero());
  f.residue_map = Matrix<K>(r, t.rank(), t.zero());
  for (std::size_t j = 0; j < t.rank(); ++j) {
    auto c = solve(M, t.multiply(f.idempotent, t.basis(j)));
    if (!c) throw InternalInconsistency("residue field basis does not span the local factor");
    for (std::size_t i = 0; i < r; ++i) f.residue_map(i, j) = (*c)[f.nilradical.size() + i];
  }
}

/// Searches the candidate sequence for a primitive element of eB / N: an
/// element whose minimal polynomial is a power of an irreducible g of degree
/// dim(eB / N). Returns (g, element); also reports a splitting element.
template <Field K>
struct PrimitiveSearch {
  std::optional<std::pair<Poly<K>, Vec<K>>> primitive;
  std::optional<std::pair<Vec<K>, Vec<K>>> split;  // two orthogonal idempotents
};

template <Field K>
PrimitiveSearch<K> search_factor(const StructureTable<K>& t, const Vec<K>& e, std::size_t quotient_dim,
                                 const std::vector<Vec<K>>& candidates) {
  PrimitiveSearch<K> out;
  for (const auto& c : candidates) {
    const Vec<K> b = t.multiply(e, c);
    const Poly<K> mu = min_poly_in(t, e, b);
    const auto fl = factor(mu);
    if (fl.factors.size() >= 2) {
      const Poly<K> P = pow(fl.factors[0].first, fl.factors[0].second);
      const Poly<K> Qp = mu / P;
      auto [g, s, u] = ext_gcd(P, Qp);
      const Vec<K> e1 = detail::eval_at(t, e, (u * Qp) % mu, b);
      out.split = std::make_pair(e1, vec_sub(e, e1));
      return out;
    }
    const Poly<K>& g = fl.factors[0].first;
    if (static_cast<std::size_t>(g.degree()) == quotient_dim) {
      out.primitive = std::make_pair(g, b);
      return out;
    }
  }
  return out;
}

/// Complete system of primitive orthogonal idempotents with nilradicals and
/// residue fields. Monogenic fibers factor f-bar directly; products recurse
/// into their components; other tables use the bounded splitting search
/// (finite fields only).
template <Field K>
std::vector<LocalFactor<K>> decompose_local(const FiberAlgebra<K>& B) {
  const StructureTable<K>& t = B.table;
  const K& zero = t.zero();
  std::vector<LocalFactor<K>> out;

  if (B.monogenic) {
    const Poly<K>& f = *B.monogenic;
    const auto fl = factor(f);
    for (const auto& [g, a] : fl.factors) {
      const Poly<K> P = pow(g, a);
      const Poly<K> Qp = f / P;
      auto [one, s, u] = ext_gcd(P, Qp);
      LocalFactor<K> lf(zero);
      lf.idempotent = detail::poly_coords(u * Qp, f);
      lf.dim = static_cast<std::size_t>(P.degree());
      lf.nilradical = nilradical_monogenic(f, g, lf.idempotent);
      lf.residue_poly = g;
      lf.primitive = detail::poly_coords(detail::coords_poly(lf.idempotent, zero) * Poly<K>::x(zero), f);
      lf.residue_map = Matrix<K>(static_cast<std::size_t>(g.degree()), t.rank(), zero);
      for (std::size_t j = 0; j < t.rank(); ++j) {
        const Poly<K> red = Poly<K>::monomial(zero.one_like(), j) % g;
        for (int i = 0; i < g.degree(); ++i) lf.residue_map(static_cast<std::size_t>(i), j) = red.coeff(static_cast<std::size_t>(i));
      }
      out.push_back(std::move(lf));
    }
  } else if (!B.components.empty()) {
    std::size_t offset = 0;
    const std::size_t n = t.rank();
    auto embed = [&](const Vec<K>& v) {
      Vec<K> w(n, zero);
      for (std::size_t i = 0; i < v.size(); ++i) w[offset + i] = v[i];
      return w;
    };
    for (const auto& comp : B.components) {
      for (auto& lf : decompose_local(comp)) {
        LocalFactor<K> g(zero);
        g.idempotent = embed(lf.idempotent);
        g.dim = lf.dim;
        for (const auto& v : lf.nilradical) g.nilradical.push_back(embed(v));
        g.residue_poly = lf.residue_poly;
        g.primitive = embed(lf.primitive);
        g.residue_map = Matrix<K>(lf.residue_map.rows(), n, zero);
        for (std::size_t i = 0; i < lf.residue_map.rows(); ++i)
          for (std::size_t j = 0; j < lf.residue_map.cols(); ++j) g.residue_map(i, offset + j) = lf.residue_map(i, j);
        out.push_back(std::move(g));
      }
      offset += comp.rank();
    }
  } else {
    if constexpr (!FiniteField<K>) {
      throw CapabilityError(
          "local decomposition of a structure-constant algebra over an imperfect residue field is not supported "
          "(monogenic and product inputs only)");
    } else {
      const auto candidates = candidate_elements(t);
      std::vector<Vec<K>> work{t.unit()};
      while (!work.empty()) {
        Vec<K> e = work.back();
        work.pop_back();
        LocalFactor<K> lf(zero);
        lf.idempotent = e;
        lf.dim = ideal_basis(t, e).size();
        lf.nilradical = nilradical(t, e);
        const std::size_t r = lf.dim - lf.nilradical.size();
        auto found = search_factor(t, e, r, candidates);
        if (found.split) {
          work.push_back(found.split->second);
          work.push_back(found.split->first);
          continue;
        }
        if (!found.primitive)
          throw CapabilityError("could not split or certify a local factor of dimension " + std::to_string(lf.dim) +
                                " within " + std::to_string(candidates.size()) + " candidate elements");
        lf.residue_poly = found.primitive->first;
        lf.primitive = found.primitive->second;
        build_residue_map(t, lf);
        out.push_back(std::move(lf));
      }
    }
  }

  // Idempotent completeness, exactly.
  Vec<K> sum = t.zero_vector();
  for (std::size_t i = 0; i < out.size(); ++i) {
    sum = vec_add(sum, out[i].idempotent);
    if (t.multiply(out[i].idempotent, out[i].idempotent) != out[i].idempotent)
      throw InternalInconsistency("local factor idempotent is not idempotent");
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!vec_is_zero(t.multiply(out[i].idempotent, out[j].idempotent)))
        throw InternalInconsistency("local factor idempotents are not orthogonal");
  }
  if (sum != t.unit()) throw InternalInconsistency("local factor idempotents do not sum to 1");
  return out;
}

/// e = dim B_i / [k(p) : k_R].
template <Field K>
std::size_t ramification_index(const LocalFactor<K>& f) {
  const std::size_t r = static_cast<std::size_t>(f.residue_poly.degree());
  if (r == 0 || f.dim % r != 0)
    throw InternalInconsistency("ramification index is not an integer (dim " + std::to_string(f.dim) +
                                ", residue degree " + std::to_string(r) + ")");
  return f.dim / r;
}

template <Field K>
std::size_t separable_degree(const LocalFactor<K>& f) {
  return static_cast<std::size_t>(separability_profile(f.residue_poly).separable.degree());
}

/// h = e [k(p) : F_p].
template <Field K>
std::size_t h_invariant(const LocalFactor<K>& f) {
  return ramification_index(f) * (static_cast<std::size_t>(f.residue_poly.degree()) / separable_degree(f));
}

struct TamenessFlags {
  bool tame;
  bool separable;
  bool combined;
};

/// Tameness, separability of k(p), and coprimality of h with the residue
/// characteristic; the latter must equal the conjunction of the former two.
template <Field K>
TamenessFlags is_tame_and_separable(const LocalFactor<K>& f) {
  const std::uint64_t p = f.residue_poly.field_zero().characteristic();
  const std::size_t e = ramification_index(f);
  const std::size_t sd = separable_degree(f);
  const std::size_t h = h_invariant(f);
  TamenessFlags flags{std::gcd<std::uint64_t>(e, p) == 1, static_cast<std::size_t>(f.residue_poly.degree()) == sd,
                      std::gcd<std::uint64_t>(h, p) == 1};
  if (flags.combined != (flags.tame && flags.separable))
    throw InternalInconsistency("h coprimality disagrees with tameness and separability");
  return flags;
}

template <Field K>
std::size_t geometric_point_count(const FiberReport<K>& report) {
  std::size_t n = 0;
  for (const auto& f : report.factors) n += f.separable_degree;
  return n;
}

/// Local factors with every invariant filled in; checks dimension
/// bookkeeping and, for monogenic fibers over finite fields, the point
/// count against the distinct roots of f-bar.
template <Field K>
FiberReport<K> analyze_fiber(const FiberAlgebra<K>& B) {
  FiberReport<K> rep;
  rep.rank = B.rank();
  rep.characteristic = B.field_zero().characteristic();
  rep.factors = decompose_local(B);
  std::size_t total = 0;
  for (auto& f : rep.factors) {
    const auto prof = separability_profile(f.residue_poly);
    f.residue_degree = static_cast<std::size_t>(f.residue_poly.degree());
    f.separable_degree = static_cast<std::size_t>(prof.separable.degree());
    f.inseparable_exponent = prof.exponent;
    f.ramification = ramification_index(f);
    f.h = h_invariant(f);
    const auto flags = is_tame_and_separable(f);
    f.tame = flags.tame;
    f.separable = flags.separable;
    f.combined = flags.combined;
    rep.tame = rep.tame && f.tame;
    rep.separable = rep.separable && f.separable;
    total += f.dim;
  }
  if (total != rep.rank) throw InternalInconsistency("local factor dimensions do not add up to the rank");
  rep.geometric_points = geometric_point_count(rep);
  if constexpr (FiniteField<K>) {
    if (B.monogenic && squarefree_part_degree(*B.monogenic) != rep.geometric_points)
      throw InternalInconsistency("geometric point count disagrees with the distinct roots of the fiber polynomial");
  }
  return rep;
}

/// Trace of multiplication by b restricted to the invariant subspace spanned
/// by V.
template <Field K>
K restricted_trace(const StructureTable<K>& t, const std::vector<Vec<K>>& V, const Vec<K>& b) {
  const Matrix<K> M = Matrix<K>::from_columns(V, t.rank(), t.zero());
  K tr = t.zero();
  for (std::size_t j = 0; j < V.size(); ++j) {
    auto c = solve(M, t.multiply(b, V[j]));
    if (!c) throw InternalInconsistency("subspace is not stable under multiplication");
    tr = tr + (*c)[j];
  }
  return tr;
}

/// Trace of pi(b) in k(p)/k_R, via the residue map.
template <Field K>
K residue_trace(const StructureTable<K>& t, const LocalFactor<K>& f, const Vec<K>& b) {
  K tr = t.zero();
  Vec<K> pw = f.idempotent;
  for (std::size_t j = 0; j < f.residue_map.rows(); ++j) {
    tr = tr + f.residue_map.apply(t.multiply(b, pw))[j];
    pw = t.multiply(pw, f.primitive);
  }
  return tr;
}

/// tr_{B_i/k}(b) = e * tr_{k(p)/k}(pi(b)) on every basis element of B_i.
template <Field K>
bool fiber_trace_check(const FiberAlgebra<K>& B, const LocalFactor<K>& f) {
  const auto& t = B.table;
  const auto V = ideal_basis(t, f.idempotent);
  const K e = t.zero().from_int(static_cast<long long>(ramification_index(f)));
  for (const auto& v : V)
    if (!(restricted_trace(t, V, v) == e * residue_trace(t, f, v))) return false;
  return true;
}

}  // namespace dvrtrace
