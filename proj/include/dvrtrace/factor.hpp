#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dvrtrace/errors.hpp"
#include "dvrtrace/finite_field.hpp"
#include "dvrtrace/poly.hpp"
#include "dvrtrace/ratfunc.hpp"

namespace dvrtrace {

/// unit * prod(factor_i ^ multiplicity_i), factors monic, irreducible and
/// pairwise distinct, sorted by degree then coefficients.
template <Field K>
struct FactorList {
  K unit;
  std::vector<std::pair<Poly<K>, unsigned>> factors;

  Poly<K> expand() const {
    Poly<K> r = Poly<K>::constant(unit);
    for (const auto& [g, e] : factors) r *= pow(g, e);
    return r;
  }
  bool is_prime_power() const { return factors.size() == 1; }
};

/// Largest degree accepted by the F_p(u) factorizer.
inline constexpr int kMaxImperfectDegree = 6;

namespace detail {

template <Field K>
void sort_and_merge(std::vector<std::pair<Poly<K>, unsigned>>& fs) {
  std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) { return a.first.compare(b.first) < 0; });
  std::vector<std::pair<Poly<K>, unsigned>> merged;
  for (auto& f : fs) {
    if (!merged.empty() && merged.back().first == f.first)
      merged.back().second += f.second;
    else
      merged.push_back(std::move(f));
  }
  fs = std::move(merged);
}

// Inverse of the Frobenius on coefficients combined with x^p -> x. Input
// must have zero derivative.
inline Poly<GF> poly_pth_root(const Poly<GF>& f) {
  Poly<GF> h = f.deflate(f.field_zero().characteristic());
  std::vector<GF> c;
  for (const auto& a : h.coeffs()) c.push_back(*a.pth_root());
  return Poly<GF>(f.field_zero(), std::move(c));
}

// Squarefree decomposition of a monic polynomial over a finite field.
inline std::vector<std::pair<Poly<GF>, unsigned>> squarefree_decomposition(const Poly<GF>& f) {
  std::vector<std::pair<Poly<GF>, unsigned>> out;
  if (f.degree() <= 0) return out;
  const unsigned p = static_cast<unsigned>(f.field_zero().characteristic());
  Poly<GF> c = gcd(f, f.derivative());
  Poly<GF> w = f / c;
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly<GF> y = gcd(w, c);
    Poly<GF> fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac.monic(), i);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.degree() > 0) {
    for (auto& [g, m] : squarefree_decomposition(poly_pth_root(c).monic())) out.emplace_back(g, m * p);
  }
  return out;
}

// Distinct-degree factorization of a squarefree monic polynomial.
inline std::vector<std::pair<Poly<GF>, unsigned>> distinct_degree(Poly<GF> f) {
  std::vector<std::pair<Poly<GF>, unsigned>> out;
  const GF z = f.field_zero();
  const mpz_class q(static_cast<unsigned long>(z.size()));
  const Poly<GF> x = Poly<GF>::x(z);
  Poly<GF> h = x % f;
  for (unsigned d = 1; f.degree() >= 2 * static_cast<int>(d); ++d) {
    h = powmod(h, q, f);
    Poly<GF> g = gcd(f, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, static_cast<unsigned>(f.degree()));
  return out;
}

// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles of
// degree d.
inline void equal_degree(const Poly<GF>& f, unsigned d, std::mt19937_64& rng, std::vector<Poly<GF>>& out) {
  if (f.degree() == static_cast<int>(d)) {
    out.push_back(f);
    return;
  }
  const GF z = f.field_zero();
  const std::uint64_t q = z.size();
  const std::uint64_t p = z.characteristic();
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), q, d);
  for (;;) {
    std::vector<GF> c;
    for (int i = 0; i < f.degree(); ++i) c.push_back(z.from_index(rng() % q));
    Poly<GF> a(z, std::move(c));
    if (a.degree() <= 0) continue;
    Poly<GF> b(z);
    if (p != 2) {
      b = powmod(a, mpz_class((qd - 1) / 2), f) - Poly<GF>::constant(z.one_like());
    } else {
      // Absolute trace to F_2: a + a^2 + ... + a^(2^(k-1)), q^d = 2^k.
      const std::size_t k = mpz_sizeinbase(qd.get_mpz_t(), 2) - 1;
      Poly<GF> term = a % f;
      b = term;
      for (std::size_t i = 1; i < k; ++i) {
        term = (term * term) % f;
        b += term;
      }
    }
    Poly<GF> g = gcd(f, b);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

inline FactorList<GF> factor_finite(const Poly<GF>& f) {
  FactorList<GF> out{f.lc(), {}};
  std::mt19937_64 rng(0x5eed'f00dULL);
  for (const auto& [g, mult] : squarefree_decomposition(f.monic())) {
    for (const auto& [h, d] : distinct_degree(g)) {
      std::vector<Poly<GF>> parts;
      equal_degree(h, d, rng, parts);
      for (auto& part : parts) out.factors.emplace_back(part.monic(), mult);
    }
  }
  sort_and_merge(out.factors);
  return out;
}

inline int udeg(const FpU& a) { return a.num().degree(); }

// Smallest-degree monic divisor (degree >= 1, < deg F) of a monic F whose
// coefficients lie in F_p[u]. Any such divisor has coefficients in F_p[u];
// a root of F has pole order at u = infinity at most B = max deg(a_i)/(n-i),
// which bounds the coefficient of y^(d-j) of a divisor by floor(j B).
inline std::optional<Poly<FpU>> smallest_monic_divisor(const Poly<FpU>& F) {
  const int n = F.degree();
  const FpU& z = F.field_zero();
  const GF gz = z.coeff_zero();
  const std::uint64_t p = gz.characteristic();
  // B as a fraction num/den maximized over i.
  long bnum = 0, bden = 1;
  for (int i = 0; i < n; ++i) {
    const int dg = F.coeff(static_cast<std::size_t>(i)).is_zero() ? -1 : udeg(F.coeff(static_cast<std::size_t>(i)));
    if (dg < 0) continue;
    if (static_cast<long>(dg) * bden > bnum * (n - i)) {
      bnum = dg;
      bden = n - i;
    }
  }
  for (int d = 1; 2 * d <= n; ++d) {
    std::vector<int> bound(static_cast<std::size_t>(d) + 1, 0);  // bound[j], j = 1..d
    double log_count = 0;
    for (int j = 1; j <= d; ++j) {
      bound[static_cast<std::size_t>(j)] = static_cast<int>((static_cast<long>(j) * bnum) / bden);
      log_count += (bound[static_cast<std::size_t>(j)] + 1) * std::log2(static_cast<double>(p));
    }
    if (log_count > 22)
      throw CapabilityError("F_p(u) factorization search exceeds 2^22 candidates at divisor degree " +
                            std::to_string(d));
    // Mixed-radix enumeration over all coefficient digits.
    std::vector<std::uint64_t> digits;
    for (int j = 1; j <= d; ++j) digits.resize(digits.size() + static_cast<std::size_t>(bound[static_cast<std::size_t>(j)]) + 1, 0);
    for (;;) {
      std::vector<FpU> c(static_cast<std::size_t>(d) + 1, z);
      c[static_cast<std::size_t>(d)] = z.one_like();
      std::size_t pos = 0;
      for (int j = 1; j <= d; ++j) {
        std::vector<GF> uc;
        for (int k = 0; k <= bound[static_cast<std::size_t>(j)]; ++k) uc.push_back(gz.from_int(static_cast<long long>(digits[pos++])));
        c[static_cast<std::size_t>(d - j)] = FpU(Poly<GF>(gz, std::move(uc)));
      }
      Poly<FpU> G(z, std::move(c));
      if ((F % G).is_zero()) return G;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  }
  return std::nullopt;
}

inline FactorList<FpU> factor_imperfect(const Poly<FpU>& f) {
  if (f.degree() > kMaxImperfectDegree)
    throw CapabilityError("F_p(u) factorization supports degree <= " + std::to_string(kMaxImperfectDegree) +
                          ", got " + std::to_string(f.degree()));
  FactorList<FpU> out{f.lc(), {}};
  const Poly<FpU> g = f.monic();
  const int n = g.degree();
  if (n <= 0) return out;
  const FpU& z = g.field_zero();
  // D = lcm of denominators; F(y) = D^n g(y/D) has coefficients in F_p[u].
  Poly<GF> D = Poly<GF>::constant(z.coeff_zero().one_like());
  for (const auto& a : g.coeffs()) D = (D * a.den()) / gcd(D, a.den());
  const FpU Dk = FpU(D);
  std::vector<FpU> Fc(static_cast<std::size_t>(n) + 1, z);
  FpU scale = z.one_like();
  for (int i = n; i >= 0; --i) {
    Fc[static_cast<std::size_t>(i)] = g.coeff(static_cast<std::size_t>(i)) * scale;
    scale = scale * Dk;
  }
  Poly<FpU> F(z, std::move(Fc));
  std::vector<std::pair<Poly<FpU>, unsigned>> found;
  while (F.degree() > 0) {
    auto G = smallest_monic_divisor(F);
    Poly<FpU> irr = G ? *G : F;
    F = F / irr;
    // Back to x: G(D x) / D^deg.
    const int d = irr.degree();
    std::vector<FpU> c(static_cast<std::size_t>(d) + 1, z);
    FpU s = z.one_like();
    for (int i = d; i >= 0; --i) {
      c[static_cast<std::size_t>(i)] = irr.coeff(static_cast<std::size_t>(i)) / s;
      s = s * Dk;
    }
    found.emplace_back(Poly<FpU>(z, std::move(c)).monic(), 1);
  }
  sort_and_merge(found);
  out.factors = std::move(found);
  return out;
}

}  // namespace detail

/// Complete factorization into monic irreducibles. Finite fields use
/// distinct-degree then seeded equal-degree splitting; F_p(u) uses a bounded
/// exhaustive divisor search (degree <= 6).
inline FactorList<GF> factor(const Poly<GF>& f) {
  if (f.is_zero()) throw std::domain_error("factor: zero polynomial");
  return detail::factor_finite(f);
}
inline FactorList<FpU> factor(const Poly<FpU>& f) {
  if (f.is_zero()) throw std::domain_error("factor: zero polynomial");
  return detail::factor_imperfect(f);
}

template <Field K>
bool is_irreducible(const Poly<K>& f) {
  if (f.degree() < 1) return false;
  auto fl = factor(f);
  return fl.factors.size() == 1 && fl.factors[0].second == 1;
}

template <Field K>
struct SeparabilityProfile {
  unsigned exponent;  // m with g(x) = h(x^(p^m))
  Poly<K> separable;  // h
};

/// Splits an irreducible g as h(x^(p^m)) with h separable; deg h is the
/// separable degree of K[x]/(g).
template <Field K>
SeparabilityProfile<K> separability_profile(const Poly<K>& g) {
  if (!is_irreducible(g)) throw std::invalid_argument("separability_profile: polynomial is reducible");
  const std::uint64_t p = g.field_zero().characteristic();
  SeparabilityProfile<K> out{0, g.monic()};
  if (p == 0) return out;
  while (out.separable.degree() > 0 && out.separable.derivative().is_zero()) {
    out.separable = out.separable.deflate(p);
    ++out.exponent;
  }
  return out;
}

/// Number of distinct roots in an algebraic closure.
inline std::size_t squarefree_part_degree(const Poly<GF>& f) {
  if (f.is_zero()) throw std::domain_error("squarefree_part_degree: zero polynomial");
  std::size_t n = 0;
  for (const auto& [g, m] : detail::squarefree_decomposition(f.monic())) n += static_cast<std::size_t>(g.degree());
  return n;
}

}  // namespace dvrtrace
