#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "dvrtrace/errors.hpp"
#include "dvrtrace/field.hpp"
#include "dvrtrace/finite_field.hpp"
#include "dvrtrace/ratfunc.hpp"
#include "dvrtrace/valuation.hpp"

namespace dvrtrace {

enum class DvrKind {
  IntegersAtP,       // Z_(p)
  PowerSeries,       // F_q[t]_(t)
  ImperfectSeries,   // F_p(u)[t]_(t)
};

/// Which DVR an algebra lives over.
struct DvrDescriptor {
  DvrKind kind = DvrKind::IntegersAtP;
  std::uint64_t p = 2;  // residue characteristic
  unsigned m = 1;       // [k_R : F_p] for PowerSeries, else 1

  std::uint64_t q() const {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < m; ++i) r *= p;
    return r;
  }
  std::string uniformizer_symbol() const { return kind == DvrKind::IntegersAtP ? "p" : "t"; }
  std::uint64_t residue_characteristic() const { return p; }
  std::uint64_t fraction_characteristic() const { return kind == DvrKind::IntegersAtP ? 0 : p; }
  std::string name() const {
    switch (kind) {
      case DvrKind::IntegersAtP: return "Z_(" + std::to_string(p) + ")";
      case DvrKind::PowerSeries: return "F_" + std::to_string(q()) + "[t]_(t)";
      case DvrKind::ImperfectSeries: return "F_" + std::to_string(p) + "(u)[t]_(t)";
    }
    return "?";
  }
  bool operator==(const DvrDescriptor&) const = default;
};

/// Validates and builds a descriptor for F_q[t]_(t) from q = p^m.
inline DvrDescriptor power_series_descriptor(std::uint64_t q) {
  if (q < 2) throw InvalidInput("q must be a prime power, got " + std::to_string(q));
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  unsigned m = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) throw InvalidInput("q must be a prime power, got " + std::to_string(q));
  return {DvrKind::PowerSeries, p, m};
}

namespace detail {
inline std::int64_t remove_factor(mpz_class n, const mpz_class& p) {
  mpz_class out;
  return static_cast<std::int64_t>(mpz_remove(out.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}
}  // namespace detail

/// Z localized at a prime p. Scalars are elements of Q; ring elements are
/// those with v_p >= 0.
class IntegersAtP {
 public:
  using Scalar = Rational;
  using Residue = GF;

  explicit IntegersAtP(std::uint64_t p) : p_(static_cast<unsigned long>(p)), residue_(gf_zero(p)) {}

  DvrDescriptor descriptor() const { return {DvrKind::IntegersAtP, p_.get_ui(), 1}; }
  const mpz_class& prime() const { return p_; }

  Scalar zero() const { return Rational(0); }
  Scalar one() const { return Rational(1); }
  Scalar from_int(long long n) const { return Rational(n); }
  Scalar uniformizer() const { return Rational(mpq_class(p_)); }
  Scalar uniformizer_power(unsigned k) const {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p_.get_mpz_t(), k);
    return Rational(mpq_class(r));
  }
  Residue residue_zero() const { return residue_; }
  std::uint64_t residue_characteristic() const { return p_.get_ui(); }

  /// Valuation on the fraction field; negative off the ring.
  Valuation valuation(const Scalar& x) const {
    if (x.is_zero()) return Valuation::infinity();
    return Valuation(detail::remove_factor(x.value().get_num(), p_) -
                     detail::remove_factor(x.value().get_den(), p_));
  }
  bool is_integral(const Scalar& x) const { return valuation(x) >= Valuation(0); }

  Residue reduce(const Scalar& x) const {
    if (!is_integral(x)) throw std::domain_error("reduce: element is not in the DVR");
    return residue_.from_mpz(x.value().get_num()) / residue_.from_mpz(x.value().get_den());
  }
  Scalar lift(const Residue& a) const { return Rational(static_cast<long long>(a.coords()[0])); }

  Scalar unit_shift(const Scalar& x, unsigned k) const {
    if (valuation(x) < Valuation(k)) throw std::domain_error("unit_shift: valuation below shift");
    return x / uniformizer_power(k);
  }

  /// The integer in [0, p^n) congruent to x mod p^n; x must be integral.
  Scalar truncate(const Scalar& x, unsigned n) const {
    mpz_class m, inv, r;
    mpz_pow_ui(m.get_mpz_t(), p_.get_mpz_t(), n);
    if (mpz_invert(inv.get_mpz_t(), x.value().get_den().get_mpz_t(), m.get_mpz_t()) == 0)
      throw std::domain_error("truncate: element is not in the DVR");
    r = x.value().get_num() * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return Rational(mpq_class(r));
  }

 private:
  mpz_class p_;
  GF residue_;
};

/// K[t] localized at (t), with K a finite field or F_p(u). Scalars are
/// elements of K(t).
template <Field K>
class PowerSeriesAt {
 public:
  using Scalar = RatFunc<K, 't'>;
  using Residue = K;

  PowerSeriesAt(DvrDescriptor desc, K residue_proto) : desc_(desc), residue_(residue_proto.zero_like()) {}

  DvrDescriptor descriptor() const { return desc_; }

  Scalar zero() const { return Scalar(residue_); }
  Scalar one() const { return Scalar::constant(residue_.one_like()); }
  Scalar from_int(long long n) const { return Scalar::constant(residue_.from_int(n)); }
  Scalar uniformizer() const { return Scalar::var(residue_); }
  Scalar uniformizer_power(unsigned k) const {
    return Scalar(Poly<K>::monomial(residue_.one_like(), k));
  }
  Residue residue_zero() const { return residue_; }
  std::uint64_t residue_characteristic() const { return residue_.characteristic(); }

  Valuation valuation(const Scalar& x) const {
    if (x.is_zero()) return Valuation::infinity();
    return Valuation(order(x.num()) - order(x.den()));
  }
  bool is_integral(const Scalar& x) const { return valuation(x) >= Valuation(0); }

  Residue reduce(const Scalar& x) const {
    const Valuation v = valuation(x);
    if (v < Valuation(0)) throw std::domain_error("reduce: element is not in the DVR");
    if (v > Valuation(0)) return residue_;
    return x.num().coeff(0) / x.den().coeff(0);
  }
  Scalar lift(const Residue& a) const { return Scalar::constant(a); }

  Scalar unit_shift(const Scalar& x, unsigned k) const {
    if (valuation(x) < Valuation(k)) throw std::domain_error("unit_shift: valuation below shift");
    if (x.is_zero()) return x;
    std::vector<K> c(x.num().coeffs().begin() + k, x.num().coeffs().end());
    return Scalar(Poly<K>(residue_, std::move(c)), x.den());
  }

  /// The power series of x cut off below t^n, as a polynomial.
  Scalar truncate(const Scalar& x, unsigned n) const {
    const Poly<K>& num = x.num();
    const Poly<K>& den = x.den();
    if (den.coeff(0).is_zero()) throw std::domain_error("truncate: element is not in the DVR");
    const K d0 = den.coeff(0).inverse();
    std::vector<K> c;
    for (std::size_t k = 0; k < n; ++k) {
      K acc = num.coeff(k);
      for (std::size_t j = 1; j <= k && j < den.coeffs().size(); ++j) acc = acc - den.coeff(j) * c[k - j];
      c.push_back(acc * d0);
    }
    return Scalar(Poly<K>(residue_, std::move(c)));
  }

 private:
  static std::int64_t order(const Poly<K>& f) {
    std::int64_t i = 0;
    while (f.coeff(static_cast<std::size_t>(i)).is_zero()) ++i;
    return i;
  }

  DvrDescriptor desc_;
  K residue_;
};

using FiniteSeries = PowerSeriesAt<GF>;
using ImperfectSeries = PowerSeriesAt<FpU>;

inline FiniteSeries make_power_series(std::uint64_t q) {
  const DvrDescriptor d = power_series_descriptor(q);
  return FiniteSeries(d, GF(gf_context(d.p, d.m)));
}
inline ImperfectSeries make_imperfect_series(std::uint64_t p) {
  return ImperfectSeries({DvrKind::ImperfectSeries, p, 1}, fpu_zero(p));
}

template <class D>
concept DvrBackend = requires(const D d, const typename D::Scalar x, const typename D::Residue r) {
  { d.valuation(x) } -> std::same_as<Valuation>;
  { d.reduce(x) } -> std::same_as<typename D::Residue>;
  { d.lift(r) } -> std::same_as<typename D::Scalar>;
  { d.unit_shift(x, 1u) } -> std::same_as<typename D::Scalar>;
  { d.truncate(x, 1u) } -> std::same_as<typename D::Scalar>;
  { d.uniformizer() } -> std::same_as<typename D::Scalar>;
  { d.descriptor() } -> std::same_as<DvrDescriptor>;
};

}  // namespace dvrtrace
