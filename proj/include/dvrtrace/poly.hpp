#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dvrtrace/field.hpp"

namespace dvrtrace {

namespace detail {

// Renders a coefficient so that it can be juxtaposed with "*x^k" and parsed
// back: composite expressions are parenthesized, a leading minus is split off.
inline std::pair<bool, std::string> signed_atom(std::string s) {
  bool negative = false;
  if (!s.empty() && s[0] == '-') {
    const std::string rest = s.substr(1);
    if (rest.find_first_of("+-") == std::string::npos) {
      negative = true;
      s = rest;
    }
  }
  if (s.find_first_of("+-/") != std::string::npos || s.find('*') != std::string::npos)
    s = "(" + s + ")";
  return {negative, s};
}

}  // namespace detail

/// Dense univariate polynomial over a field, constant term first. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is nonzero.
template <Field K>
class Poly {
 public:
  explicit Poly(const K& proto) : zero_(proto.zero_like()) {}
  Poly(const K& proto, std::vector<K> coeffs) : zero_(proto.zero_like()), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const K& c) { return Poly(c, {c}); }
  static Poly monomial(const K& c, std::size_t k) {
    std::vector<K> v(k + 1, c.zero_like());
    v[k] = c;
    return Poly(c, std::move(v));
  }
  static Poly x(const K& proto) { return monomial(proto.one_like(), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }
  const K& coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  const K& lc() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }
  const K& field_zero() const { return zero_; }
  K field_one() const { return zero_.one_like(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == zero_.one_like(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inverse());
  }
  Poly scaled(const K& s) const {
    std::vector<K> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(a * s);
    return Poly(zero_, std::move(v));
  }
  Poly derivative() const {
    std::vector<K> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * zero_.from_int(static_cast<long long>(i)));
    return Poly(zero_, std::move(v));
  }
  K eval(const K& at) const {
    K acc = zero_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
    return acc;
  }

  /// f(x^k).
  Poly inflate(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<K> v(static_cast<std::size_t>(degree()) * k + 1, zero_);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * k] = c_[i];
    return Poly(zero_, std::move(v));
  }
  /// h with h(x^k) = f; requires every exponent of f to be a multiple of k.
  Poly deflate(std::size_t k) const {
    std::vector<K> v;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i % k == 0)
        v.push_back(c_[i]);
      else if (!c_[i].is_zero())
        throw std::domain_error("polynomial is not a polynomial in x^k");
    }
    return Poly(zero_, std::move(v));
  }

  template <class T, class Fn>
  Poly<T> map_coeffs(const T& target_proto, Fn&& fn) const {
    std::vector<T> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(fn(a));
    return Poly<T>(target_proto, std::move(v));
  }

  Poly operator+(const Poly& o) const {
    std::vector<K> v(std::max(c_.size(), o.c_.size()), zero_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
    return Poly(zero_, std::move(v));
  }
  Poly operator-(const Poly& o) const {
    std::vector<K> v(std::max(c_.size(), o.c_.size()), zero_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
    return Poly(zero_, std::move(v));
  }
  Poly operator-() const { return Poly(zero_) - *this; }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(zero_);
    std::vector<K> v(c_.size() + o.c_.size() - 1, zero_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] = v[i + j] + c_[i] * o.c_[j];
    }
    return Poly(zero_, std::move(v));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Quotient and remainder; the divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    if (degree() < d.degree()) return {Poly(zero_), *this};
    std::vector<K> r = c_;
    std::vector<K> q(c_.size() - d.c_.size() + 1, zero_);
    const K inv = d.lc().inverse();
    for (std::size_t k = q.size(); k-- > 0;) {
      const K c = r[k + d.c_.size() - 1] * inv;
      q[k] = c;
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] = r[k + j] - c * d.c_[j];
    }
    r.resize(d.c_.size() - 1, zero_);
    return {Poly(zero_, std::move(q)), Poly(zero_, std::move(r))};
  }
  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }

  bool operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// Degree first, then coefficients from the constant term upward.
  int compare(const Poly& o) const {
    if (degree() != o.degree()) return degree() < o.degree() ? -1 : 1;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const int c = c_[i].compare(o.c_[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      auto [neg, atom] = detail::signed_atom(c_[i].to_string());
      const std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
      std::string term;
      if (mono.empty())
        term = atom;
      else if (atom == "1")
        term = mono;
      else
        term = atom + "*" + mono;
      if (out.empty())
        out = (neg ? "-" : "") + term;
      else
        out += (neg ? " - " : " + ") + term;
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  K zero_;
  std::vector<K> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
template <Field K>
Poly<K> gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    Poly<K> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b), g monic.
template <Field K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> ext_gcd(const Poly<K>& a, const Poly<K>& b) {
  const K& z = a.field_zero();
  Poly<K> r0 = a, r1 = b;
  Poly<K> s0 = Poly<K>::constant(z.one_like()), s1(z);
  Poly<K> t0(z), t1 = Poly<K>::constant(z.one_like());
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<K> s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly<K> t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const K inv = r0.lc().inverse();
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

template <Field K>
Poly<K> powmod(Poly<K> base, const mpz_class& e, const Poly<K>& mod) {
  Poly<K> r = Poly<K>::constant(base.field_one()) % mod;
  base = base % mod;
  for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    r = (r * r) % mod;
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) r = (r * base) % mod;
  }
  if (e == 0) return Poly<K>::constant(base.field_one()) % mod;
  return r;
}

template <Field K>
Poly<K> pow(const Poly<K>& base, unsigned e) {
  Poly<K> r = Poly<K>::constant(base.field_one());
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace dvrtrace
