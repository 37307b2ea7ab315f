#pragma once

#include <optional>
#include <string>
#include <utility>

#include "dvrtrace/finite_field.hpp"
#include "dvrtrace/poly.hpp"

namespace dvrtrace {

/// K(Var): reduced fractions num/den of polynomials over K with den monic.
/// Serves both as the imperfect residue field F_p(u) and as the fraction
/// field k(t) of the power-basis DVRs.
template <Field K, char Var>
class RatFunc {
 public:
  static constexpr bool is_finite_field = false;
  static constexpr char variable = Var;
  using Coeff = K;

  explicit RatFunc(const K& proto) : num_(proto), den_(Poly<K>::constant(proto.one_like())) {}
  RatFunc(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
  explicit RatFunc(Poly<K> num) : num_(std::move(num)), den_(Poly<K>::constant(num_.field_one())) { normalize(); }

  static RatFunc var(const K& proto) { return RatFunc(Poly<K>::x(proto)); }
  static RatFunc constant(const K& c) { return RatFunc(Poly<K>::constant(c)); }

  const Poly<K>& num() const { return num_; }
  const Poly<K>& den() const { return den_; }
  const K& coeff_zero() const { return num_.field_zero(); }

  RatFunc zero_like() const { return RatFunc(num_.field_zero()); }
  RatFunc one_like() const { return constant(num_.field_one()); }
  RatFunc from_int(long long n) const { return constant(num_.field_zero().from_int(n)); }
  bool is_zero() const { return num_.is_zero(); }
  std::uint64_t characteristic() const { return num_.field_zero().characteristic(); }

  RatFunc operator+(const RatFunc& o) const {
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-(const RatFunc& o) const {
    if (den_ == o.den_) return RatFunc(num_ - o.num_, den_);
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  RatFunc operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return zero_like();
    if (den_.degree() == 0 && o.den_.degree() == 0) return RatFunc(num_ * o.num_, den_ * o.den_);
    // Cross-cancel first to keep the gcd small.
    Poly<K> g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    return RatFunc((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1));
  }
  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero rational function");
    return RatFunc(den_, num_);
  }
  RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }
  int compare(const RatFunc& o) const {
    const int c = num_.compare(o.num_);
    return c != 0 ? c : den_.compare(o.den_);
  }

  /// b with b^p = *this when it exists. num and den are coprime with den
  /// monic, so a p-th power has both parts p-th powers.
  std::optional<RatFunc> pth_root() const
    requires requires(const K& k) { k.pth_root(); }
  {
    const std::uint64_t p = characteristic();
    auto root_poly = [p](const Poly<K>& f) -> std::optional<Poly<K>> {
      std::vector<K> out;
      for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i % p != 0) {
          if (!f.coeffs()[i].is_zero()) return std::nullopt;
          continue;
        }
        auto r = f.coeffs()[i].pth_root();
        if (!r) return std::nullopt;
        out.push_back(*r);
      }
      return Poly<K>(f.field_zero(), std::move(out));
    };
    auto n = root_poly(num_);
    auto d = root_poly(den_);
    if (!n || !d) return std::nullopt;
    return RatFunc(*n, *d);
  }

  std::string to_string() const {
    const std::string v(1, Var);
    std::string n = num_.to_string(v);
    if (den_.is_one()) return n;
    if (n.find_first_of("+- ") != std::string::npos || n.find('*') != std::string::npos) n = "(" + n + ")";
    return n + "/(" + den_.to_string(v) + ")";
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly<K>::constant(num_.field_one());
      return;
    }
    if (den_.degree() > 0) {
      Poly<K> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
      }
    }
    const K inv = den_.lc().inverse();
    if (!(inv == num_.field_one())) {
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly<K> num_;
  Poly<K> den_;
};

/// The imperfect residue field F_p(u).
using FpU = RatFunc<GF, 'u'>;

inline FpU fpu_zero(std::uint64_t p) { return FpU(gf_zero(p)); }

}  // namespace dvrtrace
