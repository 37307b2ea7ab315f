#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace dvrtrace {

// Elements carry their field (a runtime modulus, a coefficient field), so the
// neutral elements are produced from an existing element.
template <class F>
concept Field = std::copyable<F> && requires(const F a, const F b, long long n) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { a == b } -> std::convertible_to<bool>;
  { a.zero_like() } -> std::convertible_to<F>;
  { a.one_like() } -> std::convertible_to<F>;
  { a.from_int(n) } -> std::convertible_to<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::convertible_to<F>;
  { a.characteristic() } -> std::convertible_to<std::uint64_t>;
  { a.compare(b) } -> std::convertible_to<int>;
  { a.to_string() } -> std::convertible_to<std::string>;
};

template <class F>
concept FiniteField = Field<F> && F::is_finite_field;

/// Q, the fraction field of Z_(p).
class Rational {
 public:
  static constexpr bool is_finite_field = false;

  Rational() = default;
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rational(long long n) : v_(static_cast<long>(n)) {}

  const mpq_class& value() const { return v_; }

  Rational zero_like() const { return Rational(0); }
  Rational one_like() const { return Rational(1); }
  Rational from_int(long long n) const { return Rational(n); }
  bool is_zero() const { return sgn(v_) == 0; }
  std::uint64_t characteristic() const { return 0; }

  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational inverse() const { return one_like() / *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  int compare(const Rational& o) const { return cmp(v_, o.v_) < 0 ? -1 : (cmp(v_, o.v_) > 0 ? 1 : 0); }
  std::string to_string() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

}  // namespace dvrtrace
