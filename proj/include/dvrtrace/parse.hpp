#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"

namespace dvrtrace {

namespace detail {

// Recursive-descent reader for + - * / ^ ( ), integer literals and
// single-letter symbols. Juxtaposition ("3t") multiplies.
template <class T, class Hooks>
class ExprReader {
 public:
  ExprReader(std::string_view text, const Hooks& hooks) : s_(text), hooks_(hooks) {}

  T run() {
    T v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("cannot parse scalar \"" + std::string(s_) + "\": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  T expr() {
    T v = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        v = v + term();
      } else if (peek('-')) {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }
  T term() {
    T v = unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        v = v * unary();
      } else if (peek('/')) {
        ++pos_;
        T d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else if (starts_primary()) {
        v = v * power();
      } else {
        return v;
      }
    }
  }
  T unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }
  T power() {
    T base = primary();
    if (!peek('^')) return base;
    ++pos_;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
    if (e > 4096) fail("exponent too large");
    T r = base.one_like();
    for (unsigned long i = 0; i < e; ++i) r = r * base;
    return r;
  }
  T primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      T v = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return hooks_.integer(mpz_class(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) fail("symbols are single letters");
      auto v = hooks_.symbol(c);
      if (!v) fail(std::string("unknown symbol '") + c + "'");
      return *v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Hooks& hooks_;
  std::size_t pos_ = 0;
};

struct RationalHooks {
  Rational integer(const mpz_class& n) const { return Rational(mpq_class(n)); }
  std::optional<Rational> symbol(char) const { return std::nullopt; }
};

template <class K>
struct SeriesHooks {
  using Scalar = RatFunc<K, 't'>;
  K proto;
  Scalar integer(const mpz_class& n) const {
    if constexpr (std::is_same_v<K, GF>) {
      return Scalar::constant(proto.from_mpz(n));
    } else {
      return Scalar::constant(K::constant(proto.coeff_zero().from_mpz(n)));
    }
  }
  std::optional<Scalar> symbol(char c) const {
    if (c == 't') return Scalar::var(proto);
    if constexpr (std::is_same_v<K, GF>) {
      if (c == 'w' && proto.degree() > 1) return Scalar::constant(proto.generator());
    } else {
      if (c == 'u') return Scalar::constant(K::var(proto.coeff_zero()));
    }
    return std::nullopt;
  }
};

}  // namespace detail

/// Reads a DVR element ("7/2", "t^2/(1+t)", "u+t"); rejects elements of
/// negative valuation.
inline Rational parse_scalar(const IntegersAtP& R, std::string_view text) {
  detail::RationalHooks hooks;
  Rational x = detail::ExprReader<Rational, detail::RationalHooks>(text, hooks).run();
  if (!R.is_integral(x)) throw InvalidInput("scalar \"" + std::string(text) + "\" is not in " + R.descriptor().name());
  return x;
}

template <Field K>
typename PowerSeriesAt<K>::Scalar parse_scalar(const PowerSeriesAt<K>& R, std::string_view text) {
  detail::SeriesHooks<K> hooks{R.residue_zero()};
  auto x = detail::ExprReader<typename PowerSeriesAt<K>::Scalar, detail::SeriesHooks<K>>(text, hooks).run();
  if (!R.is_integral(x)) throw InvalidInput("scalar \"" + std::string(text) + "\" is not in " + R.descriptor().name());
  return x;
}

inline std::string format_scalar(const Rational& x) { return x.to_string(); }
template <Field K, char V>
std::string format_scalar(const RatFunc<K, V>& x) {
  return x.to_string();
}

}  // namespace dvrtrace
