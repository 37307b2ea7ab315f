#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dvrtrace {

/// Exponent of the uniformizer. Infinity is a proper value (valuation of 0),
/// ordered above every finite value.
class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(std::int64_t v) : value_(v) {}

  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  std::int64_t value() const {
    if (infinite_) throw std::domain_error("valuation is infinite");
    return value_;
  }

  constexpr std::strong_ordering operator<=>(const Valuation& o) const {
    if (infinite_ || o.infinite_) {
      if (infinite_ && o.infinite_) return std::strong_ordering::equal;
      return infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return value_ <=> o.value_;
  }
  constexpr bool operator==(const Valuation& o) const {
    return (*this <=> o) == std::strong_ordering::equal;
  }

  constexpr Valuation operator+(const Valuation& o) const {
    if (infinite_ || o.infinite_) return infinity();
    return Valuation(value_ + o.value_);
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

inline Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

}  // namespace dvrtrace
