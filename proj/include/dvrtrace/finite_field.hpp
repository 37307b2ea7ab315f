#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dvrtrace/errors.hpp"

namespace dvrtrace {

namespace detail {

// Dense polynomials over F_p as raw residues, constant term first. Only used
// to build and run the modulus of a finite field; everything else goes
// through Poly<GF>.
using RawPoly = std::vector<std::uint64_t>;

inline void raw_trim(RawPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline RawPoly raw_mul(const RawPoly& a, const RawPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  RawPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  raw_trim(r);
  return r;
}

inline std::uint64_t raw_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t raw_inv(std::uint64_t a, std::uint64_t p) { return raw_pow(a, p - 2, p); }

// Remainder of a modulo m (m nonzero).
inline RawPoly raw_mod(RawPoly a, const RawPoly& m, std::uint64_t p) {
  raw_trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t inv = raw_inv(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - c * m[i] % p) % p;
    raw_trim(a);
  }
  return a;
}

inline RawPoly raw_gcd(RawPoly a, RawPoly b, std::uint64_t p) {
  raw_trim(a);
  raw_trim(b);
  while (!b.empty()) {
    RawPoly r = raw_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline RawPoly raw_sub(RawPoly a, const RawPoly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  raw_trim(a);
  return a;
}

// x^(p^k) mod m.
inline RawPoly raw_frobenius_x(const RawPoly& m, std::uint64_t p, unsigned k) {
  RawPoly x = raw_mod(RawPoly{0, 1}, m, p);
  for (unsigned step = 0; step < k; ++step) {
    RawPoly acc{1};
    RawPoly base = x;
    std::uint64_t e = p;
    while (e) {
      if (e & 1) acc = raw_mod(raw_mul(acc, base, p), m, p);
      base = raw_mod(raw_mul(base, base, p), m, p);
      e >>= 1;
    }
    x = std::move(acc);
  }
  return x;
}

// Rabin's test.
inline bool raw_is_irreducible(const RawPoly& f, std::uint64_t p) {
  const unsigned n = static_cast<unsigned>(f.size() - 1);
  if (n == 1) return true;
  const RawPoly x{0, 1};
  if (raw_sub(raw_frobenius_x(f, p, n), raw_mod(x, f, p), p).size() != 0) return false;
  for (unsigned r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool prime = true;
    for (unsigned d = 2; d * d <= r; ++d)
      if (r % d == 0) prime = false;
    if (!prime) continue;
    RawPoly g = raw_gcd(f, raw_sub(raw_frobenius_x(f, p, n / r), x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

inline bool is_small_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// F_{p^m} presented as F_p[w]/(modulus), modulus the lexicographically
/// smallest monic irreducible of degree m.
struct GFContext {
  std::uint64_t p = 0;
  unsigned m = 0;
  std::uint64_t q = 0;
  detail::RawPoly modulus;
};

inline std::shared_ptr<const GFContext> gf_context(std::uint64_t p, unsigned m) {
  if (!detail::is_small_prime(p) || p >= (1ULL << 31))
    throw InvalidInput("finite field characteristic must be a prime below 2^31, got " + std::to_string(p));
  if (m == 0) throw InvalidInput("finite field degree must be positive");
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, m);
  if (q > mpz_class("4294967296")) throw CapabilityError("finite field too large: " + q.get_str());

  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const GFContext>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({p, m});
  if (it != cache.end()) return it->second;

  auto ctx = std::make_shared<GFContext>();
  ctx->p = p;
  ctx->m = m;
  ctx->q = q.get_ui();
  // Enumerate monic degree-m polynomials by their lower coefficients.
  detail::RawPoly f(m + 1, 0);
  f[m] = 1;
  for (std::uint64_t idx = 0;; ++idx) {
    std::uint64_t t = idx;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = t % p;
      t /= p;
    }
    if (detail::raw_is_irreducible(f, p)) break;
  }
  ctx->modulus = f;
  cache.emplace(std::make_pair(p, m), ctx);
  return ctx;
}

/// Element of a finite field F_q. Coordinates are over the power basis
/// 1, w, ..., w^{m-1}; always reduced.
class GF {
 public:
  static constexpr bool is_finite_field = true;

  GF() = default;
  explicit GF(std::shared_ptr<const GFContext> ctx) : ctx_(std::move(ctx)), c_(ctx_->m, 0) {}
  GF(std::shared_ptr<const GFContext> ctx, detail::RawPoly coords) : ctx_(std::move(ctx)) {
    c_ = detail::raw_mod(std::move(coords), ctx_->modulus, ctx_->p);
    c_.resize(ctx_->m, 0);
  }

  const std::shared_ptr<const GFContext>& context() const { return ctx_; }
  const detail::RawPoly& coords() const { return c_; }

  GF zero_like() const { return GF(ctx_); }
  GF one_like() const { return from_int(1); }
  GF from_int(long long n) const {
    const long long p = static_cast<long long>(ctx_->p);
    long long r = n % p;
    if (r < 0) r += p;
    GF x(ctx_);
    x.c_[0] = static_cast<std::uint64_t>(r);
    return x;
  }
  GF from_mpz(const mpz_class& n) const {
    mpz_class r = n % mpz_class(static_cast<unsigned long>(ctx_->p));
    if (r < 0) r += static_cast<unsigned long>(ctx_->p);
    return from_int(r.get_si());
  }
  /// The class of w, a generator of F_q over F_p.
  GF generator() const { return GF(ctx_, detail::RawPoly{0, 1}); }

  /// Elements enumerated by base-p digits of the coordinates, 0 <= index < q.
  GF from_index(std::uint64_t index) const {
    GF x(ctx_);
    for (unsigned i = 0; i < ctx_->m; ++i) {
      x.c_[i] = index % ctx_->p;
      index /= ctx_->p;
    }
    return x;
  }

  std::uint64_t characteristic() const { return ctx_->p; }
  std::uint64_t size() const { return ctx_->q; }
  unsigned degree() const { return ctx_->m; }
  bool same_field(const GF& o) const { return ctx_->p == o.ctx_->p && ctx_->m == o.ctx_->m; }

  bool is_zero() const {
    for (auto v : c_)
      if (v) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i]) return false;
    return true;
  }

  GF operator+(const GF& o) const {
    GF r(ctx_);
    for (unsigned i = 0; i < ctx_->m; ++i) r.c_[i] = (c_[i] + o.c_[i]) % ctx_->p;
    return r;
  }
  GF operator-(const GF& o) const {
    GF r(ctx_);
    for (unsigned i = 0; i < ctx_->m; ++i) r.c_[i] = (c_[i] + ctx_->p - o.c_[i]) % ctx_->p;
    return r;
  }
  GF operator-() const { return zero_like() - *this; }
  GF operator*(const GF& o) const {
    if (ctx_->m == 1) {
      GF r(ctx_);
      r.c_[0] = c_[0] * o.c_[0] % ctx_->p;
      return r;
    }
    return GF(ctx_, detail::raw_mul(c_, o.c_, ctx_->p));
  }
  GF inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in a finite field");
    return pow(ctx_->q - 2);
  }
  GF operator/(const GF& o) const { return *this * o.inverse(); }
  GF& operator+=(const GF& o) { return *this = *this + o; }
  GF& operator-=(const GF& o) { return *this = *this - o; }
  GF& operator*=(const GF& o) { return *this = *this * o; }

  GF pow(std::uint64_t e) const {
    GF r = one_like(), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }
  GF pow(const mpz_class& e) const {
    GF r = one_like();
    for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
      r *= r;
      if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) r *= *this;
    }
    return r;
  }

  /// The unique p-th root (finite fields are perfect).
  std::optional<GF> pth_root() const { return pow(ctx_->q / ctx_->p); }

  bool operator==(const GF& o) const { return same_field(o) && c_ == o.c_; }
  bool operator!=(const GF& o) const { return !(*this == o); }
  /// Total order used for deterministic output; compares coordinates from the top.
  int compare(const GF& o) const {
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i] ? -1 : 1;
    }
    return 0;
  }

  std::string to_string() const {
    if (ctx_->m == 1) return std::to_string(c_[0]);
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += "+";
      std::string mono = i == 0 ? "" : (i == 1 ? "w" : "w^" + std::to_string(i));
      if (mono.empty())
        out += std::to_string(c_[i]);
      else if (c_[i] == 1)
        out += mono;
      else
        out += std::to_string(c_[i]) + "*" + mono;
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::shared_ptr<const GFContext> ctx_;
  detail::RawPoly c_;
};

inline GF gf_zero(std::uint64_t p, unsigned m = 1) { return GF(gf_context(p, m)); }

}  // namespace dvrtrace
