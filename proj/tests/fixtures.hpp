#pragma once

#include <string>
#include <vector>

#include "dvrtrace/dvrtrace.hpp"

namespace fx {

using namespace dvrtrace;

template <DvrBackend D>
typename D::Scalar s(const D& R, const std::string& text) {
  return parse_scalar(R, text);
}

/// Polynomial over R from coefficient strings, constant term first.
template <DvrBackend D>
Poly<typename D::Scalar> poly(const D& R, const std::vector<std::string>& cs) {
  std::vector<typename D::Scalar> v;
  for (const auto& c : cs) v.push_back(parse_scalar(R, c));
  return Poly<typename D::Scalar>(R.zero(), std::move(v));
}

template <DvrBackend D>
FiniteFlatAlgebra<D> mono(const D& R, const std::vector<std::string>& cs) {
  return FiniteFlatAlgebra<D>::from_monogenic(R, poly(R, cs));
}

/// Polynomial over a prime field from integers, constant term first.
inline Poly<GF> fp(std::uint64_t p, const std::vector<long long>& cs, unsigned m = 1) {
  const GF z = gf_zero(p, m);
  std::vector<GF> v;
  for (auto c : cs) v.push_back(z.from_int(c));
  return Poly<GF>(z, std::move(v));
}

inline FpU u_of(std::uint64_t p) { return FpU::var(gf_zero(p)); }

/// Polynomial over F_p(u) whose coefficients are given as polynomials in u
/// over F_p (constant term first).
inline Poly<FpU> fpu(std::uint64_t p, const std::vector<std::vector<long long>>& cs) {
  const FpU z = fpu_zero(p);
  std::vector<FpU> v;
  for (const auto& c : cs) v.push_back(FpU(fp(p, c)));
  return Poly<FpU>(z, std::move(v));
}

}  // namespace fx
