#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/factor.hpp"

namespace dvrtrace {

/// Field embedding F_q -> F_{q^m}: the generator of F_q goes to the first
/// root (in factor order) of its modulus inside the larger field.
class GFEmbedding {
 public:
  GFEmbedding(const GF& source_zero, unsigned m) : source_(source_zero.zero_like()) {
    const auto& sctx = *source_zero.context();
    target_ = gf_zero(sctx.p, sctx.m * m);
    std::vector<GF> mod;
    for (auto c : sctx.modulus) mod.push_back(target_.from_int(static_cast<long long>(c)));
    const auto fl = factor(Poly<GF>(target_, mod));
    for (const auto& [g, mult] : fl.factors)
      if (g.degree() == 1) {
        root_ = -g.coeff(0);
        return;
      }
    throw InternalInconsistency("modulus has no root in the extension field");
  }

  const GF& target_zero() const { return target_; }

  GF operator()(const GF& a) const {
    GF acc = target_, pw = target_.one_like();
    for (auto c : a.coords()) {
      acc = acc + target_.from_int(static_cast<long long>(c)) * pw;
      pw = pw * root_;
    }
    return acc;
  }

  Poly<GF> operator()(const Poly<GF>& f) const {
    return f.map_coeffs(target_, [this](const GF& c) { return (*this)(c); });
  }

 private:
  GF source_;
  GF target_;
  GF root_;
};

/// B (x)_{F_q} F_{q^m}, keeping the basis and provenance.
inline FiberAlgebra<GF> extend_fiber(const FiberAlgebra<GF>& B, unsigned m) {
  const GFEmbedding emb(B.field_zero(), m);
  FiberAlgebra<GF> out{B.table.map(emb.target_zero(), emb), std::nullopt, {}};
  if (B.monogenic) out.monogenic = emb(*B.monogenic);
  for (const auto& c : B.components) out.components.push_back(extend_fiber(c, m));
  return out;
}

/// A (x) F_{q^m}[t]_(t) over F_q[t]_(t): an unramified base change of the DVR
/// that extends the residue field. The basis is unchanged.
inline FiniteFlatAlgebra<FiniteSeries> extend_residue(const FiniteFlatAlgebra<FiniteSeries>& A, unsigned m) {
  const GFEmbedding emb(A.backend().residue_zero(), m);
  const FiniteSeries R = make_power_series(emb.target_zero().size());
  auto lift = [&emb](const FiniteSeries::Scalar& x) { return FiniteSeries::Scalar(emb(x.num()), emb(x.den())); };
  switch (A.provenance()) {
    case FiniteFlatAlgebra<FiniteSeries>::Provenance::Monogenic:
      return FiniteFlatAlgebra<FiniteSeries>::from_monogenic(R, A.monogenic_poly()->map_coeffs(R.zero(), lift));
    case FiniteFlatAlgebra<FiniteSeries>::Provenance::Product: {
      auto acc = extend_residue(A.components().front(), m);
      for (std::size_t i = 1; i < A.components().size(); ++i)
        acc = FiniteFlatAlgebra<FiniteSeries>::product(acc, extend_residue(A.components()[i], m));
      return acc;
    }
    case FiniteFlatAlgebra<FiniteSeries>::Provenance::Table:
      break;
  }
  return FiniteFlatAlgebra<FiniteSeries>::from_table(R, A.table().map(R.zero(), lift));
}

}  // namespace dvrtrace
