#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "dvrtrace/algebra.hpp"
#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/fiber.hpp"
#include "dvrtrace/matrix.hpp"

namespace dvrtrace {

/// U M V = diag(pi^e_1, ..., pi^e_r, 0, ...), exponents nondecreasing, U and V
/// invertible over R.
template <class S>
struct SmithProfile {
  std::vector<std::int64_t> exponents;
  std::size_t rank_deficiency = 0;
  Matrix<S> left;      // U
  Matrix<S> right;     // V
  Matrix<S> diagonal;  // U M V

  std::int64_t length() const {
    std::int64_t s = 0;
    for (auto e : exponents) s += e;
    return s;
  }
};

namespace detail {

// Valuation pivoting: the entry of least valuation (ties: lowest row, then
// column) becomes the pivot, is scaled to a power of the uniformizer, and
// clears its row and column. With a precision N every entry is kept as its
// representative mod pi^N, which stops coefficient growth; the exponents are
// exact as long as all of them are below N.
template <DvrBackend D>
SmithProfile<typename D::Scalar> smith_impl(const D& R, const Matrix<typename D::Scalar>& M,
                                            std::optional<unsigned> precision) {
  using S = typename D::Scalar;
  const std::size_t rows = M.rows(), cols = M.cols();
  auto cut = [&](const S& x) { return precision ? R.truncate(x, *precision) : x; };
  Matrix<S> A = M;
  if (precision)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) A(i, j) = cut(A(i, j));
  Matrix<S> U = Matrix<S>::identity(rows, R.zero());
  Matrix<S> V = Matrix<S>::identity(cols, R.zero());
  std::vector<std::int64_t> exps;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t pi = k, pj = k;
    Valuation best = Valuation::infinity();
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        const Valuation v = R.valuation(A(i, j));
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best.is_infinite()) break;
    if (pi != k) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(A(pi, j), A(k, j));
      for (std::size_t j = 0; j < rows; ++j) std::swap(U(pi, j), U(k, j));
    }
    if (pj != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(A(i, pj), A(i, k));
      for (std::size_t i = 0; i < cols; ++i) std::swap(V(i, pj), V(i, k));
    }
    const unsigned e = static_cast<unsigned>(best.value());
    const S unit_inv = cut(R.unit_shift(A(k, k), e).inverse());
    for (std::size_t j = 0; j < cols; ++j) A(k, j) = cut(A(k, j) * unit_inv);
    for (std::size_t j = 0; j < rows; ++j) U(k, j) = cut(U(k, j) * unit_inv);
    const S pivot = A(k, k);
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (A(i, k).is_zero()) continue;
      const S f = A(i, k) / pivot;
      for (std::size_t j = k; j < cols; ++j) A(i, j) = cut(A(i, j) - f * A(k, j));
      for (std::size_t j = 0; j < rows; ++j) U(i, j) = cut(U(i, j) - f * U(k, j));
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (A(k, j).is_zero()) continue;
      const S f = A(k, j) / pivot;
      for (std::size_t i = k; i < rows; ++i) A(i, j) = cut(A(i, j) - f * A(i, k));
      for (std::size_t i = 0; i < cols; ++i) V(i, j) = cut(V(i, j) - f * V(i, k));
    }
    exps.push_back(best.value());
  }
  SmithProfile<S> out{std::move(exps), 0, std::move(U), std::move(V), std::move(A)};
  out.rank_deficiency = steps - out.exponents.size();
  return out;
}

}  // namespace detail

/// Smith normal form over the DVR with exact witnesses U, V.
template <DvrBackend D>
SmithProfile<typename D::Scalar> smith_over_dvr(const D& R, const Matrix<typename D::Scalar>& M) {
  return detail::smith_impl(R, M, std::nullopt);
}

/// Smith form computed in R / pi^N. Exponents and rank deficiency are exact
/// when every elementary divisor exponent of M is below N; U and V are
/// witnesses only modulo pi^N.
template <DvrBackend D>
SmithProfile<typename D::Scalar> smith_modulo(const D& R, const Matrix<typename D::Scalar>& M, unsigned N) {
  return detail::smith_impl(R, M, N);
}

namespace detail {

template <class E>
struct FractionFree {
  std::size_t rank = 0;
  E last_pivot;       // a nonzero rank x rank minor up to sign (1 when rank = 0)
  bool odd = false;   // parity of the row and column swaps
};

// Bareiss elimination with full pivoting over an integral domain with exact
// division. The k-th pivot is a k x k minor, so no intermediate fractions
// (and no gcds) appear.
template <class E, class IsZero>
FractionFree<E> bareiss(std::vector<std::vector<E>> m, const E& one, IsZero is_zero) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  FractionFree<E> out{0, one, false};
  E prev = one;
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = k; i < rows && pi == rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (!is_zero(m[i][j])) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == rows) break;
    if (pi != k) {
      std::swap(m[pi], m[k]);
      out.odd = !out.odd;
    }
    if (pj != k) {
      for (auto& row : m) std::swap(row[pj], row[k]);
      out.odd = !out.odd;
    }
    for (std::size_t i = k + 1; i < rows; ++i)
      for (std::size_t j = k + 1; j < cols; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
    ++out.rank;
  }
  out.last_pivot = prev;
  return out;
}

// Rows scaled by units of R so every entry lies in Z or K[t]; returns the
// numerator rows and the product of the scales.
inline std::pair<std::vector<std::vector<mpz_class>>, Rational> numerator_rows(const IntegersAtP&,
                                                                                 const Matrix<Rational>& M) {
  std::vector<std::vector<mpz_class>> out(M.rows());
  mpz_class total = 1;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < M.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(i, j).value().get_den_mpz_t());
    for (std::size_t j = 0; j < M.cols(); ++j)
      out[i].push_back(M(i, j).value().get_num() * (l / M(i, j).value().get_den()));
    total *= l;
  }
  return {std::move(out), Rational(mpq_class(total))};
}

template <Field K>
std::pair<std::vector<std::vector<Poly<K>>>, typename PowerSeriesAt<K>::Scalar> numerator_rows(
    const PowerSeriesAt<K>& R, const Matrix<typename PowerSeriesAt<K>::Scalar>& M) {
  std::vector<std::vector<Poly<K>>> out(M.rows());
  Poly<K> total = R.one().num();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    std::vector<Poly<K>> dens;
    Poly<K> scale = R.one().num();
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const Poly<K>& d = M(i, j).den();
      if (d.degree() > 0 && std::find(dens.begin(), dens.end(), d) == dens.end()) {
        dens.push_back(d);
        scale = scale * d;
      }
    }
    for (std::size_t j = 0; j < M.cols(); ++j) out[i].push_back(M(i, j).num() * (scale / M(i, j).den()));
    total = total * scale;
  }
  return {std::move(out), typename PowerSeriesAt<K>::Scalar(total)};
}

inline Rational as_scalar(const IntegersAtP&, const mpz_class& x) { return Rational(mpq_class(x)); }
template <Field K>
typename PowerSeriesAt<K>::Scalar as_scalar(const PowerSeriesAt<K>&, const Poly<K>& x) {
  return typename PowerSeriesAt<K>::Scalar(x);
}

template <DvrBackend D>
auto fraction_free(const D& R, const Matrix<typename D::Scalar>& M) {
  auto [rows, scale] = numerator_rows(R, M);
  using E = typename decltype(rows)::value_type::value_type;
  const E one = [&] {
    if constexpr (std::is_same_v<E, mpz_class>)
      return mpz_class(1);
    else
      return R.one().num();
  }();
  auto ff = bareiss(std::move(rows), one, [](const E& x) {
    if constexpr (std::is_same_v<E, mpz_class>)
      return x == 0;
    else
      return x.is_zero();
  });
  return std::make_pair(std::move(ff), std::move(scale));
}

}  // namespace detail

/// Determinant by fraction-free elimination. Gaussian elimination over the
/// fraction field of F_p(u)[t] spends its time in nested gcds.
template <DvrBackend D>
typename D::Scalar exact_determinant(const D& R, const Matrix<typename D::Scalar>& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (M.rows() == 0) return R.one();
  auto [ff, scale] = detail::fraction_free(R, M);
  if (ff.rank < M.rows()) return R.zero();
  const auto d = detail::as_scalar(R, ff.last_pivot) / scale;
  return ff.odd ? -d : d;
}

/// A precision N above every elementary divisor exponent of M: 1 + v of one
/// nonzero maximal minor, since the exponents sum to the least such v. Row
/// scaling by units does not change valuations.
template <DvrBackend D>
unsigned smith_precision(const D& R, const Matrix<typename D::Scalar>& M) {
  auto [ff, scale] = detail::fraction_free(R, M);
  if (ff.rank == 0) return 1;
  const Valuation v = R.valuation(detail::as_scalar(R, ff.last_pivot));
  if (v.is_infinite() || v < Valuation(0)) throw InternalInconsistency("maximal minor is not a nonzero ring element");
  return static_cast<unsigned>(v.value()) + 1;
}

/// Exponents and rank deficiency, by the truncated elimination.
template <DvrBackend D>
SmithProfile<typename D::Scalar> smith_exponents(const D& R, const Matrix<typename D::Scalar>& M) {
  return smith_modulo(R, M, smith_precision(R, M));
}

/// The trace form of A over R and what it says about the cokernel Q of
/// A -> Hom_R(A, R).
template <class S>
struct TraceProfile {
  Matrix<S> gram;
  S determinant;
  Valuation f;
  SmithProfile<S> smith;
  bool generically_etale = false;
  bool etale = false;
  bool cokernel_defined_over_residue = false;
};

template <DvrBackend D>
TraceProfile<typename D::Scalar> trace_profile(const FiniteFlatAlgebra<D>& A) {
  const D& R = A.backend();
  auto gram = A.trace_gram();
  auto det = exact_determinant(R, gram);
  const Valuation f = R.valuation(det);
  // v(det) bounds every exponent, so the elimination can run mod pi^(f+1).
  auto smith = f.is_finite() ? smith_modulo(R, gram, static_cast<unsigned>(f.value()) + 1) : smith_exponents(R, gram);
  TraceProfile<typename D::Scalar> tp{gram, det, f, std::move(smith)};
  tp.generically_etale = !det.is_zero();
  // Determinant route vs Smith route.
  if (tp.generically_etale != (tp.smith.rank_deficiency == 0))
    throw InternalInconsistency("determinant and Smith form disagree on injectivity of the trace pairing");
  if (f.is_finite() && f.value() != tp.smith.length())
    throw InternalInconsistency("v(det) = " + f.to_string() + " but Smith exponents sum to " +
                                std::to_string(tp.smith.length()));
  bool all_zero = true, all_small = true;
  for (auto e : tp.smith.exponents) {
    all_zero = all_zero && e == 0;
    all_small = all_small && e <= 1;
  }
  tp.etale = tp.generically_etale && f == Valuation(0);
  if (tp.generically_etale && tp.etale != all_zero) throw InternalInconsistency("etaleness disagrees with Smith form");
  tp.cokernel_defined_over_residue = tp.generically_etale && all_small;
  return tp;
}

/// v(det of the trace Gram matrix); infinity exactly when A is not
/// generically etale.
template <DvrBackend D>
Valuation f_invariant(const FiniteFlatAlgebra<D>& A) {
  return trace_profile(A).f;
}

template <DvrBackend D>
bool is_generically_etale(const FiniteFlatAlgebra<D>& A) {
  return trace_profile(A).generically_etale;
}

/// m_R Q = 0, i.e. every elementary divisor has exponent at most 1. False
/// when Q has a free part.
template <DvrBackend D>
bool cokernel_defined_over_residue(const FiniteFlatAlgebra<D>& A) {
  return trace_profile(A).cokernel_defined_over_residue;
}

/// Length of R^n / span(gens), for gens of full rank n. A known bound on the
/// exponents (for instance pi^k R^n inside the span gives k + 1) skips the
/// precision search.
template <DvrBackend D>
std::int64_t colength(const D& R, const std::vector<Vec<typename D::Scalar>>& gens, std::size_t n,
                      std::optional<unsigned> precision = std::nullopt) {
  const auto M = Matrix<typename D::Scalar>::from_columns(gens, n, R.zero());
  auto sp = smith_modulo(R, M, precision ? *precision : smith_precision(R, M));
  if (sp.exponents.size() != n) throw InternalInconsistency("submodule is not of full rank");
  return sp.length();
}

/// R-basis of p = ker(A -> k(p)): lifts of a basis of the kernel W of the
/// fiber residue map, and pi e_j for standard vectors e_j completing W to a
/// basis of the fiber. Since pi A lies in p this spans p.
template <DvrBackend D>
std::vector<Vec<typename D::Scalar>> maximal_ideal_module(const FiniteFlatAlgebra<D>& A,
                                                          const LocalFactor<typename D::Residue>& factor) {
  using K = typename D::Residue;
  const D& R = A.backend();
  const std::size_t n = A.rank();
  std::vector<Vec<K>> span = kernel(factor.residue_map);
  const std::size_t w = span.size();
  const K kz = R.residue_zero();
  for (std::size_t j = 0; j < n; ++j) {
    Vec<K> e(n, kz);
    e[j] = kz.one_like();
    span.push_back(std::move(e));
  }
  std::vector<Vec<typename D::Scalar>> basis;
  for (auto i : independent_subset(span, kz)) {
    if (i < w)
      basis.push_back(A.lift(span[i]));
    else
      basis.push_back(vec_scale(A.table().basis(i - w), R.uniformizer()));
  }
  if (basis.size() != n) throw InternalInconsistency("maximal ideal basis has the wrong size");
  return basis;
}

/// dim_{k(p)} p / p^2. p/p^2 is killed by p, so it is computed globally:
/// its k_R-dimension is colength(p^2) - colength(p). pi A lies in p and
/// pi^2 A in p^2, so both colengths have exponents at most 2.
template <DvrBackend D>
std::size_t cotangent_dimension(const FiniteFlatAlgebra<D>& A, const LocalFactor<typename D::Residue>& factor,
                                const std::vector<Vec<typename D::Scalar>>& basis) {
  const D& R = A.backend();
  const std::size_t n = A.rank();
  std::vector<Vec<typename D::Scalar>> squares;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) squares.push_back(A.table().multiply(basis[i], basis[j]));
  const std::int64_t diff = colength(R, squares, n, 3u) - colength(R, basis, n, 2u);
  const auto r = static_cast<std::int64_t>(factor.residue_poly.degree());
  if (diff < 0 || diff % r != 0) throw InternalInconsistency("p/p^2 is not a k(p)-vector space");
  return static_cast<std::size_t>(diff / r);
}

template <class S>
struct CotangentEntry {
  std::vector<Vec<S>> generators;
  std::size_t dimension = 0;
  bool regular = false;
};

template <class S>
struct CotangentReport {
  std::vector<CotangentEntry<S>> ideals;  // one per local factor, same order
  bool regular = true;
  std::vector<bool> monogenic_shortcut;   // filled for monogenic algebras
};

/// For A = R[X]/(f): A is regular at (pi, g) iff f is not in (pi, g)^2.
/// Writing f mod g^2 = r1 g + r0, that membership means pi | r1 and pi^2 | r0.
template <DvrBackend D>
bool monogenic_regular_at(const D& R, const Poly<typename D::Scalar>& f, const Poly<typename D::Residue>& g) {
  using S = typename D::Scalar;
  const Poly<S> lift = g.map_coeffs(R.zero(), [&R](const auto& c) { return R.lift(c); });
  const Poly<S> rem = f % (lift * lift);
  auto [r1, r0] = rem.divmod(lift);
  bool in_square = true;
  for (const auto& c : r1.coeffs()) in_square = in_square && R.valuation(c) >= Valuation(1);
  for (const auto& c : r0.coeffs()) in_square = in_square && R.valuation(c) >= Valuation(2);
  return !in_square;
}

/// Regularity at every maximal ideal over m_R via dim p/p^2 = 1; monogenic
/// algebras also run the polynomial criterion and the two must agree.
template <DvrBackend D>
CotangentReport<typename D::Scalar> cotangent_report(const FiniteFlatAlgebra<D>& A,
                                                     const FiberReport<typename D::Residue>& fiber) {
  CotangentReport<typename D::Scalar> out;
  for (const auto& f : fiber.factors) {
    CotangentEntry<typename D::Scalar> entry;
    entry.generators = maximal_ideal_module(A, f);
    entry.dimension = cotangent_dimension(A, f, entry.generators);
    entry.regular = entry.dimension == 1;
    out.regular = out.regular && entry.regular;
    out.ideals.push_back(std::move(entry));
  }
  if (A.monogenic_poly()) {
    for (std::size_t i = 0; i < fiber.factors.size(); ++i) {
      const bool r = monogenic_regular_at(A.backend(), *A.monogenic_poly(), fiber.factors[i].residue_poly);
      out.monogenic_shortcut.push_back(r);
      if (r != out.ideals[i].regular)
        throw InternalInconsistency("cotangent and polynomial regularity criteria disagree at factor " +
                                    std::to_string(i));
    }
  }
  return out;
}

template <DvrBackend D>
bool is_regular(const FiniteFlatAlgebra<D>& A, const FiberReport<typename D::Residue>& fiber) {
  return cotangent_report(A, fiber).regular;
}

}  // namespace dvrtrace
