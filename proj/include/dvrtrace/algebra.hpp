#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dvrtrace/dvr.hpp"
#include "dvrtrace/errors.hpp"
#include "dvrtrace/matrix.hpp"
#include "dvrtrace/poly.hpp"

namespace dvrtrace {

/// Commutative algebra on a fixed basis x_0..x_{n-1}:
/// x_i x_j = sum_k c(i,j,k) x_k, with the unit given in coordinates.
template <class T>
class StructureTable {
 public:
  StructureTable(std::size_t n, std::vector<T> constants, Vec<T> unit, const T& zero)
      : n_(n), zero_(zero.zero_like()), c_(std::move(constants)), unit_(std::move(unit)) {
    if (c_.size() != n_ * n_ * n_) throw InvalidInput("structure constants must have rank^3 entries");
    if (unit_.size() != n_) throw InvalidInput("unit must have rank entries");
  }

  std::size_t rank() const { return n_; }
  const T& zero() const { return zero_; }
  const T& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
  const std::vector<T>& constants() const { return c_; }
  const Vec<T>& unit() const { return unit_; }

  Vec<T> basis(std::size_t i) const {
    Vec<T> v(n_, zero_);
    v[i] = zero_.one_like();
    return v;
  }
  Vec<T> zero_vector() const { return Vec<T>(n_, zero_); }

  void check_length(const Vec<T>& a) const {
    if (a.size() != n_)
      throw std::invalid_argument("element has " + std::to_string(a.size()) + " coordinates, rank is " +
                                  std::to_string(n_));
  }

  Vec<T> multiply(const Vec<T>& a, const Vec<T>& b) const {
    check_length(a);
    check_length(b);
    Vec<T> r(n_, zero_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (b[j].is_zero()) continue;
        const T ab = a[i] * b[j];
        for (std::size_t k = 0; k < n_; ++k) {
          const T& ck = c(i, j, k);
          if (!ck.is_zero()) r[k] = r[k] + ab * ck;
        }
      }
    }
    return r;
  }

  Vec<T> power(const Vec<T>& a, const mpz_class& e) const {
    Vec<T> r = unit_;
    for (long bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
      r = multiply(r, r);
      if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) r = multiply(r, a);
    }
    return e == 0 ? unit_ : r;
  }

  /// Matrix of b -> a b; column j holds the coordinates of a x_j.
  Matrix<T> mult_operator(const Vec<T>& a) const {
    check_length(a);
    Matrix<T> m(n_, n_, zero_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) m(k, j) = m(k, j) + a[i] * c(i, j, k);
    }
    return m;
  }

  T trace(const Vec<T>& a) const {
    check_length(a);
    T t = zero_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      t = t + a[i] * basis_trace(i);
    }
    return t;
  }

  T basis_trace(std::size_t i) const {
    T t = zero_;
    for (std::size_t j = 0; j < n_; ++j) t = t + c(i, j, j);
    return t;
  }

  /// (tr(x_i x_j))_{i,j}.
  Matrix<T> trace_gram() const {
    std::vector<T> tr;
    for (std::size_t k = 0; k < n_; ++k) tr.push_back(basis_trace(k));
    Matrix<T> g(n_, n_, zero_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        T s = zero_;
        for (std::size_t k = 0; k < n_; ++k)
          if (!c(i, j, k).is_zero()) s = s + c(i, j, k) * tr[k];
        g(i, j) = s;
        g(j, i) = s;
      }
    return g;
  }

  template <class U, class Fn>
  StructureTable<U> map(const U& zero, Fn&& fn) const {
    std::vector<U> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(fn(x));
    Vec<U> u;
    for (const auto& x : unit_) u.push_back(fn(x));
    return StructureTable<U>(n_, std::move(c), std::move(u), zero);
  }

 private:
  std::size_t n_;
  T zero_;
  std::vector<T> c_;
  Vec<T> unit_;
};

/// A violated identity found by validate().
struct Violation {
  enum class Kind { Commutativity, Associativity, UnitLaw, NotIntegral };
  Kind kind;
  std::vector<std::size_t> indices;

  std::string to_string() const {
    std::string s;
    switch (kind) {
      case Kind::Commutativity: s = "commutativity"; break;
      case Kind::Associativity: s = "associativity"; break;
      case Kind::UnitLaw: s = "unit law"; break;
      case Kind::NotIntegral: s = "entry outside the DVR"; break;
    }
    s += " at (";
    for (std::size_t i = 0; i < indices.size(); ++i) s += (i ? "," : "") + std::to_string(indices[i]);
    return s + ")";
  }
};

/// Checks commutativity, associativity and the unit law on every basis
/// triple.
template <class T>
std::vector<Violation> validate_table(const StructureTable<T>& t) {
  std::vector<Violation> out;
  const std::size_t n = t.rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!(t.c(i, j, k) == t.c(j, i, k))) {
          out.push_back({Violation::Kind::Commutativity, {i, j}});
          break;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec<T> xij = t.multiply(t.basis(i), t.basis(j));
      for (std::size_t l = 0; l < n; ++l) {
        const Vec<T> left = t.multiply(xij, t.basis(l));
        const Vec<T> right = t.multiply(t.basis(i), t.multiply(t.basis(j), t.basis(l)));
        if (left != right) out.push_back({Violation::Kind::Associativity, {i, j, l}});
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    if (t.multiply(t.unit(), t.basis(i)) != t.basis(i)) out.push_back({Violation::Kind::UnitLaw, {i}});
  return out;
}

/// Monic polynomial of least degree killing b, from the first linear
/// dependence among 1, b, b^2, ...
template <Field K>
Poly<K> min_poly(const StructureTable<K>& t, const Vec<K>& b) {
  std::vector<Vec<K>> powers{t.unit()};
  for (;;) {
    const Vec<K> next = t.multiply(powers.back(), b);
    auto c = solve(Matrix<K>::from_columns(powers, t.rank(), t.zero()), next);
    if (c) {
      std::vector<K> coeffs;
      for (const auto& x : *c) coeffs.push_back(-x);
      coeffs.push_back(t.zero().one_like());
      return Poly<K>(t.zero(), std::move(coeffs));
    }
    powers.push_back(next);
  }
}

/// Closed fiber A (x) k_R, or any finite-dimensional algebra over a field.
/// Keeps the monogenic polynomial or product components when the basis
/// comes from one.
template <Field K>
struct FiberAlgebra {
  StructureTable<K> table;
  std::optional<Poly<K>> monogenic;
  std::vector<FiberAlgebra> components;

  std::size_t rank() const { return table.rank(); }
  const K& field_zero() const { return table.zero(); }
};

namespace detail {
template <class T>
StructureTable<T> monogenic_table(const Poly<T>& f) {
  const std::size_t n = static_cast<std::size_t>(f.degree());
  const T zero = f.field_zero();
  std::vector<Poly<T>> reduced;  // X^k mod f for k < 2n - 1
  for (std::size_t k = 0; k + 1 < 2 * n || k == 0; ++k) reduced.push_back(Poly<T>::monomial(zero.one_like(), k) % f);
  std::vector<T> c(n * n * n, zero);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[(i * n + j) * n + k] = reduced[i + j].coeff(k);
  Vec<T> unit(n, zero);
  unit[0] = zero.one_like();
  return StructureTable<T>(n, std::move(c), std::move(unit), zero);
}

template <class T>
StructureTable<T> product_table(const StructureTable<T>& a, const StructureTable<T>& b) {
  const std::size_t na = a.rank(), nb = b.rank(), n = na + nb;
  std::vector<T> c(n * n * n, a.zero());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < na; ++k) c[(i * n + j) * n + k] = a.c(i, j, k);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < nb; ++k) c[((na + i) * n + na + j) * n + na + k] = b.c(i, j, k);
  Vec<T> unit = a.unit();
  unit.insert(unit.end(), b.unit().begin(), b.unit().end());
  return StructureTable<T>(n, std::move(c), std::move(unit), a.zero());
}
}  // namespace detail

template <Field K>
FiberAlgebra<K> fiber_from_monogenic(const Poly<K>& f) {
  if (f.degree() < 1) throw InvalidInput("monogenic algebra needs degree >= 1");
  const Poly<K> g = f.monic();
  return {detail::monogenic_table(g), g, {}};
}

template <Field K>
FiberAlgebra<K> fiber_product(const FiberAlgebra<K>& a, const FiberAlgebra<K>& b) {
  std::vector<FiberAlgebra<K>> comps;
  auto add = [&comps](const FiberAlgebra<K>& x) {
    if (!x.components.empty() && !x.monogenic)
      comps.insert(comps.end(), x.components.begin(), x.components.end());
    else
      comps.push_back(x);
  };
  add(a);
  add(b);
  return {detail::product_table(a.table, b.table), std::nullopt, std::move(comps)};
}

/// A finite free algebra over a DVR, given by structure constants on an
/// R-basis. Monogenic algebras use the basis 1, X, ..., X^{n-1}; products keep
/// their factors in block order.
template <DvrBackend D>
class FiniteFlatAlgebra {
 public:
  using Scalar = typename D::Scalar;
  using Residue = typename D::Residue;

  enum class Provenance { Monogenic, Product, Table };

  FiniteFlatAlgebra(D backend, StructureTable<Scalar> table)
      : backend_(std::move(backend)), table_(std::move(table)) {}

  const D& backend() const { return backend_; }
  const StructureTable<Scalar>& table() const { return table_; }
  std::size_t rank() const { return table_.rank(); }
  Provenance provenance() const { return provenance_; }
  const std::optional<Poly<Scalar>>& monogenic_poly() const { return poly_; }
  const std::vector<FiniteFlatAlgebra>& components() const { return components_; }

  static FiniteFlatAlgebra from_monogenic(const D& backend, const Poly<Scalar>& f) {
    if (f.degree() < 1) throw InvalidInput("monogenic algebra needs a polynomial of degree >= 1");
    if (!(f.lc() == backend.one())) throw InvalidInput("monogenic algebra needs a monic polynomial");
    for (const auto& c : f.coeffs())
      if (!backend.is_integral(c))
        throw InvalidInput("polynomial coefficient " + c.to_string() + " is not in " + backend.descriptor().name());
    FiniteFlatAlgebra a(backend, detail::monogenic_table(f));
    a.provenance_ = Provenance::Monogenic;
    a.poly_ = f;
    return a;
  }

  static FiniteFlatAlgebra product(const FiniteFlatAlgebra& x, const FiniteFlatAlgebra& y) {
    if (!(x.backend_.descriptor() == y.backend_.descriptor()))
      throw InvalidInput("product of algebras over different DVRs");
    FiniteFlatAlgebra a(x.backend_, detail::product_table(x.table_, y.table_));
    a.provenance_ = Provenance::Product;
    for (const auto* part : {&x, &y}) {
      if (part->provenance_ == Provenance::Product)
        a.components_.insert(a.components_.end(), part->components_.begin(), part->components_.end());
      else
        a.components_.push_back(*part);
    }
    return a;
  }

  static FiniteFlatAlgebra from_table(const D& backend, StructureTable<Scalar> table) {
    return FiniteFlatAlgebra(backend, std::move(table));
  }

  /// Rebase on the columns of P (new basis vectors in old coordinates). P must
  /// be invertible over R.
  FiniteFlatAlgebra change_basis(const Matrix<Scalar>& P) const {
    const std::size_t n = rank();
    auto Pinv = inverse(P);
    if (!Pinv) throw InvalidInput("basis change matrix is singular");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!backend_.is_integral((*Pinv)(i, j))) throw InvalidInput("basis change matrix is not invertible over R");
    std::vector<Vec<Scalar>> cols;
    for (std::size_t j = 0; j < n; ++j) cols.push_back(P.column(j));
    std::vector<Scalar> c(n * n * n, backend_.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const Vec<Scalar> prod = Pinv->apply(table_.multiply(cols[i], cols[j]));
        for (std::size_t k = 0; k < n; ++k) {
          c[(i * n + j) * n + k] = prod[k];
          c[(j * n + i) * n + k] = prod[k];
        }
      }
    return FiniteFlatAlgebra(backend_, StructureTable<Scalar>(n, std::move(c), Pinv->apply(table_.unit()), backend_.zero()));
  }

  /// Table identities plus integrality of every constant.
  std::vector<Violation> validate() const {
    std::vector<Violation> out;
    const std::size_t n = rank();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (!backend_.is_integral(table_.c(i, j, k))) out.push_back({Violation::Kind::NotIntegral, {i, j, k}});
    for (std::size_t i = 0; i < n; ++i)
      if (!backend_.is_integral(table_.unit()[i])) out.push_back({Violation::Kind::NotIntegral, {i}});
    auto rest = validate_table(table_);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }

  Matrix<Scalar> mult_operator(const Vec<Scalar>& a) const { return table_.mult_operator(a); }
  Scalar trace(const Vec<Scalar>& a) const { return table_.trace(a); }
  Matrix<Scalar> trace_gram() const { return table_.trace_gram(); }

  /// Entrywise reduction to A (x) k_R.
  FiberAlgebra<Residue> base_change_fiber() const {
    const Residue rz = backend_.residue_zero();
    auto red = [this](const Scalar& x) { return backend_.reduce(x); };
    FiberAlgebra<Residue> out{table_.map(rz, red), std::nullopt, {}};
    if (poly_) out.monogenic = poly_->map_coeffs(rz, red);
    for (const auto& comp : components_) out.components.push_back(comp.base_change_fiber());
    return out;
  }

  /// Coordinates of the image of a in the fiber.
  Vec<Residue> reduce(const Vec<Scalar>& a) const {
    Vec<Residue> r;
    for (const auto& x : a) r.push_back(backend_.reduce(x));
    return r;
  }
  Vec<Scalar> lift(const Vec<Residue>& a) const {
    Vec<Scalar> r;
    for (const auto& x : a) r.push_back(backend_.lift(x));
    return r;
  }

 private:
  D backend_;
  StructureTable<Scalar> table_;
  Provenance provenance_ = Provenance::Table;
  std::optional<Poly<Scalar>> poly_;
  std::vector<FiniteFlatAlgebra> components_;
};

}  // namespace dvrtrace
