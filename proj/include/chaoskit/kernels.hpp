#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "chaoskit/basis.hpp"
#include "chaoskit/scalar.hpp"

namespace chaoskit {

namespace detail {

/// Enumerate all sub-multisets of `pool` with exactly `size` elements,
/// invoking `fn` on each.  Used by the contraction routines to pick which
/// slots get paired.
template <typename Key, typename Fn>
void for_each_submultiset(const std::map<Key, int>& pool, int size, Fn&& fn) {
  std::map<Key, int> current;
  auto it = pool.begin();
  std::function<void(typename std::map<Key, int>::const_iterator, int)> rec =
      [&](typename std::map<Key, int>::const_iterator pos, int remaining) {
        if (remaining == 0) {
          fn(current);
          return;
        }
        if (pos == pool.end()) return;
        auto next = std::next(pos);
        int cap = std::min(pos->second, remaining);
        for (int take = 0; take <= cap; ++take) {
          if (take > 0) current[pos->first] = take;
          rec(next, remaining - take);
          if (take > 0 && take == cap) current.erase(pos->first);
        }
      };
  rec(it, size);
}

/// Multiset intersection (elementwise minimum of multiplicities).
template <typename Key>
std::map<Key, int> multiset_min(const std::map<Key, int>& a, const std::map<Key, int>& b) {
  std::map<Key, int> r;
  for (const auto& [k, m] : a) {
    auto it = b.find(k);
    if (it != b.end()) r[k] = std::min(m, it->second);
  }
  return r;
}

template <typename Key>
mpz_class map_mult_factorial(const std::map<Key, int>& m) {
  mpz_class f = 1;
  for (const auto& [k, c] : m) f *= factorial(c);
  return f;
}

/// Falling-factorial draw count of `sub` out of `pool` (slot-ordered draws).
template <typename Key>
mpz_class map_falling_product(const std::map<Key, int>& pool, const std::map<Key, int>& sub) {
  mpz_class p = 1;
  for (const auto& [k, s] : sub) {
    auto it = pool.find(k);
    int m = it == pool.end() ? 0 : it->second;
    if (s > m) return 0;
    for (int t = 0; t < s; ++t) p *= (m - t);
  }
  return p;
}

template <typename Key>
std::map<Key, int> map_minus(std::map<Key, int> pool, const std::map<Key, int>& sub) {
  for (const auto& [k, s] : sub) {
    auto it = pool.find(k);
    it->second -= s;
    if (it->second == 0) pool.erase(it);
  }
  return pool;
}

template <typename Key>
std::map<Key, int> map_merge(std::map<Key, int> a, const std::map<Key, int>& b) {
  for (const auto& [k, c] : b) a[k] += c;
  return a;
}

}  // namespace detail

/// A symmetric kernel of fixed degree over the doubled real Hilbert space,
/// stored as a sparse complex linear combination of symmetrized monomials:
///
///   f = sum_M  coeff(M) * symm( tensor product of the labels in M )
///
/// where symm is the averaging symmetrization (projection) and each M is a
/// degree-n multiset of basis labels.  Zero coefficients are never stored,
/// so equal kernels have equal term maps.
struct RealKernel {
  int degree = 0;
  Mode mode = Mode::exact;
  std::map<RealMultiIndex, Scalar> terms;

  static RealKernel zero(int degree, Mode mode) { return {degree, mode, {}}; }

  /// Kernel with a single symmetrized-monomial term.
  static RealKernel monomial(const RealMultiIndex& m, Scalar coeff) {
    RealKernel k{m.degree(), coeff.mode(), {}};
    k.add_term(m, std::move(coeff));
    return k;
  }

  bool is_zero() const { return terms.empty(); }

  Scalar coeff(const RealMultiIndex& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Scalar::zero(mode) : it->second;
  }

  /// Coefficient of the empty monomial; only meaningful for degree 0, where
  /// the kernel is a plain scalar.
  Scalar value() const {
    if (degree != 0) throw std::domain_error("RealKernel::value: kernel degree is not 0");
    return coeff(RealMultiIndex{});
  }

  void add_term(const RealMultiIndex& m, const Scalar& c) {
    if (m.degree() != degree)
      throw std::domain_error("RealKernel: monomial degree does not match kernel degree");
    if (c.mode() != mode)
      throw std::invalid_argument("RealKernel: coefficient mode does not match kernel mode");
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  RealKernel& add_scaled(const RealKernel& o, const Scalar& s) {
    if (o.degree != degree)
      throw std::domain_error("RealKernel: cannot add kernels of different degrees");
    for (const auto& [m, c] : o.terms) add_term(m, c * s);
    return *this;
  }

  friend RealKernel operator+(RealKernel a, const RealKernel& b) {
    a.add_scaled(b, Scalar::one(a.mode));
    return a;
  }

  RealKernel scaled(const Scalar& s) const {
    RealKernel r = zero(degree, mode);
    for (const auto& [m, c] : terms) r.add_term(m, c * s);
    return r;
  }

  RealKernel scaled(const mpq_class& w) const {
    RealKernel r = zero(degree, mode);
    for (const auto& [m, c] : terms) r.add_term(m, c.scaled(w));
    return r;
  }

  /// Kernel with conjugated coefficients (the monomials are real).
  RealKernel conj_coeffs() const {
    RealKernel r = zero(degree, mode);
    for (const auto& [m, c] : terms) r.add_term(m, c.conj());
    return r;
  }

  /// The two real kernels u, v with *this = u + i*v.
  std::pair<RealKernel, RealKernel> split_real_imag() const {
    RealKernel u = zero(degree, mode), v = zero(degree, mode);
    for (const auto& [m, c] : terms) {
      u.add_term(m, c.real_part());
      v.add_term(m, c.imag_part());
    }
    return {u, v};
  }

  friend bool operator==(const RealKernel& a, const RealKernel& b) {
    return a.degree == b.degree && a.mode == b.mode && a.terms == b.terms;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")*" + m.str();
    }
    return s;
  }
};

/// A kernel of fixed bidegree (p, q) over the complexified Hilbert space,
/// symmetric separately in its p holomorphic slots and its q conjugate
/// slots, stored as a sparse combination of elementary monomials
///
///   g = sum coeff * symm(e_{k_1} x ... x e_{k_p}) x symm(~e_{j_1} x ... x ~e_{j_q})
///
/// indexed by the pair of index multisets.  The basis vectors e_k carry
/// squared norm 2.
struct ComplexKernel {
  int p = 0, q = 0;
  Mode mode = Mode::exact;
  std::map<ComplexMultiIndex, Scalar> terms;

  static ComplexKernel zero(int p, int q, Mode mode) { return {p, q, mode, {}}; }

  static ComplexKernel monomial(const ComplexMultiIndex& m, Scalar coeff) {
    ComplexKernel k{m.holo_degree(), m.anti_degree(), coeff.mode(), {}};
    k.add_term(m, std::move(coeff));
    return k;
  }

  bool is_zero() const { return terms.empty(); }

  Scalar coeff(const ComplexMultiIndex& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Scalar::zero(mode) : it->second;
  }

  Scalar value() const {
    if (p != 0 || q != 0)
      throw std::domain_error("ComplexKernel::value: kernel bidegree is not (0,0)");
    return coeff(ComplexMultiIndex{});
  }

  void add_term(const ComplexMultiIndex& m, const Scalar& c) {
    if (m.holo_degree() != p || m.anti_degree() != q)
      throw std::domain_error("ComplexKernel: monomial bidegree does not match kernel bidegree");
    if (c.mode() != mode)
      throw std::invalid_argument("ComplexKernel: coefficient mode does not match kernel mode");
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  ComplexKernel& add_scaled(const ComplexKernel& o, const Scalar& s) {
    if (o.p != p || o.q != q)
      throw std::domain_error("ComplexKernel: cannot add kernels of different bidegrees");
    for (const auto& [m, c] : o.terms) add_term(m, c * s);
    return *this;
  }

  friend ComplexKernel operator+(ComplexKernel a, const ComplexKernel& b) {
    a.add_scaled(b, Scalar::one(a.mode));
    return a;
  }

  ComplexKernel scaled(const Scalar& s) const {
    ComplexKernel r = zero(p, q, mode);
    for (const auto& [m, c] : terms) r.add_term(m, c * s);
    return r;
  }

  /// Scale by an exact rational weight regardless of mode.
  ComplexKernel scaled(const mpq_class& w) const {
    ComplexKernel r = zero(p, q, mode);
    for (const auto& [m, c] : terms) r.add_term(m, c.scaled(w));
    return r;
  }

  friend bool operator==(const ComplexKernel& a, const ComplexKernel& b) {
    return a.p == b.p && a.q == b.q && a.mode == b.mode && a.terms == b.terms;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")*" + m.str();
    }
    return s;
  }
};

/// Conjugate of a complex kernel: coefficients are conjugated and the
/// holomorphic and conjugate slot groups swap, giving a (q, p) kernel.
/// Applying it twice returns the original kernel.
inline ComplexKernel conjugate(const ComplexKernel& f) {
  ComplexKernel r = ComplexKernel::zero(f.q, f.p, f.mode);
  for (const auto& [m, c] : f.terms) r.add_term({m.anti, m.holo}, c.conj());
  return r;
}

/// Symmetrized tensor product of real kernels.  With both factors stored as
/// averaged symmetrizations, the outer symmetrization absorbs the inner
/// ones and the operation is plain multiset (polynomial) multiplication:
/// symm-mono(A) x~ symm-mono(B) = symm-mono(A u B) with coefficient 1.
inline RealKernel symm_product(const RealKernel& f, const RealKernel& g) {
  if (f.mode != g.mode)
    throw std::invalid_argument("symm_product: mixed-mode kernels");
  RealKernel r = RealKernel::zero(f.degree + g.degree, f.mode);
  for (const auto& [a, ca] : f.terms)
    for (const auto& [b, cb] : g.terms) r.add_term(a.merged(b), ca * cb);
  return r;
}

/// Contraction of r slot pairs between two symmetric real kernels followed
/// by symmetrization of the remaining slots.  The basis labels are
/// orthonormal, so paired slots must carry equal labels; for symmetrized
/// monomials A (degree da) and B (degree db) the contribution of pairing
/// the sub-multiset S (|S| = r) is
///
///   r!/S! * (da-r)!(db-r)!/(da! db!) * (A falling S) * (B falling S)
///
/// on the monomial (A \ S) u (B \ S).  The weight counts ordered slot
/// pairings under the averaging-symmetrization normalization.  r = 0
/// reduces to symm_product.  The pairing is bilinear (no conjugation), so
/// complex-coefficient kernels contract like polynomials.
inline RealKernel contract_real(const RealKernel& f, const RealKernel& g, int r) {
  if (f.mode != g.mode)
    throw std::invalid_argument("contract_real: mixed-mode kernels");
  if (r < 0 || r > std::min(f.degree, g.degree))
    throw std::domain_error("contract_real: contraction order out of range");
  const int da = f.degree, db = g.degree;
  RealKernel out = RealKernel::zero(da + db - 2 * r, f.mode);
  const mpq_class base(factorial(r) * factorial(da - r) * factorial(db - r),
                       factorial(da) * factorial(db));
  for (const auto& [a, ca] : f.terms) {
    for (const auto& [b, cb] : g.terms) {
      auto pool = detail::multiset_min(a.mult, b.mult);
      detail::for_each_submultiset(pool, r, [&](const std::map<BasisLabel, int>& s) {
        mpq_class w = base;
        w *= detail::map_falling_product(a.mult, s);
        w *= detail::map_falling_product(b.mult, s);
        w /= detail::map_mult_factorial(s);
        w.canonicalize();
        RealMultiIndex res{detail::map_merge(detail::map_minus(a.mult, s),
                                             detail::map_minus(b.mult, s))};
        out.add_term(res, (ca * cb).scaled(w));
      });
    }
  }
  return out;
}

/// Contraction of complex kernels: i holomorphic slots of f pair with i
/// conjugate slots of g, and j conjugate slots of f pair with j holomorphic
/// slots of g.  Each pairing of e_k against ~e_k contributes the factor 2
/// (the squared basis norm); the slot-combinatorial weight is the real one
/// applied independently to the two slot groups.  The result has bidegree
/// (a + c - i - j, b + d - i - j) and is symmetrized within each group.
inline ComplexKernel contract_complex(const ComplexKernel& f, const ComplexKernel& g, int i,
                                      int j) {
  if (f.mode != g.mode)
    throw std::invalid_argument("contract_complex: mixed-mode kernels");
  if (i < 0 || i > std::min(f.p, g.q) || j < 0 || j > std::min(f.q, g.p))
    throw std::domain_error("contract_complex: contraction orders out of range");
  ComplexKernel out = ComplexKernel::zero(f.p + g.p - i - j, f.q + g.q - i - j, f.mode);
  const mpq_class base_h(factorial(i) * factorial(f.p - i) * factorial(g.q - i),
                         factorial(f.p) * factorial(g.q));
  const mpq_class base_a(factorial(j) * factorial(f.q - j) * factorial(g.p - j),
                         factorial(f.q) * factorial(g.p));
  const mpq_class norm = pow2(i + j);
  for (const auto& [a, ca] : f.terms) {
    for (const auto& [b, cb] : g.terms) {
      auto pool_s = detail::multiset_min(a.holo, b.anti);
      detail::for_each_submultiset(pool_s, i, [&](const IndexMultiset& s) {
        mpq_class ws = base_h;
        ws *= detail::map_falling_product(a.holo, s);
        ws *= detail::map_falling_product(b.anti, s);
        ws /= detail::map_mult_factorial(s);
        auto pool_t = detail::multiset_min(a.anti, b.holo);
        detail::for_each_submultiset(pool_t, j, [&](const IndexMultiset& t) {
          mpq_class w = ws * base_a * norm;
          w *= detail::map_falling_product(a.anti, t);
          w *= detail::map_falling_product(b.holo, t);
          w /= detail::map_mult_factorial(t);
          w.canonicalize();
          ComplexMultiIndex res{
              detail::map_merge(detail::map_minus(a.holo, s), detail::map_minus(b.holo, t)),
              detail::map_merge(detail::map_minus(a.anti, t), detail::map_minus(b.anti, s))};
          out.add_term(res, (ca * cb).scaled(w));
        });
      });
    }
  }
  return out;
}

/// Inner product of two real kernels of equal degree, conjugate-linear in
/// the first argument.  Symmetrized monomials over orthonormal labels
/// satisfy <symm-mono(M), symm-mono(M)> = M!/n! and distinct monomials are
/// orthogonal.
inline Scalar inner_product(const RealKernel& f, const RealKernel& g) {
  if (f.mode != g.mode)
    throw std::invalid_argument("inner_product: mixed-mode kernels");
  if (f.degree != g.degree)
    throw std::domain_error("inner_product: kernels have different degrees");
  Scalar acc = Scalar::zero(f.mode);
  const mpz_class& nfact = factorial(f.degree);
  for (const auto& [m, cf] : f.terms) {
    auto it = g.terms.find(m);
    if (it == g.terms.end()) continue;
    mpq_class w(m.mult_factorial(), nfact);
    w.canonicalize();
    acc += (cf.conj() * it->second).scaled(w);
  }
  return acc;
}

}  // namespace chaoskit
