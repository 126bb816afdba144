#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaoskit/numeric.hpp"

namespace chaoskit {

/// A label for one element of the orthonormal basis of the doubled real
/// Hilbert space.  For each positive index k there are two labels:
///
///   U(k) — the real coordinate direction of the k-th complex basis vector,
///   V(k) — the imaginary coordinate direction.
///
/// Evaluating a degree-one real integral against U(k) gives the coordinate
/// x_k and against V(k) gives y_k, where z_k = x_k + i*y_k is the k-th
/// complex Gaussian coordinate.
struct BasisLabel {
  enum class Kind { U, V };
  Kind kind;
  int index;  // positive

  static BasisLabel u(int k) { return {Kind::U, k}; }
  static BasisLabel v(int k) { return {Kind::V, k}; }

  /// Canonical order: U(1) < V(1) < U(2) < V(2) < ...
  friend auto operator<=>(const BasisLabel& a, const BasisLabel& b) {
    if (auto c = a.index <=> b.index; c != 0) return c;
    return static_cast<int>(a.kind) <=> static_cast<int>(b.kind);
  }
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

  std::string str() const {
    return (kind == Kind::U ? "U(" : "V(") + std::to_string(index) + ")";
  }
};

/// A finite multiset of basis labels: the exponent pattern of one symmetric
/// monomial, e.g. U(1)^2 V(3)^1.  Multiplicities are strictly positive;
/// absent labels have multiplicity zero.
struct RealMultiIndex {
  std::map<BasisLabel, int> mult;

  int degree() const {
    int d = 0;
    for (const auto& [l, m] : mult) d += m;
    return d;
  }

  int multiplicity(const BasisLabel& l) const {
    auto it = mult.find(l);
    return it == mult.end() ? 0 : it->second;
  }

  /// The product of factorials of the multiplicities (often written M!).
  mpz_class mult_factorial() const {
    mpz_class f = 1;
    for (const auto& [l, m] : mult) f *= factorial(m);
    return f;
  }

  RealMultiIndex& add(const BasisLabel& l, int count = 1) {
    if (count != 0) {
      int& m = mult[l];
      m += count;
      if (m < 0) throw std::invalid_argument("RealMultiIndex: negative multiplicity");
      if (m == 0) mult.erase(l);
    }
    return *this;
  }

  /// Multiset union (exponent-wise sum).
  RealMultiIndex merged(const RealMultiIndex& o) const {
    RealMultiIndex r = *this;
    for (const auto& [l, m] : o.mult) r.add(l, m);
    return r;
  }

  /// Multiset difference; requires o to be contained in *this.
  RealMultiIndex minus(const RealMultiIndex& o) const {
    RealMultiIndex r = *this;
    for (const auto& [l, m] : o.mult) r.add(l, -m);
    return r;
  }

  bool contains(const RealMultiIndex& o) const {
    for (const auto& [l, m] : o.mult)
      if (multiplicity(l) < m) return false;
    return true;
  }

  /// Falling-factorial product over labels: prod_l m_l * (m_l-1) * ... *
  /// (m_l - s_l + 1) where s_l are the multiplicities of `sub`.  This counts
  /// ordered ways of drawing `sub` from this multiset slot by slot.
  mpz_class falling_product(const RealMultiIndex& sub) const {
    mpz_class p = 1;
    for (const auto& [l, s] : sub.mult) {
      int m = multiplicity(l);
      if (s > m) return 0;
      for (int t = 0; t < s; ++t) p *= (m - t);
    }
    return p;
  }

  friend auto operator<=>(const RealMultiIndex& a, const RealMultiIndex& b) {
    return a.mult <=> b.mult;
  }
  friend bool operator==(const RealMultiIndex&, const RealMultiIndex&) = default;

  std::string str() const {
    if (mult.empty()) return "1";
    std::string s;
    for (const auto& [l, m] : mult) {
      if (!s.empty()) s += "*";
      s += l.str();
      if (m > 1) s += "^" + std::to_string(m);
    }
    return s;
  }
};

/// A sorted multiset of positive integer indices (helper for the two sides
/// of a complex multi-index).
using IndexMultiset = std::map<int, int>;

inline int multiset_size(const IndexMultiset& m) {
  int d = 0;
  for (const auto& [k, c] : m) d += c;
  return d;
}

inline mpz_class multiset_factorial(const IndexMultiset& m) {
  mpz_class f = 1;
  for (const auto& [k, c] : m) f *= factorial(c);
  return f;
}

inline IndexMultiset multiset_from_list(const std::vector<int>& idx) {
  IndexMultiset m;
  for (int k : idx) {
    if (k <= 0) throw std::invalid_argument("basis index must be positive");
    ++m[k];
  }
  return m;
}

inline std::vector<int> multiset_to_list(const IndexMultiset& m) {
  std::vector<int> v;
  for (const auto& [k, c] : m)
    for (int t = 0; t < c; ++t) v.push_back(k);
  return v;
}

/// The exponent pattern of one elementary complex-kernel monomial: a
/// multiset of indices on the holomorphic side and one on the conjugate
/// side, e.g. e_1 (x) e_1 (x) conj(e_2).
struct ComplexMultiIndex {
  IndexMultiset holo, anti;

  int holo_degree() const { return multiset_size(holo); }
  int anti_degree() const { return multiset_size(anti); }

  friend auto operator<=>(const ComplexMultiIndex& a, const ComplexMultiIndex& b) {
    if (auto c = a.holo <=> b.holo; c != 0) return c;
    return a.anti <=> b.anti;
  }
  friend bool operator==(const ComplexMultiIndex&, const ComplexMultiIndex&) = default;

  std::string str() const {
    auto side = [](const IndexMultiset& m, const std::string& name) {
      std::string s;
      for (const auto& [k, c] : m) {
        if (!s.empty()) s += "*";
        s += name + "(" + std::to_string(k) + ")";
        if (c > 1) s += "^" + std::to_string(c);
      }
      return s;
    };
    std::string h = side(holo, "e"), a = side(anti, "~e");
    if (h.empty() && a.empty()) return "1";
    if (h.empty()) return a;
    if (a.empty()) return h;
    return h + "*" + a;
  }
};

}  // namespace chaoskit
