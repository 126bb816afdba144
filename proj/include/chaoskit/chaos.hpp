#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "chaoskit/hermite.hpp"
#include "chaoskit/kernels.hpp"

namespace chaoskit {

/// A finite real Wiener-Ito chaos expansion: one symmetric kernel per
/// degree, F = sum_n I_n(f_n).  Coefficients may be complex, in which case
/// F is the complex combination of two real expansions.
struct RealChaos {
  Mode mode = Mode::exact;
  std::map<int, RealKernel> slots;  // degree -> kernel, zero kernels dropped

  static RealChaos from_kernel(RealKernel k) {
    RealChaos c{k.mode, {}};
    if (!k.is_zero()) c.slots.emplace(k.degree, std::move(k));
    return c;
  }

  bool is_zero() const { return slots.empty(); }

  void add_kernel(const RealKernel& k, const Scalar& s) {
    if (k.mode != mode) throw std::invalid_argument("RealChaos: mixed-mode kernel");
    if (k.is_zero() || s.is_zero()) return;
    auto it = slots.find(k.degree);
    if (it == slots.end()) {
      slots.emplace(k.degree, k.scaled(s));
    } else {
      it->second.add_scaled(k, s);
      if (it->second.is_zero()) slots.erase(it);
    }
  }

  RealChaos& add(const RealChaos& o, const Scalar& s) {
    for (const auto& [d, k] : o.slots) add_kernel(k, s);
    return *this;
  }

  RealChaos scaled(const Scalar& s) const {
    RealChaos r{mode, {}};
    for (const auto& [d, k] : slots) r.add_kernel(k, s);
    return r;
  }

  /// Conjugated expansion: coefficients conjugate, degrees unchanged.  For
  /// real sample coordinates this is the pointwise complex conjugate.
  RealChaos conj_coeffs() const {
    RealChaos r{mode, {}};
    for (const auto& [d, k] : slots) {
      RealKernel ck = k.conj_coeffs();
      r.slots.emplace(d, std::move(ck));
    }
    return r;
  }

  friend bool operator==(const RealChaos& a, const RealChaos& b) {
    return a.mode == b.mode && a.slots == b.slots;
  }
};

/// A finite complex Wiener-Ito chaos expansion: one kernel per bidegree,
/// G = sum_{p,q} J_{p,q}-type integral of g_{p,q}.
struct ComplexChaos {
  Mode mode = Mode::exact;
  std::map<std::pair<int, int>, ComplexKernel> slots;

  static ComplexChaos from_kernel(ComplexKernel k) {
    ComplexChaos c{k.mode, {}};
    if (!k.is_zero()) c.slots.emplace(std::make_pair(k.p, k.q), std::move(k));
    return c;
  }

  bool is_zero() const { return slots.empty(); }

  void add_kernel(const ComplexKernel& k, const Scalar& s) {
    if (k.mode != mode) throw std::invalid_argument("ComplexChaos: mixed-mode kernel");
    if (k.is_zero() || s.is_zero()) return;
    auto key = std::make_pair(k.p, k.q);
    auto it = slots.find(key);
    if (it == slots.end()) {
      slots.emplace(key, k.scaled(s));
    } else {
      it->second.add_scaled(k, s);
      if (it->second.is_zero()) slots.erase(it);
    }
  }

  ComplexChaos& add(const ComplexChaos& o, const Scalar& s) {
    for (const auto& [b, k] : o.slots) add_kernel(k, s);
    return *this;
  }

  ComplexChaos scaled(const Scalar& s) const {
    ComplexChaos r{mode, {}};
    for (const auto& [b, k] : slots) r.add_kernel(k, s);
    return r;
  }

  friend bool operator==(const ComplexChaos& a, const ComplexChaos& b) {
    return a.mode == b.mode && a.slots == b.slots;
  }
};

/// One joint sample of the Gaussian coordinates: for each basis index k the
/// pair (x_k, y_k) of real coordinates, so that z_k = x_k + i*y_k is the
/// k-th complex coordinate.  Values are scalars so both modes work.
struct CoordinateSample {
  Mode mode = Mode::exact;
  std::map<int, std::pair<Scalar, Scalar>> coords;

  CoordinateSample& set(int k, Scalar x, Scalar y) {
    coords[k] = {std::move(x), std::move(y)};
    return *this;
  }

  const std::pair<Scalar, Scalar>& at(int k) const {
    auto it = coords.find(k);
    if (it == coords.end())
      throw std::domain_error("CoordinateSample: no coordinate for index " + std::to_string(k));
    return it->second;
  }
};

/// Pathwise value of a real chaos expansion at a coordinate sample.  Each
/// symmetrized monomial with multiplicity a of U(k) and b of V(k) evaluates
/// to the product H_a(x_k) * H_b(y_k) over the indices it mentions.
inline Scalar eval_real(const RealChaos& c, const CoordinateSample& sample) {
  Scalar acc = Scalar::zero(c.mode);
  for (const auto& [deg, kernel] : c.slots) {
    for (const auto& [m, coeff] : kernel.terms) {
      Scalar term = coeff;
      for (const auto& [label, mult] : m.mult) {
        const auto& xy = sample.at(label.index);
        const Scalar& coord = label.kind == BasisLabel::Kind::U ? xy.first : xy.second;
        term *= hermite(mult, coord);
      }
      acc += term;
    }
  }
  return acc;
}

/// Pathwise value of a complex chaos expansion: each elementary monomial
/// with p_k holomorphic and q_k conjugate slots on index k evaluates to the
/// product of complex Hermite values J_{p_k, q_k}(z_k).
inline Scalar eval_complex(const ComplexChaos& c, const CoordinateSample& sample) {
  Scalar acc = Scalar::zero(c.mode);
  for (const auto& [bid, kernel] : c.slots) {
    for (const auto& [m, coeff] : kernel.terms) {
      Scalar term = coeff;
      std::map<int, std::pair<int, int>> by_index;
      for (const auto& [k, cnt] : m.holo) by_index[k].first = cnt;
      for (const auto& [k, cnt] : m.anti) by_index[k].second = cnt;
      for (const auto& [k, pq] : by_index) {
        const auto& xy = sample.at(k);
        Scalar z = xy.first + xy.second.times_i();
        term *= complex_hermite(pq.first, pq.second, z);
      }
      acc += term;
    }
  }
  return acc;
}

/// Product of two real expansions, computed on kernels with the
/// multiplication formula
///
///   I_p(f) I_q(g) = sum_r r! C(p,r) C(q,r) I_{p+q-2r}(f contract_r g),
///
/// so that eval_real of the product equals the product of eval_real values.
inline RealChaos multiply_real(const RealChaos& a, const RealChaos& b) {
  if (a.mode != b.mode) throw std::invalid_argument("multiply_real: mixed-mode operands");
  RealChaos out{a.mode, {}};
  for (const auto& [p, f] : a.slots) {
    for (const auto& [q, g] : b.slots) {
      for (int r = 0; r <= std::min(p, q); ++r) {
        mpq_class w(factorial(r) * binomial(p, r) * binomial(q, r));
        out.add_kernel(contract_real(f, g, r).scaled(w), Scalar::one(a.mode));
      }
    }
  }
  return out;
}

/// Product of two complex expansions via the bidegree multiplication
/// formula
///
///   G_{a,b}(f) G_{c,d}(g) = sum_{i,j} C(a,i) C(d,i) C(b,j) C(c,j) i! j!
///                           G_{a+c-i-j, b+d-i-j}(f contract_{i,j} g).
inline ComplexChaos multiply_complex(const ComplexChaos& x, const ComplexChaos& y) {
  if (x.mode != y.mode) throw std::invalid_argument("multiply_complex: mixed-mode operands");
  ComplexChaos out{x.mode, {}};
  for (const auto& [bf, f] : x.slots) {
    for (const auto& [bg, g] : y.slots) {
      const int a = bf.first, b = bf.second, c = bg.first, d = bg.second;
      for (int i = 0; i <= std::min(a, d); ++i) {
        for (int j = 0; j <= std::min(b, c); ++j) {
          mpq_class w(binomial(a, i) * binomial(d, i) * binomial(b, j) * binomial(c, j) *
                      factorial(i) * factorial(j));
          out.add_kernel(contract_complex(f, g, i, j).scaled(w), Scalar::one(x.mode));
        }
      }
    }
  }
  return out;
}

/// Directional Malliavin derivative of a real expansion along one basis
/// label: in coordinates, d/dx_k for U(k) and d/dy_k for V(k).  On kernels,
/// a monomial with multiplicity m of the label maps to m times the monomial
/// with one copy removed (H_m' = m H_{m-1}), one degree lower.
inline RealChaos derivative_real(const RealChaos& c, const BasisLabel& dir) {
  RealChaos out{c.mode, {}};
  for (const auto& [deg, kernel] : c.slots) {
    if (deg == 0) continue;
    RealKernel dk = RealKernel::zero(deg - 1, c.mode);
    for (const auto& [m, coeff] : kernel.terms) {
      int mult = m.multiplicity(dir);
      if (mult == 0) continue;
      RealMultiIndex reduced = m;
      reduced.add(dir, -1);
      dk.add_term(reduced, coeff.scaled(mult));
    }
    out.add_kernel(dk, Scalar::one(c.mode));
  }
  return out;
}

/// Which side of a complex derivative to take: holomorphic differentiates
/// in z_k (removing a holomorphic slot), conjugate in conj(z_k).
enum class CDeriv { holo, anti };

/// Directional complex Malliavin derivative along basis index k.  In
/// coordinates these are the Wirtinger derivatives d/dz_k and d/dconj(z_k);
/// on kernels a monomial with multiplicity m of e_k (resp. ~e_k) maps to m
/// times the monomial with one slot removed, normalized so that the
/// derivative of the degree-(1,0) expansion of e_k along e_k is 1.
inline ComplexChaos derivative_complex(const ComplexChaos& c, CDeriv side, int k) {
  ComplexChaos out{c.mode, {}};
  for (const auto& [bid, kernel] : c.slots) {
    const bool holo = side == CDeriv::holo;
    if ((holo ? bid.first : bid.second) == 0) continue;
    ComplexKernel dk = ComplexKernel::zero(bid.first - (holo ? 1 : 0),
                                           bid.second - (holo ? 0 : 1), c.mode);
    for (const auto& [m, coeff] : kernel.terms) {
      const IndexMultiset& side_set = holo ? m.holo : m.anti;
      auto it = side_set.find(k);
      if (it == side_set.end()) continue;
      int mult = it->second;
      ComplexMultiIndex reduced = m;
      IndexMultiset& target = holo ? reduced.holo : reduced.anti;
      if (--target[k] == 0) target.erase(k);
      dk.add_term(reduced, coeff.scaled(mult));
    }
    out.add_kernel(dk, Scalar::one(c.mode));
  }
  return out;
}

/// Kernel extraction from a real expansion: the degree-n kernel, i.e. the
/// n-th iterated-derivative expectation E[D^n F] / n! stored in the slot.
/// Absent slots give the zero kernel.
inline RealKernel stroock_real(const RealChaos& c, int n) {
  if (n < 0) throw std::invalid_argument("stroock_real: negative degree");
  auto it = c.slots.find(n);
  return it == c.slots.end() ? RealKernel::zero(n, c.mode) : it->second;
}

/// Kernel extraction from a complex expansion: the bidegree-(p,q) kernel,
/// i.e. E[D^p Dbar^q G] / (p! q!) stored in the slot.
inline ComplexKernel stroock_complex(const ComplexChaos& c, int p, int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("stroock_complex: negative bidegree");
  auto it = c.slots.find(std::make_pair(p, q));
  return it == c.slots.end() ? ComplexKernel::zero(p, q, c.mode) : it->second;
}

/// Expectation of a real expansion: the degree-0 coefficient.
inline Scalar expectation(const RealChaos& c) {
  auto it = c.slots.find(0);
  return it == c.slots.end() ? Scalar::zero(c.mode) : it->second.value();
}

/// Expectation of a complex expansion: the bidegree-(0,0) coefficient.
inline Scalar expectation(const ComplexChaos& c) {
  auto it = c.slots.find(std::make_pair(0, 0));
  return it == c.slots.end() ? Scalar::zero(c.mode) : it->second.value();
}

}  // namespace chaoskit
