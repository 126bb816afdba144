#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaoskit/convert.hpp"
#include "chaoskit/scalar.hpp"

namespace chaoskit {

/// A two-variable kernel on [0,T]^2 supported on the two triangular
/// regions, stored as the pair of coefficients
///
///   lower — coefficient on { 0 <= s <= t <= T },
///   upper — coefficient on { 0 <= t <= s <= T },
///
/// relative to the implicit common factor exp(-gamma*|t-s|) / sqrt(T).
/// gamma and T stay opaque symbols; only the region coefficients are
/// computed, which is all the conversion algebra touches.
struct RegionKernel2 {
  Scalar lower, upper;

  static RegionKernel2 zero(Mode m) { return {Scalar::zero(m), Scalar::zero(m)}; }

  /// Kernel supported on the lower region with coefficient 1 (the
  /// exponential one-sided kernel of the Ornstein-Uhlenbeck functional).
  static RegionKernel2 one_sided(Mode m) { return {Scalar::one(m), Scalar::zero(m)}; }

  /// Argument swap (t,s) -> (s,t): the regions exchange roles.
  RegionKernel2 transpose() const { return {upper, lower}; }

  RegionKernel2 operator+(const RegionKernel2& o) const {
    return {lower + o.lower, upper + o.upper};
  }
  RegionKernel2 operator-(const RegionKernel2& o) const {
    return {lower - o.lower, upper - o.upper};
  }
  RegionKernel2 scaled(const Scalar& s) const { return {lower * s, upper * s}; }
  RegionKernel2 scaled(const mpq_class& w) const { return {lower.scaled(w), upper.scaled(w)}; }

  bool is_zero() const { return lower.is_zero() && upper.is_zero(); }

  friend bool operator==(const RegionKernel2& a, const RegionKernel2& b) {
    return a.lower == b.lower && a.upper == b.upper;
  }

  std::string str() const { return "(" + lower.str() + ", " + upper.str() + ")"; }
};

/// The 2^p component functions of a degree-p kernel over the doubled space,
/// each represented as a two-region kernel.  Entry j (0-based here,
/// matching V-vector entry j+1) is the component selected by the binary
/// digits of j: digit l chooses the first or second copy of the underlying
/// space in slot l.
struct ComponentVector {
  int p = 0;
  std::vector<RegionKernel2> entries;

  static ComponentVector zero(int p, Mode m) {
    if (p < 0 || p > 30) throw std::domain_error("ComponentVector: degree out of range");
    return {p, std::vector<RegionKernel2>(1u << p, RegionKernel2::zero(m))};
  }
};

/// Forward conversion of the quadratic Ornstein-Uhlenbeck functional: the
/// centered squared L^2 norm of the process has a second-derivative
/// component vector
///
///   (1/4) * ( psi + psi^T,  i (psi - psi^T),  -i (psi - psi^T),  psi + psi^T )
///
/// where psi is the one-sided kernel.  Concretely the four two-region
/// coefficient pairs are (1,1)/4, (i,-i)/4, (-i,i)/4, (1,1)/4.
inline ComponentVector ou_forward(Mode mode = Mode::exact) {
  const RegionKernel2 psi = RegionKernel2::one_sided(mode);
  const RegionKernel2 sym = psi + psi.transpose();
  const RegionKernel2 skew = (psi - psi.transpose()).scaled(Scalar::i_unit(mode));
  ComponentVector v = ComponentVector::zero(2, mode);
  const mpq_class quarter(1, 4);
  v.entries[0] = sym.scaled(quarter);
  v.entries[1] = skew.scaled(quarter);
  v.entries[2] = (RegionKernel2::zero(mode) - skew).scaled(quarter);
  v.entries[3] = sym.scaled(quarter);
  return v;
}

/// Assemble the complex kernels of bidegrees (k, p-k) from a component
/// vector: for each k,
///
///   g_{k,p-k} = 2^{-p/2} * p! / (k! (p-k)!) * sum_j V_{k,j} * entry_j.
///
/// The prefactor 2^{-p/2} is irrational for odd p, so exact mode supports
/// even p only (odd p raises a domain error; use floating mode there).
inline std::vector<std::pair<int, RegionKernel2>> apply_vk(const ComponentVector& v) {
  const int p = v.p;
  if (v.entries.size() != (1u << p))
    throw std::domain_error("apply_vk: component vector has wrong length");
  const Mode mode = v.entries.empty() ? Mode::exact : v.entries[0].lower.mode();
  std::vector<std::pair<int, RegionKernel2>> out;
  for (int k = 0; k <= p; ++k) {
    VkVector weights = vk_vector(p, k, mode);
    RegionKernel2 acc = RegionKernel2::zero(mode);
    for (std::size_t j = 0; j < weights.size(); ++j)
      acc = acc + v.entries[j].scaled(weights[j]);
    if (p % 2 == 0) {
      mpq_class pref = pow2(-p / 2);
      pref *= mpq_class(factorial(p), factorial(k) * factorial(p - k));
      pref.canonicalize();
      acc = acc.scaled(pref);
    } else {
      if (mode == Mode::exact)
        throw std::domain_error(
            "apply_vk: prefactor 2^(-p/2) is irrational for odd degree; use floating mode");
      double pref = std::pow(2.0, -0.5 * p) * factorial(p).get_d() /
                    (factorial(k).get_d() * factorial(p - k).get_d());
      acc = acc.scaled(Scalar::from_double(pref));
    }
    out.emplace_back(k, std::move(acc));
  }
  return out;
}

}  // namespace chaoskit
