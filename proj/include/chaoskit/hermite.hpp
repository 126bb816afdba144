#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "chaoskit/numeric.hpp"
#include "chaoskit/scalar.hpp"

namespace chaoskit {

/// Probabilists' Hermite polynomial H_n evaluated by the three-term
/// recurrence
///
///   H_0 = 1,  H_1 = x,  H_{n+1}(x) = x*H_n(x) - n*H_{n-1}(x).
///
/// These are the polynomials with generating function exp(t*x - t^2/2), so
/// H_n(W(h)) for a unit vector h spans the n-th real Wiener chaos.
inline Scalar hermite(int n, const Scalar& x) {
  if (n < 0) throw std::invalid_argument("hermite: negative degree");
  Scalar prev = Scalar::one(x.mode());
  if (n == 0) return prev;
  Scalar cur = x;
  for (int k = 1; k < n; ++k) {
    Scalar next = x * cur - prev.scaled(k);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Complex Hermite polynomial J_{p,q} (the Hermite-Laguerre-Ito family,
/// normalized so that J_{1,0}(z) = z, J_{0,1}(z) = conj(z) and
/// J_{1,1}(z) = |z|^2 - 2), evaluated through its finite expansion over
/// products of real Hermite polynomials in x = Re z, y = Im z:
///
///   J_{p,q}(z) = sum_{j=0}^{p+q} i^{p+q-j}
///                sum_{r+s=j} C(p,r) C(q,s) (-1)^{q-s} H_j(x) H_{p+q-j}(y).
///
/// The expansion is exact, so exact-mode arguments give exact values.
inline Scalar complex_hermite(int p, int q, const Scalar& z) {
  if (p < 0 || q < 0) throw std::invalid_argument("complex_hermite: negative degree");
  const Mode mode = z.mode();
  const Scalar x = z.real_part(), y = z.imag_part();
  const int n = p + q;
  std::vector<Scalar> hx(static_cast<std::size_t>(n) + 1, Scalar::zero(mode));
  std::vector<Scalar> hy(static_cast<std::size_t>(n) + 1, Scalar::zero(mode));
  for (int j = 0; j <= n; ++j) {
    hx[static_cast<std::size_t>(j)] = hermite(j, x);
    hy[static_cast<std::size_t>(j)] = hermite(j, y);
  }
  Scalar acc = Scalar::zero(mode);
  for (int j = 0; j <= n; ++j) {
    mpz_class inner = 0;
    for (int r = 0; r <= j; ++r) {
      const int s = j - r;
      if (r > p || s > q) continue;
      mpz_class term = binomial(p, r) * binomial(q, s);
      if ((q - s) % 2 != 0) term = -term;
      inner += term;
    }
    if (inner == 0) continue;
    Scalar coeff = Scalar::i_power(n - j, mode).scaled(mpq_class(inner));
    acc += coeff * hx[static_cast<std::size_t>(j)] * hy[static_cast<std::size_t>(n - j)];
  }
  return acc;
}

/// Expansion of a product of real Hermite polynomials over the complex
/// family: the coefficients c_j with
///
///   H_m(x) H_n(y) = sum_{j=0}^{m+n} c_j J_{j, m+n-j}(x + i*y),
///
///   c_j = (i^n / 2^{m+n}) sum_{r+s=j} C(m,r) C(n,s) (-1)^s.
///
/// Returns the pairs (j, c_j) with c_j != 0, in increasing j.
inline std::vector<std::pair<int, Scalar>> real_pair_to_J_coeffs(int m, int n,
                                                                 Mode mode = Mode::exact) {
  if (m < 0 || n < 0)
    throw std::invalid_argument("real_pair_to_J_coeffs: negative degree");
  std::vector<std::pair<int, Scalar>> out;
  const mpq_class scale = pow2(-(m + n));
  for (int j = 0; j <= m + n; ++j) {
    mpz_class inner = 0;
    for (int r = 0; r <= j; ++r) {
      const int s = j - r;
      if (r > m || s > n) continue;
      mpz_class term = binomial(m, r) * binomial(n, s);
      if (s % 2 != 0) term = -term;
      inner += term;
    }
    if (inner == 0) continue;
    Scalar c = Scalar::i_power(n, mode).scaled(scale * inner);
    out.emplace_back(j, std::move(c));
  }
  return out;
}

}  // namespace chaoskit
