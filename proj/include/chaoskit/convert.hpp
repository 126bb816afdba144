#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "chaoskit/chaos.hpp"
#include "chaoskit/kernels.hpp"

namespace chaoskit {

/// Degree-one building blocks of the forward conversion: the real kernels
/// whose integrals give the complex coordinates,
///
///   w10(k) = U(k) + i V(k)   (integral evaluates to z_k)
///   w01(k) = U(k) - i V(k)   (integral evaluates to conj(z_k))
inline RealKernel w10(int k, Mode mode = Mode::exact) {
  RealKernel r = RealKernel::zero(1, mode);
  r.add_term(RealMultiIndex{}.add(BasisLabel::u(k)), Scalar::one(mode));
  r.add_term(RealMultiIndex{}.add(BasisLabel::v(k)), Scalar::i_unit(mode));
  return r;
}

inline RealKernel w01(int k, Mode mode = Mode::exact) {
  RealKernel r = RealKernel::zero(1, mode);
  r.add_term(RealMultiIndex{}.add(BasisLabel::u(k)), Scalar::one(mode));
  r.add_term(RealMultiIndex{}.add(BasisLabel::v(k)), -Scalar::i_unit(mode));
  return r;
}

/// Exact expansion coefficient of the complex-to-real conversion for one
/// index carrying p holomorphic and q conjugate slots:
///
///   a_j = i^{p+q-j} sum_{r+s=j} C(p,r) C(q,s) (-1)^{q-s},
///
/// so that sum_j a_j u^j v^{p+q-j} = (u + iv)^p (u - iv)^q.
inline Scalar forward_coeff(int p, int q, int j, Mode mode = Mode::exact) {
  if (p < 0 || q < 0 || j < 0 || j > p + q)
    throw std::invalid_argument("forward_coeff: arguments out of range");
  mpz_class inner = 0;
  for (int r = 0; r <= j; ++r) {
    const int s = j - r;
    if (r > p || s > q) continue;
    mpz_class term = binomial(p, r) * binomial(q, s);
    if ((q - s) % 2 != 0) term = -term;
    inner += term;
  }
  return Scalar::i_power(p + q - j, mode).scaled(mpq_class(inner));
}

/// Exact expansion coefficient of the real-to-complex conversion for one
/// index carrying m U-slots and n V-slots:
///
///   at_j = (i^n / 2^{m+n}) sum_{r+s=j} C(m,r) C(n,s) (-1)^s,
///
/// the coefficient of the monomial with j holomorphic slots in the
/// expansion of U(k)^m V(k)^n over e_k / ~e_k powers.
inline Scalar inverse_coeff(int m, int n, int j, Mode mode = Mode::exact) {
  if (m < 0 || n < 0 || j < 0 || j > m + n)
    throw std::invalid_argument("inverse_coeff: arguments out of range");
  mpz_class inner = 0;
  for (int r = 0; r <= j; ++r) {
    const int s = j - r;
    if (r > m || s > n) continue;
    mpz_class term = binomial(m, r) * binomial(n, s);
    if (s % 2 != 0) term = -term;
    inner += term;
  }
  return Scalar::i_power(n, mode).scaled(pow2(-(m + n)) * inner);
}

/// Forward conversion of one elementary complex kernel, computed by the
/// degree recursion: peel one holomorphic index at a time via a symmetrized
/// product with w10, then one conjugate index at a time via w01.  Results
/// are memoized on the sorted index lists.  The returned real kernel is the
/// complex combination u + i*v.
inline RealKernel forward_recursive(const std::vector<int>& holo, const std::vector<int>& anti,
                                    Mode mode = Mode::exact) {
  using Key = std::tuple<Mode, std::vector<int>, std::vector<int>>;
  thread_local std::map<Key, RealKernel> cache;

  std::vector<int> h = holo, a = anti;
  std::sort(h.begin(), h.end());
  std::sort(a.begin(), a.end());
  for (int k : h)
    if (k <= 0) throw std::invalid_argument("forward_recursive: indices must be positive");
  for (int k : a)
    if (k <= 0) throw std::invalid_argument("forward_recursive: indices must be positive");

  std::function<const RealKernel&(std::vector<int>, std::vector<int>)> rec =
      [&](std::vector<int> hh, std::vector<int> aa) -> const RealKernel& {
    Key key{mode, hh, aa};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RealKernel result = RealKernel::zero(0, mode);
    if (hh.empty() && aa.empty()) {
      result.add_term(RealMultiIndex{}, Scalar::one(mode));
    } else if (!hh.empty()) {
      int k = hh.back();
      std::vector<int> rest(hh.begin(), hh.end() - 1);
      result = symm_product(rec(std::move(rest), aa), w10(k, mode));
    } else {
      int k = aa.back();
      std::vector<int> rest(aa.begin(), aa.end() - 1);
      result = symm_product(rec(hh, std::move(rest)), w01(k, mode));
    }
    return cache.emplace(std::move(key), std::move(result)).first->second;
  };
  return rec(std::move(h), std::move(a));
}

/// Forward conversion of a general complex kernel along the recursive
/// route, term by term.
inline RealKernel forward_recursive(const ComplexKernel& f) {
  RealKernel out = RealKernel::zero(f.p + f.q, f.mode);
  for (const auto& [m, c] : f.terms) {
    out.add_scaled(forward_recursive(multiset_to_list(m.holo), multiset_to_list(m.anti), f.mode),
                   c);
  }
  return out;
}

/// Forward conversion by the closed-form coefficient sum: for each term and
/// each choice of j_k U-slots per index (0 <= j_k <= p_k + q_k),
///
///   u + i*v = sum over (j_k) of prod_k a_{k, j_k} * monomial with
///             U(k)^{j_k} V(k)^{p_k + q_k - j_k}.
inline RealKernel forward_closed_form(const ComplexKernel& f) {
  RealKernel out = RealKernel::zero(f.p + f.q, f.mode);
  for (const auto& [m, c] : f.terms) {
    // Per-index (p_k, q_k) profile of this elementary monomial.
    std::vector<std::tuple<int, int, int>> profile;  // (index, p_k, q_k)
    {
      std::map<int, std::pair<int, int>> by_index;
      for (const auto& [k, cnt] : m.holo) by_index[k].first = cnt;
      for (const auto& [k, cnt] : m.anti) by_index[k].second = cnt;
      for (const auto& [k, pq] : by_index) profile.emplace_back(k, pq.first, pq.second);
    }
    std::vector<int> j(profile.size(), 0);
    std::function<void(std::size_t, Scalar, RealMultiIndex)> rec =
        [&](std::size_t pos, Scalar coeff, RealMultiIndex mono) {
          if (pos == profile.size()) {
            out.add_term(mono, coeff);
            return;
          }
          auto [k, pk, qk] = profile[pos];
          for (int jk = 0; jk <= pk + qk; ++jk) {
            Scalar c2 = coeff * forward_coeff(pk, qk, jk, f.mode);
            if (c2.is_zero()) continue;
            RealMultiIndex m2 = mono;
            m2.add(BasisLabel::u(k), jk);
            m2.add(BasisLabel::v(k), pk + qk - jk);
            rec(pos + 1, std::move(c2), std::move(m2));
          }
        };
    rec(0, c, RealMultiIndex{});
  }
  return out;
}

/// Forward conversion through iterated derivatives: the degree-n kernel of
/// a chaos expansion has monomial coefficients
///
///   coeff(M) = E[ d^M F ] / M!
///
/// where d^M is the iterated directional derivative along the labels of M.
/// Directional derivatives in coordinates split through the Wirtinger
/// relations d/dx_k = Dz_k + Dzbar_k and d/dy_k = i (Dz_k - Dzbar_k), which
/// is how a complex expansion is differentiated along real directions.
inline RealKernel forward_stroock(const ComplexKernel& f) {
  const int n = f.p + f.q;
  const Mode mode = f.mode;
  RealKernel out = RealKernel::zero(n, mode);

  // Candidate monomials: the derivative kills any term whose per-index slot
  // count differs from the monomial's per-index label count, so only label
  // splits of the per-term index profiles can contribute.
  std::set<RealMultiIndex> candidates;
  for (const auto& [m, c] : f.terms) {
    std::map<int, int> degree_by_index;
    for (const auto& [k, cnt] : m.holo) degree_by_index[k] += cnt;
    for (const auto& [k, cnt] : m.anti) degree_by_index[k] += cnt;
    std::vector<std::pair<int, int>> profile(degree_by_index.begin(), degree_by_index.end());
    std::function<void(std::size_t, RealMultiIndex)> rec = [&](std::size_t pos,
                                                               RealMultiIndex mono) {
      if (pos == profile.size()) {
        candidates.insert(std::move(mono));
        return;
      }
      auto [k, ck] = profile[pos];
      for (int u = 0; u <= ck; ++u) {
        RealMultiIndex m2 = mono;
        m2.add(BasisLabel::u(k), u);
        m2.add(BasisLabel::v(k), ck - u);
        rec(pos + 1, std::move(m2));
      }
    };
    rec(0, RealMultiIndex{});
  }

  const ComplexChaos base = ComplexChaos::from_kernel(f);
  for (const RealMultiIndex& m : candidates) {
    ComplexChaos cur = base;
    for (const auto& [label, mult] : m.mult) {
      for (int t = 0; t < mult && !cur.is_zero(); ++t) {
        ComplexChaos dh = derivative_complex(cur, CDeriv::holo, label.index);
        ComplexChaos da = derivative_complex(cur, CDeriv::anti, label.index);
        if (label.kind == BasisLabel::Kind::U) {
          cur = dh.add(da, Scalar::one(mode));
        } else {
          cur = dh.add(da, Scalar::integer(-1, mode)).scaled(Scalar::i_unit(mode));
        }
      }
    }
    Scalar mean = expectation(cur);
    if (mean.is_zero()) continue;
    out.add_term(m, mean.scaled(mpq_class(1_mpz, m.mult_factorial())));
  }
  return out;
}

/// Inverse conversion: decompose a real kernel of degree p (with complex
/// coefficients) into the complex kernels of bidegrees (l, p-l), l = 0..p,
/// whose complex integrals sum to the same random variable.  For each
/// monomial with m_k U-slots and n_k V-slots per index, every choice of
/// j_k holomorphic slots contributes prod_k at_{k, j_k} to the slot
/// l = sum j_k on the monomial e_k^{j_k} ~e_k^{m_k + n_k - j_k}.
inline std::vector<ComplexKernel> inverse(const RealKernel& g) {
  const int p = g.degree;
  std::vector<ComplexKernel> out;
  out.reserve(static_cast<std::size_t>(p) + 1);
  for (int l = 0; l <= p; ++l) out.push_back(ComplexKernel::zero(l, p - l, g.mode));

  for (const auto& [m, c] : g.terms) {
    std::vector<std::tuple<int, int, int>> profile;  // (index, m_k, n_k)
    {
      std::map<int, std::pair<int, int>> by_index;
      for (const auto& [label, mult] : m.mult) {
        if (label.kind == BasisLabel::Kind::U)
          by_index[label.index].first = mult;
        else
          by_index[label.index].second = mult;
      }
      for (const auto& [k, mn] : by_index) profile.emplace_back(k, mn.first, mn.second);
    }
    std::function<void(std::size_t, Scalar, ComplexMultiIndex, int)> rec =
        [&](std::size_t pos, Scalar coeff, ComplexMultiIndex mono, int l) {
          if (pos == profile.size()) {
            out[static_cast<std::size_t>(l)].add_term(mono, coeff);
            return;
          }
          auto [k, mk, nk] = profile[pos];
          for (int jk = 0; jk <= mk + nk; ++jk) {
            Scalar c2 = coeff * inverse_coeff(mk, nk, jk, g.mode);
            if (c2.is_zero()) continue;
            ComplexMultiIndex m2 = mono;
            if (jk > 0) m2.holo[k] += jk;
            if (mk + nk - jk > 0) m2.anti[k] += mk + nk - jk;
            rec(pos + 1, std::move(c2), std::move(m2), l + jk);
          }
        };
    rec(0, c, ComplexMultiIndex{}, 0);
  }
  return out;
}

/// Weight vector used to assemble the bidegree-(k, p-k) kernel from the
/// 2^p real component functions of a degree-p kernel over the doubled
/// space.  Entry j (1-based; j-1 has binary digits a_1..a_p, least
/// significant first) is
///
///   V_{k,j} = (-i)^{b} * i^{c}
///
/// with b the number of ones among digits 1..k and c the number among
/// digits k+1..p.
using VkVector = std::vector<Scalar>;

inline VkVector vk_vector(int p, int k, Mode mode = Mode::exact) {
  if (p < 0 || p > 30 || k < 0 || k > p)
    throw std::domain_error("vk_vector: arguments out of range");
  VkVector out;
  out.reserve(1u << p);
  for (unsigned long jm1 = 0; jm1 < (1ul << p); ++jm1) {
    int b = 0, c = 0;
    for (int l = 1; l <= p; ++l) {
      if ((jm1 >> (l - 1)) & 1ul) {
        if (l <= k)
          ++b;
        else
          ++c;
      }
    }
    out.push_back(Scalar::i_power(c - b, mode));
  }
  return out;
}

/// If the inverse conversion of g lands in exactly one complex bidegree
/// (k, p-k), returns k; otherwise (zero kernel included) returns nothing.
inline std::optional<int> single_chaos_condition(const RealKernel& g) {
  std::optional<int> found;
  std::vector<ComplexKernel> slots = inverse(g);
  for (int l = 0; l < static_cast<int>(slots.size()); ++l) {
    if (slots[static_cast<std::size_t>(l)].is_zero()) continue;
    if (found) return std::nullopt;
    found = l;
  }
  return found;
}

/// Whether the pair of real integrals representing the elementary complex
/// integral with the given index lists has an absolutely continuous joint
/// law.  This holds except in the degenerate case where the two sides have
/// equal length and identical sorted index lists (the imaginary part then
/// vanishes identically).
inline bool density_check(std::vector<int> holo, std::vector<int> anti) {
  if (holo.empty() && anti.empty())
    throw std::domain_error("density_check: at least one index is required");
  for (int k : holo)
    if (k <= 0) throw std::domain_error("density_check: indices must be positive");
  for (int k : anti)
    if (k <= 0) throw std::domain_error("density_check: indices must be positive");
  if (holo.size() != anti.size()) return true;
  std::sort(holo.begin(), holo.end());
  std::sort(anti.begin(), anti.end());
  return holo != anti;
}

}  // namespace chaoskit
