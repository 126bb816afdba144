#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

namespace chaoskit {

/// Factorial n! as an arbitrary-precision integer (cached).
inline const mpz_class& factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  static std::vector<mpz_class> cache{1_mpz};
  while (static_cast<int>(cache.size()) <= n)
    cache.push_back(cache.back() * static_cast<int>(cache.size()));
  return cache[static_cast<std::size_t>(n)];
}

/// Binomial coefficient C(n, k) from a Pascal-triangle cache shared by all
/// callers.  Out-of-range k yields 0, matching the usual convention.
inline const mpz_class& binomial(int n, int k) {
  static const mpz_class zero = 0;
  if (n < 0) throw std::invalid_argument("binomial: negative row");
  if (k < 0 || k > n) return zero;
  static std::vector<std::vector<mpz_class>> rows{{1_mpz}};
  while (static_cast<int>(rows.size()) <= n) {
    const auto& prev = rows.back();
    std::vector<mpz_class> row(prev.size() + 1, 1_mpz);
    for (std::size_t j = 1; j + 1 < row.size(); ++j) row[j] = prev[j - 1] + prev[j];
    rows.push_back(std::move(row));
  }
  return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

/// Exact power of two, 2^k, for any integer k (negative gives 1/2^|k|).
inline mpq_class pow2(int k) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k >= 0 ? k : -k));
  if (k >= 0) return mpq_class(p);
  mpq_class r(1, p);
  r.canonicalize();
  return r;
}

}  // namespace chaoskit
