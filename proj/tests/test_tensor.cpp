#include <catch2/catch_amalgamated.hpp>

#include "chaoskit/convert.hpp"
#include "chaoskit/kernels.hpp"
#include "support/oracles.hpp"

using namespace chaoskit;

namespace {

RealKernel mono(std::initializer_list<std::pair<BasisLabel, int>> labels, Scalar c) {
  RealMultiIndex m;
  for (const auto& [l, n] : labels) m.add(l, n);
  return RealKernel::monomial(m, std::move(c));
}

ComplexKernel cmono(std::initializer_list<int> holo, std::initializer_list<int> anti, Scalar c) {
  ComplexMultiIndex m;
  for (int k : holo) m.holo[k] += 1;
  for (int k : anti) m.anti[k] += 1;
  return ComplexKernel::monomial(m, std::move(c));
}

}  // namespace

TEST_CASE("basis labels order interleaved by index", "[tensor]") {
  CHECK(BasisLabel::u(1) < BasisLabel::v(1));
  CHECK(BasisLabel::v(1) < BasisLabel::u(2));
  CHECK(BasisLabel::u(2) < BasisLabel::v(2));
  CHECK(BasisLabel::u(3).str() == "U(3)");
  CHECK(BasisLabel::v(2).str() == "V(2)");
}

TEST_CASE("real multi-index multiset operations", "[tensor]") {
  RealMultiIndex m;
  m.add(BasisLabel::u(1), 2).add(BasisLabel::v(3), 1);
  CHECK(m.degree() == 3);
  CHECK(m.multiplicity(BasisLabel::u(1)) == 2);
  CHECK(m.multiplicity(BasisLabel::v(1)) == 0);
  CHECK(m.mult_factorial() == 2);
  CHECK(m.str() == "U(1)^2*V(3)");

  RealMultiIndex s;
  s.add(BasisLabel::u(1), 1);
  CHECK(m.contains(s));
  CHECK_FALSE(s.contains(m));
  CHECK(m.minus(s).degree() == 2);
  CHECK(m.merged(s).multiplicity(BasisLabel::u(1)) == 3);
  // Drawing U(1)^2 out of U(1)^2 V(3): 2*1 ordered ways.
  RealMultiIndex s2;
  s2.add(BasisLabel::u(1), 2);
  CHECK(m.falling_product(s2) == 2);
  CHECK(m.falling_product(m) == 2);
  RealMultiIndex too_big;
  too_big.add(BasisLabel::u(1), 3);
  CHECK(m.falling_product(too_big) == 0);
  CHECK_THROWS_AS(s.minus(m), std::invalid_argument);
}

TEST_CASE("kernel term bookkeeping merges and cancels", "[tensor]") {
  RealKernel k = RealKernel::zero(1, Mode::exact);
  RealMultiIndex m;
  m.add(BasisLabel::u(1));
  k.add_term(m, Scalar::rational(1, 2));
  k.add_term(m, Scalar::rational(1, 2));
  CHECK(k.coeff(m) == Scalar::one(Mode::exact));
  k.add_term(m, Scalar::integer(-1));
  CHECK(k.is_zero());

  RealMultiIndex wrong;
  wrong.add(BasisLabel::u(1), 2);
  CHECK_THROWS_AS(k.add_term(wrong, Scalar::one(Mode::exact)), std::domain_error);
  CHECK_THROWS_AS(k.add_term(m, Scalar::one(Mode::floating)), std::invalid_argument);
  CHECK_THROWS_AS(k.value(), std::domain_error);
}

TEST_CASE("symmetrized product is multiset multiplication", "[tensor]") {
  const RealKernel u1 = mono({{BasisLabel::u(1), 1}}, Scalar::one(Mode::exact));
  const RealKernel prod = symm_product(u1, u1);
  CHECK(prod.degree == 2);
  RealMultiIndex sq;
  sq.add(BasisLabel::u(1), 2);
  CHECK(prod.coeff(sq) == Scalar::one(Mode::exact));
  CHECK(prod.terms.size() == 1);

  oracles::Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const RealKernel f = oracles::random_real_kernel(rng, 2, 3);
    const RealKernel g = oracles::random_real_kernel(rng, 3, 3);
    CHECK(symm_product(f, g) == symm_product(g, f));
    CHECK(symm_product(f, g) == contract_real(f, g, 0));
  }
}

TEST_CASE("contraction of the mixed pair kernel reproduces the half weight", "[tensor]") {
  // symm(U(1) x V(1)) contracted once with U(1) leaves V(1)/2.
  const RealKernel uv =
      mono({{BasisLabel::u(1), 1}, {BasisLabel::v(1), 1}}, Scalar::one(Mode::exact));
  const RealKernel u = mono({{BasisLabel::u(1), 1}}, Scalar::one(Mode::exact));
  const RealKernel res = contract_real(uv, u, 1);
  CHECK(res.degree == 1);
  RealMultiIndex v;
  v.add(BasisLabel::v(1));
  CHECK(res.coeff(v) == Scalar::rational(1, 2));
  CHECK(res.terms.size() == 1);
}

TEST_CASE("degree-one conversion blocks contract to twice the index match", "[tensor]") {
  for (int j = 1; j <= 2; ++j) {
    for (int k = 1; k <= 2; ++k) {
      const RealKernel c = contract_real(w01(j), w10(k), 1);
      CHECK(c.degree == 0);
      if (j == k)
        CHECK(c.value() == Scalar::integer(2));
      else
        CHECK(c.is_zero());
    }
  }
}

TEST_CASE("real contraction matches the dense slot-pairing oracle", "[tensor]") {
  oracles::Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const int da = static_cast<int>(rng.range(1, 3));
    const int db = static_cast<int>(rng.range(1, 3));
    const RealKernel f = oracles::random_real_kernel(rng, da, 3);
    const RealKernel g = oracles::random_real_kernel(rng, db, 3);
    for (int r = 0; r <= std::min(da, db); ++r) {
      const RealKernel lib = contract_real(f, g, r);
      const RealKernel dense = oracles::to_real_kernel(
          oracles::dense_contract(oracles::dense_of(f), da, oracles::dense_of(g), db, r),
          da + db - 2 * r, Mode::exact);
      CHECK(lib == dense);
    }
  }
  CHECK_THROWS_AS(contract_real(w10(1), w10(1), 2), std::domain_error);
  CHECK_THROWS_AS(contract_real(w10(1), w10(1), -1), std::domain_error);
}

TEST_CASE("elementary complex contractions carry the squared basis norm", "[tensor]") {
  const ComplexKernel e1 = cmono({1}, {}, Scalar::one(Mode::exact));
  const ComplexKernel e1bar = cmono({}, {1}, Scalar::one(Mode::exact));

  const ComplexKernel c = contract_complex(e1, e1bar, 1, 0);
  CHECK(c.p == 0);
  CHECK(c.q == 0);
  CHECK(c.value() == Scalar::integer(2));

  const ComplexKernel f = cmono({1}, {1}, Scalar::one(Mode::exact));
  const ComplexKernel full = contract_complex(f, f, 1, 1);
  CHECK(full.value() == Scalar::integer(4));

  const ComplexKernel e2 = cmono({2}, {}, Scalar::one(Mode::exact));
  CHECK(contract_complex(e2, e1bar, 1, 0).is_zero());
  CHECK_THROWS_AS(contract_complex(e1, e1bar, 2, 0), std::domain_error);
  CHECK_THROWS_AS(contract_complex(e1, e1bar, 0, 1), std::domain_error);
}

TEST_CASE("complex contraction matches the dense slot-pairing oracle", "[tensor]") {
  oracles::Rng rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int pa = static_cast<int>(rng.range(0, 2)), qa = static_cast<int>(rng.range(0, 2));
    const int pb = static_cast<int>(rng.range(0, 2)), qb = static_cast<int>(rng.range(0, 2));
    if (pa + qa == 0 || pb + qb == 0) continue;
    const ComplexKernel f = oracles::random_complex_kernel(rng, pa, qa, 3);
    const ComplexKernel g = oracles::random_complex_kernel(rng, pb, qb, 3);
    for (int i = 0; i <= std::min(pa, qb); ++i) {
      for (int j = 0; j <= std::min(qa, pb); ++j) {
        const ComplexKernel lib = contract_complex(f, g, i, j);
        const ComplexKernel dense = oracles::to_complex_kernel(
            oracles::dense_contract(oracles::dense_of(f), pa, qa, oracles::dense_of(g), pb, qb,
                                    i, j),
            pa + pb - i - j, qa + qb - i - j, Mode::exact);
        CHECK(lib == dense);
      }
    }
  }
}

TEST_CASE("inner product matches the dense oracle and the monomial norm", "[tensor]") {
  RealMultiIndex m;
  m.add(BasisLabel::u(1), 2).add(BasisLabel::v(2), 1);
  const RealKernel k = RealKernel::monomial(m, Scalar::one(Mode::exact));
  // <symm-mono(M), symm-mono(M)> = M!/n! = 2/6 = 1/3.
  CHECK(inner_product(k, k) == Scalar::rational(1, 3));

  oracles::Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = static_cast<int>(rng.range(1, 3));
    const RealKernel f = oracles::random_real_kernel(rng, d, 3);
    const RealKernel g = oracles::random_real_kernel(rng, d, 3);
    const Scalar lib = inner_product(f, g);
    const Scalar dense =
        oracles::dense_inner(oracles::dense_of(f), oracles::dense_of(g), Mode::exact);
    CHECK(lib == dense);
    // Hermitian symmetry and positivity on the diagonal.
    CHECK(inner_product(g, f) == lib.conj());
    CHECK(inner_product(f, f).im_exact() == 0);
    CHECK(inner_product(f, f).re_exact() >= 0);
  }
  CHECK_THROWS_AS(inner_product(w10(1), symm_product(w10(1), w10(1))), std::domain_error);
}

TEST_CASE("kernel conjugation swaps slot groups and is an involution", "[tensor]") {
  oracles::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexKernel f = oracles::random_complex_kernel(rng, 2, 1, 3);
    const ComplexKernel fc = conjugate(f);
    CHECK(fc.p == f.q);
    CHECK(fc.q == f.p);
    CHECK(conjugate(fc) == f);
  }
}

TEST_CASE("splitting complex coefficients into real and imaginary kernels", "[tensor]") {
  RealKernel k = RealKernel::zero(1, Mode::exact);
  RealMultiIndex mu, mv;
  mu.add(BasisLabel::u(1));
  mv.add(BasisLabel::v(1));
  k.add_term(mu, Scalar::from_exact(mpq_class(1, 2), mpq_class(3)));
  k.add_term(mv, Scalar::from_exact(0, mpq_class(-1, 4)));
  const auto [u, v] = k.split_real_imag();
  CHECK(u.coeff(mu) == Scalar::rational(1, 2));
  CHECK(u.coeff(mv).is_zero());
  CHECK(v.coeff(mu) == Scalar::integer(3));
  CHECK(v.coeff(mv) == Scalar::rational(-1, 4));
  // Reassemble: u + i*v == original.
  RealKernel re = u;
  re.add_scaled(v, Scalar::i_unit(Mode::exact));
  CHECK(re == k);
}
