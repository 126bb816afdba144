#include <catch2/catch_amalgamated.hpp>

#include "chaoskit/region.hpp"

using namespace chaoskit;

TEST_CASE("two-region kernel algebra", "[region]") {
  const RegionKernel2 psi = RegionKernel2::one_sided(Mode::exact);
  CHECK(psi.lower == Scalar::one(Mode::exact));
  CHECK(psi.upper.is_zero());
  CHECK(psi.transpose().upper == Scalar::one(Mode::exact));
  CHECK(psi.transpose().transpose() == psi);

  const RegionKernel2 sym = psi + psi.transpose();
  CHECK(sym.lower == sym.upper);
  CHECK((psi - psi).is_zero());
  CHECK(psi.scaled(Scalar::integer(3)).lower == Scalar::integer(3));
  CHECK(psi.scaled(mpq_class(1, 4)).lower == Scalar::rational(1, 4));
  CHECK(RegionKernel2::zero(Mode::exact).is_zero());
  CHECK(psi.str() == "(1, 0)");
}

TEST_CASE("component vector of the quadratic functional", "[region]") {
  const ComponentVector v = ou_forward();
  REQUIRE(v.p == 2);
  REQUIRE(v.entries.size() == 4);
  const Scalar quarter = Scalar::rational(1, 4);
  const Scalar iquarter = Scalar::from_exact(0, mpq_class(1, 4));

  // First and fourth components: (psi + psi^T)/4, i.e. (1/4, 1/4).
  CHECK(v.entries[0].lower == quarter);
  CHECK(v.entries[0].upper == quarter);
  CHECK(v.entries[3] == v.entries[0]);

  // Second component: i (psi - psi^T)/4, i.e. (i/4, -i/4).
  CHECK(v.entries[1].lower == iquarter);
  CHECK(v.entries[1].upper == -iquarter);

  // Third component: the negative of the second.
  CHECK(v.entries[2].lower == -iquarter);
  CHECK(v.entries[2].upper == iquarter);
}

TEST_CASE("weight-vector assembly isolates the middle bidegree", "[region]") {
  const auto out = apply_vk(ou_forward());
  REQUIRE(out.size() == 3);
  CHECK(out[0].first == 0);
  CHECK(out[0].second.is_zero());
  CHECK(out[2].first == 2);
  CHECK(out[2].second.is_zero());
  // g_{1,1} equals the one-sided kernel itself.
  CHECK(out[1].first == 1);
  CHECK(out[1].second.lower == Scalar::one(Mode::exact));
  CHECK(out[1].second.upper.is_zero());
}

TEST_CASE("odd degrees require floating mode", "[region]") {
  ComponentVector v = ComponentVector::zero(1, Mode::exact);
  v.entries[0] = RegionKernel2::one_sided(Mode::exact);
  CHECK_THROWS_AS(apply_vk(v), std::domain_error);

  // In floating mode the irrational prefactor 2^(-1/2) is representable.
  ComponentVector vf = ComponentVector::zero(1, Mode::floating);
  vf.entries[0] = RegionKernel2::one_sided(Mode::floating);  // (g1, g2) = (psi, 0)
  const auto out = apply_vk(vf);
  REQUIRE(out.size() == 2);
  // g_{0,1} = g_{1,0} = 2^(-1/2) * (entry0 + i*entry1) = psi / sqrt(2).
  const double inv_sqrt2 = 0.7071067811865476;
  CHECK(out[0].second.lower.to_complex_double().real() == Catch::Approx(inv_sqrt2));
  CHECK(out[0].second.upper.to_complex_double().real() == Catch::Approx(0.0).margin(1e-15));
  CHECK(out[1].second.lower.to_complex_double().real() == Catch::Approx(inv_sqrt2));

  ComponentVector bad{2, std::vector<RegionKernel2>(3, RegionKernel2::zero(Mode::exact))};
  CHECK_THROWS_AS(apply_vk(bad), std::domain_error);
  CHECK_THROWS_AS(ComponentVector::zero(-1, Mode::exact), std::domain_error);
}

TEST_CASE("assembled kernels recombine to the component vector", "[region]") {
  // For p = 2 the three assembled kernels, weighted back by the conjugate
  // weight vectors, reproduce 2^{p/2} times the first component:
  //   sum_k conj(V_{k,1-based j}) applied in reverse reconstructs entries.
  // Spot-check the defining sum directly instead: entry_j should satisfy
  //   sum_j V_{k,j} entry_j = 2^{p/2} k!(p-k)!/p! g_{k,p-k}.
  const ComponentVector v = ou_forward();
  const auto out = apply_vk(v);
  for (int k = 0; k <= 2; ++k) {
    const VkVector w = vk_vector(2, k);
    RegionKernel2 acc = RegionKernel2::zero(Mode::exact);
    for (std::size_t j = 0; j < 4; ++j) acc = acc + v.entries[j].scaled(w[j]);
    mpq_class pref = pow2(-1);  // 2^{-p/2} for p = 2
    pref *= mpq_class(factorial(2), factorial(k) * factorial(2 - k));
    CHECK(acc.scaled(pref) == out[static_cast<std::size_t>(k)].second);
  }
}
