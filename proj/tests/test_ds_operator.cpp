#include <cmath>

#include "doctest.h"

#include "ergo/generators.hpp"
#include "ergo/json_io.hpp"
#include "ergo/norms.hpp"
#include "ergo/rearrangement.hpp"

using namespace ergo;

namespace {

constexpr gen::OperatorFamily kFamilies[] = {
    gen::OperatorFamily::Permutation, gen::OperatorFamily::BirkhoffMixture,
    gen::OperatorFamily::PositiveKernel, gen::OperatorFamily::ComplexPhase};

ComplexMatrix real_matrix(std::size_t n, std::initializer_list<double> entries) {
  ComplexMatrix m(n, n);
  std::size_t k = 0;
  for (double e : entries) {
    m(k / n, k % n) = e;
    ++k;
  }
  return m;
}

}  // namespace

TEST_CASE("identity operator") {
  auto s = make_space({1.0, 2.0}, true);
  const DSOperator id = DSOperator::identity(2);
  const TailedFunction f(s, {Complex(1.0, -2.0), 0.5}, 0.25);
  CHECK(apply(id, f) == f);
  CHECK(id.is_permutation());
  CHECK(id.is_positive());
  CHECK(verify_ds(id, *s).contraction());
}

TEST_CASE("swap on equal weights") {
  auto s = make_space({1.0, 1.0}, false);
  const DSOperator swap(real_matrix(2, {0, 1, 1, 0}), {0.0, 0.0}, 1.0);
  CHECK(apply(swap, TailedFunction(s, {1.0, 2.0})) == TailedFunction(s, {2.0, 1.0}));
  CHECK(swap.is_permutation());
  CHECK(swap.permutation_targets() == std::vector<std::size_t>{1, 0});
  const DSReport report = verify_ds(swap, *s);
  CHECK(report.contraction());
  CHECK(report.max_column_ratio == 1.0);
  CHECK(report.max_row_sum == 1.0);
}

TEST_CASE("the weighted column bound is what fails on unequal weights") {
  auto s = make_space({1.0, 2.0}, false);
  const DSOperator swap(real_matrix(2, {0, 1, 1, 0}), {0.0, 0.0}, 1.0);
  const DSReport report = verify_ds(swap, *s);
  CHECK(report.linf_ok);
  CHECK_FALSE(report.l1_ok);
  CHECK(report.max_column_ratio == 2.0);
  CHECK_THROWS_AS(extend_from_l1(swap.kernel(), *s), std::domain_error);
}

TEST_CASE("tail injection") {
  auto s = make_space({1.0}, true);
  const DSOperator op(ComplexMatrix(1, 1), {1.0}, 1.0);
  CHECK(apply(op, TailedFunction::one(s)) == TailedFunction::one(s));
  CHECK(verify_ds(op, *s).contraction());
  const DSOperator loud(real_matrix(1, {0.5}), {0.75}, 1.0);
  CHECK_FALSE(verify_ds(loud, *s).linf_ok);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(DSOperator(ComplexMatrix(2, 3), {0.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DSOperator(ComplexMatrix(2, 2), {0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DSOperator(ComplexMatrix(kMaxAtoms + 1, kMaxAtoms + 1),
                             std::vector<Complex>(kMaxAtoms + 1), 1.0),
                  std::invalid_argument);
  auto s = make_space({1.0, 1.0, 1.0}, false);
  CHECK_THROWS_AS(apply(DSOperator::identity(2), TailedFunction::zero(s)), std::invalid_argument);
}

TEST_CASE("generated families are DS contractions") {
  for (auto family : kFamilies) {
    CAPTURE(gen::to_string(family));
    for (std::uint64_t i = 0; i < 100; ++i) {
      auto rng = gen::instance_rng(51, i);
      auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 24), i % 2 == 0);
      const DSOperator op = gen::random_operator(rng, *space, family);
      const DSReport report = verify_ds(op, *space);
      CHECK(report.contraction());
      CHECK(report.max_column_ratio <= 1.0 + 1e-12);
      CHECK(report.max_row_sum <= 1.0 + 1e-12);
      if (family != gen::OperatorFamily::ComplexPhase) CHECK(op.is_positive());
    }
  }
}

TEST_CASE("permutation family on equal weights is an honest permutation") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rng = gen::instance_rng(52, i);
    auto space = uniform_space(gen::uniform_index(rng, 1, 24), i % 2 == 0, 0.7);
    const DSOperator op = gen::random_permutation(rng, *space);
    REQUIRE(op.is_permutation());
    const auto f = gen::random_function(rng, space, 2.0);
    CHECK(rearrange(apply(op, f)) == rearrange(f));
  }
}

TEST_CASE("DS operators are contractions in L1 and Linf and respect majorization") {
  for (auto family : kFamilies) {
    CAPTURE(gen::to_string(family));
    for (std::uint64_t i = 0; i < 150; ++i) {
      auto rng = gen::instance_rng(53, i);
      auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 16), i % 2 == 0);
      const DSOperator op = gen::random_operator(rng, *space, family);
      for (int j = 0; j < 5; ++j) {
        const auto f = gen::random_function(rng, space, 3.0, j % 2 == 0);
        const auto tf = apply(op, f);
        CHECK(norm_lp(tf, kInf) <= norm_lp(f, kInf) * (1.0 + 1e-12) + 1e-300);
        if (f.tail_value() == Complex(0.0)) {
          CHECK(norm_lp(tf, 1.0) <= norm_lp(f, 1.0) * (1.0 + 1e-12) + 1e-300);
        }
        CHECK(check_majorization_contract(op, f));
        CHECK(norm_l1_plus_linf(tf) <= norm_l1_plus_linf(f) * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("apply_power matches repeated application") {
  auto rng = gen::instance_rng(55, 0);
  auto space = gen::random_space(rng, 9, true);
  const DSOperator op = gen::random_positive(rng, *space);
  const auto f = gen::random_function(rng, space, 1.0, true);
  TailedFunction g = f;
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(apply_power(op, f, k) == g);
    g = apply(op, g);
  }
}

TEST_CASE("cyclic shift") {
  auto s = make_space({1.0, 1.0, 1.0}, false);
  const DSOperator shift = gen::cyclic_shift(3);
  CHECK(apply(shift, TailedFunction(s, {1.0, 2.0, 3.0})) == TailedFunction(s, {3.0, 1.0, 2.0}));
  CHECK(apply_power(shift, TailedFunction(s, {1.0, 2.0, 3.0}), 3) == TailedFunction(s, {1.0, 2.0, 3.0}));
}

TEST_CASE("modulus") {
  auto rng = gen::instance_rng(57, 0);
  auto space = gen::random_space(rng, 8, true);
  const DSOperator op = gen::complex_phase(rng, *space);
  const DSOperator m = modulus(op);
  CHECK(m.is_positive());
  CHECK(verify_ds(m, *space).contraction());
  for (int j = 0; j < 20; ++j) {
    const auto f = gen::random_function(rng, space, 2.0, true);
    const auto lhs = apply(op, f).abs();
    const auto rhs = apply(m, f.abs());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(lhs.value(i)) <= rhs.value(i).real() + 1e-12);
  }
}

TEST_CASE("adjoint") {
  for (auto family : kFamilies) {
    for (std::uint64_t i = 0; i < 60; ++i) {
      auto rng = gen::instance_rng(59, i);
      auto space = gen::random_space(rng, gen::uniform_index(rng, 1, 12), i % 2 == 0);
      const DSOperator op = gen::random_operator(rng, *space, family);
      const DSOperator star = adjoint(op, *space);
      CHECK(verify_ds(star, *space).contraction());
      const auto u = gen::random_function(rng, space, 1.0);
      const auto v = gen::random_function(rng, space, 1.0);
      const Complex lhs = pairing(apply(op, u), v);
      const Complex rhs = pairing(u, apply(star, v));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
      // Involution up to rounding of the weight ratios.
      const DSOperator back = adjoint(star, *space);
      for (std::size_t r = 0; r < op.size(); ++r) {
        for (std::size_t c = 0; c < op.size(); ++c) {
          CHECK(std::abs(back.kernel()(r, c) - op.kernel()(r, c)) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("extension from L1") {
  auto space = make_space({1.0, 1.0, 2.0}, true);
  const ComplexMatrix k = real_matrix(3, {0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1});
  const DSOperator ext = extend_from_l1(k, *space);
  CHECK(ext.tail_coeff() == Complex(1.0));
  for (Complex b : ext.tail_injection()) CHECK(b == Complex(0.0));
  CHECK(verify_ds(ext, *space).contraction());
  // Agrees with K on tail-0 functions.
  auto rng = gen::instance_rng(61, 0);
  const DSOperator plain(k, std::vector<Complex>(3), 0.0);
  for (int j = 0; j < 20; ++j) {
    const auto f = gen::random_function(rng, space, 1.0);
    CHECK(apply(ext, f) == apply(plain, f));
  }
  CHECK_THROWS_AS(extend_from_l1(real_matrix(3, {1, 1, 0, 0, 0, 0, 0, 0, 1}), *space), std::domain_error);
}

TEST_CASE("pairing") {
  auto s = make_space({2.0, 0.5}, false);
  CHECK(pairing(TailedFunction(s, {1.0, Complex(0.0, 1.0)}), TailedFunction(s, {3.0, Complex(0.0, 2.0)})) ==
        Complex(7.0, 0.0));
}

TEST_CASE("operator JSON round trip") {
  auto rng = gen::instance_rng(63, 0);
  for (auto family : kFamilies) {
    auto space = gen::random_space(rng, 7, true);
    const DSOperator op = gen::random_operator(rng, *space, family);
    CHECK(operator_from_json(Json::parse(operator_to_json(op).dump())) == op);
  }
}
