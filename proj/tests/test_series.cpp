#include <random>

#include "doctest.h"
#include "ssint/series.hpp"

using namespace ssint;

namespace {

Series random_series(const PAdicParams* P, int N, std::mt19937_64& rng, int min_exp = 0) {
  Series s(P, N);
  for (int k = min_exp; k <= N; ++k) {
    if (rng() % 3) continue;
    std::vector<int64_t> c(P->d);
    for (auto& x : c) x = (int64_t)(rng() % P->pw[P->M]);
    if (c[0] % P->p == 0) c[0] += 1;
    s[k] = PAdic::make(P, (int)(rng() % 3) - 1, c, P->M);
  }
  return s;
}

bool congruent(const Series& a, const Series& b) {
  for (int k = 0; k <= a.trunc(); ++k)
    if (!a[k].congruent(b[k])) return false;
  return true;
}

} // namespace

TEST_SUITE("series") {

TEST_CASE("products of monomials") {
  auto P = PAdicParams::get(5, 2, 8);
  const PAdic one = PAdic::from_int(P.get(), 1);
  Series a = Series::monomial(one, 1, 10) + Series::constant(one, 10);
  Series b = Series::constant(one, 10) - Series::monomial(one, 1, 10);
  Series c = a * b;
  CHECK(c[0].congruent(one));
  CHECK(c[1].is_zero());
  CHECK(c[2].congruent(-one));
  CHECK((Series::monomial(one, 4, 10) * Series::monomial(one, 6, 10))[10].congruent(one));
  CHECK((Series::monomial(one, 5, 10) * Series::monomial(one, 6, 10)).is_zero());
  CHECK((a * Series::constant(one, 10)).same(a));
}

TEST_CASE("twist sends lambda t^2 to -lambda t^2p") {
  auto P = PAdicParams::get(5, 2, 8);
  PAdic l = PAdic::lambda(P.get());
  Series s = Series::monomial(l, 2, 12).frobenius_twist();
  CHECK(s[10].congruent(-l));
  CHECK(s.vt() == 10);
  CHECK(Series::monomial(l, 3, 12).frobenius_twist().is_zero());
}

TEST_CASE("twist is multiplicative and mat_mul associative") {
  auto P = PAdicParams::get(5, 2, 6);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    Series a = random_series(P.get(), 30, rng), b = random_series(P.get(), 30, rng);
    CHECK(congruent((a * b).frobenius_twist(), a.frobenius_twist() * b.frobenius_twist()));
  }
  for (int it = 0; it < 5; ++it) {
    MatSeries A(P.get(), 3, 3, 12), B(P.get(), 3, 3, 12), C(P.get(), 3, 3, 12);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A(i, j) = random_series(P.get(), 12, rng);
        B(i, j) = random_series(P.get(), 12, rng);
        C(i, j) = random_series(P.get(), 12, rng);
      }
    MatSeries L = (A * B) * C, R = A * (B * C);
    bool ok = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ok &= congruent(L(i, j), R(i, j));
    CHECK(ok);
  }
}

TEST_CASE("twist of a Teichmueller series matches substitution") {
  auto P = PAdicParams::get(5, 2, 6);
  // x(t) = sum [r_k] t^k; sigma_t x = sum [r_k^p] t^{kp}
  std::vector<std::pair<int, Residue>> terms = {{1, {1, 2}}, {2, {3, 0}}, {4, {0, 4}}};
  Series x(P.get(), 25), y(P.get(), 25);
  for (auto& [k, r] : terms) {
    x[k] = PAdic::teichmuller(P.get(), r);
    if (k * 5 <= 25) y[k * 5] = PAdic::teichmuller(P.get(), residue_pow(*P, r, 5));
  }
  CHECK(congruent(x.frobenius_twist(), y));
}

TEST_CASE("truncated product of t/p") {
  auto P = PAdicParams::get(5, 1, 10);
  MatSeries F(P.get(), 1, 1, 30);
  F(0, 0) = Series::monomial(PAdic::from_rational(P.get(), rat(1, 5)), 1, 30);
  MatSeries prod = truncated_product(F);
  CHECK(prod(0, 0)[1].val() == -1);
  CHECK(prod(0, 0)[6].val() == -2);
  DecayProfile prof = column_valuation_profile(prod, {PAdic::from_int(P.get(), 1)});
  CHECK(prof.val[1] == -1);
  CHECK(prof.val[6] == -2);
  // more factors change nothing once p^K exceeds N
  CHECK(truncated_product(F, 4).same(truncated_product(F, 5)));
  CHECK(truncated_product(F, 3).same(prod));
}

TEST_CASE("product edge cases") {
  auto P = PAdicParams::get(5, 1, 6);
  MatSeries Z(P.get(), 2, 2, 10);
  CHECK(truncated_product(Z).same(MatSeries::identity(P.get(), 2, 10)));
  MatSeries C(P.get(), 1, 1, 10);
  C(0, 0) = Series::constant(PAdic::from_int(P.get(), 1), 10);
  CHECK_THROWS_AS(truncated_product(C), NonConvergent);
  MatSeries I = MatSeries::identity(P.get(), 2, 10);
  DecayProfile prof = column_valuation_profile(I, {PAdic::from_int(P.get(), 1), PAdic::from_int(P.get(), 3)});
  for (int k = 0; k <= 10; ++k) CHECK(prof.val[k] >= 0);
  DecayProfile z = column_valuation_profile(I, {PAdic::zero(P.get()), PAdic::zero(P.get())});
  CHECK(z.decay_index(0).k == kInf);
}

TEST_CASE("shape mismatch") {
  auto P = PAdicParams::get(5, 1, 6);
  MatSeries A(P.get(), 2, 3, 8), B(P.get(), 2, 3, 8);
  CHECK_THROWS_AS(A * B, ShapeMismatch);
}

}
