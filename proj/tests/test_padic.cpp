#include <random>

#include "doctest.h"
#include "ssint/padic.hpp"

using namespace ssint;

namespace {

PAdic random_unit(const PAdicParams* P, std::mt19937_64& rng) {
  std::vector<int64_t> c(P->d);
  for (auto& x : c) x = (int64_t)(rng() % P->pw[P->M]);
  if (c[0] % P->p == 0) c[0] += 1;
  return PAdic::make(P, 0, c, P->M);
}

} // namespace

TEST_SUITE("padic") {

TEST_CASE("integers in Z_5") {
  auto P = PAdicParams::get(5, 1, 3);
  PAdic five = PAdic::from_int(P.get(), 2) + PAdic::from_int(P.get(), 3);
  CHECK(five.val() == 1);
  CHECK(five.unit()[0] == 1);
  PAdic x = PAdic::from_int(P.get(), 7);
  CHECK((x + PAdic::zero(P.get())).same(x));
}

TEST_CASE("inverse of 2 mod 5^3") {
  auto P = PAdicParams::get(5, 1, 3);
  PAdic h = PAdic::from_int(P.get(), 2).inv();
  CHECK(h.val() == 0);
  CHECK(h.unit()[0] == 63);
  CHECK_THROWS_AS(PAdic::zero(P.get()).inv(), DivisionByZero);
}

TEST_CASE("cancellation at negative valuation") {
  auto P = PAdicParams::get(5, 2, 6);
  PAdic u = PAdic::make(P.get(), -1, {3, 1}, 6);
  PAdic s = u + (-u);
  CHECK(s.is_zero());
}

TEST_CASE("mul adds valuations") {
  auto P = PAdicParams::get(5, 2, 8);
  PAdic a = PAdic::make(P.get(), 1, {2, 1}, 8), b = PAdic::make(P.get(), -1, {1, 3}, 8);
  CHECK((a * b).val() == 0);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    int va = (int)(rng() % 5) - 2, vb = (int)(rng() % 5) - 2;
    PAdic x = random_unit(P.get(), rng).mul_p_pow(va), y = random_unit(P.get(), rng).mul_p_pow(vb);
    CHECK((x * y).val() == va + vb);
    CHECK((x * x.inv()).congruent(PAdic::from_int(P.get(), 1)));
  }
}

TEST_CASE("lambda squared is eps and sigma negates it") {
  for (int p : {3, 5, 7, 11, 13}) {
    auto P = PAdicParams::get(p, 2, 10);
    PAdic l = PAdic::lambda(P.get());
    CHECK((l * l).congruent(PAdic::eps(P.get())));
    CHECK(l.frob().congruent(-l));
    CHECK(P->eps == smallest_nonresidue(p));
  }
}

TEST_CASE("sigma is a ring map of order d") {
  std::mt19937_64 rng(11);
  for (int d : {1, 2, 3, 4}) {
    auto P = PAdicParams::get(5, d, 8);
    CHECK(PAdic::from_int(P.get(), 7).frob().congruent(PAdic::from_int(P.get(), 7)));
    for (int it = 0; it < 40; ++it) {
      PAdic x = random_unit(P.get(), rng), y = random_unit(P.get(), rng).mul_p_pow(1);
      CHECK((x + y).frob().congruent(x.frob() + y.frob()));
      CHECK((x * y).frob().congruent(x.frob() * y.frob()));
      CHECK(x.frob(d).congruent(x));
    }
  }
}

TEST_CASE("teichmuller lifts") {
  auto P = PAdicParams::get(5, 1, 3);
  CHECK(PAdic::teichmuller(P.get(), {0}).is_zero());
  CHECK(PAdic::teichmuller(P.get(), {1}).congruent(PAdic::from_int(P.get(), 1)));
  PAdic w = PAdic::teichmuller(P.get(), {2});
  CHECK(w.unit()[0] == 57);
  CHECK((w * w).congruent(PAdic::from_int(P.get(), -1)));

  auto Q = PAdicParams::get(7, 2, 6);
  for (int64_t a = 0; a < 7; ++a)
    for (int64_t b = 0; b < 7; ++b) {
      Residue r{a, b};
      PAdic t = PAdic::teichmuller(Q.get(), r);
      if (a || b) {
        CHECK(t.reduce() == r);
        CHECK(t.pow(49).congruent(t));
        // sigma acts as the p-power on residues
        CHECK(t.frob().reduce() == residue_pow(*Q, r, 7));
      }
    }
}

TEST_CASE("text round trip") {
  auto P = PAdicParams::get(5, 2, 6);
  PAdic x = PAdic::make(P.get(), -2, {3, 4}, 6);
  PAdic y = PAdic::parse(P.get(), x.str());
  CHECK(y.same(x));
}

TEST_CASE("bad parameters") {
  CHECK_THROWS(PAdicParams::get(4, 1, 3));
  CHECK_THROWS(PAdicParams::get(5, 5, 3));
  CHECK_THROWS(PAdicParams::get(5, 1, 0));
}

}
