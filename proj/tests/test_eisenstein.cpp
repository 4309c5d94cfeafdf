#include <cmath>
#include <algorithm>
#include <random>

#include "doctest.h"
#include "ssint/enumerate.hpp"

using namespace ssint;

namespace {

const long double kPi = 3.14159265358979323846264338327950288L;
const long double kZeta2 = kPi * kPi / 6, kZeta4 = kPi * kPi * kPi * kPi / 90;
const long double kZeta3 = 1.20205690315959428539973816151144999L;

IntLattice lh() { return IntLattice({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, -2, 0}, {0, 0, 0, 4}}, "LH"); }
IntLattice ls() {
  return IntLattice({{2, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 0, -1}, {0, 0, 0, -1, 0}}, "LS");
}

bool is_disc(int64_t D) { return mod(D, 4) == 0 || mod(D, 4) == 1; }

} // namespace

TEST_SUITE("eisenstein") {

TEST_CASE("L-values") {
  Interval z = dirichlet_L2(1);
  CHECK(std::fabs((double)(z.mid - kZeta2)) < 1e-10);
  CHECK(z.rad < 1e-10);
  Interval c = dirichlet_L2(-4);
  CHECK(std::fabs((double)c.mid - 0.9159655941772190) < 1e-10);
  Interval d = dirichlet_L2(-4, 1e-6L, LMethod::Direct);
  CHECK(std::fabs((double)(d.mid - c.mid)) <= (double)(d.rad + c.rad) + 1e-15);
  for (int64_t D = -100; D <= 100; ++D) {
    if (D == 0 || !is_disc(D)) continue;
    Interval v = dirichlet_L2(D);
    CAPTURE(D);
    CHECK(v.lo() >= kZeta4 / kZeta2 - 1e-12L);
    CHECK(v.hi() <= kZeta2 + 1e-12L);
  }
}

TEST_CASE("Hilbert coefficients") {
  IntLattice L = lh();
  // |q_L(m)| / (m sigma_{-1}(m, chi)) only depends on the local data
  Rational base;
  for (int64_t m : {3, 11, 19, 27}) {
    EisResult e = q_L_hilbert(L, m);
    REQUIRE(e.value.is_rational());
    CHECK(e.value.coef < 0);
    Rational r = abs(e.value.coef) / (Rational(m) * e.divisor_sum);
    if (m == 3) base = r;
    CHECK(r == base);
  }
  // sign and vanishing follow the local densities
  for (int64_t m = 1; m <= 60; ++m) {
    EisResult e = q_L_hilbert(L, m);
    bool zero_delta = false;
    for (auto& [ell, d] : e.deltas) zero_delta |= d == 0;
    CAPTURE(m);
    CHECK(e.numeric.mid <= e.numeric.rad);
    CHECK((e.sign == 0) == zero_delta);
  }
}

TEST_CASE("Hilbert growth on the T-set") {
  TSetParams t;
  t.kind = TSetParams::Hilbert;
  t.field_disc = 8;
  t.C = 2;
  t.bad = {2};
  IntLattice L = lh();
  std::vector<double> sums;
  for (int64_t M : {125, 250, 500}) {
    Rational s = 0;
    double lo = 1e300, hi = 0;
    for (int64_t m : build_T_set(t, 5, M)) {
      Rational a = abs(q_L_hilbert(L, m).value.coef);
      s += a;
      lo = std::min(lo, a.get_d() / (double)m);
      hi = std::max(hi, a.get_d() / (double)m);
    }
    sums.push_back(s.get_d() / double(M * M));
    // m^{1-e} << |q_L| << m^{1+e}: here |q_L|/m stays in a window of width < 4
    CHECK(hi / lo < 4);
  }
  CHECK(*std::max_element(sums.begin(), sums.end()) / *std::min_element(sums.begin(), sums.end()) < 1.5);
}

TEST_CASE("Siegel coefficients") {
  IntLattice L = ls();
  CHECK(q_L_siegel(L, 4).value.coef == -550);
  CHECK(q_L_siegel(L, 9).value.coef == -1750);
  CHECK(q_L_siegel(L, 49).value.coef == -23590);
  for (int64_t m : {2, 3, 5, 6, 7}) CHECK(q_L_siegel(L, m).divisor_sum == 1);
  std::mt19937 rng(4);
  for (int it = 0; it < 200; ++it) {
    int64_t D = std::vector<int64_t>{-3, -4, 5, 8, -7, 12, -20, 13}[rng() % 8];
    int64_t f = 1 + (int64_t)(rng() % 300);
    double s = siegel_divisor_sum(D, f).get_d();
    CHECK(s >= 0.2);
    CHECK(s <= (double)(kZeta2 * kZeta3));
  }
}

TEST_CASE("Siegel-Weil on one-class genera") {
  IntLattice I5 = IntLattice::diagonal({1, 1, 1, 1, 1}), I4 = IntLattice::diagonal({1, 1, 1, 1});
  auto r5 = norm_counts(I5, 30), r4 = norm_counts(I4, 30);
  for (int64_t m = 1; m <= 30; ++m) {
    EisResult a = q_Lppp(I5, m), b = q_Lppp(I4, m);
    REQUIRE(a.value.is_rational());
    CHECK(a.value.coef == Rational(Integer(std::to_string(r5[2 * m]))));
    CHECK(b.value.coef == Rational(Integer(std::to_string(r4[2 * m]))));
  }
}

TEST_CASE("ratio bounds") {
  CHECK(ratio_bound(RatioClause::SuperspecialOrHilbert, 5).coef == rat(1, 4));
  CHECK(ratio_bound(RatioClause::SiegelSupergeneric, 5).coef == rat(1, 12));
  SqrtRational c4 = ratio_bound(RatioClause::SiegelPDividesM, 5, 5, true);
  CHECK(c4.coef * c4.coef * c4.arg == rat(1, 36));
  // positive definite L' with the same local data as L_H away from 5
  IntLattice Lp({{4, 1, 1, 0}, {1, 4, -1, 0}, {1, -1, 4, 0}, {0, 0, 0, 4}});
  for (int64_t m : {3, 11, 13, 19, 27, 29, 37}) {
    EisResult a = q_Lppp(Lp, m), b = q_L_hilbert(lh(), m);
    CHECK(check_ratio(a, b, ratio_bound(RatioClause::SuperspecialOrHilbert, 5)));
  }
}

}
