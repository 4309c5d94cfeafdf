#include "doctest.h"
#include "ssint/crystal.hpp"
#include "ssint/io.hpp"

using namespace ssint;

namespace {

Series mono(const CrystalModel& m, int64_t c, int k, int N) {
  return Series::monomial(PAdic::from_int(m.P(), c), k, N);
}

std::vector<PAdic> unit_vec(const CrystalModel& m, int i) {
  std::vector<int64_t> e(m.rank, 0);
  e[i] = 1;
  return int_vector(m.P(), e);
}

} // namespace

TEST_SUITE("crystal") {

TEST_CASE("printed matrix entries") {
  auto S = build_model(CrystalCase::SiegelSuperspecial, 5, 2, 8, {0});
  const int N = 6;
  MatSeries F = S.F(0, mono(S, 1, 1, N), mono(S, 1, 1, N), Series(S.P(), N));
  CHECK(F.rows() == 5);
  CHECK(F(0, 0)[2].congruent(PAdic::from_rational(S.P(), rat(1, 10))));
  auto H = build_model(CrystalCase::HilbertSplit, 5, 2, 8, {0});
  MatSeries G = H.F(0, mono(H, 1, 1, N), mono(H, 1, 1, N), Series(H.P(), N));
  CHECK(G.rows() == 4);
  CHECK(G(0, 2)[1].congruent(PAdic::from_rational(H.P(), rat(1, 5))));
}

TEST_CASE("superspecial or supergeneric is decided by c") {
  CHECK_THROWS_AS(build_model(CrystalCase::SiegelSupergeneric, 5, 4, 8, {1}), InvalidParameter);
  CHECK_THROWS_AS(build_model(CrystalCase::SiegelSuperspecial, 5, 4, 8, {0, 1}), InvalidParameter);
  auto m = build_model(CrystalCase::SiegelSupergeneric, 5, 4, 8, {0, 1});
  CHECK(m.a_frob.val() == 0);
  CHECK(m.rank == 5);
}

TEST_CASE("non-ordinary valuation") {
  auto S = build_model(CrystalCase::SiegelSuperspecial, 5, 2, 8, {0});
  CHECK(non_ordinary_valuation(S, make_curve(S, 20, {{1, {1}}}, {{2, {1}}})) == 3);
  auto H = build_model(CrystalCase::HilbertInertSuperspecial, 5, 2, 8, {0});
  CHECK(non_ordinary_valuation(H, make_curve(H, 20, {{1, {1}}}, {{1, {1}}})) == 2);
  // y = beta t + t^5, z = gamma t with beta = -gamma^2 / (4 eps) mod 5: the t^2 terms cancel
  const int64_t eps = 2, gamma = 1;
  const int64_t beta = mod(-gamma * gamma * invmod(4 * eps, 5), 5);
  int A = non_ordinary_valuation(S, make_curve(S, 20, {{1, {1}}}, {{1, {beta}}, {5, {1}}}, {{1, {gamma}}}));
  CHECK(A > 2);
  CHECK(A == 6);
  CHECK_THROWS_AS(non_ordinary_valuation(S, make_curve(S, 20, {}, {}, {})), NotGenericallyOrdinary);
}

TEST_CASE("f_infinity of x = y = t") {
  auto H = build_model(CrystalCase::HilbertSplit, 5, 2, 12, {0});
  auto C = make_curve(H, 63, {{1, {1}}}, {{1, {1}}});
  MatSeries F = f_infinity(H, C);
  CHECK(F(0, 0)[2].val() == -1);
  CHECK(F.same(f_infinity(H, C, ProductMode::SeriesTwist)));
}

TEST_CASE("decay indices for x = y = t") {
  auto H = build_model(CrystalCase::HilbertSplit, 5, 2, 12, {0});
  auto C = make_curve(H, 63, {{1, {1}}}, {{1, {1}}});
  const int A = non_ordinary_valuation(H, C);
  REQUIRE(A == 2);
  MatSeries F = f_infinity(H, C);
  const int want[] = {2, 12, 62};
  for (int n = 0; n <= 2; ++n) CHECK(decay_index(F, unit_vec(H, 0), n).k == want[n]);
  int k3 = decay_index(F, unit_vec(H, 2), 1).k, k4 = decay_index(F, unit_vec(H, 3), 1).k;
  CHECK((k3 == 7 || k4 == 7));
  CHECK(check_DR(F, unit_vec(H, 0), A, 2) == Verdict::True);
  CHECK(check_DvR(F, unit_vec(H, 2), A, Rational(1), 2) == Verdict::True);
  CHECK(decay_index(F, int_vector(H.P(), {0, 0, 0, 0}), 1).k == kInf);
  CHECK_THROWS_AS(check_DR(F, unit_vec(H, 0), A, 3), ThresholdExceedsTruncation);
}

TEST_CASE("decay index is monotone and shifts under p") {
  auto S = build_model(CrystalCase::SiegelSuperspecial, 5, 2, 12, {0});
  auto C = make_curve(S, 94, {{1, {1}}}, {{2, {1}}}, {{3, {1}}});
  MatSeries F = f_infinity(S, C);
  for (const auto& v : std::vector<std::vector<int64_t>>{{1, 0, 0, 0, 0}, {0, 1, 1, 0, 0}, {1, 2, 0, 3, 1}}) {
    auto w = int_vector(S.P(), v);
    std::vector<int64_t> pv(v);
    for (auto& x : pv) x *= 5;
    auto pw = int_vector(S.P(), pv);
    for (int n = 0; n + 1 <= 2; ++n) {
      CHECK(decay_index(F, w, n).k <= decay_index(F, w, n + 1).k);
      CHECK(decay_index(F, pw, n).k == decay_index(F, w, n + 1).k);
    }
  }
}

TEST_CASE("thresholds") {
  CHECK(Thresholds::dr(2, 5, 0) == 2);
  CHECK(Thresholds::dr(2, 5, 2) == 62);
  CHECK(Thresholds::dvr(2, Rational(1), 5, 1) == 7);
  CHECK(Thresholds::dvr(2, Rational(1), 5, 0) == 1);
  CHECK(required_precision(5, 2, 63) >= 2 + 2 + 3);
}

TEST_CASE("decay regression fixtures") {
  // each named case fixture finds a decaying span and the span the case
  // analysis names passes DR for every primitive class mod p^2
  const char* names[] = {"hs_a_eq_b", "hs_even_power", "hs_odd_power", "hs_generic", "hi_ssp",
                         "ss_case1", "ss_case2_1", "ss_case2_2", "ss_case3_1", "ss_case3_2",
                         "sg_case1", "sg_case2", "sg_case3_1", "sg_case3_2_1", "sg_case3_2_2", "hi_sg"};
  for (const char* n : names) {
    CAPTURE(n);
    Config c = Config::load(std::string(SSINT_FIXTURES) + "/decay/" + n);
    DecayRun r = run_decay(curve_from_config(c), 2);
    CHECK(r.N >= Thresholds::dr(r.A, 5, 2) + 1);
    CHECK(r.sub.found);
    CHECK_FALSE(r.sub.indeterminate);
    SpanVerdict v = verify_span(r.Finf, parse_rows(c.get("expect"), n), r.A, 2, 2);
    CHECK(v.verdict == Verdict::True);
    if (is_superspecial(r.model->kind)) CHECK(r.sub.has_witness);
    if (c.has("witness")) {
      auto w = parse_int_list(c.get("witness"), n);
      CHECK(check_DvR(r.Finf, int_vector(r.model->P(), w), r.A, Rational(r.A, 2), 2) == Verdict::True);
    }
  }
}

}
