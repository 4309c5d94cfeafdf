#include <map>
#include <random>

#include "doctest.h"
#include "ssint/enumerate.hpp"

using namespace ssint;

namespace {

// positive definite Gram with even diagonal
IntLattice random_pd(std::mt19937& rng, int n) {
  for (;;) {
    IMat B(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) {
      B[i][i] = 2 * (1 + (int64_t)(rng() % 5));
      for (int j = 0; j < i; ++j) B[i][j] = B[j][i] = (int64_t)(rng() % 5) - 2;
    }
    IntLattice L(B);
    if (L.is_positive_definite()) return L;
  }
}

// |x_i|^2 <= 2M (B^-1)_ii = 2M cof_ii / det B
IVec box_radii(const IntLattice& L, int64_t M) {
  const int n = L.rank();
  const Integer d = L.det();
  IVec R(n);
  for (int i = 0; i < n; ++i) {
    IMat minor;
    for (int a = 0; a < n; ++a) {
      if (a == i) continue;
      IVec row;
      for (int b = 0; b < n; ++b)
        if (b != i) row.push_back(L.gram()[a][b]);
      minor.push_back(row);
    }
    Integer cof = minor.empty() ? Integer(1) : det(minor);
    Integer bound = Integer(2 * M) * cof / d;
    R[i] = isqrt(bound.get_si()) + 1;
  }
  return R;
}

std::map<int64_t, uint64_t> brute(const IntLattice& L, int64_t M) {
  const IVec R = box_radii(L, M);
  std::map<int64_t, uint64_t> c;
  int n = L.rank();
  IVec v(n);
  for (int i = 0; i < n; ++i) v[i] = -R[i];
  for (;;) {
    i128 q2 = L.norm2(v);
    if (q2 <= 2 * M) c[(int64_t)q2]++;
    int k = 0;
    while (k < n && v[k] == R[k]) {
      v[k] = -R[k];
      ++k;
    }
    if (k == n) break;
    ++v[k];
  }
  return c;
}

} // namespace

TEST_SUITE("enumerate") {

TEST_CASE("sums of four squares") {
  IntLattice Z4 = IntLattice::diagonal({1, 1, 1, 1});
  EnumReport e = enumerate(Z4, 10);
  CHECK(e.r(0) == 1);
  CHECK(e.r(1) == 8);
  CHECK(e.r(2) == 24);
  // Jacobi: 8 sigma(m) for odd m
  CHECK(e.r(3) == 32);
  CHECK(e.r(5) == 48);
  CHECK(e.r(4) == 24);
  EnumReport z = enumerate(Z4, 0);
  CHECK(z.r(0) == 1);
  CHECK(short_vectors(Z4, 0).size() == 1);
}

TEST_CASE("enumeration against brute force") {
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    int n = 1 + it % 3;
    IntLattice L = random_pd(rng, n);
    auto c = norm_counts(L, 50);
    auto b = brute(L, 50);
    CAPTURE(it);
    for (int64_t k = 0; k <= 100; ++k) CHECK(c[k] == (b.count(k) ? b[k] : 0));
    for (auto& v : short_vectors(L, 50)) CHECK(L.norm2(v) <= 100);
  }
}

TEST_CASE("LLL keeps the lattice") {
  std::mt19937 rng(3);
  for (int it = 0; it < 10; ++it) {
    IntLattice L = random_pd(rng, 4);
    Reduced r = lll_reduce(L);
    CHECK(abs(det(r.U)) == 1);
    CHECK(r.lattice.det() == L.det());
    CHECK(norm_counts(r.lattice, 20) == norm_counts(L, 20));
  }
}

TEST_CASE("successive minima") {
  auto m = successive_minima(IntLattice::diagonal({1, 4}));
  REQUIRE(m.size() == 2);
  CHECK(m[0] == 1);
  CHECK(m[1] == 4);
  BinaryMin b = min_binary_disc(IntLattice::diagonal({1, 4, 9}));
  CHECK(b.disc == 4);
  CHECK(b.d == doctest::Approx(2.0));
  // Minkowski: prod l_i^2 <= gamma_n^n det(Q-Gram)
  std::mt19937 rng(5);
  for (int it = 0; it < 10; ++it) {
    IntLattice L = random_pd(rng, 3);
    auto s = successive_minima(L);
    Rational prod = s[0] * s[1] * s[2];
    Rational detQ = Rational(L.det()) / 8;
    CHECK(prod <= 2 * detQ);  // gamma_3^3 = 2
    CHECK(s[0] <= s[1]);
    CHECK(s[1] <= s[2]);
  }
}

TEST_CASE("sublattices represent less") {
  IntLattice L = IntLattice::diagonal({1, 1, 2, 3});
  IntLattice S = L.sublattice({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}});
  auto a = norm_counts(L, 40), b = norm_counts(S, 40);
  for (size_t k = 0; k < a.size(); ++k) CHECK(b[k] <= a[k]);
}

TEST_CASE("square and prime counts") {
  IntLattice Z5 = IntLattice::diagonal({1, 1, 1, 1, 1});
  EnumReport e = enumerate(Z5, 50);
  CHECK(square_rep_count(Z5, 1, 10) == e.r(4) + e.r(9));
  CHECK(square_rep_count(Z5, 2, 50) == e.r(8) + e.r(18) + e.r(50));
  CHECK(prime_rep_count(Z5, 12) == e.r(2) + e.r(3) + e.r(5) + e.r(7) + e.r(11));
  PrimeDensity d = binary_prime_density(IntLattice::diagonal({1, 1}), 1, 50);
  CHECK(d.hits == d.total);
  CHECK(d.total == (int64_t)primes_upto(50).size());
}

TEST_CASE("T-sets") {
  TSetParams sq;
  CHECK(build_T_set(sq, 5, 10) == std::vector<int64_t>{4, 9});
  TSetParams qr;
  qr.kind = TSetParams::PrimeQR;
  for (int64_t q : build_T_set(qr, 5, 100)) {
    CHECK(is_prime(q));
    CHECK(legendre(q, 5) == 1);
    CHECK(q % 4 == 3);
  }
  TSetParams h;
  h.kind = TSetParams::Hilbert;
  h.field_disc = 8;
  h.C = 2;
  h.bad = {2};
  for (int64_t m : build_T_set(h, 5, 200)) {
    CHECK(m % 5 != 0);
    CHECK(vp(2, m) <= 2);
  }
}

TEST_CASE("cusp deviation of one-class genera") {
  CuspFit f = cusp_deviation(IntLattice::diagonal({1, 1, 1, 1, 1}), 1, 50);
  CHECK(f.used == 0);
  for (auto& row : f.rows) {
    REQUIRE(row.exact.has_value());
    CHECK(*row.exact == 0);
  }
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(enumerate(IntLattice({{0, 1}, {1, 0}}), 5), NotPositiveDefinite);
}

}
