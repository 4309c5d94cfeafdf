#include <cmath>
#include <random>

#include "doctest.h"
#include "ssint/crystal.hpp"
#include "ssint/density.hpp"

using namespace ssint;

namespace {

// #{v mod ell^a : Q(v) = m} ell^{a(1-rk)} by running over the whole box
Rational brute_density(int64_t ell, const IntLattice& L, int64_t m, int a) {
  int64_t q = ipow(ell, a);
  const int n = L.rank();
  int64_t tot = ipow(q, n), cnt = 0;
  IVec v(n);
  for (int64_t c = 0; c < tot; ++c) {
    int64_t x = c;
    for (int i = 0; i < n; ++i) {
      v[i] = x % q;
      x /= q;
    }
    if (mod((int64_t)(L.norm2(v) / 2) - m, q) == 0) ++cnt;
  }
  return Rational(cnt) / rpow(Rational(ell), (long)a * (n - 1));
}

IntLattice model_lattice(CrystalCase k, int p) {
  Residue c = is_superspecial(k) ? Residue{0} : Residue{0, 1};
  return IntLattice(build_model(k, p, is_superspecial(k) ? 2 : 4, 4, c).local_qform());
}

} // namespace

TEST_SUITE("quadform") {

TEST_CASE("kronecker") {
  CHECK(kronecker(-4, 1) == 1);
  CHECK(kronecker(-4, 3) == -1);
  CHECK(kronecker(12, 2) == 0);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(8, 7) == 1);
  CHECK_THROWS_AS(kronecker(2, 3), BadDiscriminant);
  CHECK_THROWS_AS(kronecker(0, 3), BadDiscriminant);
  // agrees with Legendre at odd primes
  for (int64_t D : {-3, -4, 5, 8, 12, -20, 21})
    for (int64_t q : primes_upto(60))
      if (q > 2) CHECK(kronecker(D, q) == legendre(mod(D, q), q));
}

TEST_CASE("twisted divisor sums") {
  CHECK(sigma_s(1, -1, -4) == 1);
  for (int64_t q : {3, 5, 7, 11}) CHECK(sigma_s(q, -1, -4) == 1 + Rational(kronecker(-4, q), q));
  CHECK(sigma_s(4, -3) == rat(73, 64));
}

TEST_CASE("densities from counting") {
  CHECK(local_density(5, IntLattice::diagonal({1, 1}), 1) == rat(4, 5));
  // x^2 + y^2 never hits 3 mod 4
  CHECK(local_density(2, IntLattice::diagonal({1, 1}), 3) == 0);
  std::mt19937 rng(5);
  int done = 0;
  while (done < 60) {
    int n = 1 + (int)(rng() % 3);
    int64_t ell = std::vector<int64_t>{2, 3, 5}[rng() % 3];
    IMat B(n, IVec(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        int64_t x = (int64_t)(rng() % 13) - 6;
        B[i][j] = B[j][i] = i == j ? 2 * x : x;
      }
    IntLattice L(B);
    if (L.det() == 0) continue;
    int64_t m = 1 + (int64_t)(rng() % 12);
    int a = density_exponent(ell, m);
    if (std::pow((double)ipow(ell, a), n) > 2e6) continue;
    CAPTURE(ell);
    CAPTURE(m);
    CHECK(local_density(ell, L, m) == brute_density(ell, L, m, a));
    ++done;
  }
}

TEST_CASE("density is stable past the exponent") {
  std::mt19937 rng(9);
  for (int it = 0; it < 30; ++it) {
    int64_t ell = std::vector<int64_t>{2, 3, 5, 7}[rng() % 4];
    IVec d(3);
    for (auto& x : d) x = (1 + (int64_t)(rng() % 6)) * (rng() % 2 ? ell : 1);
    IntLattice L = IntLattice::diagonal(d);
    int64_t m = 1 + (int64_t)(rng() % 50);
    LocalLattice LL = local_decompose(L, ell);
    int a = density_exponent(ell, m);
    CHECK(local_density_at(LL, m, a) == local_density_at(LL, m, a + 2));
  }
}

TEST_CASE("case lattices") {
  for (int p : {5, 7}) {
    const Rational q(p);
    IntLattice S = model_lattice(CrystalCase::SiegelSuperspecial, p);
    CHECK(hanke_density(p, S, p) == 1 + 1 / (q * q * q));
    CHECK(local_density(p, S, 2 * p) == 1 + 1 / (q * q * q));
    IntLattice H = model_lattice(CrystalCase::HilbertInertSuperspecial, p);
    CHECK(hanke_density(p, H, 1) == 1 - 1 / q);
    IntLattice Sp = model_lattice(CrystalCase::HilbertSplit, p);
    CHECK(hanke_density(p, Sp, 2) == 1 + 1 / q);
    IntLattice G = model_lattice(CrystalCase::HilbertInertSupergeneric, p);
    CHECK(local_density(p, G, 1) == 0);
    CHECK_THROWS_AS(hanke_density(p, S, p * p), UnsupportedValuation);
  }
}

TEST_CASE("diagonalization over Z_p") {
  IntLattice D = IntLattice::diagonal({1, 5, 3});
  LocalLattice d = diagonalize_Zp(D, 5);
  auto a = d.diagonal();
  REQUIRE(a.size() == 3);
  CHECK(a[0] * a[1] * a[2] == Rational(15));
  // hyperbolic plane: two units with -det a square class
  LocalLattice h = diagonalize_Zp(IntLattice({{0, 1}, {1, 0}}), 5);
  auto b = h.diagonal();
  CHECK(vp(5, b[0]) == 0);
  CHECK(vp(5, b[1]) == 0);
  Rational minus = -b[0] * b[1];
  Integer nd = minus.get_num() * minus.get_den();
  CHECK(legendre(mod(nd.get_si(), 5), 5) == 1);
  // Siegel superspecial: three units, two of valuation one
  auto s = diagonalize_Zp(model_lattice(CrystalCase::SiegelSuperspecial, 5), 5).diagonal();
  int units = 0, ones = 0;
  for (auto& x : s) (vp(5, x) == 0 ? units : ones) += 1;
  CHECK(units == 3);
  CHECK(ones == 2);
  CHECK(diagonalize_Zp(model_lattice(CrystalCase::SiegelSuperspecial, 5), 5).det_val() == 2);
}

TEST_CASE("hanke agrees with counting on random diagonal lattices") {
  std::mt19937_64 rng(2024);
  int n_checked = 0;
  while (n_checked < 120) {
    int64_t p = std::vector<int64_t>{3, 5, 7, 11, 13}[rng() % 5];
    int rk = 1 + (int)(rng() % 5);
    IVec d(rk);
    for (auto& x : d) {
      x = 1 + (int64_t)(rng() % (p - 1));
      if (rng() % 3 == 0) x *= p;
      if (rng() % 2) x = -x;
    }
    int64_t m = 1 + (int64_t)(rng() % 200);
    if (vp(p, m) > 1) continue;
    IntLattice L = IntLattice::diagonal(d);
    CAPTURE(p);
    CAPTURE(m);
    CHECK(hanke_density(p, L, m) == local_density(p, L, m));
    ++n_checked;
  }
}

TEST_CASE("density bounds on index p sublattices") {
  std::mt19937_64 rng(17);
  for (int p : {5, 7}) {
    for (CrystalCase k : {CrystalCase::HilbertInertSuperspecial, CrystalCase::SiegelSuperspecial,
                          CrystalCase::SiegelSupergeneric}) {
      IntLattice L = model_lattice(k, p);
      const int n = L.rank();
      for (int it = 0; it < 6; ++it) {
        IMat basis(n, IVec(n, 0));
        for (int i = 0; i < n; ++i) basis[i][i] = 1;
        int r = (int)(rng() % n);
        for (int j = 0; j < n; ++j) basis[r][j] = (int64_t)(rng() % p);
        basis[r][r] = p;
        IntLattice S = L.sublattice(basis);
        for (int64_t m : {1, 2, 3, 4, 6}) CHECK(local_density(p, S, m) <= 2);
        if (is_siegel(k))
          for (int64_t m : {p, 2 * p, 3 * p}) CHECK(local_density(p, S, m) <= 2 + 2 * p);
      }
    }
  }
}

}
