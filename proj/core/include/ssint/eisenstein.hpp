#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ssint/density.hpp"

namespace ssint {

// midpoint and rigorous radius
struct Interval {
  long double mid = 0, rad = 0;
  long double lo() const { return mid - rad; }
  long double hi() const { return mid + rad; }
  bool contains(long double x) const { return lo() <= x && x <= hi(); }
};

enum class LMethod {
  Hurwitz,  // q^{-2} sum_a chi(a) psi'(a/q), Euler-Maclaurin remainder bounded
  Direct,   // partial sum with a partial-summation tail bound
};

// L(2, chi_D) for the Kronecker character of the discriminant D
Interval dirichlet_L2(int64_t D, long double tol = 1e-12L, LMethod method = LMethod::Hurwitz);

// coef * pi^pi_pow * sqrt(sqrt_arg) * L(2, chi_{L_disc})^{L_exp}, L_disc fundamental.
// L-values of even characters are folded into the other factors, so only odd
// characters survive in L_disc.
struct SymValue {
  Rational coef = 0;
  int pi_pow = 0;
  Rational sqrt_arg = 1;
  int64_t L_disc = 1;
  int L_exp = 0;
  Interval eval(long double tol = 1e-12L) const;
  std::string str() const;
  bool is_rational() const { return L_exp == 0 && pi_pow == 0 && sqrt_arg == 1; }
};

// c * sqrt(x), compared exactly
struct SqrtRational {
  Rational coef = 0;
  Rational arg = 1;
  long double approx() const;
  std::string str() const;
};
int compare(const SqrtRational& a, const SqrtRational& b);

struct EisResult {
  int64_t m = 0, m0 = 0, f = 1;
  int64_t D = 0;  // discriminant of the character in the formula
  std::vector<std::pair<int64_t, Rational>> deltas;
  Rational divisor_sum = 1;  // sigma_{-1}(m, chi) (rank 4) or the d | f sum (rank 5)
  SymValue value;
  Interval numeric;
  int sign = 0;  // sign of the exact value
};

// Eisenstein coefficient for a signature (2,2) lattice (sign -)
EisResult q_L_hilbert(const IntLattice& L, int64_t m);
// Eisenstein coefficient for a signature (3,2) lattice (sign -)
EisResult q_L_siegel(const IntLattice& L, int64_t m);
// Siegel-Weil coefficient of a positive definite rank 4 or 5 lattice (sign +)
EisResult q_Lppp(const IntLattice& L, int64_t m);

// sum_{d | f} mu(d) chi_D(d) d^{-2} sigma_{-3}(f/d)
Rational siegel_divisor_sum(int64_t D, int64_t f);
// m = m0 f^2 with gcd(f, 2 det) = 1 and v_l(m0) <= 1 for l not dividing 2 det
std::pair<int64_t, int64_t> split_square(int64_t m, const Integer& det);

enum class RatioClause {
  SuperspecialOrHilbert = 1,  // 1/(p-1)
  SiegelSupergeneric = 2,     // 2/(p^2-1)
  PrimeToM = 3,               // 2/(sqrt(idx)(1-p^{-2}))
  SiegelPDividesM = 4,        // 2p/(sqrt(idx)(1-p^{-1})), or 4/(p^2-1)
};

// idx = |(L''' (x) Z_p)^v / (L''' (x) Z_p)|
SqrtRational ratio_bound(RatioClause clause, int64_t p, const Integer& idx = 1,
                         bool superspecial_index_p = false);
// q_{L'''}(m) / (-q_L(m)) as an exact c * sqrt(x)
SqrtRational exact_ratio(const EisResult& qppp, const EisResult& qL);
bool check_ratio(const EisResult& qppp, const EisResult& qL, const SqrtRational& bound);

} // namespace ssint
