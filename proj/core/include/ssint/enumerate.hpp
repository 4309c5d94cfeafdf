#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ssint/eisenstein.hpp"
#include "ssint/quadform.hpp"

namespace ssint {

// LLL-reduced Gram (delta = 3/4) and the unimodular U with rows = new basis
struct Reduced {
  IntLattice lattice;
  IMat U;
};
Reduced lll_reduce(const IntLattice& L);

// Visit every v with Q(v) <= M (v and -v, and 0). fn gets v in the original
// coordinates and 2Q(v). Bounds are exact integer arithmetic.
void for_each_short_vector(const IntLattice& L, const Rational& M,
                           const std::function<void(const IVec&, i128)>& fn);
std::vector<IVec> short_vectors(const IntLattice& L, const Rational& M);

// c[n] = #{v : 2Q(v) = n}, 0 <= n <= 2M
std::vector<uint64_t> norm_counts(const IntLattice& L, int64_t M);

struct BinaryMin {
  Rational disc;  // d^2 = det of the Q-Gram of P
  long double d = 0;
  IMat basis;     // two rows spanning P
};

struct EnumReport {
  std::string label;
  int64_t M = 0;
  std::vector<uint64_t> counts2;  // indexed by 2Q
  std::vector<Rational> minima2;  // l_i^2
  std::optional<BinaryMin> binary;
  std::vector<IVec> vectors;      // only when asked for

  // r(m) = #{v : Q(v) = m}
  uint64_t r(int64_t m) const;
  long double minimum(int i) const;
};

void require_enumerable(const IntLattice& L);
EnumReport enumerate(const IntLattice& L, int64_t M, bool keep_vectors = false,
                     bool with_minima = true);

// l_i^2 for i = 1..rank, exact
std::vector<Rational> successive_minima(const IntLattice& L);
BinaryMin min_binary_disc(const IntLattice& L);

// sum of r(D l^2) over primes l with D l^2 <= M
uint64_t square_rep_count(const IntLattice& L, int64_t D, int64_t M);
// sum of r(q) over primes q <= M
uint64_t prime_rep_count(const IntLattice& L, int64_t M);

struct PrimeDensity {
  int64_t hits = 0, total = 0;
  double fraction() const { return total ? double(hits) / double(total) : 0.0; }
};
// primes l <= X with D l^2 represented by the binary lattice P
PrimeDensity binary_prime_density(const IntLattice& P, int64_t D, int64_t X);

struct TSetParams {
  enum Kind { Square, PrimeQR, Hilbert } kind = Square;
  int64_t D = 1;                 // Square
  int64_t N = 0;                 // Hilbert: m > N
  int C = 0;                     // Hilbert: v_l(m) <= C for l in bad
  std::vector<int64_t> bad;      // Hilbert: primes dividing 2 det L
  int64_t field_disc = 0;        // Hilbert: discriminant of F
};
std::vector<int64_t> build_T_set(const TSetParams& t, int64_t p, int64_t M);

struct Deviation {
  int64_t m = 0;
  uint64_t r = 0;
  Interval q;
  std::optional<Rational> exact;  // r - q when q is rational
  long double G = 0, rad = 0;
};
struct CuspFit {
  std::vector<Deviation> rows;
  double slope = 0, intercept = 0;
  int used = 0;  // terms with |G| above the numerical radius
  long double max_abs = 0;
};
// G(m) = r(m) - q_Lppp(m) for m in [m_lo, m_hi], least-squares slope of
// log|G| against log m over the nonzero terms
CuspFit cusp_deviation(const IntLattice& L, int64_t m_lo, int64_t m_hi);

} // namespace ssint
