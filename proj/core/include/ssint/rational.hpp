#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace ssint {

using Rational = mpq_class;
using Integer = mpz_class;
using i128 = __int128;

inline Rational rat(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// "num/den", or "num" for integers
std::string to_string(const Rational& r);
std::string to_string(i128 v);
Rational parse_rational(const std::string& s);

Rational rpow(const Rational& b, long e);
int64_t ipow(int64_t b, int e);
int vp(int64_t p, const Integer& n);
int vp(int64_t p, int64_t n);
int vp(int64_t p, const Rational& r);

bool is_prime(int64_t n);
std::vector<int64_t> primes_upto(int64_t n);
// prime factorization as (prime, exponent)
std::vector<std::pair<int64_t, int>> factor(int64_t n);
std::vector<int64_t> divisors(int64_t n);
int mobius(int64_t n);

int64_t mod(int64_t a, int64_t m);
int64_t powmod(int64_t b, int64_t e, int64_t m);
int64_t invmod(int64_t a, int64_t m);
int legendre(int64_t a, int64_t p);
int64_t smallest_nonresidue(int64_t p);
int64_t isqrt(int64_t n);
i128 isqrt128(i128 n);

} // namespace ssint
