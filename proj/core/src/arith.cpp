#include "ssint/rational.hpp"
#include "ssint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace ssint {

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw ParseError("bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

Rational rpow(const Rational& b, long e) {
  Rational r = 1;
  Rational base = e < 0 ? Rational(1) / b : b;
  for (long i = 0; i < std::labs(e); ++i) r *= base;
  return r;
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int vp(int64_t p, const Integer& n) {
  if (n == 0) return 1 << 28;
  Integer t = abs(n);
  int v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), (unsigned long)p)) {
    t /= p;
    ++v;
  }
  return v;
}

int vp(int64_t p, int64_t n) {
  if (n == 0) return 1 << 28;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int vp(int64_t p, const Rational& r) {
  if (r == 0) return 1 << 28;
  return vp(p, r.get_num()) - vp(p, r.get_den());
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

std::vector<int64_t> primes_upto(int64_t n) {
  std::vector<int64_t> out;
  if (n < 2) return out;
  std::vector<char> sieve(n + 1, 1);
  sieve[0] = sieve[1] = 0;
  for (int64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (int64_t j = i * i; j <= n; j += i) sieve[j] = 0;
  }
  return out;
}

std::vector<std::pair<int64_t, int>> factor(int64_t n) {
  std::vector<std::pair<int64_t, int>> f;
  n = n < 0 ? -n : n;
  for (int64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    f.push_back({q, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> d{1};
  for (auto [q, e] : factor(n)) {
    size_t k = d.size();
    int64_t qq = 1;
    for (int i = 1; i <= e; ++i) {
      qq *= q;
      for (size_t j = 0; j < k; ++j) d.push_back(d[j] * qq);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

int mobius(int64_t n) {
  int s = 1;
  for (auto [q, e] : factor(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

int64_t mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

int64_t powmod(int64_t b, int64_t e, int64_t m) {
  i128 r = 1 % m, x = mod(b, m);
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return (int64_t)r;
}

int64_t invmod(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw DivisionByZero("not invertible modulo " + std::to_string(m));
  return mod(x, m);
}

int legendre(int64_t a, int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int64_t smallest_nonresidue(int64_t p) {
  for (int64_t a = 2; a < p; ++a)
    if (legendre(a, p) == -1) return a;
  throw InvalidParameter("no non-residue mod " + std::to_string(p));
}

int64_t isqrt(int64_t n) {
  if (n < 0) throw InvalidParameter("isqrt of negative");
  int64_t r = (int64_t)std::sqrt((double)n);
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

i128 isqrt128(i128 n) {
  if (n < 0) throw InvalidParameter("isqrt of negative");
  i128 r = (i128)std::sqrt((long double)n);
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

} // namespace ssint
