#include "ssint/eisenstein.hpp"

#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace ssint {

namespace {

const long double kPi = acosl(-1.0L);
constexpr long double kU = LDBL_EPSILON;

// psi'(x) for x > 0 with a bound on the truncation error of the expansion
std::pair<long double, long double> trigamma(long double x, int shift) {
  static const long double B[] = {1.0L / 6,         -1.0L / 30,      1.0L / 42,
                                  -1.0L / 30,       5.0L / 66,       -691.0L / 2730,
                                  7.0L / 6,         -3617.0L / 510,  43867.0L / 798,
                                  -174611.0L / 330};
  long double s = 0;
  for (int k = 0; k < shift; ++k) s += 1.0L / ((x + k) * (x + k));
  const long double y = x + shift;
  const long double iy = 1.0L / y, iy2 = iy * iy;
  long double p = iy * iy2;  // y^{-3}
  long double asym = iy + 0.5L * iy2;
  for (int k = 0; k < 9; ++k) {
    asym += B[k] * p;
    p *= iy2;
  }
  // first omitted term bounds the remainder
  return {s + asym, std::fabs(B[9]) * p};
}

long double rational_ld(const Rational& r) {
  return (long double)r.get_d() +
         (long double)Rational(r - Rational(r.get_d())).get_d();
}

Rational imprimitive_factor(int64_t D0, int64_t g) {
  Rational c = 1;
  for (auto [q, e] : factor(g)) {
    (void)e;
    int chi = kronecker(D0, q);
    if (chi) c *= 1 - Rational(chi, q * q);
  }
  return c;
}

Interval hurwitz_L2(int64_t D0, long double tol) {
  const int64_t q = std::llabs(D0);
  int shift = 16;
  for (;;) {
    long double sum = 0, abs_sum = 0, trunc = 0;
    for (int64_t a = 1; a <= q; ++a) {
      int chi = q == 1 ? 1 : kronecker(D0, a);
      if (!chi) continue;
      auto [v, e] = trigamma((long double)a / q, shift);
      sum += chi * v;
      abs_sum += v;
      trunc += e;
    }
    const long double q2 = (long double)q * q;
    Interval r;
    r.mid = sum / q2;
    r.rad = trunc / q2 + (q + 2.0L * shift + 40) * kU * abs_sum / q2;
    if (r.rad <= tol || shift >= 1024) return r;
    shift *= 4;
  }
}

Interval direct_L2(int64_t D, long double tol) {
  if (D == 1) {
    // zeta(2): the tail lies between 1/(N+1) and 1/N
    int64_t N = (int64_t)std::ceil(std::sqrt(1.0L / (2 * tol))) + 1;
    long double s = 0;
    for (int64_t n = N; n >= 1; --n) s += 1.0L / ((long double)n * n);
    Interval r;
    long double lo = 1.0L / (N + 1), hi = 1.0L / N;
    r.mid = s + (lo + hi) / 2;
    r.rad = (hi - lo) / 2 + N * kU * 2;
    return r;
  }
  const int64_t q = std::llabs(D);
  int64_t N = (int64_t)std::ceil(std::sqrt((long double)q / tol));
  long double s = 0;
  for (int64_t n = N; n >= 1; --n) {
    int chi = kronecker(D, n);
    if (chi) s += chi / ((long double)n * n);
  }
  Interval r;
  r.mid = s;
  r.rad = (long double)q / ((long double)(N + 1) * (N + 1)) + N * kU * 2;
  return r;
}

} // namespace

Interval dirichlet_L2(int64_t D, long double tol, LMethod method) {
  kronecker(D, 1);  // validates D
  if (method == LMethod::Direct) return direct_L2(D, tol);
  auto [D0, g] = fundamental_part(D);
  static std::mutex mu;
  static std::map<std::pair<int64_t, long double>, Interval> cache;
  Interval base;
  bool have = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({D0, tol});
    if (it != cache.end()) {
      base = it->second;
      have = true;
    }
  }
  if (!have) {
    base = hurwitz_L2(D0, tol);
    std::lock_guard<std::mutex> lock(mu);
    cache[{D0, tol}] = base;
  }
  if (g == 1) return base;
  long double c = rational_ld(imprimitive_factor(D0, g));
  Interval r;
  r.mid = base.mid * c;
  r.rad = base.rad * c + 4 * kU * std::fabs(r.mid);
  return r;
}

Interval SymValue::eval(long double tol) const {
  long double base = rational_ld(coef) * powl(kPi, pi_pow) * sqrtl(rational_ld(sqrt_arg));
  Interval r;
  if (L_exp == 0 || coef == 0) {
    r.mid = base;
    r.rad = 16 * kU * std::fabs(base);
    return r;
  }
  Interval L = dirichlet_L2(L_disc, tol);
  long double a = base * powl(L.lo(), L_exp), b = base * powl(L.hi(), L_exp);
  r.mid = (a + b) / 2;
  r.rad = std::fabs(a - b) / 2 + 32 * kU * std::fabs(r.mid);
  return r;
}

std::string SymValue::str() const {
  std::ostringstream os;
  os << to_string(coef);
  if (pi_pow) os << "*pi^" << pi_pow;
  if (sqrt_arg != 1) os << "*sqrt(" << to_string(sqrt_arg) << ")";
  if (L_exp) os << "*L(2,chi_" << L_disc << ")^" << L_exp;
  return os.str();
}

long double SqrtRational::approx() const { return rational_ld(coef) * sqrtl(rational_ld(arg)); }

std::string SqrtRational::str() const {
  if (arg == 1) return to_string(coef);
  return to_string(coef) + "*sqrt(" + to_string(arg) + ")";
}

int compare(const SqrtRational& a, const SqrtRational& b) {
  int sa = sgn(a.coef), sb = sgn(b.coef);
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  Rational x = a.coef * a.coef * a.arg, y = b.coef * b.coef * b.arg;
  int c = cmp(x, y);
  return sa > 0 ? (c > 0) - (c < 0) : (c < 0) - (c > 0);
}

std::pair<int64_t, int64_t> split_square(int64_t m, const Integer& det) {
  if (m < 1) throw InvalidParameter("m must be positive");
  Integer twodet = 2 * det;
  int64_t f = 1;
  for (auto [q, e] : factor(m)) {
    if (mpz_divisible_ui_p(twodet.get_mpz_t(), (unsigned long)q)) continue;
    f *= ipow(q, e / 2);
  }
  return {m / (f * f), f};
}

Rational siegel_divisor_sum(int64_t D, int64_t f) {
  Rational s = 0;
  for (auto d : divisors(f)) {
    int mu = mobius(d);
    if (!mu) continue;
    int chi = kronecker(D, d);
    if (!chi) continue;
    s += Rational(mu * chi, d * d) * sigma_s(f / d, -3);
  }
  return s;
}

namespace {

std::vector<int64_t> bad_primes(const Integer& det) {
  std::vector<int64_t> out = {2};
  Integer a = abs(det);
  if (!a.fits_slong_p()) throw InvalidParameter("determinant too large");
  for (auto [q, e] : factor(a.get_si())) {
    (void)e;
    if (q != 2) out.push_back(q);
  }
  return out;
}

// B_{2,chi} for the even character chi_D0, D0 > 0 fundamental:
// L(2, chi) = pi^2 B sqrt(D0) / D0^2
Rational bernoulli2(int64_t D0) {
  i128 s2 = 0, s1 = 0;
  for (int64_t a = 1; a < D0; ++a) {
    int chi = kronecker(D0, a);
    s2 += (i128)chi * a * a;
    s1 += chi * a;
  }
  Rational b(Integer(to_string(s2)), Integer((long)D0));
  b.canonicalize();
  return b - Rational(Integer(to_string(s1)));
}

// sqrt(n/d) -> c sqrt(r) with r squarefree integer
void pull_squares(SymValue& v) {
  Integer n = v.sqrt_arg.get_num() * v.sqrt_arg.get_den(), d = v.sqrt_arg.get_den();
  if (!n.fits_slong_p()) return;
  int64_t rest = 1, out = 1;
  for (auto [q, e] : factor(n.get_si())) {
    out *= ipow(q, e / 2);
    if (e % 2) rest *= q;
  }
  Rational c(Integer((long)out), d);
  c.canonicalize();
  v.coef *= c;
  v.sqrt_arg = Rational((long)rest);
}

void fold_L(SymValue& v) {
  if (v.L_exp == 0) return;
  if (v.L_disc == 1) {
    // L(2, trivial) = pi^2 / 6
    v.coef *= rpow(Rational(1, 6), v.L_exp);
    v.pi_pow += 2 * v.L_exp;
    v.L_exp = 0;
  } else if (v.L_disc > 0) {
    const Rational D0((long)v.L_disc);
    v.coef *= rpow(bernoulli2(v.L_disc) / (D0 * D0), v.L_exp);
    v.sqrt_arg *= rpow(D0, v.L_exp);
    v.pi_pow += 2 * v.L_exp;
    v.L_exp = 0;
  }
  pull_squares(v);
}

EisResult rank4(const IntLattice& L, int64_t m, int sgn_) {
  EisResult r;
  r.m = m;
  r.m0 = m;
  const Integer det = L.det();
  if (det == 0) throw InvalidParameter("degenerate lattice");
  const int64_t D = 4 * det.get_si();
  r.D = D;
  r.divisor_sum = sigma_s(m, -1, D);
  Rational prod = 1;
  for (auto ell : bad_primes(det)) {
    Rational d = local_density(ell, L, m);
    r.deltas.push_back({ell, d});
    prod *= d;
  }
  auto [D0, g] = fundamental_part(D);
  SymValue v;
  v.coef = Rational(4 * sgn_) * m * r.divisor_sum * prod / imprimitive_factor(D0, g);
  v.pi_pow = 2;
  v.sqrt_arg = Rational(1) / Rational(abs(det));
  v.L_disc = D0;
  v.L_exp = -1;
  fold_L(v);
  r.value = v;
  r.numeric = v.eval();
  r.sign = sgn(v.coef);
  return r;
}

EisResult rank5(const IntLattice& L, int64_t m, int sgn_) {
  EisResult r;
  r.m = m;
  const Integer det = L.det();
  if (det == 0) throw InvalidParameter("degenerate lattice");
  auto [m0, f] = split_square(m, det);
  r.m0 = m0;
  r.f = f;
  // det is det B for Q(v) = v^T B v / 2; with this convention the character
  // discriminant is +2 m0 det (checked against r(m) of sums of five squares)
  const int64_t D = 2 * m0 * det.get_si();
  r.D = D;
  r.divisor_sum = siegel_divisor_sum(D, f);
  Rational prod = 1;
  for (auto ell : bad_primes(det)) {
    Rational d = local_density(ell, L, m);
    r.deltas.push_back({ell, d});
    Rational l4 = Rational(ell * ell) * (ell * ell);
    prod *= d / (1 - 1 / l4);
  }
  auto [D0, g] = fundamental_part(D);
  SymValue v;
  v.coef = Rational(480 * sgn_) * m * r.divisor_sum * prod * imprimitive_factor(D0, g);
  v.pi_pow = -2;
  v.sqrt_arg = Rational(2 * m) / Rational(abs(det));
  v.L_disc = D0;
  v.L_exp = 1;
  fold_L(v);
  r.value = v;
  r.numeric = v.eval();
  r.sign = sgn(v.coef);
  return r;
}

} // namespace

EisResult q_L_hilbert(const IntLattice& L, int64_t m) {
  if (L.rank() != 4) throw ShapeMismatch("q_L_hilbert needs a rank 4 lattice");
  return rank4(L, m, -1);
}

EisResult q_L_siegel(const IntLattice& L, int64_t m) {
  if (L.rank() != 5) throw ShapeMismatch("q_L_siegel needs a rank 5 lattice");
  return rank5(L, m, -1);
}

EisResult q_Lppp(const IntLattice& L, int64_t m) {
  L.require_positive_definite();
  if (L.rank() == 4) return rank4(L, m, 1);
  if (L.rank() == 5) return rank5(L, m, 1);
  throw ShapeMismatch("q_Lppp needs rank 4 or 5");
}

SqrtRational ratio_bound(RatioClause clause, int64_t p, const Integer& idx,
                         bool superspecial_index_p) {
  SqrtRational b;
  const Rational P(p);
  switch (clause) {
    case RatioClause::SuperspecialOrHilbert: b.coef = 1 / (P - 1); break;
    case RatioClause::SiegelSupergeneric: b.coef = 2 / (P * P - 1); break;
    case RatioClause::PrimeToM:
      b.coef = 2 / (1 - 1 / (P * P));
      b.arg = 1 / Rational(idx);
      break;
    case RatioClause::SiegelPDividesM:
      if (superspecial_index_p) {
        b.coef = 4 / (P * P - 1);
      } else {
        b.coef = 2 * P / (1 - 1 / P);
        b.arg = 1 / Rational(idx);
      }
      break;
  }
  return b;
}

SqrtRational exact_ratio(const EisResult& qppp, const EisResult& qL) {
  const SymValue &a = qppp.value, &b = qL.value;
  if (b.coef == 0) throw DivisionByZero("q_L(m) = 0");
  if (a.coef == 0) return SqrtRational{0, 1};
  if (a.pi_pow != b.pi_pow || a.L_exp != b.L_exp || (a.L_exp && a.L_disc != b.L_disc))
    throw InvalidParameter("coefficients are not comparable exactly");
  SqrtRational r;
  r.coef = a.coef / (-b.coef);
  r.arg = a.sqrt_arg / b.sqrt_arg;
  return r;
}

bool check_ratio(const EisResult& qppp, const EisResult& qL, const SqrtRational& bound) {
  return compare(exact_ratio(qppp, qL), bound) <= 0;
}

} // namespace ssint
