#include "ssint/padic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <tuple>

namespace ssint {

namespace {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  if (m <= (1ull << 32)) return (a * b) % m;
  return (uint64_t)((unsigned __int128)a * b % m);
}
inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t m) {
  uint64_t s = a + b;
  return s >= m ? s - m : s;
}
inline uint64_t submod(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : a + m - b;
}
inline uint64_t reduce_signed(int64_t a, uint64_t m) {
  int64_t r = a % (int64_t)m;
  return r < 0 ? (uint64_t)(r + (int64_t)m) : (uint64_t)r;
}

using Coeffs = std::array<uint64_t, 4>;

void poly_mul(const PAdicParams& P, const Coeffs& a, const Coeffs& b, Coeffs& out,
              uint64_t m) {
  const int d = P.d;
  if (d == 1) {
    out[0] = mulmod(a[0] % m, b[0] % m, m);
    return;
  }
  uint64_t c[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < d; ++i) {
    uint64_t ai = a[i] % m;
    if (!ai) continue;
    for (int j = 0; j < d; ++j) {
      uint64_t bj = b[j] % m;
      if (bj) c[i + j] = addmod(c[i + j], mulmod(ai, bj, m), m);
    }
  }
  for (int k = 2 * d - 2; k >= d; --k) {
    uint64_t coef = c[k];
    if (!coef) continue;
    for (int i = 0; i < d; ++i) {
      uint64_t fi = reduce_signed(P.modulus[i], m);
      if (fi) c[k - d + i] = submod(c[k - d + i], mulmod(coef, fi, m), m);
    }
  }
  for (int i = 0; i < 4; ++i) out[i] = i < d ? c[i] : 0;
}

bool divides_mod_p(const std::vector<int64_t>& f, const std::vector<int64_t>& h, int64_t p) {
  // h monic; does h divide f over F_p (f monic given as coefficient list low..high)
  std::vector<int64_t> r(f);
  int dh = (int)h.size() - 1;
  for (int k = (int)r.size() - 1; k >= dh; --k) {
    int64_t c = mod(r[k], p);
    if (!c) continue;
    for (int i = 0; i <= dh; ++i) r[k - dh + i] = mod(r[k - dh + i] - c * h[i], p);
  }
  for (int i = 0; i < dh; ++i)
    if (mod(r[i], p)) return false;
  return true;
}

bool irreducible_mod_p(const std::vector<int64_t>& f, int64_t p) {
  int d = (int)f.size() - 1;
  for (int k = 1; k <= d / 2; ++k) {
    int64_t total = ipow(p, k);
    for (int64_t code = 0; code < total; ++code) {
      std::vector<int64_t> h(k + 1);
      int64_t c = code;
      for (int i = 0; i < k; ++i) {
        h[i] = c % p;
        c /= p;
      }
      h[k] = 1;
      if (divides_mod_p(f, h, p)) return false;
    }
  }
  return true;
}

std::string join_poly(const Coeffs& c, int d) {
  std::string s;
  for (int i = 0; i < d; ++i) {
    if (c[i] == 0 && !(i == 0 && std::all_of(c.begin(), c.begin() + d, [](uint64_t x) { return x == 0; })))
      continue;
    if (!s.empty()) s += " + ";
    s += std::to_string(c[i]);
    if (i == 1) s += "*g";
    if (i > 1) s += "*g^" + std::to_string(i);
  }
  return s;
}

// parse "c0 + c1*g - c2*g^2" style polynomial; coefficients may be signed integers
std::vector<int64_t> parse_poly(const std::string& in, int d) {
  std::vector<int64_t> c(d, 0);
  std::string s;
  for (char ch : in)
    if (!std::isspace((unsigned char)ch)) s.push_back(ch);
  size_t i = 0;
  if (s.empty()) throw ParseError("empty polynomial");
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    int64_t coef = 1;
    bool have = false;
    size_t j = i;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
    if (j > i) {
      coef = std::stoll(s.substr(i, j - i));
      have = true;
      i = j;
    }
    int e = 0;
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 'g') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        size_t k = i;
        while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
        if (k == i) throw ParseError("bad exponent in '" + in + "'");
        e = std::stoi(s.substr(i, k - i));
        i = k;
      }
    } else if (!have) {
      throw ParseError("bad term in '" + in + "'");
    }
    if (e >= d) throw ParseError("degree too large in '" + in + "'");
    c[e] += sign * coef;
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw ParseError("junk in '" + in + "'");
  }
  return c;
}

} // namespace

PAdicParams::PAdicParams(int p_, int d_, int M_) : p(p_), d(d_), M(M_) {
  if (p < 3 || !is_prime(p)) throw InvalidParameter("p must be an odd prime");
  if (d < 1 || d > 4) throw InvalidParameter("degree d must be in 1..4");
  if (M < 1) throw InvalidParameter("precision M must be >= 1");
  pw.assign(M + 1, 1);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= M; ++i) {
    acc *= (unsigned)p;
    if (acc >= ((unsigned __int128)1 << 62)) throw InvalidParameter("p^M must be below 2^62");
    pw[i] = (uint64_t)acc;
  }
  eps = smallest_nonresidue(p);

  if (d == 1) {
    modulus = {0};
  } else if (d == 2) {
    // g^2 = eps exactly, so g itself is the square root lambda
    modulus = {-eps, 0};
  } else {
    int64_t total = ipow(p, d);
    for (int64_t code = 0; code < total; ++code) {
      std::vector<int64_t> f(d + 1);
      int64_t c = code;
      for (int i = 0; i < d; ++i) {
        f[i] = c % p;
        c /= p;
      }
      f[d] = 1;
      if (irreducible_mod_p(f, p)) {
        modulus.assign(f.begin(), f.begin() + d);
        break;
      }
    }
  }

  sigma_pow.assign(d, Coeffs{});
  sigma_pow[0][0] = 1;
  if (d == 1) return;

  // Hensel-lift the root of the modulus congruent to g^p
  auto gres = Residue(d, 0);
  gres[1] = 1;
  Residue s0 = residue_pow(*this, gres, (uint64_t)p);
  PAdic s = PAdic::make(this, 0, s0, M);
  auto f_at = [&](const PAdic& x) {
    PAdic r = x.pow(d);
    PAdic xi = PAdic::from_int(this, 1);
    for (int i = 0; i < d; ++i) {
      r += PAdic::from_int(this, modulus[i]) * xi;
      xi *= x;
    }
    return r;
  };
  auto df_at = [&](const PAdic& x) {
    PAdic r = PAdic::from_int(this, d) * x.pow(d - 1);
    PAdic xi = PAdic::from_int(this, 1);
    for (int i = 1; i < d; ++i) {
      r += PAdic::from_int(this, i * modulus[i]) * xi;
      xi *= x;
    }
    return r;
  };
  for (int it = 0; it < M + 2; ++it) {
    PAdic fs = f_at(s);
    if (fs.is_zero()) break;
    s = s - fs * df_at(s).inv();
  }
  PAdic sj = PAdic::from_int(this, 1);
  for (int j = 1; j < d; ++j) {
    sj *= s;
    sigma_pow[j] = sj.unit();
  }

  if (d % 2 == 0) {
    has_lambda = true;
    if (d == 2) {
      lambda = Coeffs{0, 1, 0, 0};
    } else {
      Residue root;
      int64_t total = ipow(p, d);
      Residue ep(d, 0);
      ep[0] = eps;
      for (int64_t code = 1; code < total && root.empty(); ++code) {
        Residue r(d);
        int64_t c = code;
        for (int i = 0; i < d; ++i) {
          r[i] = c % p;
          c /= p;
        }
        if (residue_mul(*this, r, r) == ep) root = r;
      }
      PAdic l = PAdic::make(this, 0, root, M);
      PAdic e = PAdic::from_int(this, eps);
      PAdic half = PAdic::from_rational(this, Rational(1, 2));
      for (int it = 0; it < M + 2; ++it) l = (l + e * l.inv()) * half;
      lambda = l.unit();
    }
  }
}

std::shared_ptr<const PAdicParams> PAdicParams::get(int p, int d, int M) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const PAdicParams>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, d, M);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto ptr = std::make_shared<const PAdicParams>(p, d, M);
  registry.emplace(key, ptr);
  return ptr;
}

void PAdic::normalize(int rel) {
  const uint64_t m = P_->pw[rel];
  int k = rel;
  for (int i = 0; i < P_->d; ++i) {
    u_[i] %= m;
    if (u_[i]) k = std::min(k, vp(P_->p, (int64_t)u_[i]));
  }
  if (k >= rel) {
    prec_ = val_ + rel;
    val_ = kInf;
    u_ = {};
    return;
  }
  if (k > 0) {
    for (int i = 0; i < P_->d; ++i) u_[i] /= P_->pw[k];
    val_ += k;
    rel -= k;
  }
  prec_ = val_ + rel;
}

PAdic PAdic::zero(const PAdicParams* P) {
  PAdic z;
  z.P_ = P;
  return z;
}

PAdic PAdic::fuzzy_zero(const PAdicParams* P, int abs_prec) {
  PAdic z;
  z.P_ = P;
  z.prec_ = abs_prec;
  return z;
}

PAdic PAdic::make(const PAdicParams* P, int val, const std::vector<int64_t>& coeffs,
                  int rel_prec) {
  PAdic x;
  x.P_ = P;
  rel_prec = std::min(rel_prec, P->M);
  if (rel_prec < 1) throw InvalidParameter("relative precision must be >= 1");
  if ((int)coeffs.size() > P->d) throw InvalidParameter("too many coefficients");
  const uint64_t m = P->pw[rel_prec];
  for (size_t i = 0; i < coeffs.size(); ++i) x.u_[i] = reduce_signed(coeffs[i], m);
  x.val_ = val;
  bool allz = std::all_of(x.u_.begin(), x.u_.end(), [](uint64_t c) { return c == 0; });
  if (allz) return fuzzy_zero(P, val + rel_prec);
  x.normalize(rel_prec);
  return x;
}

PAdic PAdic::from_int(const PAdicParams* P, int64_t n) {
  if (n == 0) return zero(P);
  int v = vp(P->p, n);
  int64_t u = n;
  for (int i = 0; i < v; ++i) u /= P->p;
  return make(P, v, {u}, P->M);
}

PAdic PAdic::from_rational(const PAdicParams* P, const Rational& r) {
  if (r == 0) return zero(P);
  int v = vp(P->p, r);
  Integer num = r.get_num(), den = r.get_den();
  while (mpz_divisible_ui_p(num.get_mpz_t(), P->p)) num /= P->p;
  while (mpz_divisible_ui_p(den.get_mpz_t(), P->p)) den /= P->p;
  Integer m = P->pw[P->M];
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer u = num * inv;
  mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
  return make(P, v, {(int64_t)u.get_ui()}, P->M);
}

PAdic PAdic::teichmuller(const PAdicParams* P, const Residue& r) {
  if ((int)r.size() > P->d) throw InvalidParameter("residue has too many coordinates");
  Residue rr(P->d, 0);
  for (size_t i = 0; i < r.size(); ++i) rr[i] = mod(r[i], P->p);
  if (residue_is_zero(rr)) return zero(P);
  PAdic x = make(P, 0, rr, P->M);
  uint64_t q = (uint64_t)ipow(P->p, P->d);
  for (int it = 0; it < P->M; ++it) x = x.pow(q);
  return x;
}

PAdic PAdic::lambda(const PAdicParams* P) {
  if (!P->has_lambda) throw InvalidParameter("lambda requires even degree d");
  PAdic x;
  x.P_ = P;
  x.val_ = 0;
  x.prec_ = P->M;
  x.u_ = P->lambda;
  return x;
}

PAdic PAdic::eps(const PAdicParams* P) { return from_int(P, P->eps); }

PAdic PAdic::gen(const PAdicParams* P) {
  if (P->d < 2) throw InvalidParameter("generator requires d >= 2");
  return make(P, 0, {0, 1}, P->M);
}

PAdic PAdic::operator+(const PAdic& o) const {
  if (is_exact_zero()) return o.P_ || !P_ ? o : PAdic::zero(P_);
  if (o.is_exact_zero()) return *this;
  const PAdicParams* P = P_ ? P_ : o.P_;
  int pr = std::min(prec_, o.prec_);
  int v = std::min(val_, o.val_);
  if (v >= pr) return fuzzy_zero(P, pr);
  int rel = pr - v;
  const uint64_t m = P->pw[rel];
  PAdic r;
  r.P_ = P;
  r.val_ = v;
  for (const PAdic* x : {this, &o}) {
    if (x->val_ == kInf) continue;
    int sh = x->val_ - v;
    if (sh >= rel) continue;
    uint64_t f = P->pw[sh];
    for (int i = 0; i < P->d; ++i)
      r.u_[i] = addmod(r.u_[i], mulmod(x->u_[i] % m, f, m), m);
  }
  r.normalize(rel);
  return r;
}

PAdic PAdic::operator-() const {
  if (val_ == kInf) return *this;
  PAdic r = *this;
  const uint64_t m = P_->pw[prec_ - val_];
  for (int i = 0; i < P_->d; ++i) r.u_[i] = r.u_[i] ? m - r.u_[i] : 0;
  return r;
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
  const PAdicParams* P = P_ ? P_ : o.P_;
  if (is_exact_zero() || o.is_exact_zero()) return zero(P);
  if (val_ == kInf || o.val_ == kInf) {
    if (val_ == kInf && o.val_ == kInf) return fuzzy_zero(P, prec_ + o.prec_);
    if (val_ == kInf) return fuzzy_zero(P, prec_ + o.val_);
    return fuzzy_zero(P, o.prec_ + val_);
  }
  PAdic r;
  r.P_ = P;
  int rel = std::min(prec_ - val_, o.prec_ - o.val_);
  r.val_ = val_ + o.val_;
  r.prec_ = r.val_ + rel;
  poly_mul(*P, u_, o.u_, r.u_, P->pw[rel]);
  return r;
}

PAdic PAdic::inv() const {
  if (is_exact_zero()) throw DivisionByZero("inverse of exact zero");
  if (val_ == kInf) throw ZeroPrecision("inverse of a value indistinguishable from zero");
  const int rel = prec_ - val_;
  const uint64_t m = P_->pw[rel];
  PAdic r;
  r.P_ = P_;
  r.val_ = -val_;
  r.prec_ = -val_ + rel;
  if (P_->d == 1) {
    r.u_[0] = (uint64_t)invmod((int64_t)(u_[0] % m), (int64_t)m);
    return r;
  }
  Residue ur(P_->d);
  for (int i = 0; i < P_->d; ++i) ur[i] = (int64_t)(u_[i] % P_->p);
  Residue y0 = residue_pow(*P_, ur, (uint64_t)ipow(P_->p, P_->d) - 2);
  Coeffs y{};
  for (int i = 0; i < P_->d; ++i) y[i] = (uint64_t)y0[i];
  // Newton: y <- y (2 - u y)
  for (int digits = 1; digits < rel; digits *= 2) {
    Coeffs uy{}, t{};
    poly_mul(*P_, u_, y, uy, m);
    for (int i = 0; i < P_->d; ++i) t[i] = (m - uy[i]) % m;
    t[0] = addmod(t[0], 2 % m, m);
    poly_mul(*P_, y, t, y, m);
  }
  r.u_ = y;
  return r;
}

PAdic PAdic::pow(uint64_t e) const {
  PAdic result = from_int(P_, 1);
  PAdic b = *this;
  while (e) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

PAdic PAdic::frob(int k) const {
  if (val_ == kInf || P_->d == 1) return *this;
  k = ((k % P_->d) + P_->d) % P_->d;
  PAdic x = *this;
  const uint64_t m = P_->pw[prec_ - val_];
  for (int it = 0; it < k; ++it) {
    Coeffs out{};
    for (int i = 0; i < P_->d; ++i) {
      uint64_t ci = x.u_[i] % m;
      if (!ci) continue;
      for (int j = 0; j < P_->d; ++j)
        out[j] = addmod(out[j], mulmod(ci, P_->sigma_pow[i][j] % m, m), m);
    }
    x.u_ = out;
  }
  return x;
}

PAdic PAdic::mul_p_pow(int k) const {
  if (is_exact_zero()) return *this;
  PAdic r = *this;
  if (val_ == kInf) {
    r.prec_ += k;
    return r;
  }
  r.val_ += k;
  r.prec_ += k;
  return r;
}

PAdic PAdic::lower_prec(int abs_prec) const {
  if (abs_prec >= prec_) return *this;
  if (val_ >= abs_prec) return fuzzy_zero(P_, abs_prec);
  PAdic r = *this;
  int rel = abs_prec - val_;
  r.prec_ = abs_prec;
  for (int i = 0; i < P_->d; ++i) r.u_[i] %= P_->pw[rel];
  return r;
}

Residue PAdic::reduce() const {
  Residue r(P_ ? P_->d : 1, 0);
  if (is_exact_zero()) return r;
  if (val_ == kInf) {
    if (prec_ < 1) throw ZeroPrecision("residue not determined");
    return r;
  }
  if (val_ < 0) throw InvalidParameter("reduction of a non-integral element");
  if (val_ > 0) return r;
  for (int i = 0; i < P_->d; ++i) r[i] = (int64_t)(u_[i] % P_->p);
  return r;
}

bool PAdic::same(const PAdic& o) const {
  return val_ == o.val_ && prec_ == o.prec_ && u_ == o.u_;
}

bool PAdic::congruent(const PAdic& o) const { return (*this - o).is_zero(); }

std::string PAdic::str() const {
  if (is_exact_zero()) return "0";
  const std::string p = std::to_string(P_->p);
  if (val_ == kInf) return "O(" + p + "^" + std::to_string(prec_) + ")";
  return p + "^" + std::to_string(val_) + " * (" + join_poly(u_, P_->d) + ") mod " + p + "^" +
         std::to_string(prec_ - val_);
}

PAdic PAdic::parse(const PAdicParams* P, const std::string& in) {
  std::string s;
  for (char ch : in)
    if (!std::isspace((unsigned char)ch)) s.push_back(ch);
  if (s == "0") return zero(P);
  const std::string p = std::to_string(P->p);
  if (s.rfind("O(", 0) == 0) {
    if (s.back() != ')' || s.compare(2, p.size() + 1, p + "^") != 0)
      throw ParseError("bad fuzzy zero '" + in + "'");
    return fuzzy_zero(P, std::stoi(s.substr(3 + p.size(), s.size() - 4 - p.size())));
  }
  size_t star = s.find("*(");
  size_t close = s.rfind(")mod");
  if (star == std::string::npos || close == std::string::npos || s.compare(0, p.size() + 1, p + "^") != 0)
    throw ParseError("bad p-adic literal '" + in + "'");
  int v = std::stoi(s.substr(p.size() + 1, star - p.size() - 1));
  auto coeffs = parse_poly(s.substr(star + 2, close - star - 2), P->d);
  std::string tail = s.substr(close + 4);
  if (tail.compare(0, p.size() + 1, p + "^") != 0) throw ParseError("bad modulus in '" + in + "'");
  int rel = std::stoi(tail.substr(p.size() + 1));
  return make(P, v, coeffs, rel);
}

Residue residue_mul(const PAdicParams& P, const Residue& a, const Residue& b) {
  Coeffs x{}, y{}, z{};
  for (int i = 0; i < P.d; ++i) {
    x[i] = (uint64_t)mod(i < (int)a.size() ? a[i] : 0, P.p);
    y[i] = (uint64_t)mod(i < (int)b.size() ? b[i] : 0, P.p);
  }
  poly_mul(P, x, y, z, (uint64_t)P.p);
  Residue r(P.d);
  for (int i = 0; i < P.d; ++i) r[i] = (int64_t)z[i];
  return r;
}

Residue residue_pow(const PAdicParams& P, const Residue& a, uint64_t e) {
  Residue r(P.d, 0);
  r[0] = 1;
  Residue b = a;
  b.resize(P.d, 0);
  while (e) {
    if (e & 1) r = residue_mul(P, r, b);
    e >>= 1;
    if (e) b = residue_mul(P, b, b);
  }
  return r;
}

bool residue_is_zero(const Residue& a) {
  return std::all_of(a.begin(), a.end(), [](int64_t c) { return c == 0; });
}

std::string residue_str(const Residue& r) {
  Coeffs c{};
  for (size_t i = 0; i < r.size() && i < 4; ++i) c[i] = (uint64_t)r[i];
  return join_poly(c, (int)r.size());
}

Residue parse_residue(const PAdicParams& P, const std::string& s) {
  auto c = parse_poly(s, P.d);
  for (auto& x : c) x = mod(x, P.p);
  return c;
}

} // namespace ssint
