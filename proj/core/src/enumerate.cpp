#include "ssint/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ssint {

namespace {

using RMat = std::vector<std::vector<Rational>>;

Integer round_nearest(const Rational& x) {
  Rational y = x + Rational(1, 2);
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return f;
}

// Gram-Schmidt data of a Gram matrix: mu and the squared lengths Bs
void gso(const std::vector<std::vector<Integer>>& G, RMat& mu, std::vector<Rational>& Bs) {
  const int n = (int)G.size();
  mu.assign(n, std::vector<Rational>(n, 0));
  Bs.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      Rational s(G[i][j]);
      for (int k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * Bs[k];
      mu[i][j] = s / Bs[j];
    }
    Rational s(G[i][i]);
    for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * Bs[k];
    Bs[i] = s;
  }
}

int64_t to_i64(const Integer& z) {
  if (!z.fits_slong_p()) throw InvalidParameter("Gram entry overflows 64 bits");
  return z.get_si();
}

i128 to_i128(const Integer& z) {
  Integer a = abs(z);
  if (mpz_sizeinbase(a.get_mpz_t(), 2) > 100) throw InvalidParameter("lattice too large for exact enumeration");
  i128 hi = (i128)mpz_get_ui(Integer(a >> 64).get_mpz_t());
  Integer lo_z = a - (Integer(a >> 64) << 64);
  i128 v = (hi << 64) | (i128)mpz_get_ui(lo_z.get_mpz_t());
  return z < 0 ? -v : v;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

i128 fdiv(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 cdiv(i128 a, i128 b) { return -fdiv(-a, b); }

// Layer k fixes x_{k+1..n-1} and ranges over x_k; W[k] is the integral
// Schur complement D_k (G_TT - G_TH G_HH^{-1} G_HT) on T = {k..n-1}, indexed
// by absolute coordinates, and R[k] = N2 D_k.
struct Plan {
  int n = 0;
  std::vector<std::vector<std::vector<i128>>> W;
  std::vector<i128> Dk;
};

Plan make_plan(const IMat& G) {
  const int n = (int)G.size();
  Plan P;
  P.n = n;
  P.W.assign(n, std::vector<std::vector<i128>>(n, std::vector<i128>(n, 0)));
  P.Dk.assign(n, 1);
  RMat S = to_rational(G);
  Integer D = 1;
  for (int k = 0; k < n; ++k) {
    // S is the Schur complement on {k..n-1}
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j) {
        Rational w = S[i][j] * D;
        if (w.get_den() != 1) throw InvalidParameter("non-integral Schur complement");
        P.W[k][i][j] = to_i128(w.get_num());
      }
    P.Dk[k] = to_i128(D);
    if (S[k][k] <= 0) throw NotPositiveDefinite("Gram is not positive definite");
    Rational piv = S[k][k];
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) S[i][j] -= S[i][k] * S[k][j] / piv;
    Rational nd = piv * D;
    D = nd.get_num();
  }
  return P;
}

// Recursive exact enumeration. Leaf(x, lo, hi, a, t, c) handles x_0 in
// [lo, hi] with 2Q = a x_0^2 + 2 t x_0 + c.
template <class Leaf>
void descend(const Plan& P, i128 N2, int k, std::vector<int64_t>& x, Leaf& leaf) {
  const auto& W = P.W[k];
  const int n = P.n;
  i128 t = 0, c = 0;
  for (int j = k + 1; j < n; ++j) {
    if (!x[j]) continue;
    t += W[k][j] * x[j];
    i128 row = 0;
    for (int i = k + 1; i < n; ++i) row += W[j][i] * x[i];
    c += row * x[j];
  }
  const i128 a = W[k][k];
  const i128 R = N2 * P.Dk[k];
  const i128 disc = t * t - a * (c - R);
  if (disc < 0) return;
  const i128 s = isqrt128(disc);
  const i128 lo = cdiv(-s - t, a), hi = fdiv(s - t, a);
  if (lo > hi) return;
  if (k == 0) {
    leaf(x, (int64_t)lo, (int64_t)hi, a, t, c);
    return;
  }
  for (i128 v = lo; v <= hi; ++v) {
    x[k] = (int64_t)v;
    descend(P, N2, k - 1, x, leaf);
  }
  x[k] = 0;
}

// outermost coordinate range
std::pair<int64_t, int64_t> outer_range(const Plan& P, i128 N2) {
  const int k = P.n - 1;
  const i128 a = P.W[k][k][k], R = N2 * P.Dk[k];
  const i128 s = isqrt128(a * R);
  return {(int64_t)cdiv(-s, a), (int64_t)fdiv(s, a)};
}

template <class Leaf>
void run_outer(const Plan& P, i128 N2, int64_t v, Leaf& leaf) {
  std::vector<int64_t> x(P.n, 0);
  if (P.n == 1) {
    leaf(x, v, v, P.W[0][0][0], 0, 0);
    return;
  }
  x[P.n - 1] = v;
  descend(P, N2, P.n - 2, x, leaf);
}

i128 norm_bound(const Rational& M) {
  if (M < 0) return -1;
  Rational twoM = 2 * M;
  return to_i128(floor_div(twoM.get_num(), twoM.get_den()));
}

} // namespace

Reduced lll_reduce(const IntLattice& L) {
  L.require_positive_definite();
  const int n = L.rank();
  std::vector<std::vector<Integer>> G(n, std::vector<Integer>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = (long)L.gram()[i][j];
  std::vector<std::vector<Integer>> U(n, std::vector<Integer>(n, 0));
  for (int i = 0; i < n; ++i) U[i][i] = 1;
  RMat mu;
  std::vector<Rational> Bs;
  const Rational delta(3, 4);
  int k = 1;
  while (k < n) {
    gso(G, mu, Bs);
    for (int j = k - 1; j >= 0; --j) {
      Integer r = round_nearest(mu[k][j]);
      if (r == 0) continue;
      // b_k -= r b_j
      for (int c = 0; c < n; ++c) U[k][c] -= r * U[j][c];
      Integer gkk = G[k][k] - 2 * r * G[k][j] + r * r * G[j][j];
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        G[k][i] -= r * G[j][i];
        G[i][k] = G[k][i];
      }
      G[k][k] = gkk;
      gso(G, mu, Bs);
    }
    if (Bs[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1]) {
      ++k;
    } else {
      std::swap(U[k], U[k - 1]);
      std::swap(G[k], G[k - 1]);
      for (auto& row : G) std::swap(row[k], row[k - 1]);
      k = std::max(k - 1, 1);
    }
  }
  Reduced out;
  IMat g(n, IVec(n)), u(n, IVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g[i][j] = to_i64(G[i][j]);
      u[i][j] = to_i64(U[i][j]);
    }
  out.lattice = IntLattice(g, L.label());
  out.U = u;
  return out;
}

void require_enumerable(const IntLattice& L) {
  L.require_positive_definite();
  if (L.rank() > 8) throw InvalidParameter("enumeration supports rank <= 8");
}

void for_each_short_vector(const IntLattice& L, const Rational& M,
                           const std::function<void(const IVec&, i128)>& fn) {
  require_enumerable(L);
  const i128 N2 = norm_bound(M);
  if (N2 < 0) return;
  Reduced red = lll_reduce(L);
  Plan P = make_plan(red.lattice.gram());
  const int n = P.n;
  IVec v(n);
  auto leaf = [&](const std::vector<int64_t>& x, int64_t lo, int64_t hi, i128 a, i128 t, i128 c) {
    std::vector<int64_t> y = x;
    for (int64_t x0 = lo; x0 <= hi; ++x0) {
      y[0] = x0;
      for (int j = 0; j < n; ++j) {
        int64_t s = 0;
        for (int i = 0; i < n; ++i) s += y[i] * red.U[i][j];
        v[j] = s;
      }
      fn(v, a * x0 * x0 + 2 * t * x0 + c);
    }
  };
  auto [lo, hi] = outer_range(P, N2);
  for (int64_t w = lo; w <= hi; ++w) run_outer(P, N2, w, leaf);
}

std::vector<IVec> short_vectors(const IntLattice& L, const Rational& M) {
  std::vector<IVec> out;
  for_each_short_vector(L, M, [&](const IVec& v, i128) { out.push_back(v); });
  return out;
}

std::vector<uint64_t> norm_counts(const IntLattice& L, int64_t M) {
  require_enumerable(L);
  if (M < 0) throw InvalidParameter("bound must be >= 0");
  const i128 N2 = 2 * (i128)M;
  Reduced red = lll_reduce(L);
  Plan P = make_plan(red.lattice.gram());
  auto [lo, hi] = outer_range(P, N2);

  const int64_t span = hi - lo + 1;
  int nthreads = (int)std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
  if (span < 4 * nthreads || N2 < 2000) nthreads = 1;
  std::vector<std::vector<uint64_t>> parts(nthreads, std::vector<uint64_t>(N2 + 1, 0));
  auto work = [&](int id) {
    auto& h = parts[id];
    auto leaf = [&](const std::vector<int64_t>&, int64_t l, int64_t r, i128 a, i128 t, i128 c) {
      // consecutive values differ by a (2x + 1) + 2t
      int64_t val = (int64_t)(a * l * l + 2 * t * l + c);
      int64_t step = (int64_t)(a * (2 * l + 1) + 2 * t);
      const int64_t a2 = (int64_t)(2 * a);
      for (int64_t x0 = l; x0 <= r; ++x0) {
        ++h[val];
        val += step;
        step += a2;
      }
    };
    // interleave the outer range so the threads get similar loads
    for (int64_t w = lo + id; w <= hi; w += nthreads) run_outer(P, N2, w, leaf);
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
    for (int i = 1; i < nthreads; ++i)
      for (size_t j = 0; j < parts[0].size(); ++j) parts[0][j] += parts[i][j];
  }
  return parts[0];
}

uint64_t EnumReport::r(int64_t m) const {
  if (m < 0 || 2 * m >= (int64_t)counts2.size()) throw InvalidParameter("m outside the enumerated range");
  return counts2[2 * m];
}

long double EnumReport::minimum(int i) const { return sqrtl((long double)minima2.at(i).get_d()); }

namespace {

// vectors of 2Q <= bound2 in the original coordinates, sorted by norm
std::vector<std::pair<i128, IVec>> sorted_short(const IntLattice& L, i128 bound2) {
  std::vector<std::pair<i128, IVec>> list;
  Rational half(Integer(to_string(bound2)), 2);
  half.canonicalize();
  for_each_short_vector(L, half, [&](const IVec& v, i128 n2) {
    if (n2 > 0) list.push_back({n2, v});
  });
  std::sort(list.begin(), list.end());
  return list;
}

// incremental rank test over Q
struct Span {
  std::vector<std::vector<Rational>> rows;
  std::vector<int> piv;
  bool add(const IVec& v) {
    std::vector<Rational> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = (long)v[i];
    for (size_t k = 0; k < rows.size(); ++k) {
      if (r[piv[k]] == 0) continue;
      Rational c = r[piv[k]] / rows[k][piv[k]];
      for (size_t i = 0; i < r.size(); ++i) r[i] -= c * rows[k][i];
    }
    for (size_t i = 0; i < r.size(); ++i)
      if (r[i] != 0) {
        rows.push_back(r);
        piv.push_back((int)i);
        return true;
      }
    return false;
  }
};

struct MinData {
  std::vector<Rational> m2;
  std::vector<IVec> vecs;
};

MinData minima_data(const IntLattice& L) {
  Reduced red = lll_reduce(L);
  i128 bound = 0;
  for (int i = 0; i < L.rank(); ++i) bound = std::max<i128>(bound, red.lattice.gram()[i][i]);
  auto list = sorted_short(L, bound);
  MinData out;
  Span sp;
  for (const auto& [n2, v] : list) {
    if ((int)out.vecs.size() == L.rank()) break;
    if (sp.add(v)) {
      out.m2.push_back(Rational(Integer(to_string(n2)), 2));
      out.m2.back().canonicalize();
      out.vecs.push_back(v);
    }
  }
  return out;
}

i128 bil(const IntLattice& L, const IVec& u, const IVec& v) {
  i128 s = 0;
  for (int i = 0; i < L.rank(); ++i)
    for (int j = 0; j < L.rank(); ++j) s += (i128)u[i] * L.gram()[i][j] * v[j];
  return s;
}

BinaryMin binary_from(const MinData& md, const IntLattice& L) {
  if (L.rank() < 2) throw InvalidParameter("min_binary_disc needs rank >= 2");
  const IVec &u0 = md.vecs[0], &v0 = md.vecs[1];
  i128 nu = L.norm2(u0), nv = L.norm2(v0), b = bil(L, u0, v0);
  i128 best = nu * nv - b * b;  // det of the B-Gram, 4 d^2
  IMat basis = {u0, v0};
  // a reduced basis (u, v) of a better P has n_u n_v <= (4/3) det and n_u >= n_1
  const i128 n1 = nu;
  const i128 bound = (4 * best) / (3 * n1);
  auto list = sorted_short(L, bound);
  for (size_t i = 0; i < list.size(); ++i) {
    const auto& [a, u] = list[i];
    if (3 * a * a > 4 * best) break;
    // one of +-u suffices
    int s = 0;
    for (auto c : u)
      if (c) {
        s = c > 0 ? 1 : -1;
        break;
      }
    if (s < 0) continue;
    for (size_t j = 0; j < list.size(); ++j) {
      const auto& [c, v] = list[j];
      if (c < a || j == i) continue;
      if (3 * a * c > 4 * best) break;
      i128 bb = bil(L, u, v);
      i128 dt = a * c - bb * bb;
      if (dt > 0 && dt < best) {
        best = dt;
        basis = {u, v};
      }
    }
  }
  BinaryMin out;
  out.disc = Rational(Integer(to_string(best)), 4);
  out.disc.canonicalize();
  out.d = sqrtl((long double)out.disc.get_d());
  out.basis = basis;
  return out;
}

} // namespace

std::vector<Rational> successive_minima(const IntLattice& L) {
  require_enumerable(L);
  return minima_data(L).m2;
}

BinaryMin min_binary_disc(const IntLattice& L) {
  require_enumerable(L);
  return binary_from(minima_data(L), L);
}

EnumReport enumerate(const IntLattice& L, int64_t M, bool keep_vectors, bool with_minima) {
  require_enumerable(L);
  EnumReport rep;
  rep.label = L.label();
  rep.M = M;
  rep.counts2 = norm_counts(L, M);
  if (keep_vectors) rep.vectors = short_vectors(L, Rational((long)M));
  if (with_minima) {
    MinData md = minima_data(L);
    rep.minima2 = md.m2;
    if (L.rank() >= 2) rep.binary = binary_from(md, L);
  }
  return rep;
}

uint64_t square_rep_count(const IntLattice& L, int64_t D, int64_t M) {
  if (D < 1) throw InvalidParameter("D must be >= 1");
  if (M < D * 4) return 0;
  auto c = norm_counts(L, M);
  uint64_t s = 0;
  for (auto l : primes_upto(isqrt(M / D))) s += c[2 * D * l * l];
  return s;
}

uint64_t prime_rep_count(const IntLattice& L, int64_t M) {
  if (M < 2) return 0;
  auto c = norm_counts(L, M);
  uint64_t s = 0;
  for (auto q : primes_upto(M)) s += c[2 * q];
  return s;
}

PrimeDensity binary_prime_density(const IntLattice& P, int64_t D, int64_t X) {
  if (P.rank() != 2) throw ShapeMismatch("binary_prime_density needs a rank 2 lattice");
  if (D < 1) throw InvalidParameter("D must be >= 1");
  PrimeDensity out;
  auto ps = primes_upto(X);
  if (ps.empty()) return out;
  auto c = norm_counts(P, D * X * X);
  for (auto l : ps) {
    ++out.total;
    if (c[2 * D * l * l]) ++out.hits;
  }
  return out;
}

std::vector<int64_t> build_T_set(const TSetParams& t, int64_t p, int64_t M) {
  if (!is_prime(p)) throw InvalidParameter("p must be prime");
  std::vector<int64_t> out;
  switch (t.kind) {
    case TSetParams::Square:
      if (t.D < 1) throw InvalidParameter("D must be >= 1");
      for (auto q : primes_upto(isqrt(std::max<int64_t>(M, 0) / t.D)))
        if (q != p) out.push_back(t.D * q * q);
      break;
    case TSetParams::PrimeQR:
      for (auto q : primes_upto(M))
        if (q != p && q % 4 == 3 && legendre(q, p) == 1) out.push_back(q);
      break;
    case TSetParams::Hilbert:
      kronecker(t.field_disc, 1);  // validates the discriminant
      for (int64_t m = std::max<int64_t>(t.N + 1, 1); m <= M; ++m) {
        if (m % p == 0) continue;
        bool ok = true;
        for (auto l : t.bad)
          if (vp(l, m) > t.C) ok = false;
        if (!ok) continue;
        bool inert = false;
        for (auto [q, e] : factor(m))
          if (e == 1 && kronecker(t.field_disc, q) == -1) inert = true;
        if (inert) out.push_back(m);
      }
      break;
  }
  return out;
}

CuspFit cusp_deviation(const IntLattice& L, int64_t m_lo, int64_t m_hi) {
  if (m_lo < 1 || m_hi < m_lo) throw InvalidParameter("bad m range");
  auto c = norm_counts(L, m_hi);
  CuspFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int64_t m = m_lo; m <= m_hi; ++m) {
    Deviation d;
    d.m = m;
    d.r = c[2 * m];
    EisResult q = q_Lppp(L, m);
    d.q = q.numeric;
    bool nonzero;
    if (q.value.is_rational()) {
      d.exact = Rational(Integer(std::to_string(d.r))) - q.value.coef;
      d.G = (long double)d.exact->get_d();
      nonzero = *d.exact != 0;
    } else {
      d.G = (long double)d.r - q.numeric.mid;
      d.rad = q.numeric.rad;
      nonzero = std::fabs(d.G) > d.rad;
    }
    fit.max_abs = std::max(fit.max_abs, std::fabs(d.G));
    if (nonzero) {
      double x = std::log((double)m), y = std::log(std::fabs((double)d.G));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++fit.used;
    }
    fit.rows.push_back(std::move(d));
  }
  if (fit.used >= 2) {
    double n = fit.used;
    double den = n * sxx - sx * sx;
    fit.slope = den != 0 ? (n * sxy - sx * sy) / den : 0;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  return fit;
}

} // namespace ssint
