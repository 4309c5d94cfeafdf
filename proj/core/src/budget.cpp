#include "ssint/budget.hpp"

#include <algorithm>
#include <random>

namespace ssint {

const char* point_type_name(PointType t) {
  return t == PointType::Superspecial ? "superspecial" : "supergeneric";
}

PointType parse_point_type(const std::string& s) {
  if (s == "superspecial") return PointType::Superspecial;
  if (s == "supergeneric") return PointType::Supergeneric;
  throw InvalidParameter("unknown point type '" + s + "'");
}

namespace {

void require_prime(int64_t p) {
  if (!is_prime(p)) throw InvalidParameter("p must be prime");
}

Integer floor_q(const Rational& r) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

Rational P(int64_t p) { return Rational((long)p); }

Rational Z(uint64_t v) { return Rational(Integer(std::to_string(v))); }

} // namespace

Integer threshold_A_n(int A, int64_t p, int n) {
  require_prime(p);
  if (A < 1) throw InvalidParameter("A must be >= 1");
  if (n < -1) throw InvalidParameter("n must be >= -1");
  Rational s = 1 / P(p);
  for (int k = 0; k <= n; ++k) s += rpow(P(p), k);
  return floor_q(s * A);
}

void check_counts_nested(PointType t, const ChainCounts& r) {
  const size_t w = t == PointType::Superspecial ? 2 : 1;
  uint64_t prev = UINT64_MAX;
  for (size_t n = 0; n < r.size(); ++n) {
    if (r[n].size() != w) throw ShapeMismatch("chain level has the wrong number of lattices");
    for (auto v : r[n]) {
      if (v > prev) throw ChainNotNested("counts increase along the chain at n = " + std::to_string(n));
      prev = v;
    }
  }
}

Rational local_bound(PointType t, int A, int64_t p, const ChainCounts& r) {
  require_prime(p);
  check_counts_nested(t, r);
  Rational s = 0;
  const Rational a(A);
  for (size_t n = 0; n < r.size(); ++n) {
    if (t == PointType::Superspecial) {
      if (n == 0) {
        s += a * (P(p) + 2) / (2 * P(p)) * Z(r[0][0]);
        s += a / 2 * Z(r[0][1]);
      } else {
        s += a * rpow(P(p), (long)n) / 2 * (Z(r[n][0]) + Z(r[n][1]));
      }
    } else {
      if (n == 0) s += a * (P(p) + 1) / P(p) * Z(r[0][0]);
      else s += a * rpow(P(p), (long)n) * Z(r[n][0]);
    }
  }
  return s;
}

Rational telescoping_bound(PointType t, int A, int64_t p, const Rational& a,
                           const ChainCounts& r) {
  require_prime(p);
  check_counts_nested(t, r);
  auto An = [&](int n) { return Rational(threshold_A_n(A, p, n)); };
  Rational s = 0;
  for (size_t n = 0; n < r.size(); ++n) {
    const int k = (int)n;
    if (t == PointType::Superspecial) {
      if (k == 0) {
        s += (An(-1) + a) * Z(r[0][0]);
        s += (An(0) - An(-1) - a) * Z(r[0][1]);
      } else {
        Rational apn = a * rpow(P(p), k);
        s += apn * Z(r[n][0]) + (An(k) - An(k - 1) - apn) * Z(r[n][1]);
      }
    } else {
      s += (k == 0 ? An(0) : An(k) - An(k - 1)) * Z(r[n][0]);
    }
  }
  return s;
}

Rational global_g(int A, int64_t p, const Rational& qL_abs) {
  require_prime(p);
  if (A <= 0) throw InvalidParameter("A must be positive on the non-ordinary locus");
  return Rational(A) * abs(qL_abs) / (P(p) - 1);
}

void check_nonordinary_total(int64_t p, const Rational& omega_C, const std::vector<int>& A_P) {
  if (omega_C <= 0) throw InvalidParameter("omega.C must be positive");
  Rational total = 0;
  for (int a : A_P) {
    if (a <= 0) throw InvalidParameter("A_P must be positive");
    total += a;
  }
  if (total != (P(p) - 1) * omega_C)
    throw InvalidParameter("sum of A_P is " + to_string(total) + ", expected (p-1) omega.C = " +
                           to_string((P(p) - 1) * omega_C));
}

Rational alpha_const(int64_t p, AlphaVariant v) {
  require_prime(p);
  const Rational q = P(p);
  switch (v) {
    case AlphaVariant::SuperspecialPrimeToM: return (q + 2) / (2 * q) + q / (q * q - 1);
    case AlphaVariant::SupergenericInert: return 2 / q + 2 / ((q + 1) * (q * q - 1));
    case AlphaVariant::SuperspecialRamified: return (q + 2) / (2 * q) + (q + 3) / (q * q - 1);
    case AlphaVariant::SupergenericRamified: return 2 / q + 2 / (q * q - 1);
  }
  return 0;
}

ChainIndices geometric_indices(PointType t, int64_t p, int c) {
  ChainIndices idx;
  for (int n = 0; n <= c; ++n) {
    Integer a = 1;
    for (int k = 0; k < 3 * n; ++k) a *= (long)p;
    if (t == PointType::Superspecial) idx.push_back({a, a * (long)p});
    else idx.push_back({a});
  }
  return idx;
}

namespace {

Rational exact_sqrt_value(const SqrtRational& s) {
  Integer n = s.arg.get_num(), d = s.arg.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    throw InvalidParameter("index term is not rational: " + s.str());
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return s.coef * r;
}

} // namespace

EisBudget eisenstein_budget(PointType t, bool p_divides_m, int A, int64_t p,
                            const ChainIndices& idx, const Integer& disc_p) {
  require_prime(p);
  if (A < 1) throw InvalidParameter("A must be >= 1");
  if (idx.empty() || idx[0].empty() || idx[0][0] != 1)
    throw InvalidParameter("the chain must start at L' itself");
  const Rational a(A), q = P(p);
  auto term = [&](const Integer& index, bool index_p_flag) {
    Integer full = disc_p * index * index;
    RatioClause cl = p_divides_m ? RatioClause::SiegelPDividesM : RatioClause::PrimeToM;
    return exact_sqrt_value(ratio_bound(cl, p, full, index_p_flag));
  };
  EisBudget out;
  for (size_t n = 0; n < idx.size(); ++n) {
    const auto& lv = idx[n];
    if (t == PointType::Superspecial) {
      if (lv.empty() || lv.size() > 2) throw ShapeMismatch("superspecial chain levels need two indices");
      if (n == 0) {
        out.bound += a * (q + 2) / (2 * q) *
                     exact_sqrt_value(ratio_bound(RatioClause::SuperspecialOrHilbert, p));
        if (lv.size() == 2) out.bound += a / 2 * term(lv[1], p_divides_m && lv[1] == (long)p);
      } else {
        Rational w = a * rpow(q, (long)n) / 2;
        for (const auto& x : lv) out.bound += w * term(x, false);
      }
    } else {
      if (lv.size() != 1) throw ShapeMismatch("supergeneric chain levels need one index");
      if (n == 0) {
        out.bound += a * (q + 1) / q *
                     exact_sqrt_value(ratio_bound(RatioClause::SiegelSupergeneric, p));
      } else {
        out.bound += a * rpow(q, (long)n) * term(lv[0], false);
      }
    }
  }
  AlphaVariant v;
  if (t == PointType::Superspecial)
    v = p_divides_m ? AlphaVariant::SuperspecialRamified : AlphaVariant::SuperspecialPrimeToM;
  else
    v = p_divides_m ? AlphaVariant::SupergenericRamified : AlphaVariant::SupergenericInert;
  out.cap = alpha_const(p, v) * a / (q - 1);
  out.within = out.bound <= out.cap;
  return out;
}

Rational geometric_budget_closed_form(int A, int64_t p, int c) {
  const Rational q = P(p);
  Rational inner = (q + 2) / (2 * q) + 1 / (q + 1) + (1 - rpow(q, -2L * c)) / (q * q - 1);
  return Rational(A) / (q - 1) * inner;
}

bool ordinary_chain_ok(const std::vector<IntLattice>& Ln, int64_t p) {
  require_prime(p);
  for (size_t n = 0; n < Ln.size(); ++n) {
    if (n == 0) continue;
    Integer need = 1;
    for (size_t k = 0; k + 1 < n; ++k) need *= (long)(p * p);
    if (abs(Ln[n].det()) < need) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// local frames

namespace {

struct ModRing {
  int64_t q;
  int64_t p;
  int64_t r(i128 a) const {
    int64_t v = (int64_t)(a % q);
    return v < 0 ? v + q : v;
  }
  int64_t mul(int64_t a, int64_t b) const { return r((i128)a * b); }
  int64_t inv(int64_t a) const {
    if (a % p == 0) throw InvalidParameter("non-unit pivot in local frame");
    return invmod(r(a), q);
  }
  bool unit(int64_t a) const { return r(a) % p != 0; }
  // square root of a unit, or -1
  int64_t sqrt(int64_t a) const {
    a = r(a);
    int64_t x = -1;
    for (int64_t t = 1; t < p; ++t)
      if ((t * t - a) % p == 0) {
        x = t;
        break;
      }
    if (x < 0) return -1;
    for (int i = 0; i < 64 && r((i128)x * x - a) != 0; ++i) {
      int64_t fx = r((i128)x * x - a);
      x = r(x - mul(fx, inv(2 * x)));
    }
    if (r((i128)x * x - a) != 0) return -1;
    return x;
  }
};

using Mat = std::vector<std::vector<int64_t>>;

Mat mat_mul(const ModRing& R, const Mat& A, const Mat& B) {
  const size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
  Mat C(n, std::vector<int64_t>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      i128 s = 0;
      for (size_t l = 0; l < k; ++l) s = (s + (i128)A[i][l] * B[l][j]) % R.q;
      C[i][j] = R.r(s);
    }
  return C;
}

Mat transpose(const Mat& A) {
  Mat T(A.empty() ? 0 : A[0].size(), std::vector<int64_t>(A.size()));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
  return T;
}

Mat gram_of(const ModRing& R, const Mat& rows, const Mat& G) {
  return mat_mul(R, mat_mul(R, rows, G), transpose(rows));
}

Mat identity(size_t n) {
  Mat I(n, std::vector<int64_t>(n, 0));
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

Mat inverse(const ModRing& R, Mat A) {
  const size_t n = A.size();
  Mat I = identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = n;
    for (size_t r = c; r < n; ++r)
      if (R.unit(A[r][c])) {
        piv = r;
        break;
      }
    if (piv == n) throw InvalidParameter("frame matrix is singular mod p");
    std::swap(A[c], A[piv]);
    std::swap(I[c], I[piv]);
    int64_t iv = R.inv(A[c][c]);
    for (size_t j = 0; j < n; ++j) {
      A[c][j] = R.mul(A[c][j], iv);
      I[c][j] = R.mul(I[c][j], iv);
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      int64_t f = A[r][c];
      for (size_t j = 0; j < n; ++j) {
        A[r][j] = R.r(A[r][j] - (i128)f * A[c][j]);
        I[r][j] = R.r(I[r][j] - (i128)f * I[c][j]);
      }
    }
  }
  return I;
}

// Orthogonal basis (rows) diagonalizing G with unit pivots, as far as
// possible. Returns the rows with unit diagonal first and the count of them.
std::pair<Mat, size_t> unit_split(const ModRing& R, const Mat& G) {
  const size_t n = G.size();
  Mat rows = identity(n);
  std::vector<size_t> act(n);
  for (size_t i = 0; i < n; ++i) act[i] = i;
  Mat out;
  for (;;) {
    Mat g = gram_of(R, rows, G);
    size_t piv = n;
    for (size_t i : act)
      if (R.unit(g[i][i])) {
        piv = i;
        break;
      }
    if (piv == n) {
      bool fixed = false;
      for (size_t i : act) {
        for (size_t j : act)
          if (i != j && R.unit(g[i][j])) {
            for (size_t k = 0; k < n; ++k) rows[i][k] = R.r(rows[i][k] + rows[j][k]);
            fixed = true;
            break;
          }
        if (fixed) break;
      }
      if (fixed) continue;
      break;
    }
    int64_t iv = R.inv(g[piv][piv]);
    for (size_t j : act) {
      if (j == piv) continue;
      int64_t f = R.mul(g[j][piv], iv);
      for (size_t k = 0; k < n; ++k) rows[j][k] = R.r(rows[j][k] - (i128)f * rows[piv][k]);
    }
    out.push_back(rows[piv]);
    act.erase(std::find(act.begin(), act.end(), piv));
  }
  const size_t nu = out.size();
  for (size_t i : act) out.push_back(rows[i]);
  return {out, nu};
}

// C with C diag(d) C^T = diag(1, ..., 1, delta); returns delta in {1, eps}
std::pair<Mat, int64_t> canon_diag(const ModRing& R, const std::vector<int64_t>& d, int64_t eps) {
  const size_t r = d.size();
  Mat C = identity(r);
  std::vector<int64_t> cur(r);
  for (size_t i = 0; i < r; ++i) {
    int64_t s = R.sqrt(d[i]);
    if (s >= 0) {
      C[i][i] = R.inv(s);
      cur[i] = 1;
    } else {
      s = R.sqrt(R.mul(d[i], R.inv(eps)));
      if (s < 0) throw InvalidParameter("local frame: square class lookup failed");
      C[i][i] = R.inv(s);
      cur[i] = eps;
    }
  }
  // pairs of eps become pairs of 1: a^2 + b^2 = 1/eps
  std::vector<size_t> e;
  for (size_t i = 0; i < r; ++i)
    if (cur[i] == eps) e.push_back(i);
  const int64_t target = R.inv(eps);
  for (size_t k = 0; k + 1 < e.size(); k += 2) {
    const size_t i = e[k], j = e[k + 1];
    int64_t a = -1, b = -1;
    for (int64_t t = 0; t < R.p && b < 0; ++t) {
      int64_t rest = R.r(target - (i128)t * t);
      if (!R.unit(rest)) continue;
      b = R.sqrt(rest);
      if (b >= 0) a = t;
    }
    if (b < 0) throw InvalidParameter("local frame: no sum of two squares");
    std::vector<int64_t> ri = C[i], rj = C[j];
    for (size_t c = 0; c < r; ++c) {
      C[i][c] = R.r((i128)a * ri[c] + (i128)b * rj[c]);
      C[j][c] = R.r(-(i128)b * ri[c] + (i128)a * rj[c]);
    }
    cur[i] = cur[j] = 1;
  }
  int64_t delta = 1;
  for (size_t i = 0; i < r; ++i)
    if (cur[i] == eps) {
      std::swap(C[i], C[r - 1]);
      std::swap(cur[i], cur[r - 1]);
      delta = eps;
    }
  return {C, delta};
}

// rows R with R G R^T = diag(1..1, dU) + p diag(1..1, dV); returns ranks and deltas
struct Normal {
  Mat rows;
  size_t nu = 0;
  int64_t dU = 1, dV = 1;
};

Normal normal_form(const ModRing& R, const Mat& G, int64_t eps) {
  const size_t n = G.size();
  auto [rows, nu] = unit_split(R, G);
  Mat g = gram_of(R, rows, G);
  std::vector<int64_t> du(nu);
  for (size_t i = 0; i < nu; ++i) du[i] = g[i][i];
  // remaining block divided by p, one digit less
  const size_t nv = n - nu;
  ModRing R1{R.q / R.p, R.p};
  Mat V(nv, std::vector<int64_t>(nv));
  for (size_t i = 0; i < nv; ++i)
    for (size_t j = 0; j < nv; ++j) {
      int64_t x = g[nu + i][nu + j];
      if (x % R.p) throw InvalidParameter("lattice is not U + pV at p");
      V[i][j] = x / R.p;
    }
  auto [vrows, nvu] = unit_split(R1, V);
  if (nvu != nv) throw InvalidParameter("lattice has Jordan components beyond p^1");
  Mat gv = gram_of(R1, vrows, V);
  std::vector<int64_t> dv(nv);
  for (size_t i = 0; i < nv; ++i) dv[i] = gv[i][i];
  auto [Cu, deltaU] = canon_diag(R, du, eps);
  auto [Cv, deltaV] = canon_diag(R1, dv, eps);
  Normal out;
  out.nu = nu;
  out.dU = deltaU;
  out.dV = deltaV;
  // compose the V-part changes (exact mod q/p, lifted as integers)
  Mat Vrows = mat_mul(R, mat_mul(R, Cv, vrows), Mat(rows.begin() + nu, rows.end()));
  Mat Urows = mat_mul(R, Cu, Mat(rows.begin(), rows.begin() + nu));
  out.rows = Urows;
  for (auto& r : Vrows) out.rows.push_back(r);
  return out;
}

} // namespace

IMat local_frame(const IntLattice& L, const IMat& Bw, int64_t p, int K) {
  require_prime(p);
  if (p == 2) throw InvalidParameter("local_frame needs an odd prime");
  if ((int)Bw.size() != L.rank()) throw ShapeMismatch("model rank differs from the lattice rank");
  int64_t q = 1;
  for (int i = 0; i < K; ++i) {
    if (q > (int64_t(1) << 40) / p) throw InvalidParameter("frame precision too large");
    q *= p;
  }
  ModRing R{q, p};
  const int64_t eps = smallest_nonresidue(p);
  auto red = [&](const IMat& M) {
    Mat X(M.size(), std::vector<int64_t>(M.size()));
    for (size_t i = 0; i < M.size(); ++i)
      for (size_t j = 0; j < M.size(); ++j) X[i][j] = R.r(M[i][j]);
    return X;
  };
  const Mat GL = red(L.gram()), GW = red(Bw);
  Normal nl = normal_form(R, GL, eps), nw = normal_form(R, GW, eps);
  if (nl.nu != nw.nu || nl.dU != nw.dU || nl.dV != nw.dV)
    throw InvalidParameter("lattice is not isometric to the local model at p");
  Mat T = mat_mul(R, inverse(R, nw.rows), nl.rows);
  // check T B T^T = Bw mod q / p
  Mat chk = gram_of(R, T, GL);
  ModRing R1{q / p, p};
  for (size_t i = 0; i < chk.size(); ++i)
    for (size_t j = 0; j < chk.size(); ++j)
      if (R1.r(chk[i][j] - GW[i][j]) != 0)
        throw InvalidParameter("local frame does not reach the requested precision");
  IMat out(T.size(), IVec(T.size()));
  for (size_t i = 0; i < T.size(); ++i)
    for (size_t j = 0; j < T.size(); ++j) out[i][j] = R1.r(T[i][j]);
  return out;
}

// ---------------------------------------------------------------------------
// chains

IMat hnf_basis(const std::vector<IVec>& gens) {
  if (gens.empty()) throw InvalidParameter("no generators");
  const size_t n = gens[0].size();
  std::vector<std::vector<Integer>> a;
  for (const auto& g : gens) {
    if (g.size() != n) throw ShapeMismatch("generators have different lengths");
    std::vector<Integer> row(n);
    for (size_t j = 0; j < n; ++j) row[j] = (long)g[j];
    a.push_back(row);
  }
  size_t top = 0;
  for (size_t c = 0; c < n && top < a.size(); ++c) {
    // gcd elimination in column c over rows top..
    for (;;) {
      size_t best = a.size();
      for (size_t r = top; r < a.size(); ++r)
        if (a[r][c] != 0 && (best == a.size() || abs(a[r][c]) < abs(a[best][c]))) best = r;
      if (best == a.size()) break;
      std::swap(a[top], a[best]);
      bool done = true;
      for (size_t r = top + 1; r < a.size(); ++r) {
        if (a[r][c] == 0) continue;
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), a[r][c].get_mpz_t(), a[top][c].get_mpz_t());
        for (size_t j = 0; j < n; ++j) a[r][j] -= f * a[top][j];
        if (a[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (top < a.size() && a[top][c] != 0) {
      if (a[top][c] < 0)
        for (auto& x : a[top]) x = -x;
      for (size_t r = 0; r < top; ++r) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), a[r][c].get_mpz_t(), a[top][c].get_mpz_t());
        for (size_t j = 0; j < n; ++j) a[r][j] -= f * a[top][j];
      }
      ++top;
    }
  }
  if (top != n) throw InvalidParameter("generators do not span a full-rank lattice");
  IMat out(n, IVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!a[i][j].fits_slong_p()) throw InvalidParameter("basis entry overflows 64 bits");
      out[i][j] = a[i][j].get_si();
    }
  return out;
}

namespace {

// X with rows(child) = X rows(parent); true when X is integral
bool contained(const IMat& child, const IMat& parent) {
  const size_t n = parent.size();
  // solve X parent = child row by row: x^T parent = c^T
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M[i][j] = (long)parent[j][i];  // columns are parent rows
  for (const auto& c : child) {
    std::vector<std::vector<Rational>> A = M;
    std::vector<Rational> b(n);
    for (size_t i = 0; i < n; ++i) b[i] = (long)c[i];
    for (size_t col = 0; col < n; ++col) {
      size_t piv = col;
      while (piv < n && A[piv][col] == 0) ++piv;
      if (piv == n) throw InvalidParameter("degenerate chain basis");
      std::swap(A[piv], A[col]);
      std::swap(b[piv], b[col]);
      for (size_t r = 0; r < n; ++r) {
        if (r == col || A[r][col] == 0) continue;
        Rational f = A[r][col] / A[col][col];
        for (size_t j = col; j < n; ++j) A[r][j] -= f * A[col][j];
        b[r] -= f * b[col];
      }
    }
    for (size_t i = 0; i < n; ++i)
      if (Rational(b[i] / A[i][i]).get_den() != 1) return false;
  }
  return true;
}

} // namespace

void check_nested(const Chain& c) {
  const int n = c.base.rank();
  IMat prev(n, IVec(n, 0));
  for (int i = 0; i < n; ++i) prev[i][i] = 1;
  for (size_t k = 0; k < c.levels.size(); ++k) {
    const auto& lv = c.levels[k];
    if ((int)lv.basis.size() != n) throw ShapeMismatch("chain basis has the wrong size");
    if (!contained(lv.basis, prev))
      throw ChainNotNested("level (" + std::to_string(lv.n) + "," + std::to_string(lv.i) +
                           ") is not contained in the previous level");
    prev = lv.basis;
  }
}

namespace {

int64_t ipow_checked(int64_t p, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > INT64_MAX / p) throw InvalidParameter("power overflows");
    r *= p;
  }
  return r;
}

// pivot columns of the rows mod p
std::vector<int> pivots_mod_p(std::vector<IVec> rows, int64_t p) {
  std::vector<int> piv;
  const int n = rows.empty() ? 0 : (int)rows[0].size();
  size_t top = 0;
  for (int c = 0; c < n && top < rows.size(); ++c) {
    size_t r = top;
    while (r < rows.size() && mod(rows[r][c], p) == 0) ++r;
    if (r == rows.size()) continue;
    std::swap(rows[top], rows[r]);
    int64_t iv = invmod(mod(rows[top][c], p), p);
    for (auto& x : rows[top]) x = mod(x * iv, p);
    for (size_t k = 0; k < rows.size(); ++k) {
      if (k == top) continue;
      int64_t f = mod(rows[k][c], p);
      for (int j = 0; j < n; ++j) rows[k][j] = mod(rows[k][j] - f * rows[top][j], p);
    }
    piv.push_back(c);
    ++top;
  }
  return piv;
}

} // namespace

Chain decay_chain(const IntLattice& Lprime, const IMat& Bw, int64_t p, PointType t,
                  const DecayData& d, int n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be >= 0");
  const int r = Lprime.rank();
  if (d.span.size() != 3) throw InvalidParameter("decay span must have rank 3");
  if (pivots_mod_p(d.span, p).size() != 3) throw InvalidParameter("decay span is not primitive of rank 3");
  const int K = n_max + 4;
  const IMat T = local_frame(Lprime, Bw, p, K);
  auto toL = [&](const IVec& w) {
    IVec v(r, 0);
    for (int i = 0; i < r; ++i) {
      if (!w[i]) continue;
      for (int j = 0; j < r; ++j) v[j] += mod(w[i], ipow_checked(p, K)) * T[i][j];
    }
    int64_t q = ipow_checked(p, K - 1);
    for (auto& x : v) x = mod(x, q);
    return v;
  };
  // complement of the span among the w-basis vectors
  std::vector<IVec> comp;
  {
    auto piv = pivots_mod_p(d.span, p);
    for (int j = 0; j < r; ++j)
      if (std::find(piv.begin(), piv.end(), j) == piv.end()) {
        IVec e(r, 0);
        e[j] = 1;
        comp.push_back(e);
      }
  }
  std::vector<IVec> lam0p;  // Lambda_0' with Lambda_0 = Lambda_0' + Z_p w
  if (t == PointType::Superspecial) {
    if (d.witness.empty()) throw InvalidParameter("superspecial chain needs a DvR witness");
    for (size_t a = 0; a < 3 && lam0p.empty(); ++a)
      for (size_t b = a + 1; b < 3 && lam0p.empty(); ++b)
        if (pivots_mod_p({d.witness, d.span[a], d.span[b]}, p).size() == 3) lam0p = {d.span[a], d.span[b]};
    if (lam0p.empty()) throw InvalidParameter("witness does not lie in the decay span mod p");
  }
  Chain c;
  c.type = t;
  c.base = Lprime;
  auto level = [&](int n, int i, const std::vector<IVec>& gens) {
    ChainLevel lv;
    lv.n = n;
    lv.i = i;
    lv.basis = hnf_basis(gens);
    lv.lattice = Lprime.sublattice(lv.basis);
    lv.lattice.set_label(Lprime.label() + "_" + std::to_string(n) + (t == PointType::Superspecial ? "," + std::to_string(i) : ""));
    lv.index = abs(det(lv.basis));
    return lv;
  };
  for (int n = 0; n <= n_max; ++n) {
    const int64_t pn = ipow_checked(p, n), pn1 = pn * p;
    std::vector<IVec> base_gens;
    for (int j = 0; j < r; ++j) {
      IVec e(r, 0);
      e[j] = pn1;
      base_gens.push_back(e);
    }
    for (const auto& w : comp) base_gens.push_back(toL(w));
    std::vector<IVec> g1 = base_gens;
    for (const auto& s : d.span) {
      IVec v = toL(s);
      for (auto& x : v) x *= pn;
      g1.push_back(v);
    }
    c.levels.push_back(level(n, 1, g1));
    if (t == PointType::Superspecial) {
      std::vector<IVec> g2 = base_gens;
      for (const auto& s : lam0p) {
        IVec v = toL(s);
        for (auto& x : v) x *= pn;
        g2.push_back(v);
      }
      IVec w = toL(d.witness);
      for (auto& x : w) x *= pn1;
      g2.push_back(w);
      c.levels.push_back(level(n, 2, g2));
    }
  }
  // index checks: p^{3n} and p^{3n+1}
  for (const auto& lv : c.levels) {
    Integer want = 1;
    for (int k = 0; k < 3 * lv.n + (lv.i == 2 ? 1 : 0); ++k) want *= (long)p;
    if (lv.index != want)
      throw InvalidParameter("chain level (" + std::to_string(lv.n) + "," + std::to_string(lv.i) +
                             ") has index " + lv.index.get_str() + ", expected " + want.get_str());
  }
  return c;
}

// ---------------------------------------------------------------------------
// budget

namespace {

Rational abs_qL(const IntLattice& L, int64_t m) {
  EisResult q = L.rank() == 4 ? q_L_hilbert(L, m) : q_L_siegel(L, m);
  if (!q.value.is_rational())
    throw InvalidParameter("q_L(" + std::to_string(m) + ") is not rational: " + q.value.str());
  return abs(q.value.coef);
}

ChainIndices chain_indices(const Chain& c) {
  ChainIndices idx;
  for (const auto& lv : c.levels) {
    if ((size_t)lv.n >= idx.size()) idx.resize(lv.n + 1);
    idx[lv.n].push_back(lv.index);
  }
  return idx;
}

} // namespace

BudgetReport run_budget(const BudgetInput& in) {
  require_prime(in.p);
  if (in.A < 1) throw InvalidParameter("A must be >= 1");
  if (in.M < 0) throw InvalidParameter("M must be >= 0");
  if (in.global.rank() != 4 && in.global.rank() != 5)
    throw ShapeMismatch("the global lattice must have rank 4 or 5");
  if (in.chain.levels.empty()) throw InvalidParameter("empty chain");
  if (in.omega_C) check_nonordinary_total(in.p, *in.omega_C, in.nonordinary_A);
  check_nested(in.chain);
  const size_t width = in.chain.type == PointType::Superspecial ? 2 : 1;
  if (in.chain.levels.size() % width) throw ShapeMismatch("incomplete superspecial chain level");

  std::vector<std::vector<uint64_t>> counts;
  for (const auto& lv : in.chain.levels) counts.push_back(norm_counts(lv.lattice, in.M));

  BudgetReport rep;
  {
    const auto& last = counts.back();
    rep.chain_exhausted = true;
    for (size_t k = 1; k < last.size(); ++k)
      if (last[k]) rep.chain_exhausted = false;
  }
  Integer disc_p = 1;
  {
    int v = vp(in.p, in.chain.base.det());
    for (int k = 0; k < v; ++k) disc_p *= (long)in.p;
  }
  rep.eis = eisenstein_budget(in.chain.type, false, in.A, in.p, chain_indices(in.chain), disc_p);

  std::vector<int64_t> T = build_T_set(in.tset, in.p, in.M);
  std::vector<int64_t> ex = in.exclude;
  std::sort(ex.begin(), ex.end());
  for (int64_t m : T) {
    if (std::binary_search(ex.begin(), ex.end(), m)) continue;
    ChainCounts r(in.chain.levels.size() / width);
    for (size_t k = 0; k < in.chain.levels.size(); ++k) r[k / width].push_back(counts[k][2 * m]);
    BudgetRow row;
    row.m = m;
    row.local = local_bound(in.chain.type, in.A, in.p, r);
    row.g = global_g(in.A, in.p, abs_qL(in.global, m));
    rep.total_local += row.local;
    rep.total_g += row.g;
    row.cum_local = rep.total_local;
    row.cum_g = rep.total_g;
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty() && rep.total_g > 0) rep.ratio = rep.total_local / rep.total_g;
  return rep;
}

DemoResult run_budget_demo(const DemoSpec& s) {
  DemoResult out;
  const int p = s.p;
  auto model_for = [&](int N) {
    int M = std::max(12, required_precision(p, s.n_decay, N));
    return build_model(s.kind, p, s.d, M, s.c);
  };
  // A first, then the truncation the decay checks need
  int N = 64;
  {
    auto m0 = model_for(N);
    auto c0 = make_curve(m0, N, s.x, s.y, s.z);
    out.A = non_ordinary_valuation(m0, c0);
  }
  N = (int)Thresholds::dr(out.A, p, s.n_decay) + 1;
  auto model = model_for(N);
  auto curve = make_curve(model, N, s.x, s.y, s.z);
  if (non_ordinary_valuation(model, curve) != out.A)
    throw InvalidParameter("non-ordinary valuation changed with the truncation");
  auto Finf = f_infinity(model, curve);
  out.decay = find_decaying_submodule(model, Finf, out.A, s.n_decay);
  if (out.decay.indeterminate) throw NonConvergent("decay search is indeterminate at this precision");
  if (!out.decay.found) throw NotFound("no rapidly decaying rank 3 submodule");
  const PointType t = is_superspecial(s.kind) ? PointType::Superspecial : PointType::Supergeneric;
  if (t == PointType::Superspecial && !out.decay.has_witness)
    throw NotFound("no very rapidly decaying vector");
  DecayData dd{out.decay.basis, out.decay.witness};

  BudgetInput in;
  in.p = p;
  in.A = out.A;
  in.type = t;
  in.global = s.global;
  in.tset = s.tset;
  in.M = s.M;
  in.exclude = s.exclude;
  // deepen the chain until its last level has no nonzero vector of norm <= M
  for (int n_max = 1; n_max <= 12; ++n_max) {
    out.chain = decay_chain(s.Lprime, model.local_qform(), p, t, dd, n_max);
    const auto& last = out.chain.levels.back().lattice;
    if (successive_minima(last)[0] > Rational((long)s.M)) break;
  }
  in.chain = out.chain;
  out.report = run_budget(in);
  return out;
}

} // namespace ssint
