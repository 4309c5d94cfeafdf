#include "ssint/quadform.hpp"

#include <algorithm>
#include <cstdlib>

namespace ssint {

IntLattice::IntLattice(IMat gram, std::string label) : B_(std::move(gram)), label_(std::move(label)) {
  const int n = (int)B_.size();
  if (n < 1) throw InvalidParameter("empty Gram matrix");
  for (const auto& row : B_)
    if ((int)row.size() != n) throw ShapeMismatch("Gram matrix is not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (B_[i][j] != B_[j][i]) throw InvalidParameter("Gram matrix is not symmetric");
}

IntLattice IntLattice::from_qform(const IMat& A, std::string label) {
  IMat B = A;
  for (auto& row : B)
    for (auto& x : row) x *= 2;
  return IntLattice(B, std::move(label));
}

IntLattice IntLattice::diagonal(const IVec& q, std::string label) {
  IMat B(q.size(), IVec(q.size(), 0));
  for (size_t i = 0; i < q.size(); ++i) B[i][i] = 2 * q[i];
  return IntLattice(B, std::move(label));
}

Integer det(const IMat& M) {
  // Bareiss fraction-free elimination
  const int n = (int)M.size();
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = (long)M[i][j];
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<std::vector<Rational>> to_rational(const IMat& M) {
  std::vector<std::vector<Rational>> R(M.size());
  for (size_t i = 0; i < M.size(); ++i)
    for (auto x : M[i]) R[i].push_back(Rational((long)x));
  return R;
}

Integer IntLattice::det() const { return ssint::det(B_); }

bool IntLattice::is_even() const {
  for (int i = 0; i < rank(); ++i)
    if (B_[i][i] % 2) return false;
  return true;
}

bool IntLattice::is_positive_definite() const {
  for (int k = 1; k <= rank(); ++k) {
    IMat sub(k, IVec(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub[i][j] = B_[i][j];
    if (ssint::det(sub) <= 0) return false;
  }
  return true;
}

void IntLattice::require_positive_definite() const {
  if (!is_positive_definite())
    throw NotPositiveDefinite("lattice '" + label_ + "' is not positive definite");
}

i128 IntLattice::norm2(const IVec& v) const {
  i128 s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (!v[i]) continue;
    i128 row = 0;
    for (int j = 0; j < rank(); ++j) row += (i128)B_[i][j] * v[j];
    s += row * v[i];
  }
  return s;
}

IntLattice IntLattice::sublattice(const IMat& basis) const {
  const int k = (int)basis.size();
  IMat G(k, IVec(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      i128 s = 0;
      for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j) s += (i128)basis[a][i] * B_[i][j] * basis[b][j];
      G[a][b] = (int64_t)s;
    }
  return IntLattice(G, label_ + "-sub");
}

IntLattice IntLattice::scaled(int64_t c) const {
  IMat G = B_;
  for (auto& row : G)
    for (auto& x : row) x *= c;
  return IntLattice(G, label_);
}

IntLattice IntLattice::direct_sum(const IntLattice& o) const {
  const int n = rank(), m = o.rank();
  IMat G(n + m, IVec(n + m, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = B_[i][j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G[n + i][n + j] = o.B_[i][j];
  return IntLattice(G, label_ + "+" + o.label_);
}

static int jacobi(int64_t a, int64_t n) {
  a = mod(a, n);
  int r = 1;
  while (a) {
    while (a % 2 == 0) {
      a /= 2;
      int64_t t = n % 8;
      if (t == 3 || t == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

int kronecker(int64_t D, int64_t a) {
  if (D == 0 || mod(D, 4) == 2 || mod(D, 4) == 3)
    throw BadDiscriminant(std::to_string(D) + " is not a discriminant");
  if (a == 0) return (D == 1 || D == -1) ? 1 : 0;
  int r = 1;
  if (a < 0) {
    a = -a;
    if (D < 0) r = -r;
  }
  while (a % 2 == 0) {
    a /= 2;
    if (D % 2 == 0) return 0;
    int64_t t = mod(D, 8);
    if (t == 3 || t == 5) r = -r;
  }
  if (a == 1) return r;
  return r * jacobi(D, a);
}

std::pair<int64_t, int64_t> fundamental_part(int64_t D) {
  if (D == 0 || mod(D, 4) == 2 || mod(D, 4) == 3)
    throw BadDiscriminant(std::to_string(D) + " is not a discriminant");
  int64_t s = D < 0 ? -1 : 1, g = 1;
  for (auto [q, e] : factor(std::llabs(D))) {
    if (e % 2) s *= q;
    g *= ipow(q, e / 2);
  }
  if (mod(s, 4) == 1) return {s, g};
  return {4 * s, g / 2};
}

Rational sigma_s(int64_t m, int s, const std::function<int(int64_t)>& chi) {
  if (m < 1) throw InvalidParameter("sigma_s needs m >= 1");
  Rational r = 0;
  for (auto d : divisors(m)) {
    int c = chi(d);
    if (c) r += c * rpow(Rational((long)d), s);
  }
  return r;
}

Rational sigma_s(int64_t m, int s, int64_t D) {
  if (D == 1) return sigma_s(m, s);
  return sigma_s(m, s, [D](int64_t d) { return kronecker(D, d); });
}

Rational sigma_s(int64_t m, int s) {
  return sigma_s(m, s, [](int64_t) { return 1; });
}

std::vector<Rational> LocalLattice::diagonal() const {
  std::vector<Rational> a;
  for (const auto& b : blocks) {
    if (b.kind != LocalBlock::Diag) throw InvalidParameter("lattice is not diagonal at 2");
    a.push_back(b.unit * rpow(Rational((long)ell), b.val));
  }
  return a;
}

int LocalLattice::det_val() const {
  int v = 0;
  for (const auto& b : blocks) {
    if (b.kind == LocalBlock::Diag) v += b.val + (ell == 2 ? 1 : 0);
    else v += 2 * b.val;
  }
  return v;
}

namespace {

using RMat = std::vector<std::vector<Rational>>;

// e_j += c e_i on a symmetric matrix
void add_multiple(RMat& B, int j, int i, const Rational& c) {
  const int n = (int)B.size();
  for (int k = 0; k < n; ++k) B[j][k] += c * B[i][k];
  for (int k = 0; k < n; ++k) B[k][j] += c * B[k][i];
}

bool odd_numerator(const Rational& r) { return mpz_odd_p(r.get_num_mpz_t()) != 0; }

} // namespace

LocalLattice local_decompose(const IntLattice& L, int64_t ell) {
  if (!is_prime(ell)) throw InvalidParameter("ell must be prime");
  LocalLattice out;
  out.ell = ell;
  out.gram = L.gram();
  RMat B = to_rational(L.gram());
  std::vector<int> act;
  for (int i = 0; i < L.rank(); ++i) act.push_back(i);
  const Rational two(2);
  while (!act.empty()) {
    int best = 1 << 30, bi = -1, bj = -1;
    for (int i : act)
      for (int j : act) {
        if (j < i || B[i][j] == 0) continue;
        int v = vp(ell, B[i][j]);
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) throw InvalidParameter("degenerate lattice");
    if (bi == bj) {
      const int i = bi;
      for (int j : act)
        if (j != i && B[i][j] != 0) add_multiple(B, j, i, -B[i][j] / B[i][i]);
      LocalBlock blk;
      Rational q = B[i][i] / two;
      blk.val = vp(ell, q);
      blk.unit = q / rpow(Rational((long)ell), blk.val);
      out.blocks.push_back(blk);
      act.erase(std::find(act.begin(), act.end(), i));
      continue;
    }
    if (ell != 2) {
      add_multiple(B, bi, bj, 1);
      continue;
    }
    const int i = bi, j = bj;
    const Rational a = B[i][i], b = B[i][j], c = B[j][j];
    const Rational dt = a * c - b * b;
    for (int l : act) {
      if (l == i || l == j) continue;
      // solve x a + y b = -B_li, x b + y c = -B_lj
      Rational x = (-B[l][i] * c + B[l][j] * b) / dt;
      Rational y = (B[l][i] * b - B[l][j] * a) / dt;
      if (x != 0) add_multiple(B, l, i, x);
      if (y != 0) add_multiple(B, l, j, y);
    }
    LocalBlock blk;
    blk.val = vp(2, b);
    Rational scale = rpow(Rational(2), blk.val + 1);
    Rational al = a / scale, ga = c / scale;
    blk.kind = (odd_numerator(al) && odd_numerator(ga)) ? LocalBlock::N : LocalBlock::H;
    out.blocks.push_back(blk);
    act.erase(std::find(act.begin(), act.end(), i));
    act.erase(std::find(act.begin(), act.end(), j));
  }
  return out;
}

LocalLattice diagonalize_Zp(const IntLattice& L, int64_t p) {
  if (p == 2) throw InvalidParameter("diagonalize_Zp needs an odd prime");
  return local_decompose(L, p);
}

} // namespace ssint
