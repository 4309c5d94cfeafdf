#include "ssint/crystal.hpp"

#include <algorithm>

namespace ssint {

const char* case_name(CrystalCase c) {
  switch (c) {
    case CrystalCase::HilbertInertSuperspecial: return "hilbert-inert-ssp";
    case CrystalCase::HilbertInertSupergeneric: return "hilbert-inert-sg";
    case CrystalCase::HilbertSplit: return "hilbert-split";
    case CrystalCase::SiegelSuperspecial: return "siegel-ssp";
    case CrystalCase::SiegelSupergeneric: return "siegel-sg";
  }
  return "?";
}

CrystalCase parse_case(const std::string& s) {
  for (auto c : {CrystalCase::HilbertInertSuperspecial, CrystalCase::HilbertInertSupergeneric,
                 CrystalCase::HilbertSplit, CrystalCase::SiegelSuperspecial,
                 CrystalCase::SiegelSupergeneric})
    if (s == case_name(c)) return c;
  throw InvalidParameter("unknown case '" + s + "'");
}

bool is_superspecial(CrystalCase c) {
  return c != CrystalCase::HilbertInertSupergeneric && c != CrystalCase::SiegelSupergeneric;
}

bool is_siegel(CrystalCase c) {
  return c == CrystalCase::SiegelSuperspecial || c == CrystalCase::SiegelSupergeneric;
}

int case_rank(CrystalCase c) { return is_siegel(c) ? 5 : 4; }

CrystalModel build_model(CrystalCase kind, int p, int d, int M, const Residue& c) {
  if (d % 2) throw InvalidParameter("the models need lambda, so d must be even");
  CrystalModel m;
  m.kind = kind;
  m.params = PAdicParams::get(p, d, M);
  const PAdicParams* P = m.P();
  m.rank = case_rank(kind);
  m.eps = PAdic::eps(P);
  m.lambda = PAdic::lambda(P);
  m.c_residue = c;
  m.c_residue.resize(d, 0);
  for (auto& x : m.c_residue) x = mod(x, p);

  // superspecial iff sigma^2 fixes c, i.e. c lies in F_{p^2}
  Residue c2 = residue_pow(*P, m.c_residue, (uint64_t)p * p);
  bool in_fp2 = c2 == m.c_residue;
  if (is_superspecial(kind) && !in_fp2)
    throw InvalidParameter("superspecial case needs sigma^2(c) = c");
  if (!is_superspecial(kind) && in_fp2)
    throw InvalidParameter("supergeneric case needs sigma^2(c) != c");

  m.c = PAdic::teichmuller(P, m.c_residue);
  m.a_frob = m.c.frob(1) - m.c.frob(-1);
  if (!is_superspecial(kind) && m.a_frob.val() != 0)
    throw InvalidParameter("a = sigma(c) - sigma^{-1}(c) must be a unit");
  return m;
}

namespace {

using CMat = std::vector<std::vector<PAdic>>;

CMat cmat(const PAdicParams* P, int n) { return CMat(n, std::vector<PAdic>(n, PAdic::zero(P))); }

void add_term(MatSeries& F, const Series& s, const CMat& C) {
  for (int i = 0; i < F.rows(); ++i)
    for (int j = 0; j < F.cols(); ++j)
      if (!C[i][j].is_exact_zero()) F(i, j) += s * C[i][j];
}

} // namespace

MatSeries CrystalModel::F(int k, const Series& x, const Series& y, const Series& z) const {
  const PAdicParams* P = this->P();
  const int N = x.trunc();
  const int p = P->p;
  auto R = [&](long a, long b) { return PAdic::from_rational(P, Rational(a, b)); };
  const PAdic lam = lambda.frob(k);
  const PAdic il = lam.inv();
  const PAdic cc = c.frob(k);
  const PAdic c2 = cc * cc;
  const PAdic ie = eps.inv();
  const PAdic one = R(1, 1), half = R(1, 2), h2p = R(1, 2 * p), ip = R(1, p);

  MatSeries F(P, rank, rank, N);
  const Series xy = x * y;
  switch (kind) {
    case CrystalCase::HilbertInertSuperspecial: {
      F(0, 0) = xy * (-h2p);
      F(0, 1) = xy * (lam * h2p);
      F(0, 2) = x * h2p;
      F(0, 3) = y * h2p;
      F(1, 0) = xy * (-h2p * il);
      F(1, 1) = xy * h2p;
      F(1, 2) = x * (h2p * il);
      F(1, 3) = y * (h2p * il);
      F(2, 0) = -y;
      F(2, 1) = y * lam;
      F(3, 0) = -x;
      F(3, 1) = x * lam;
      break;
    }
    case CrystalCase::HilbertSplit: {
      const Series s = x + y, d = x - y;
      F(0, 0) = xy * h2p;
      F(0, 1) = xy * (-lam * h2p);
      F(0, 2) = s * h2p;
      F(0, 3) = d * (-lam * h2p);
      F(1, 0) = xy * (h2p * il);
      F(1, 1) = xy * (-h2p);
      F(1, 2) = s * (h2p * il);
      F(1, 3) = d * (-h2p);
      F(2, 0) = s * half;
      F(2, 1) = s * (-lam * half);
      F(3, 0) = d * (half * il);
      F(3, 1) = d * (-half);
      break;
    }
    case CrystalCase::HilbertInertSupergeneric: {
      // F = (y/p) A + x B0 + (x y / p) B1
      CMat A = cmat(P, 4), B0 = cmat(P, 4), B1 = cmat(P, 4);
      A[0] = {-cc, -c2, -lam * c2, PAdic::zero(P)};
      A[1] = {half, PAdic::zero(P), lam * cc, c2 * half};
      A[2] = {half * il, cc * il, PAdic::zero(P), -c2 * half * il};
      A[3] = {PAdic::zero(P), -one, lam, cc};
      B0[0][1] = -one;
      B0[0][2] = lam;
      B0[1][3] = half;
      B0[2][3] = half * il;
      B1[0] = {PAdic::zero(P), cc, lam * cc, -c2};
      B1[1] = {PAdic::zero(P), -half, lam * half, cc * half};
      B1[2] = {PAdic::zero(P), -half * il, half, cc * half * il};
      const Series yp = y * ip;
      add_term(F, yp, A);
      add_term(F, x, B0);
      add_term(F, x * yp, B1);
      break;
    }
    case CrystalCase::SiegelSuperspecial: {
      const Series S = xy + z * z * (R(1, 4) * ie);
      const PAdic h2e = half * ie;
      F(0, 0) = S * h2p;
      F(0, 1) = S * (-h2p * il);
      F(0, 2) = x * (h2p * il);
      F(0, 3) = y * (h2p * il);
      F(0, 4) = z * (h2p * il);
      F(1, 0) = S * (lam * h2p);
      F(1, 1) = S * (-h2p);
      F(1, 2) = x * h2p;
      F(1, 3) = y * h2p;
      F(1, 4) = z * h2p;
      F(2, 0) = y * lam;
      F(2, 1) = -y;
      F(3, 0) = x * lam;
      F(3, 1) = -x;
      F(4, 0) = z * (lam * h2e);
      F(4, 1) = z * (-h2e);
      break;
    }
    case CrystalCase::SiegelSupergeneric: {
      // F = (y/p) A + (Q/p) B + x C + z D, Q = xy + z^2/(4 eps)
      const PAdic Z0 = PAdic::zero(P);
      const PAdic h2e = half * ie;
      CMat A = cmat(P, 5), B = cmat(P, 5), C = cmat(P, 5), D = cmat(P, 5);
      A[0] = {Z0, cc * lam, half, c2 * half, Z0};
      A[1] = {cc * il, Z0, half * il, -c2 * half * il, Z0};
      A[2] = {-c2, -lam * c2, -cc, Z0, Z0};
      A[3] = {-one, lam, Z0, cc, Z0};
      B[0] = {-half, lam * half, Z0, cc * half, Z0};
      B[1] = {-half * il, half, Z0, cc * half * il, Z0};
      B[2] = {cc, -cc * lam, Z0, -c2, Z0};
      C[0][3] = half;
      C[1][3] = half * il;
      C[2][0] = -one;
      C[2][1] = lam;
      D[0][4] = h2p;
      D[1][4] = h2p * il;
      D[2][4] = -cc * ip;
      D[4] = {-h2e, lam * h2e, Z0, cc * h2e, Z0};
      const Series Q = xy + z * z * (R(1, 4) * ie);
      add_term(F, y * ip, A);
      add_term(F, Q * ip, B);
      add_term(F, x, C);
      add_term(F, z, D);
      break;
    }
  }
  return F;
}

std::vector<std::vector<int64_t>> CrystalModel::local_qform() const {
  // bilinear Gram B (Q = v^T B v / 2) in the w-basis
  const int64_t p = P()->p, e = P()->eps;
  std::vector<std::vector<int64_t>> B(rank, std::vector<int64_t>(rank, 0));
  switch (kind) {
    case CrystalCase::HilbertInertSuperspecial:
      B[0][0] = 2 * p;
      B[1][1] = -2 * p * e;
      B[2][3] = B[3][2] = 1;
      break;
    case CrystalCase::HilbertSplit:
      B[0][0] = -2 * p;
      B[1][1] = 2 * p * e;
      B[2][2] = 2;
      B[3][3] = -2 * e;
      break;
    case CrystalCase::HilbertInertSupergeneric:
      B[0][3] = B[3][0] = p;
      B[1][1] = 2 * p;
      B[2][2] = -2 * p * e;
      break;
    case CrystalCase::SiegelSuperspecial:
      B[0][0] = -2 * p * e;
      B[1][1] = 2 * p;
      B[2][3] = B[3][2] = 1;
      B[4][4] = 2 * e;
      break;
    case CrystalCase::SiegelSupergeneric:
      B[0][0] = 2 * p;
      B[1][1] = -2 * p * e;
      B[2][3] = B[3][2] = p;
      B[4][4] = 2 * e;
      break;
  }
  return B;
}

FormalCurve make_curve(const CrystalModel& model, int N, const std::vector<CurveTerm>& x,
                       const std::vector<CurveTerm>& y, const std::vector<CurveTerm>& z) {
  const PAdicParams* P = model.P();
  FormalCurve C;
  C.P = P;
  C.N = N;
  C.xt = x;
  C.yt = y;
  C.zt = z;
  auto build = [&](const std::vector<CurveTerm>& terms, const char* name) {
    Series s(P, N);
    for (const auto& t : terms) {
      if (t.exp < 1) throw InvalidParameter(std::string("curve coordinate ") + name +
                                            " needs positive t-exponents");
      if (t.exp > N) continue;
      s[t.exp] += PAdic::teichmuller(P, t.coeff);
    }
    return s;
  };
  C.x = build(x, "x");
  C.y = build(y, "y");
  C.z = build(z, "z");
  if (!is_siegel(model.kind) && !C.z.is_exact_zero())
    throw InvalidParameter("Hilbert models take no z coordinate");
  return C;
}

Series non_ordinary_series(const CrystalModel& model, const FormalCurve& C) {
  const PAdicParams* P = model.P();
  const PAdic q = PAdic::from_rational(P, Rational(1, 4)) * model.eps.inv();
  switch (model.kind) {
    case CrystalCase::HilbertInertSuperspecial:
    case CrystalCase::HilbertSplit: return C.x * C.y;
    case CrystalCase::HilbertInertSupergeneric: return C.y;
    case CrystalCase::SiegelSuperspecial: return C.x * C.y + C.z * C.z * q;
    case CrystalCase::SiegelSupergeneric:
      return (C.x + Series::constant(model.a_frob, C.N)) * C.y + C.z * C.z * q;
  }
  return Series(P, C.N);
}

int non_ordinary_valuation(const CrystalModel& model, const FormalCurve& C) {
  Series H = non_ordinary_series(model, C);
  for (int k = 0; k <= C.N; ++k) {
    const PAdic& h = H[k];
    if (!h.is_zero() && h.val() <= 0) return k;
  }
  throw NotGenericallyOrdinary("non-ordinary equation vanishes mod p up to t^" +
                               std::to_string(C.N));
}

MatSeries f_infinity(const CrystalModel& model, const FormalCurve& C, ProductMode mode) {
  const PAdicParams* P = model.P();
  const int N = C.N;
  const int p = P->p;
  if (mode == ProductMode::SeriesTwist)
    return truncated_product(model.F(0, C.x, C.y, C.z));
  int vmin = std::min({C.x.vt(), C.y.vt(), C.z.vt()});
  MatSeries prod = MatSeries::identity(P, model.rank, N);
  if (vmin == kInf) return prod;
  Series X = C.x, Y = C.y, Z = C.z;
  long reach = vmin;
  for (int i = 0; reach <= N; ++i) {
    MatSeries Fi = model.F(i, X, Y, Z);
    if (Fi.vt() == 0) throw NonConvergent("perturbation has a constant term");
    prod = prod * (MatSeries::identity(P, model.rank, N) + Fi);
    X = X.pow(p);
    Y = Y.pow(p);
    Z = Z.pow(p);
    reach *= p;
  }
  return prod;
}

int required_precision(int p, int n_max, int N) {
  int lg = 0;
  long q = 1;
  while (q < N) {
    q *= p;
    ++lg;
  }
  return n_max + 2 + lg;
}

long Thresholds::dr(int A, int p, int n) {
  long s = 0, q = 1;
  for (int i = 0; i <= n; ++i) {
    s += q;
    q *= p;
  }
  return (long)A * s;
}

Rational Thresholds::dvr(int A, const Rational& a, int p, int n) {
  if (n == 0) return Rational(A / p) + a;
  return Rational(dr(A, p, n - 1)) + a * Rational(ipow(p, n));
}

std::vector<PAdic> int_vector(const PAdicParams* P, const std::vector<int64_t>& v) {
  std::vector<PAdic> w;
  for (auto x : v) w.push_back(PAdic::from_int(P, x));
  return w;
}

DecayIndex decay_index(const MatSeries& Finf, const std::vector<PAdic>& w, int n) {
  return column_valuation_profile(Finf, w).decay_index(n);
}

static Verdict combine(Verdict acc, Verdict v) {
  if (acc == Verdict::False || v == Verdict::False) return Verdict::False;
  if (acc == Verdict::Indeterminate || v == Verdict::Indeterminate) return Verdict::Indeterminate;
  return Verdict::True;
}

Verdict profile_DR(const DecayProfile& prof, int A, int p, int n_max) {
  Verdict acc = Verdict::True;
  for (int n = 0; n <= n_max; ++n) {
    long thr = Thresholds::dr(A, p, n);
    if (thr > prof.N)
      throw ThresholdExceedsTruncation("DR threshold " + std::to_string(thr) +
                                       " exceeds truncation " + std::to_string(prof.N));
    acc = combine(acc, prof.hit_within(n, (int)thr));
  }
  return acc;
}

Verdict profile_DvR(const DecayProfile& prof, int A, const Rational& a, int p, int n_max) {
  Verdict acc = Verdict::True;
  for (int n = 0; n <= n_max; ++n) {
    Rational thr = Thresholds::dvr(A, a, p, n);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), thr.get_num_mpz_t(), thr.get_den_mpz_t());
    if (fl > prof.N)
      throw ThresholdExceedsTruncation("DvR threshold exceeds truncation");
    acc = combine(acc, prof.hit_within(n, (int)fl.get_si()));
  }
  return acc;
}

Verdict check_DR(const MatSeries& Finf, const std::vector<PAdic>& w, int A, int n_max) {
  return profile_DR(column_valuation_profile(Finf, w), A, Finf.params()->p, n_max);
}

Verdict check_DvR(const MatSeries& Finf, const std::vector<PAdic>& w, int A, const Rational& a,
                  int n_max) {
  return profile_DvR(column_valuation_profile(Finf, w), A, a, Finf.params()->p, n_max);
}

} // namespace ssint
