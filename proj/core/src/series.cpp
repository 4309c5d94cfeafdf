#include "ssint/series.hpp"

#include <algorithm>

namespace ssint {

Series::Series(const PAdicParams* P, int N) : P_(P), N_(N), c_(N + 1, PAdic::zero(P)) {
  if (N < 0) throw InvalidParameter("truncation order must be >= 0");
}

Series Series::constant(const PAdic& c, int N) { return monomial(c, 0, N); }

Series Series::monomial(const PAdic& c, int k, int N) {
  Series s(c.params(), N);
  if (k <= N) s.c_[k] = c;
  return s;
}

int Series::vt() const {
  for (int k = 0; k <= N_; ++k)
    if (!c_[k].is_zero()) return k;
  return kInf;
}

bool Series::is_exact_zero() const {
  for (const auto& x : c_)
    if (!x.is_exact_zero()) return false;
  return true;
}

int Series::min_val() const {
  int v = kInf;
  for (const auto& x : c_) v = std::min(v, x.val());
  return v;
}

static void check_compat(const Series& a, const Series& b) {
  if (a.trunc() != b.trunc()) throw ShapeMismatch("series truncation orders differ");
  if (a.params() != b.params()) throw ShapeMismatch("series parameters differ");
}

Series Series::operator+(const Series& o) const {
  check_compat(*this, o);
  Series r(*this);
  for (int k = 0; k <= N_; ++k)
    if (!o.c_[k].is_exact_zero()) r.c_[k] += o.c_[k];
  return r;
}

Series Series::operator-() const {
  Series r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator*(const Series& o) const {
  check_compat(*this, o);
  std::vector<int> ia, ib;
  for (int k = 0; k <= N_; ++k) {
    if (!c_[k].is_exact_zero()) ia.push_back(k);
    if (!o.c_[k].is_exact_zero()) ib.push_back(k);
  }
  Series r(P_, N_);
  for (int i : ia)
    for (int j : ib) {
      if (i + j > N_) break;
      r.c_[i + j] += c_[i] * o.c_[j];
    }
  return r;
}

Series Series::operator*(const PAdic& c) const {
  Series r(*this);
  for (auto& x : r.c_)
    if (!x.is_exact_zero()) x = x * c;
  return r;
}

Series Series::pow(unsigned e) const {
  Series r = constant(PAdic::from_int(P_, 1), N_);
  Series b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

Series Series::frobenius_twist() const {
  Series r(P_, N_);
  const int p = P_->p;
  for (int k = 0; (long)k * p <= N_; ++k) r.c_[k * p] = c_[k].frob(1);
  return r;
}

Series Series::frob_coeffs(int k) const {
  Series r(*this);
  for (auto& x : r.c_) x = x.frob(k);
  return r;
}

bool Series::same(const Series& o) const {
  if (N_ != o.N_) return false;
  for (int k = 0; k <= N_; ++k)
    if (!c_[k].same(o.c_[k])) return false;
  return true;
}

Series series_mul(const Series& a, const Series& b) { return a * b; }
Series frobenius_twist(const Series& a) { return a.frobenius_twist(); }

MatSeries::MatSeries(const PAdicParams* P, int rows, int cols, int N)
    : P_(P), r_(rows), c_(cols), N_(N), e_(rows * cols, Series(P, N)) {}

MatSeries MatSeries::identity(const PAdicParams* P, int n, int N) {
  MatSeries I(P, n, n, N);
  for (int i = 0; i < n; ++i) I(i, i)[0] = PAdic::from_int(P, 1);
  return I;
}

MatSeries MatSeries::operator+(const MatSeries& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw ShapeMismatch("matrix shapes differ");
  MatSeries R(*this);
  for (size_t i = 0; i < e_.size(); ++i) R.e_[i] += o.e_[i];
  return R;
}

MatSeries MatSeries::operator*(const MatSeries& o) const {
  if (c_ != o.r_) throw ShapeMismatch("matrix shapes do not compose");
  if (N_ != o.N_) throw ShapeMismatch("matrix truncation orders differ");
  MatSeries R(P_, r_, o.c_, N_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < o.c_; ++j) {
      Series acc(P_, N_);
      for (int k = 0; k < c_; ++k) {
        const Series& a = (*this)(i, k);
        const Series& b = o(k, j);
        if (a.is_exact_zero() || b.is_exact_zero()) continue;
        acc += a * b;
      }
      R(i, j) = acc;
    }
  return R;
}

MatSeries MatSeries::frobenius_twist() const {
  MatSeries R(*this);
  for (auto& s : R.e_) s = s.frobenius_twist();
  return R;
}

int MatSeries::vt() const {
  int v = kInf;
  for (const auto& s : e_) v = std::min(v, s.vt());
  return v;
}

bool MatSeries::same(const MatSeries& o) const {
  if (r_ != o.r_ || c_ != o.c_) return false;
  for (size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].same(o.e_[i])) return false;
  return true;
}

std::vector<Series> MatSeries::apply(const std::vector<PAdic>& w) const {
  if ((int)w.size() != c_) throw ShapeMismatch("vector length does not match columns");
  std::vector<Series> u(r_, Series(P_, N_));
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j)
      if (!w[j].is_exact_zero()) u[i] += (*this)(i, j) * w[j];
  return u;
}

std::vector<Series> MatSeries::column(int j) const {
  std::vector<Series> u;
  for (int i = 0; i < r_; ++i) u.push_back((*this)(i, j));
  return u;
}

MatSeries mat_mul(const MatSeries& A, const MatSeries& B) { return A * B; }

MatSeries truncated_product(const MatSeries& F, int K) {
  const int N = F.trunc();
  const int v = F.vt();
  if (v == 0) throw NonConvergent("perturbation has a constant term");
  MatSeries P = MatSeries::identity(F.params(), F.rows(), N);
  if (v == kInf) return P;
  MatSeries Fi = F;
  long reach = v;
  for (int i = 0; K < 0 ? reach <= N : i <= K; ++i) {
    P = P * (MatSeries::identity(F.params(), F.rows(), N) + Fi);
    Fi = Fi.frobenius_twist();
    reach *= F.params()->p;
  }
  return P;
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::True: return "TRUE";
    case Verdict::False: return "FALSE";
    default: return "INDETERMINATE";
  }
}

DecayIndex DecayProfile::decay_index(int n) const {
  DecayIndex r;
  for (int k = 0; k <= N; ++k) {
    if (val[k] < -n) {
      r.k = k;
      return r;
    }
    if (lo[k] < -n) r.sound = false;
  }
  return r;
}

Verdict DecayProfile::hit_within(int n, int bound) const {
  bool maybe = false;
  for (int k = 0; k <= std::min(bound, N); ++k) {
    if (val[k] < -n) return Verdict::True;
    if (lo[k] < -n) maybe = true;
  }
  return maybe ? Verdict::Indeterminate : Verdict::False;
}

DecayProfile valuation_profile(const std::vector<Series>& u) {
  DecayProfile d;
  d.N = u.empty() ? 0 : u[0].trunc();
  d.val.assign(d.N + 1, kInf);
  d.lo.assign(d.N + 1, kInf);
  for (const auto& s : u)
    for (int k = 0; k <= d.N; ++k) {
      const PAdic& c = s[k];
      if (c.is_exact_zero()) continue;
      if (c.is_zero()) {
        d.lo[k] = std::min(d.lo[k], c.prec());
      } else {
        d.val[k] = std::min(d.val[k], c.val());
        d.lo[k] = std::min(d.lo[k], c.val());
      }
    }
  return d;
}

DecayProfile column_valuation_profile(const MatSeries& M, const std::vector<PAdic>& w) {
  return valuation_profile(M.apply(w));
}

} // namespace ssint
