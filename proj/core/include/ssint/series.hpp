#pragma once

#include <vector>

#include "ssint/padic.hpp"

namespace ssint {

// Power series in t truncated after t^N. Missing terms are exact zeros.
class Series {
public:
  Series() = default;
  Series(const PAdicParams* P, int N);

  static Series constant(const PAdic& c, int N);
  static Series monomial(const PAdic& c, int k, int N);

  const PAdicParams* params() const { return P_; }
  int trunc() const { return N_; }
  const PAdic& operator[](int k) const { return c_[k]; }
  PAdic& operator[](int k) { return c_[k]; }
  const std::vector<PAdic>& coeffs() const { return c_; }

  // least exponent with a nonzero coefficient, kInf if none
  int vt() const;
  // least p-adic valuation among coefficients (kInf for zero)
  int min_val() const;
  bool is_zero() const { return vt() == kInf; }
  bool is_exact_zero() const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series operator*(const PAdic& c) const;
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  Series pow(unsigned e) const;
  // sigma on the coefficients and t -> t^p
  Series frobenius_twist() const;
  // sigma^k on the coefficients only
  Series frob_coeffs(int k) const;
  bool same(const Series& o) const;

private:
  const PAdicParams* P_ = nullptr;
  int N_ = 0;
  std::vector<PAdic> c_;
};

class MatSeries {
public:
  MatSeries() = default;
  MatSeries(const PAdicParams* P, int rows, int cols, int N);
  static MatSeries identity(const PAdicParams* P, int n, int N);

  int rows() const { return r_; }
  int cols() const { return c_; }
  int trunc() const { return N_; }
  const PAdicParams* params() const { return P_; }
  Series& operator()(int i, int j) { return e_[i * c_ + j]; }
  const Series& operator()(int i, int j) const { return e_[i * c_ + j]; }

  MatSeries operator+(const MatSeries& o) const;
  MatSeries operator*(const MatSeries& o) const;
  MatSeries frobenius_twist() const;
  // least t-adic valuation of the entries
  int vt() const;
  bool same(const MatSeries& o) const;
  // M * w for a constant vector w
  std::vector<Series> apply(const std::vector<PAdic>& w) const;
  std::vector<Series> column(int j) const;

private:
  const PAdicParams* P_ = nullptr;
  int r_ = 0, c_ = 0, N_ = 0;
  std::vector<Series> e_;
};

Series series_mul(const Series& a, const Series& b);
MatSeries mat_mul(const MatSeries& A, const MatSeries& B);
Series frobenius_twist(const Series& a);

// prod_{i=0}^{K} (I + sigma_t^i(F)); K < 0 selects the least K after which
// every factor is the identity to truncation order.
MatSeries truncated_product(const MatSeries& F, int K = -1);

enum class Verdict { False, True, Indeterminate };
const char* verdict_str(Verdict v);

struct DecayIndex {
  int k = kInf;  // kInf: none up to truncation
  bool sound = true;
};

// Per t-exponent valuation data of a vector of series.
struct DecayProfile {
  int N = 0;
  // least valuation among coordinates with a determined nonzero coefficient
  std::vector<int> val;
  // lower bound for the true least valuation (fuzzy zeros count by precision)
  std::vector<int> lo;

  // least k whose t^k coefficient has a coordinate of valuation < -n
  DecayIndex decay_index(int n) const;
  // is there a certain hit at some k <= bound, and could there be one?
  Verdict hit_within(int n, int bound) const;
};

DecayProfile valuation_profile(const std::vector<Series>& u);
DecayProfile column_valuation_profile(const MatSeries& M, const std::vector<PAdic>& w);

} // namespace ssint
