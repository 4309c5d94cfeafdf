#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ssint/series.hpp"

namespace ssint {

enum class CrystalCase {
  HilbertInertSuperspecial,
  HilbertInertSupergeneric,
  HilbertSplit,
  SiegelSuperspecial,
  SiegelSupergeneric,
};

const char* case_name(CrystalCase c);
CrystalCase parse_case(const std::string& s);
bool is_superspecial(CrystalCase c);
int case_rank(CrystalCase c);
bool is_siegel(CrystalCase c);

// How F^{(i)} is formed for the infinite product.
//  Pullback: constants twisted by sigma^i, curve coordinates raised to p^i.
//  SeriesTwist: sigma_t^i applied to the specialized matrix.
// The two agree exactly on monomial curves.
enum class ProductMode { Pullback, SeriesTwist };

struct CrystalModel {
  CrystalCase kind{};
  std::shared_ptr<const PAdicParams> params;
  PAdic eps, lambda, c, a_frob;
  Residue c_residue;
  int rank = 0;

  const PAdicParams* P() const { return params.get(); }
  // Perturbation matrix with constants twisted by sigma^k, at coordinates x, y, z.
  MatSeries F(int k, const Series& x, const Series& y, const Series& z) const;
  // bilinear Gram of the local lattice in the w-basis, Q(v) = v^T B v / 2
  std::vector<std::vector<int64_t>> local_qform() const;
};

CrystalModel build_model(CrystalCase kind, int p, int d, int M, const Residue& c);

struct CurveTerm {
  int exp = 0;
  Residue coeff;
};

struct FormalCurve {
  const PAdicParams* P = nullptr;
  int N = 0;
  Series x, y, z;
  std::vector<CurveTerm> xt, yt, zt;
};

// Coefficients are Teichmueller lifts of the given residues.
FormalCurve make_curve(const CrystalModel& model, int N, const std::vector<CurveTerm>& x,
                       const std::vector<CurveTerm>& y, const std::vector<CurveTerm>& z = {});

// local equation of the non-ordinary locus pulled back to the curve
Series non_ordinary_series(const CrystalModel& model, const FormalCurve& curve);
int non_ordinary_valuation(const CrystalModel& model, const FormalCurve& curve);

MatSeries f_infinity(const CrystalModel& model, const FormalCurve& curve,
                     ProductMode mode = ProductMode::Pullback);

// M >= n_max + 2 + ceil(log_p N)
int required_precision(int p, int n_max, int N);

struct Thresholds {
  // DR: A(1 + p + ... + p^n)
  static long dr(int A, int p, int n);
  // DvR: A(1 + ... + p^{n-1}) + a p^n; at n = 0 uses floor(A/p) + a
  static Rational dvr(int A, const Rational& a, int p, int n);
};

DecayIndex decay_index(const MatSeries& Finf, const std::vector<PAdic>& w, int n);
Verdict check_DR(const MatSeries& Finf, const std::vector<PAdic>& w, int A, int n_max);
Verdict check_DvR(const MatSeries& Finf, const std::vector<PAdic>& w, int A, const Rational& a,
                  int n_max);
Verdict profile_DR(const DecayProfile& prof, int A, int p, int n_max);
Verdict profile_DvR(const DecayProfile& prof, int A, const Rational& a, int p, int n_max);

// integer coordinate vector -> exact p-adic vector
std::vector<PAdic> int_vector(const PAdicParams* P, const std::vector<int64_t>& v);

struct SubmoduleResult {
  bool found = false;
  std::vector<std::vector<int64_t>> basis;  // three integer vectors (w-coordinates)
  std::vector<int64_t> witness;             // DvR witness (superspecial)
  bool has_witness = false;
  std::vector<int64_t> falsifier;           // first failing class when not found
  long classes_checked = 0;
  bool indeterminate = false;
};

struct SpanVerdict {
  Verdict verdict = Verdict::True;
  std::vector<int64_t> falsifier;
  long classes_checked = 0;
};

// Test every primitive class mod p^B of the span (up to unit scaling) for DR.
SpanVerdict verify_span(const MatSeries& Finf, const std::vector<std::vector<int64_t>>& span,
                        int A, int n_max, int B);

// first DvR vector among the given candidates, a = A/2
std::pair<bool, std::vector<int64_t>> find_dvr_witness(
    const MatSeries& Finf, const std::vector<std::vector<int64_t>>& candidates, int A, int n_max);

SubmoduleResult find_decaying_submodule(const CrystalModel& model, const MatSeries& Finf, int A,
                                        int n_max, int B = 2);

} // namespace ssint
