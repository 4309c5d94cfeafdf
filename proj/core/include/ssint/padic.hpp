#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ssint/errors.hpp"
#include "ssint/rational.hpp"

namespace ssint {

inline constexpr int kInf = 1 << 28;

// Element of F_{p^d} in the basis 1, g, ..., g^{d-1}.
using Residue = std::vector<int64_t>;

// Shared per-(p, d, M) tables. Instances live in a write-once registry and
// are never mutated after construction.
class PAdicParams {
public:
  static std::shared_ptr<const PAdicParams> get(int p, int d, int M);

  int p = 0;
  int d = 0;
  int M = 0;
  int64_t eps = 0;  // smallest positive non-residue mod p
  std::vector<uint64_t> pw;  // p^0 .. p^M
  // Monic modulus g^d + f[d-1] g^{d-1} + ... + f[0]; coefficients in [0, p).
  std::vector<int64_t> modulus;
  // sigma(g)^j mod p^M for j < d
  std::vector<std::array<uint64_t, 4>> sigma_pow;
  // square root of eps (d even), stored mod p^M
  std::array<uint64_t, 4> lambda{};
  bool has_lambda = false;

  PAdicParams(int p, int d, int M);
};

class PAdic {
public:
  PAdic() = default;

  static PAdic zero(const PAdicParams* P);
  static PAdic from_int(const PAdicParams* P, int64_t n);
  static PAdic from_rational(const PAdicParams* P, const Rational& r);
  // unit part given by coefficient list (reduced mod p^rel), times p^val
  static PAdic make(const PAdicParams* P, int val, const std::vector<int64_t>& coeffs,
                    int rel_prec);
  // zero known only modulo p^abs_prec
  static PAdic fuzzy_zero(const PAdicParams* P, int abs_prec);
  static PAdic teichmuller(const PAdicParams* P, const Residue& r);
  static PAdic lambda(const PAdicParams* P);
  static PAdic eps(const PAdicParams* P);
  static PAdic gen(const PAdicParams* P);

  const PAdicParams* params() const { return P_; }
  int val() const { return val_; }
  // absolute precision: value known modulo p^prec
  int prec() const { return prec_; }
  int rel_prec() const { return val_ == kInf ? 0 : prec_ - val_; }
  bool is_exact_zero() const { return val_ == kInf && prec_ == kInf; }
  bool is_zero() const { return val_ == kInf; }
  const std::array<uint64_t, 4>& unit() const { return u_; }

  PAdic operator+(const PAdic& o) const;
  PAdic operator-(const PAdic& o) const;
  PAdic operator-() const;
  PAdic operator*(const PAdic& o) const;
  PAdic& operator+=(const PAdic& o) { return *this = *this + o; }
  PAdic& operator-=(const PAdic& o) { return *this = *this - o; }
  PAdic& operator*=(const PAdic& o) { return *this = *this * o; }

  PAdic inv() const;
  PAdic operator/(const PAdic& o) const { return *this * o.inv(); }
  PAdic pow(uint64_t e) const;
  PAdic frob(int k = 1) const;
  PAdic mul_p_pow(int k) const;  // times p^k
  PAdic lower_prec(int abs_prec) const;

  // residue mod p; requires val >= 0
  Residue reduce() const;
  bool same(const PAdic& o) const;
  // equal modulo the minimum of both precisions
  bool congruent(const PAdic& o) const;

  std::string str() const;
  static PAdic parse(const PAdicParams* P, const std::string& s);

private:
  const PAdicParams* P_ = nullptr;
  int val_ = kInf;
  int prec_ = kInf;
  std::array<uint64_t, 4> u_{};

  void normalize(int rel);
};

// arithmetic on residue-field elements
Residue residue_mul(const PAdicParams& P, const Residue& a, const Residue& b);
Residue residue_pow(const PAdicParams& P, const Residue& a, uint64_t e);
bool residue_is_zero(const Residue& a);
std::string residue_str(const Residue& r);
Residue parse_residue(const PAdicParams& P, const std::string& s);

} // namespace ssint
