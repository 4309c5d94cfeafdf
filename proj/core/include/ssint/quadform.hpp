#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ssint/errors.hpp"
#include "ssint/rational.hpp"

namespace ssint {

using IMat = std::vector<std::vector<int64_t>>;
using IVec = std::vector<int64_t>;

// Integral lattice given by its bilinear Gram matrix B; Q(v) = v^T B v / 2.
// det() is det B, which is |L^v/L| up to sign.
class IntLattice {
public:
  IntLattice() = default;
  explicit IntLattice(IMat gram, std::string label = "");
  // from a quadratic-form matrix A with Q(v) = v^T A v (B = 2A)
  static IntLattice from_qform(const IMat& A, std::string label = "");
  static IntLattice diagonal(const IVec& q, std::string label = "");  // Q = sum q_i x_i^2

  const IMat& gram() const { return B_; }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }
  int rank() const { return (int)B_.size(); }
  Integer det() const;
  // Q integral on L (even diagonal of B)
  bool is_even() const;
  bool is_positive_definite() const;
  void require_positive_definite() const;
  // 2 Q(v)
  i128 norm2(const IVec& v) const;
  // Gram of the sublattice spanned by the rows of `basis`
  IntLattice sublattice(const IMat& basis) const;
  IntLattice scaled(int64_t c) const;
  IntLattice direct_sum(const IntLattice& o) const;

private:
  IMat B_;
  std::string label_;
};

Integer det(const IMat& M);
std::vector<std::vector<Rational>> to_rational(const IMat& M);

// Kronecker symbol (D/a); D must be a nonzero discriminant (0 or 1 mod 4).
int kronecker(int64_t D, int64_t a);
// fundamental discriminant D0 and conductor f with D = D0 f^2
std::pair<int64_t, int64_t> fundamental_part(int64_t D);

// sum_{d | m} chi(d) d^s
Rational sigma_s(int64_t m, int s, const std::function<int(int64_t)>& chi);
Rational sigma_s(int64_t m, int s, int64_t D);  // chi = chi_D; D = 1 is the trivial character
Rational sigma_s(int64_t m, int s);

// Jordan block of L (x) Z_ell.
//  kind Diag: Q = unit * ell^val * x^2
//  kind H:    Q = 2^val * xy            (ell = 2 only)
//  kind N:    Q = 2^val * (x^2+xy+y^2)  (ell = 2 only)
struct LocalBlock {
  enum Kind { Diag, H, N } kind = Diag;
  int val = 0;
  Rational unit = 1;  // Diag only; numerator and denominator prime to ell
  int size() const { return kind == Diag ? 1 : 2; }
};

struct LocalLattice {
  int64_t ell = 0;
  IMat gram;
  std::vector<LocalBlock> blocks;
  int rank() const { return (int)gram.size(); }
  // diagonal coefficients a_i of Q = sum a_i x_i^2 (odd ell)
  std::vector<Rational> diagonal() const;
  // total ell-valuation of det B
  int det_val() const;
};

// Block decomposition over Z_ell (Jordan splitting, not normalized).
LocalLattice local_decompose(const IntLattice& L, int64_t ell);
// diagonal over Z_p, p odd
LocalLattice diagonalize_Zp(const IntLattice& L, int64_t p);

} // namespace ssint
