#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssint/crystal.hpp"
#include "ssint/eisenstein.hpp"
#include "ssint/enumerate.hpp"

namespace ssint {

enum class PointType { Superspecial, Supergeneric };
const char* point_type_name(PointType t);
PointType parse_point_type(const std::string& s);

// A_n = floor(A (p^n + ... + 1 + 1/p)), n >= -1
Integer threshold_A_n(int A, int64_t p, int n);

// r[n] = {r_{n,1}(m), r_{n,2}(m)} (superspecial) or {r_n(m)} (supergeneric)
using ChainCounts = std::vector<std::vector<uint64_t>>;

// closed bound for l_P(m) from the chain counts
Rational local_bound(PointType t, int A, int64_t p, const ChainCounts& r);
// the telescoping sum before the estimates a <= A/2, A_n <= A(p^n+...+1/p)
Rational telescoping_bound(PointType t, int A, int64_t p, const Rational& a, const ChainCounts& r);
// counts must decrease along the chain
void check_counts_nested(PointType t, const ChainCounts& r);

// g_P(m) = A |q_L(m)| / (p - 1)
Rational global_g(int A, int64_t p, const Rational& qL_abs);
// sum of A_P over the non-ordinary points must be (p - 1) (omega . C)
void check_nonordinary_total(int64_t p, const Rational& omega_C, const std::vector<int>& A_P);

enum class AlphaVariant {
  SuperspecialPrimeToM,   // (p+2)/(2p) + p/(p^2-1)
  SupergenericInert,      // 2/p + 2/((p+1)(p^2-1))
  SuperspecialRamified,   // (p+2)/(2p) + (p+3)/(p^2-1)
  SupergenericRamified,   // 2/p + 2/(p^2-1)
};
Rational alpha_const(int64_t p, AlphaVariant v = AlphaVariant::SuperspecialPrimeToM);

// indices in L' along the chain: idx[n] = {[L':L'_{n,1}], [L':L'_{n,2}]} or {[L'_0:L'_n]}
using ChainIndices = std::vector<std::vector<Integer>>;
// idx[n] = {p^{3n}, p^{3n+1}} (n = 0 gives {1, p}) or {p^{3n}}
ChainIndices geometric_indices(PointType t, int64_t p, int c);

struct EisBudget {
  Rational bound;  // upper bound on q(m) / |q_L(m)|
  Rational cap;    // alpha A / (p - 1)
  bool within = false;
};
// disc_p = |(L' (x) Z_p)^v / (L' (x) Z_p)|
EisBudget eisenstein_budget(PointType t, bool p_divides_m, int A, int64_t p,
                            const ChainIndices& idx, const Integer& disc_p);
// closed form of the superspecial p-prime-to-m budget for the geometric chain up to c
Rational geometric_budget_closed_form(int A, int64_t p, int c);

// full-rank L_n of an ordinary point needs disc(L_n)^{1/2} >= p^{n-1}
bool ordinary_chain_ok(const std::vector<IntLattice>& Ln, int64_t p);

// Rows: the model basis vectors w_i in the coordinates of L, with
// T B T^T = Bw mod p^(K-1). p odd; Bw = U + pV with U, V unimodular.
IMat local_frame(const IntLattice& L, const IMat& Bw, int64_t p, int K);

struct ChainLevel {
  int n = 0, i = 1;
  IMat basis;  // rows in the coordinates of L'
  IntLattice lattice;
  Integer index;  // [L' : level]
};
struct Chain {
  PointType type = PointType::Superspecial;
  IntLattice base;
  std::vector<ChainLevel> levels;  // in order (0,1),(0,2),(1,1),... or 0,1,2,...
};
void check_nested(const Chain& c);
// Hermite normal form basis of the lattice spanned by the rows
IMat hnf_basis(const std::vector<IVec>& gens);

struct DecayData {
  std::vector<IVec> span;  // rank 3 submodule, w-coordinates
  IVec witness;            // very rapidly decaying vector (superspecial)
};
// L'_{n,1} = p^n Lambda_0 + Lambda_1, L'_{n,2} = p^n Lambda_0' + p^{n+1} w + Lambda_1
Chain decay_chain(const IntLattice& Lprime, const IMat& Bw, int64_t p, PointType t,
                  const DecayData& d, int n_max);

struct BudgetInput {
  int64_t p = 5;
  int A = 0;
  PointType type = PointType::Superspecial;
  std::optional<Rational> omega_C;
  std::vector<int> nonordinary_A;  // A_P over all non-ordinary points, for the check
  IntLattice global;               // L, for q_L
  Chain chain;
  TSetParams tset;
  int64_t M = 0;
  std::vector<int64_t> exclude;    // S_M
};

struct BudgetRow {
  int64_t m = 0;
  Rational local, g, cum_local, cum_g;
};
struct BudgetReport {
  std::vector<BudgetRow> rows;
  Rational total_local = 0, total_g = 0;
  std::optional<Rational> ratio;  // undefined on an empty T_M
  bool chain_exhausted = false;   // deepest level has no nonzero vector with Q <= M
  EisBudget eis;
};
BudgetReport run_budget(const BudgetInput& in);

struct DemoSpec {
  CrystalCase kind = CrystalCase::HilbertInertSuperspecial;
  int p = 5, d = 2;
  Residue c;
  std::vector<CurveTerm> x, y, z;
  int n_decay = 2;  // DR/DvR checked up to this n
  IntLattice Lprime, global;
  TSetParams tset;
  int64_t M = 500;
  std::vector<int64_t> exclude;
};
struct DemoResult {
  int A = 0;
  SubmoduleResult decay;
  BudgetReport report;
  Chain chain;
};
// derive the chain from the decay submodule of the curve and run the budget
DemoResult run_budget_demo(const DemoSpec& s);

} // namespace ssint
