// Acceptance checks 1..9: one PASS/FAIL line each, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "ssint/io.hpp"

using namespace ssint;

namespace {

const std::string kFix = SSINT_FIXTURES;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int report(int id, const char* what, double limit_s, const std::function<Outcome()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = o.pass && s < limit_s;
  if (o.pass && !pass) o.detail += " (over time limit)";
  std::printf("criterion %d: %s  %s  [%s] %.2fs/%.0fs\n", id, pass ? "PASS" : "FAIL", what, o.detail.c_str(), s, limit_s);
  std::fflush(stdout);
  return pass ? 0 : 1;
}

// |x_i|^2 <= 2M (B^-1)_ii = 2M cof_ii / det B
IVec box_radii(const IntLattice& L, int64_t M) {
  const int n = L.rank();
  const Integer d = L.det();
  IVec R(n);
  for (int i = 0; i < n; ++i) {
    IMat minor;
    for (int a = 0; a < n; ++a) {
      if (a == i) continue;
      IVec row;
      for (int b = 0; b < n; ++b)
        if (b != i) row.push_back(L.gram()[a][b]);
      minor.push_back(row);
    }
    Integer cof = minor.empty() ? Integer(1) : det(minor);
    Integer bound = Integer(2 * M) * cof / d;
    R[i] = isqrt(bound.get_si()) + 1;
  }
  return R;
}

std::vector<int64_t> sample_m(int64_t p, bool divisible) {
  std::vector<int64_t> out;
  for (int64_t m = 1; out.size() < 20; ++m) {
    if (divisible) {
      if (m % p != 0) out.push_back(m * p);
    } else if (m % p != 0) {
      out.push_back(m);
    }
  }
  return out;
}

Outcome golden_densities() {
  int checked = 0;
  for (int64_t p : {5, 7, 11, 13}) {
    const Rational q(p);
    struct Row {
      CrystalCase k;
      bool divisible;
      std::function<bool(const Rational&)> ok;
    };
    std::vector<Row> rows = {
        {CrystalCase::HilbertInertSuperspecial, false, [&](const Rational& d) { return d == 1 - 1 / q; }},
        {CrystalCase::HilbertSplit, false, [&](const Rational& d) { return d == 1 + 1 / q; }},
        {CrystalCase::HilbertInertSupergeneric, false, [&](const Rational& d) { return d == 0; }},
        {CrystalCase::SiegelSuperspecial, true, [&](const Rational& d) { return d == 1 + 1 / (q * q * q); }},
        {CrystalCase::SiegelSupergeneric, true, [&](const Rational& d) { return d == 1 + 1 / (q * q); }},
        {CrystalCase::SiegelSupergeneric, false, [&](const Rational& d) { return d == 0 || d == 2; }},
    };
    for (auto& row : rows) {
      const int d = is_superspecial(row.k) ? 2 : 4;
      Residue c = d == 2 ? Residue{0} : Residue{0, 1};
      IntLattice L(build_model(row.k, (int)p, d, 4, c).local_qform());
      for (auto m : sample_m(p, row.divisible)) {
        Rational v = local_density(p, L, m);
        ++checked;
        if (!row.ok(v))
          return {false, std::string(case_name(row.k)) + " p=" + std::to_string(p) + " m=" + std::to_string(m) +
                             " gives " + to_string(v)};
      }
    }
  }
  return {true, std::to_string(checked) + " densities"};
}

Outcome hanke_sweep() {
  std::mt19937_64 rng(2024);
  const std::vector<int64_t> primes = {3, 5, 7, 11, 13};
  int total = 0;
  while (total < 240) {
    int64_t p = primes[rng() % primes.size()];
    int n = 1 + (int)(rng() % 5);
    IMat B(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) {
      B[i][i] = 2 * ((int64_t)(rng() % 13) - 6);
      if (rng() % 3 == 0) B[i][i] *= p;
      for (int j = 0; j < i; ++j) B[i][j] = B[j][i] = rng() % 2 ? 0 : (int64_t)(rng() % 7) - 3;
    }
    IntLattice L(B);
    if (L.det() == 0) continue;
    int64_t m = 1 + (int64_t)(rng() % 200);
    if (vp(p, m) > 1) continue;
    ++total;
    Rational a = hanke_density(p, L, m), b = local_density(p, L, m);
    if (a != b)
      return {false, "p=" + std::to_string(p) + " m=" + std::to_string(m) + " hanke " + to_string(a) + " count " + to_string(b)};
  }
  return {true, std::to_string(total) + " instances"};
}

Outcome decay_matrix() {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(kFix + "/decay")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int ok = 0;
  for (auto& f : files) {
    Config c = Config::load(f.string());
    CurveSpec s = curve_from_config(c);
    if (s.p != 5) return {false, f.filename().string() + ": p != 5"};
    DecayRun r = run_decay(s, 2);
    const std::string name = c.get("label", f.filename().string());
    if (r.N < Thresholds::dr(r.A, 5, 2) + 1) return {false, name + ": truncation below A(1+p+p^2)+1"};
    if (r.sub.indeterminate) return {false, name + ": indeterminate"};
    if (!r.sub.found) return {false, name + ": no decaying submodule"};
    SpanVerdict v = verify_span(r.Finf, parse_rows(c.get("expect"), name), r.A, 2, 2);
    if (v.verdict != Verdict::True) return {false, name + ": asserted span does not decay"};
    ++ok;
  }
  DecayRun hs = run_decay(load_curve(kFix + "/xt_yt"), 2);
  const int want[] = {2, 12, 62};
  for (int n = 0; n <= 2; ++n)
    if (hs.table[0][n].k != want[n] || !hs.table[0][n].sound)
      return {false, "x=y=t: decay_index(w1," + std::to_string(n) + ") = " + std::to_string(hs.table[0][n].k)};
  return {true, std::to_string(ok) + " fixtures, x=y=t gives 2 12 62"};
}

Outcome alpha_constants() {
  int n = 0;
  for (int64_t p : primes_upto(97)) {
    if (p < 5) continue;
    Rational want = Rational(p + 2, 2 * p) + Rational(p, p * p - 1);
    Rational a = alpha_const(p);
    if (a != want || !(a < Rational(11, 12))) return {false, "p=" + std::to_string(p) + " alpha " + to_string(a)};
    ++n;
  }
  int chains = 0;
  for (int64_t p : {5, 7, 11, 13})
    for (int A : {1, 2, 3})
      for (int c = 0; c <= 5; ++c) {
        EisBudget b = eisenstein_budget(PointType::Superspecial, false, A, p,
                                        geometric_indices(PointType::Superspecial, p, c), Integer((long)(p * p)));
        if (b.bound != geometric_budget_closed_form(A, p, c))
          return {false, "closed form differs at p=" + std::to_string(p) + " c=" + std::to_string(c)};
        ++chains;
      }
  return {true, std::to_string(n) + " primes, " + std::to_string(chains) + " chains"};
}

Outcome l_values() {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double z2 = pi * pi / 6, z4 = pi * pi * pi * pi / 90;
  Interval t = dirichlet_L2(1);
  if (std::fabs((double)(t.mid - z2)) > 1e-10) return {false, "trivial character off"};
  int n = 0;
  for (int64_t D = -100; D <= 100; ++D) {
    if (D == 0 || !(mod(D, 4) == 0 || mod(D, 4) == 1)) continue;
    Interval v = dirichlet_L2(D);
    if (v.lo() < z4 / z2 - 1e-12L || v.hi() > z2 + 1e-12L) return {false, "D=" + std::to_string(D)};
    ++n;
  }
  return {true, std::to_string(n) + " discriminants"};
}

Outcome eisenstein_window() {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double z2 = pi * pi / 6, z3 = 1.20205690315959428539973816151144999L;
  IntLattice L = load_lattice(kFix + "/ls_rank5");
  TSetParams t;  // squares of primes
  long double lo = 1e300L, hi = 0;
  int used = 0;
  for (int64_t m : build_T_set(t, 5, 500)) {
    EisResult e = q_L_siegel(L, m);
    if (e.sign == 0) continue;
    long double v = std::fabs(e.numeric.mid) / std::pow((long double)m, 1.5L);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++used;
  }
  if (used < 2) return {false, "too few representable m"};
  long double ratio = hi / lo, cap = 5 * z2 * z2 * z3;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d m, max/min %.4Lf <= %.4Lf", used, ratio, cap);
  return {ratio <= cap, buf};
}

Outcome enumeration() {
  std::mt19937 rng(77);
  int lattices = 0;
  std::vector<IntLattice> fx = {IntLattice::diagonal({1}), IntLattice::diagonal({1, 1}), IntLattice({{2, 1}, {1, 2}}),
                                IntLattice::diagonal({1, 2, 3}), IntLattice({{2, 1, 0}, {1, 4, 1}, {0, 1, 6}})};
  while (fx.size() < 25) {
    int n = 1 + (int)(rng() % 3);
    IMat B(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) {
      B[i][i] = 2 * (1 + (int64_t)(rng() % 6));
      for (int j = 0; j < i; ++j) B[i][j] = B[j][i] = (int64_t)(rng() % 5) - 2;
    }
    IntLattice L(B);
    if (L.is_positive_definite()) fx.push_back(L);
  }
  for (const auto& L : fx) {
    std::vector<uint64_t> c(101, 0);
    for (const auto& v : short_vectors(L, 50)) c[(size_t)L.norm2(v)]++;
    std::vector<uint64_t> b(101, 0);
    const int n = L.rank();
    const IVec R = box_radii(L, 50);
    IVec v(n);
    for (int i = 0; i < n; ++i) v[i] = -R[i];
    for (;;) {
      i128 q2 = L.norm2(v);
      if (q2 <= 100) b[(size_t)q2]++;
      int k = 0;
      while (k < n && v[k] == R[k]) {
        v[k] = -R[k];
        ++k;
      }
      if (k == n) break;
      ++v[k];
    }
    if (b != c) return {false, "mismatch on lattice " + std::to_string(lattices)};
    ++lattices;
  }
  EnumReport z = enumerate(load_lattice(kFix + "/z4"), 2);
  if (z.r(1) != 8 || z.r(2) != 24) return {false, "Z^4: r(1)=" + std::to_string(z.r(1)) + " r(2)=" + std::to_string(z.r(2))};
  return {true, std::to_string(lattices) + " lattices, Z^4 r(1)=8 r(2)=24"};
}

Outcome cusp() {
  IntLattice L = load_lattice(kFix + "/pd5_det98");
  if (vp(7, L.det()) < 1) return {false, "fixture det prime to 7"};
  CuspFit f = cusp_deviation(L, 100, 2000);
  CuspFit c = cusp_deviation(load_lattice(kFix + "/i5"), 1, 50);
  for (const auto& row : c.rows)
    if (std::fabs(row.G) > row.rad + 1e-9L) return {false, "single-class genus deviates at m=" + std::to_string(row.m)};
  char buf[96];
  std::snprintf(buf, sizeof buf, "slope %.3f over %d terms, one-class genus exact", f.slope, f.used);
  return {f.used > 10 && f.slope <= 1.3, buf};
}

Outcome budget() {
  DemoResult r = run_budget_demo(demo_from_config(Config::load(kFix + "/budget_h5.cfg")));
  if (!r.report.ratio) return {false, "empty T-set"};
  char buf[128];
  std::snprintf(buf, sizeof buf, "A=%d, %zu m, ratio %s = %.4f", r.A, r.report.rows.size(),
                to_string(*r.report.ratio).c_str(), r.report.ratio->get_d());
  return {*r.report.ratio <= Rational(11, 12), buf};
}

} // namespace

int main() {
  int fails = 0;
  fails += report(1, "golden local densities", 10, golden_densities);
  fails += report(2, "Hanke equals counting", 60, hanke_sweep);
  fails += report(3, "decay regression matrix", 300, decay_matrix);
  fails += report(4, "alpha constants and closed-form budget", 1, alpha_constants);
  fails += report(5, "L(2, chi) sanity", 10, l_values);
  fails += report(6, "rank 5 Eisenstein window", 30, eisenstein_window);
  fails += report(7, "enumeration oracle", 10, enumeration);
  fails += report(8, "cusp deviation exponent", 300, cusp);
  fails += report(9, "budget pipeline", 300, budget);
  return fails ? 1 : 0;
}
