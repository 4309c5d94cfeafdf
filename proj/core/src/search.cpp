#include <algorithm>
#include <set>

#include "ssint/crystal.hpp"

namespace ssint {

namespace {

using IVec = std::vector<int64_t>;

// Columns Finf * v_j for a list of integer vectors.
std::vector<std::vector<Series>> images(const MatSeries& Finf, const std::vector<IVec>& vs) {
  std::vector<std::vector<Series>> out;
  for (const auto& v : vs) out.push_back(Finf.apply(int_vector(Finf.params(), v)));
  return out;
}

// DR for u = sum c_j cols_j, scanning t-exponents until every level is decided.
Verdict dr_combination(const std::vector<std::vector<Series>>& cols, const std::vector<PAdic>& c,
                       const std::vector<long>& thr) {
  const int rank = (int)cols[0].size();
  const int N = cols[0][0].trunc();
  const int n_max = (int)thr.size() - 1;
  int need = 0;       // least level not yet hit
  bool maybe = false; // an uncertain coefficient could hide a hit at level `need`
  int maybe_level = -1;
  for (int k = 0; k <= N; ++k) {
    while (need <= n_max && k > thr[need]) {
      if (maybe && maybe_level >= need) return Verdict::Indeterminate;
      return Verdict::False;
    }
    int v = kInf, lo = kInf;
    for (int i = 0; i < rank; ++i) {
      PAdic s = PAdic::zero(c[0].params());
      for (size_t j = 0; j < cols.size(); ++j) {
        const PAdic& a = cols[j][i][k];
        if (a.is_exact_zero() || c[j].is_exact_zero()) continue;
        s += a * c[j];
      }
      if (s.is_exact_zero()) continue;
      if (s.is_zero()) {
        lo = std::min(lo, s.prec());
      } else {
        v = std::min(v, s.val());
        lo = std::min(lo, s.val());
      }
    }
    while (need <= n_max && v < -need) ++need;
    if (need > n_max) return Verdict::True;
    if (lo < -need) {
      maybe = true;
      maybe_level = std::max(maybe_level, -lo - 1);
    }
  }
  if (need <= n_max && thr[need] > N)
    throw ThresholdExceedsTruncation("DR threshold exceeds truncation");
  return maybe ? Verdict::Indeterminate : Verdict::False;
}

std::vector<long> dr_thresholds(int A, int p, int n_max, int N) {
  std::vector<long> t;
  for (int n = 0; n <= n_max; ++n) {
    t.push_back(Thresholds::dr(A, p, n));
    if (t.back() > N)
      throw ThresholdExceedsTruncation("DR threshold " + std::to_string(t.back()) +
                                       " exceeds truncation " + std::to_string(N));
  }
  return t;
}

// all nonzero vectors of (Z/p)^r with first nonzero entry 1
std::vector<IVec> projective_points(int p, int r) {
  std::vector<IVec> out;
  for (int lead = 0; lead < r; ++lead) {
    long cnt = ipow(p, r - lead - 1);
    for (long code = 0; code < cnt; ++code) {
      IVec v(r, 0);
      v[lead] = 1;
      long x = code;
      for (int i = r - 1; i > lead; --i) {
        v[i] = x % p;
        x /= p;
      }
      out.push_back(v);
    }
  }
  return out;
}

IVec normalize_mod_p(IVec v, int p) {
  for (auto& x : v) x = mod(x, p);
  for (auto x : v)
    if (x) {
      int64_t inv = invmod(x, p);
      for (auto& y : v) y = mod(y * inv, p);
      break;
    }
  return v;
}

// reduced row echelon form mod p; returns rank
int rref_mod_p(std::vector<IVec>& m, int p) {
  int r = 0;
  const int cols = m.empty() ? 0 : (int)m[0].size();
  for (int c = 0; c < cols && r < (int)m.size(); ++c) {
    int piv = -1;
    for (int i = r; i < (int)m.size(); ++i)
      if (mod(m[i][c], p)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    int64_t inv = invmod(mod(m[r][c], p), p);
    for (auto& x : m[r]) x = mod(x * inv, p);
    for (int i = 0; i < (int)m.size(); ++i)
      if (i != r && mod(m[i][c], p)) {
        int64_t f = mod(m[i][c], p);
        for (int j = 0; j < cols; ++j) m[i][j] = mod(m[i][j] - f * m[r][j], p);
      }
    ++r;
  }
  m.resize(r);
  return r;
}

// every projective point of span(vs) mod p
std::vector<IVec> span_points_mod_p(const std::vector<IVec>& vs, int p) {
  std::vector<IVec> out;
  const int k = (int)vs.size();
  for (const auto& c : projective_points(p, k)) {
    IVec u(vs[0].size(), 0);
    for (int j = 0; j < k; ++j)
      for (size_t i = 0; i < u.size(); ++i) u[i] += c[j] * vs[j][i];
    out.push_back(normalize_mod_p(u, p));
  }
  return out;
}

} // namespace

SpanVerdict verify_span(const MatSeries& Finf, const std::vector<IVec>& span, int A, int n_max,
                        int B) {
  const PAdicParams* P = Finf.params();
  const int p = P->p;
  const auto thr = dr_thresholds(A, p, n_max, Finf.trunc());
  const auto cols = images(Finf, span);
  const int k = (int)span.size();
  const long pB = ipow(p, B), pB1 = ipow(p, B - 1);
  SpanVerdict res;
  bool indet = false;
  IVec indet_class;
  for (int lead = 0; lead < k; ++lead) {
    // earlier coordinates in p Z / p^B, later ones arbitrary mod p^B
    std::vector<long> radix(k, 1);
    long total = 1;
    for (int j = 0; j < k; ++j) {
      if (j < lead) radix[j] = pB1;
      else if (j > lead) radix[j] = pB;
      total *= radix[j];
    }
    for (long code = 0; code < total; ++code) {
      IVec cf(k, 0);
      long x = code;
      for (int j = k - 1; j >= 0; --j) {
        long digit = x % radix[j];
        x /= radix[j];
        cf[j] = j < lead ? digit * p : (j == lead ? 1 : digit);
      }
      std::vector<PAdic> c;
      for (auto v : cf) c.push_back(PAdic::from_int(P, v));
      ++res.classes_checked;
      Verdict v = dr_combination(cols, c, thr);
      if (v == Verdict::False) {
        res.verdict = Verdict::False;
        res.falsifier.assign(span[0].size(), 0);
        for (int j = 0; j < k; ++j)
          for (size_t i = 0; i < span[j].size(); ++i) res.falsifier[i] += cf[j] * span[j][i];
        return res;
      }
      if (v == Verdict::Indeterminate && !indet) {
        indet = true;
        indet_class = cf;
      }
    }
  }
  if (indet) {
    res.verdict = Verdict::Indeterminate;
    res.falsifier.assign(span[0].size(), 0);
    for (int j = 0; j < k; ++j)
      for (size_t i = 0; i < span[j].size(); ++i) res.falsifier[i] += indet_class[j] * span[j][i];
  }
  return res;
}

std::pair<bool, IVec> find_dvr_witness(const MatSeries& Finf, const std::vector<IVec>& candidates,
                                       int A, int n_max) {
  const Rational a(A, 2);
  for (const auto& w : candidates) {
    Verdict v = check_DvR(Finf, int_vector(Finf.params(), w), A, a, n_max);
    if (v == Verdict::True) return {true, w};
  }
  return {false, {}};
}

SubmoduleResult find_decaying_submodule(const CrystalModel& model, const MatSeries& Finf, int A,
                                        int n_max, int B) {
  const PAdicParams* P = model.P();
  const int p = P->p;
  const int r = model.rank;
  const auto thr = dr_thresholds(A, p, n_max, Finf.trunc());
  SubmoduleResult res;

  // single classes mod p passing DR; basis vectors come first in this order
  std::vector<IVec> pts = projective_points(p, r);
  std::stable_sort(pts.begin(), pts.end(), [](const IVec& a, const IVec& b) {
    auto nz = [](const IVec& v) { return std::count_if(v.begin(), v.end(), [](int64_t x) { return x != 0; }); };
    return nz(a) < nz(b);
  });
  std::vector<IVec> good;
  std::set<IVec> good_set;
  bool any_indet = false;
  for (const auto& v : pts) {
    auto cols = images(Finf, {v});
    Verdict vd = dr_combination(cols, {PAdic::from_int(P, 1)}, thr);
    if (vd == Verdict::True) {
      good.push_back(v);
      good_set.insert(v);
    } else if (vd == Verdict::Indeterminate) {
      any_indet = true;
    } else if (res.falsifier.empty()) {
      res.falsifier = v;
    }
  }

  auto line_good = [&](const IVec& u, const IVec& v) {
    for (const auto& w : span_points_mod_p({u, v}, p))
      if (!good_set.count(w)) return false;
    return true;
  };

  std::set<std::vector<IVec>> tried;
  const int G = (int)good.size();
  for (int i = 0; i < G; ++i)
    for (int j = i + 1; j < G; ++j) {
      if (!line_good(good[i], good[j])) continue;
      for (int k = j + 1; k < G; ++k) {
        std::vector<IVec> m = {good[i], good[j], good[k]};
        if (rref_mod_p(m, p) < 3) continue;
        if (!tried.insert(m).second) continue;
        bool plane_ok = true;
        for (const auto& w : span_points_mod_p(m, p))
          if (!good_set.count(w)) {
            plane_ok = false;
            break;
          }
        if (!plane_ok) continue;
        SpanVerdict sv = verify_span(Finf, m, A, n_max, B);
        res.classes_checked += sv.classes_checked;
        if (sv.verdict == Verdict::Indeterminate) any_indet = true;
        if (sv.verdict != Verdict::True) {
          if (!sv.falsifier.empty()) res.falsifier = sv.falsifier;
          continue;
        }
        res.found = true;
        res.basis = m;
        if (is_superspecial(model.kind)) {
          std::vector<IVec> cand = m;
          for (const auto& w : span_points_mod_p(m, p))
            if (std::find(cand.begin(), cand.end(), w) == cand.end()) cand.push_back(w);
          auto [ok, w] = find_dvr_witness(Finf, cand, A, n_max);
          res.has_witness = ok;
          res.witness = w;
        }
        res.falsifier.clear();
        return res;
      }
    }
  res.indeterminate = any_indet;
  return res;
}

} // namespace ssint
