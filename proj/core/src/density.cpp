#include "ssint/density.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ssint {

int density_exponent(int64_t ell, int64_t m) {
  if (m < 1) throw InvalidParameter("density needs m >= 1");
  return 1 + 2 * vp(ell, 2 * m);
}

namespace {

constexpr uint64_t kMaxModulus = uint64_t(1) << 25;

// Values mod ell^a grouped into classes on which every quadratic value
// count is constant: 0, and ell^v u with u a unit taken up to squares
// (odd ell) or up to 1 mod 8 (ell = 2).
struct TypeSpace {
  int64_t ell = 0;
  int a = 0;
  uint64_t q = 1;
  int T = 0;
  std::vector<uint64_t> rep;
  std::vector<uint64_t> size;
  std::vector<uint8_t> type;  // type of every residue
  std::vector<int64_t> C;     // C[(t*T+i)*T+j] = #{s : type(s)=i, type(rep_t - s)=j}

  int64_t conv(int t, int i, int j) const { return C[((size_t)t * T + i) * T + j]; }
};

std::shared_ptr<const TypeSpace> build_types(int64_t ell, int a) {
  auto S = std::make_shared<TypeSpace>();
  S->ell = ell;
  S->a = a;
  for (int i = 0; i < a; ++i) {
    S->q *= ell;
    if (S->q > kMaxModulus)
      throw UnsupportedValuation("counting modulus " + std::to_string(ell) + "^" +
                                 std::to_string(a) + " is too large");
  }
  const uint64_t q = S->q;
  // class index layout: 0 = zero, then per valuation v the unit classes
  std::vector<int> offset(a, 0), nclass(a, 0);
  int T = 1;
  for (int v = 0; v < a; ++v) {
    offset[v] = T;
    nclass[v] = ell == 2 ? (1 << (std::min(3, a - v) - 1)) : 2;
    T += nclass[v];
  }
  if (T > 255) throw UnsupportedValuation("too many value classes");
  S->T = T;
  S->rep.assign(T, 0);
  S->size.assign(T, 0);
  S->rep[0] = 0;
  const int64_t eps = ell == 2 ? 0 : smallest_nonresidue(ell);
  std::vector<uint64_t> pw(a + 1, 1);
  for (int v = 1; v <= a; ++v) pw[v] = pw[v - 1] * ell;
  for (int v = 0; v < a; ++v)
    for (int c = 0; c < nclass[v]; ++c)
      S->rep[offset[v] + c] = pw[v] * (ell == 2 ? uint64_t(2 * c + 1) : (c ? eps : 1));

  std::vector<int8_t> qr(ell, 0);
  if (ell != 2)
    for (int64_t x = 1; x < ell; ++x) qr[(x * x) % ell] = 1;
  S->type.assign(q, 0);
  for (uint64_t s = 1; s < q; ++s) {
    uint64_t u = s;
    int v = 0;
    while (u % ell == 0) {
      u /= ell;
      ++v;
    }
    int c;
    if (ell == 2) {
      int r = std::min(3, a - v);
      c = (int)((u & ((1u << r) - 1)) >> 1);
    } else {
      c = qr[u % ell] ? 0 : 1;
    }
    S->type[s] = (uint8_t)(offset[v] + c);
  }
  for (uint64_t s = 0; s < q; ++s) ++S->size[S->type[s]];

  S->C.assign((size_t)T * T * T, 0);
  for (int t = 0; t < T; ++t) {
    int64_t* row = &S->C[(size_t)t * T * T];
    const uint64_t r = S->rep[t];
    for (uint64_t s = 0; s < q; ++s) {
      uint64_t d = r >= s ? r - s : r + q - s;
      ++row[S->type[s] * T + S->type[d]];
    }
  }
  return S;
}

std::shared_ptr<const TypeSpace> types(int64_t ell, int a) {
  static std::mutex mu;
  static std::map<std::pair<int64_t, int>, std::shared_ptr<const TypeSpace>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({ell, a});
    if (it != cache.end()) return it->second;
  }
  auto S = build_types(ell, a);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(ell, a), S).first->second;
}

uint64_t rational_mod(const Rational& r, uint64_t q) {
  Integer n = r.get_num(), d = r.get_den(), Q = (unsigned long)q, out;
  if (mpz_invert(d.get_mpz_t(), d.get_mpz_t(), Q.get_mpz_t()) == 0)
    throw InvalidParameter("coefficient is not ell-integral");
  out = n * d;
  mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), Q.get_mpz_t());
  return out.get_ui();
}

// value-count vector of one block, indexed by type
std::vector<Integer> block_counts(const TypeSpace& S, const LocalBlock& b) {
  const uint64_t q = S.q;
  const int a = S.a;
  std::vector<Integer> f(S.T, 0);
  if (b.kind == LocalBlock::Diag) {
    if (b.val >= a) {
      f[0] = (unsigned long)q;
      return f;
    }
    uint64_t U = rational_mod(b.unit, q);
    for (int i = 0; i < b.val; ++i) U = (U * S.ell) % q;
    std::vector<uint64_t> hist(S.T, 0);
    for (uint64_t x = 0; x < q; ++x) {
      uint64_t s = (x * x) % q;
      s = (unsigned __int128)s * U % q;
      ++hist[S.type[s]];
    }
    for (int t = 0; t < S.T; ++t) f[t] = (unsigned long)(hist[t] / S.size[t]);
    return f;
  }
  // 2^k X with X = xy or x^2+xy+y^2: 4^k f_{a-k}(s / 2^k)
  const int k = b.val;
  for (int t = 0; t < S.T; ++t) {
    uint64_t s = S.rep[t];
    if (k >= a) {
      f[t] = s == 0 ? Integer(1) << (2 * a) : Integer(0);
      continue;
    }
    if (s % (uint64_t(1) << k)) continue;
    const int ap = a - k;
    uint64_t s2 = (s >> k) & ((uint64_t(1) << ap) - 1);
    Integer cnt;
    if (b.kind == LocalBlock::H) {
      int v = s2 == 0 ? ap : __builtin_ctzll(s2);
      cnt = Integer(std::min(v, ap - 1) + 1) * (Integer(1) << (ap - 1));
      if (s2 == 0) cnt += Integer(1) << ap;
    } else {
      if (s2 == 0) {
        cnt = Integer(1) << (2 * (ap - (ap + 1) / 2));
      } else {
        int v = __builtin_ctzll(s2);
        if (v % 2) cnt = 0;
        else {
          int kk = v / 2;
          // 3 * 4^{ap-kk-1} / 2^{ap-2kk-1}
          cnt = Integer(3) << (2 * (ap - kk - 1) - (ap - 2 * kk - 1));
        }
      }
    }
    f[t] = cnt << (2 * k);
  }
  return f;
}

std::string lattice_key(const LocalLattice& L, int a) {
  std::string key = std::to_string(L.ell) + ":" + std::to_string(a) + ":";
  for (const auto& b : L.blocks)
    key += std::to_string((int)b.kind) + "," + std::to_string(b.val) + "," + b.unit.get_str() + ";";
  return key;
}

std::shared_ptr<const std::vector<Integer>> total_counts(const LocalLattice& L, int a) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const std::vector<Integer>>> cache;
  const std::string key = lattice_key(L, a);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto S = types(L.ell, a);
  const int T = S->T;
  std::vector<Integer> d = block_counts(*S, L.blocks.at(0));
  for (size_t bi = 1; bi < L.blocks.size(); ++bi) {
    std::vector<Integer> g = block_counts(*S, L.blocks[bi]);
    std::vector<Integer> nd(T, 0);
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < T; ++i) {
        if (d[i] == 0) continue;
        Integer acc = 0;
        for (int j = 0; j < T; ++j) {
          int64_t c = S->conv(t, i, j);
          if (c && g[j] != 0) acc += g[j] * (long)c;
        }
        nd[t] += d[i] * acc;
      }
    d = std::move(nd);
  }
  auto out = std::make_shared<const std::vector<Integer>>(std::move(d));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, out).first->second;
}

} // namespace

Integer local_count(const LocalLattice& L, int64_t m, int a) {
  if (L.blocks.empty()) throw InvalidParameter("empty lattice");
  auto S = types(L.ell, a);
  auto d = total_counts(L, a);
  return (*d)[S->type[(uint64_t)mod(m, (int64_t)S->q)]];
}

Rational local_density_at(const LocalLattice& L, int64_t m, int a) {
  Rational r(local_count(L, m, a));
  r /= rpow(Rational((long)L.ell), (long)a * (L.rank() - 1));
  return r;
}

Rational local_density(const LocalLattice& L, int64_t m) {
  return local_density_at(L, m, density_exponent(L.ell, m));
}

Rational local_density(int64_t ell, const IntLattice& L, int64_t m) {
  return local_density(local_decompose(L, ell), m);
}

Rational hanke_alpha(int64_t p, const std::vector<Rational>& a, int64_t m) {
  // distribution of sum a_i x_i^2 mod p
  std::vector<Integer> dist(p, 0);
  dist[0] = 1;
  for (const auto& ai : a) {
    int64_t c = vp(p, ai) > 0 ? 0 : (int64_t)rational_mod(ai, p);
    std::vector<Integer> nd(p, 0);
    for (int64_t s = 0; s < p; ++s) {
      if (dist[s] == 0) continue;
      for (int64_t x = 0; x < p; ++x) nd[(s + c * x % p * x) % p] += dist[s];
    }
    dist = std::move(nd);
  }
  return Rational(dist[mod(m, p)]) / rpow(Rational((long)p), (long)a.size() - 1);
}

Rational hanke_alpha_star(int64_t p, const std::vector<Rational>& a, int64_t m) {
  int s0 = 0;
  for (const auto& ai : a)
    if (vp(p, ai) == 0) ++s0;
  Rational r = hanke_alpha(p, a, m);
  // remove solutions whose unit-coefficient coordinates all vanish
  if (mod(m, p) == 0) r -= rpow(Rational((long)p), 1 - s0);
  return r;
}

Rational hanke_density(const LocalLattice& L, int64_t m) {
  const int64_t p = L.ell;
  if (p == 2) throw InvalidParameter("hanke_density needs an odd prime");
  const int v = vp(p, m);
  if (v >= 2) throw UnsupportedValuation("hanke_density handles v_p(m) <= 1 only");
  std::vector<Rational> a = L.diagonal();
  if (v == 0) return hanke_alpha(p, a, m);
  int s0 = 0;
  std::vector<Rational> aI;
  for (const auto& ai : a) {
    if (vp(p, ai) == 0) {
      ++s0;
      aI.push_back(ai * (long)p);
    } else {
      aI.push_back(ai / (long)p);
    }
  }
  return hanke_alpha_star(p, a, m) + rpow(Rational((long)p), 1 - s0) * hanke_alpha(p, aI, m / p);
}

Rational hanke_density(int64_t p, const IntLattice& L, int64_t m) {
  return hanke_density(diagonalize_Zp(L, p), m);
}

} // namespace ssint
