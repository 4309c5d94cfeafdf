#include <algorithm>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ssint/budget.hpp"
#include "ssint/density.hpp"
#include "ssint/io.hpp"

using namespace ssint;

namespace {

struct Out {
  std::vector<Record> recs;
  bool pretty = false;
  std::string path;

  Record& add(const std::string& type) {
    recs.emplace_back(type);
    return recs.back();
  }
  void flush() {
    std::ostringstream s;
    if (pretty) {
      s << pretty_table(recs);
    } else {
      for (auto& r : recs) s << r.line() << "\n";
    }
    if (path.empty()) {
      std::cout << s.str();
    } else {
      std::ofstream f(path);
      if (!f) throw ParseError("cannot write '" + path + "'");
      f << s.str();
    }
    recs.clear();
  }
};

// "5", "1,2,3", "1..20"
std::vector<int64_t> parse_m_list(const std::vector<std::string>& items) {
  std::vector<int64_t> out;
  for (auto& it : items) {
    auto dots = it.find("..");
    if (dots != std::string::npos) {
      int64_t a = parse_int(it.substr(0, dots), "m range"), b = parse_int(it.substr(dots + 2), "m range");
      if (a > b || b - a > 1000000) throw InvalidParameter("bad m range '" + it + "'");
      for (int64_t m = a; m <= b; ++m) out.push_back(m);
    } else {
      for (auto m : parse_int_list(it, "m")) out.push_back(m);
    }
  }
  if (out.empty()) throw InvalidParameter("no m given");
  for (auto m : out)
    if (m < 1) throw InvalidParameter("m must be >= 1");
  return out;
}

std::string fmt_ld(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", x);
  return buf;
}

std::string idx_str(const DecayIndex& d) {
  return d.k >= kInf ? "inf" : std::to_string(d.k);
}

std::string rows_str(const std::vector<std::vector<int64_t>>& rows) {
  std::string s;
  for (size_t i = 0; i < rows.size(); ++i) s += (i ? ";" : "") + format_vector(rows[i]);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_density(Out& out, const std::string& gram, int64_t ell, const std::vector<std::string>& ms,
                const std::string& method) {
  IntLattice L = load_lattice(gram);
  auto mv = parse_m_list(ms);
  if (!is_prime(ell)) throw InvalidParameter("ell must be prime");
  if (method != "count" && method != "hanke" && method != "both")
    throw InvalidParameter("method must be count, hanke or both");
  for (auto m : mv) {
    auto& r = out.add("density");
    r.add("lattice", L.label()).add("ell", ell).add("m", m);
    if (method != "hanke") r.add("delta", local_density(ell, L, m));
    if (method != "count") r.add("hanke", hanke_density(ell, L, m));
  }
  return 0;
}

int cmd_eisenstein(Out& out, const std::string& gram, const std::vector<std::string>& ms,
                   std::string kind) {
  IntLattice L = load_lattice(gram);
  auto mv = parse_m_list(ms);
  if (kind == "auto") {
    if (L.is_positive_definite()) kind = "definite";
    else kind = L.rank() == 4 ? "hilbert" : "siegel";
  }
  for (auto m : mv) {
    EisResult e;
    if (kind == "hilbert") e = q_L_hilbert(L, m);
    else if (kind == "siegel") e = q_L_siegel(L, m);
    else if (kind == "definite") e = q_Lppp(L, m);
    else throw InvalidParameter("kind must be auto, hilbert, siegel or definite");
    out.add("eisenstein")
        .add("lattice", L.label())
        .add("kind", kind)
        .add("m", m)
        .add("D", e.D)
        .add("value", e.value.str())
        .add("approx", fmt_ld(e.numeric.mid))
        .add("radius", fmt_ld(e.numeric.rad));
  }
  return 0;
}

int cmd_theta(Out& out, const std::string& gram, int64_t M, bool minima, bool binary) {
  IntLattice L = load_lattice(gram);
  if (M < 0) throw InvalidParameter("M must be >= 0");
  EnumReport rep = enumerate(L, M, false, minima || binary);
  for (int64_t m = 0; m <= M; ++m) out.add("theta").add("lattice", L.label()).add("m", m).add("r", rep.r(m));
  if (minima)
    for (size_t i = 0; i < rep.minima2.size(); ++i)
      out.add("minimum").add("lattice", L.label()).add("i", (int64_t)i + 1).add("l2", rep.minima2[i]);
  if (binary && rep.binary)
    out.add("binary").add("lattice", L.label()).add("disc", rep.binary->disc).add("basis", rows_str(rep.binary->basis));
  return 0;
}

int cmd_decay(Out& out, const std::string& curve, const std::string& kind, int p, int nmax, int B,
              int N) {
  CurveSpec s = load_curve(curve);
  if (!kind.empty()) s.kind = parse_case(kind);
  if (p) s.p = p;
  if (N) s.N = N;
  DecayRun r = run_decay(s, nmax, B);
  out.add("curve")
      .add("case", case_name(s.kind))
      .add("p", (int64_t)s.p)
      .add("A", r.A)
      .add("N", r.N)
      .add("precision", r.precision);
  for (size_t i = 0; i < r.table.size(); ++i)
    for (int n = 0; n <= nmax; ++n) {
      const auto& d = r.table[i][n];
      out.add("decay_index")
          .add("w", (int64_t)i + 1)
          .add("n", n)
          .add("index", idx_str(d))
          .add("dr_threshold", (int64_t)Thresholds::dr(r.A, s.p, n))
          .add("sound", d.sound);
    }
  auto& sr = out.add("submodule");
  sr.add("found", r.sub.found).add("indeterminate", r.sub.indeterminate);
  if (r.sub.found) sr.add("span", rows_str(r.sub.basis));
  if (r.sub.has_witness) sr.add("witness", format_vector(r.sub.witness));
  if (!r.sub.found && !r.sub.falsifier.empty()) sr.add("falsifier", format_vector(r.sub.falsifier));
  sr.add("classes", (int64_t)r.sub.classes_checked);
  return r.sub.indeterminate ? 2 : 0;
}

int cmd_budget(Out& out, const std::string& cfg, bool rows) {
  Config c = Config::load(cfg);
  DemoSpec s = demo_from_config(c);
  DemoResult d = run_budget_demo(s);
  for (const auto& lv : d.chain.levels)
    out.add("chain")
        .add("n", lv.n)
        .add("i", lv.i)
        .add("index", lv.index.get_str())
        .add("min", successive_minima(lv.lattice)[0]);
  if (rows)
    for (const auto& r : d.report.rows)
      out.add("budget_row").add("m", r.m).add("local", r.local).add("g", r.g).add("cum_local", r.cum_local).add("cum_g", r.cum_g);
  auto& sum = out.add("budget");
  sum.add("case", case_name(s.kind))
      .add("p", (int64_t)s.p)
      .add("A", d.A)
      .add("M", s.M)
      .add("terms", (int64_t)d.report.rows.size())
      .add("total_local", d.report.total_local)
      .add("total_g", d.report.total_g);
  if (d.report.ratio) {
    sum.add("ratio", *d.report.ratio).add("ratio_approx", fmt_ld(d.report.ratio->get_d()));
    sum.add("below_11_12", *d.report.ratio <= Rational(11, 12));
  } else {
    sum.add("ratio", "undefined");
  }
  sum.add("chain_exhausted", d.report.chain_exhausted)
      .add("eis_bound", d.report.eis.bound)
      .add("eis_cap", d.report.eis.cap)
      .add("eis_within", d.report.eis.within);
  return 0;
}

// ---------------------------------------------------------------------------

std::vector<int64_t> sample_m(int64_t p, bool divisible) {
  std::vector<int64_t> out;
  for (int64_t k = 1; out.size() < 20; ++k)
    if (k % p) out.push_back(divisible ? p * k : k);
  return out;
}

int cmd_selftest(Out& out, const std::string& decay_dir, bool skip_decay, uint64_t seed) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out.add("check").add("name", name).add("pass", ok).add("detail", detail);
    if (!ok) ++failures;
  };
  for (int64_t p : {5, 7, 11, 13}) {
    const Rational q(p);
    struct Row {
      CrystalCase k;
      bool divisible;
      std::function<bool(const Rational&)> ok;
      std::string expect;
    };
    std::vector<Row> rows = {
        {CrystalCase::HilbertInertSuperspecial, false, [&](const Rational& d) { return d == 1 - 1 / q; }, "1-1/p"},
        {CrystalCase::HilbertSplit, false, [&](const Rational& d) { return d == 1 + 1 / q; }, "1+1/p"},
        {CrystalCase::HilbertInertSupergeneric, false, [&](const Rational& d) { return d == 0; }, "0"},
        {CrystalCase::SiegelSuperspecial, true, [&](const Rational& d) { return d == 1 + 1 / (q * q * q); }, "1+p^-3"},
        {CrystalCase::SiegelSupergeneric, true, [&](const Rational& d) { return d == 1 + 1 / (q * q); }, "1+p^-2"},
        {CrystalCase::SiegelSupergeneric, false, [&](const Rational& d) { return d == 0 || d == 2; }, "{0,2}"},
    };
    for (auto& row : rows) {
      const int d = is_superspecial(row.k) ? 2 : 4;
      Residue c = d == 2 ? Residue{0} : Residue{0, 1};
      IntLattice L(build_model(row.k, (int)p, d, 4, c).local_qform());
      bool ok = true;
      std::string bad;
      for (auto m : sample_m(p, row.divisible)) {
        Rational v = local_density(p, L, m);
        if (!row.ok(v)) {
          ok = false;
          bad = "m=" + std::to_string(m) + " gives " + to_string(v);
          break;
        }
      }
      check(std::string("density ") + case_name(row.k) + " p=" + std::to_string(p) +
                (row.divisible ? " p|m" : " p!m"),
            ok, ok ? row.expect : bad);
    }
  }
  {
    // randomized Hanke sweep on diagonal forms
    std::mt19937_64 rng(seed);
    int agree = 0, total = 0;
    std::string bad;
    while (total < 50) {
      int64_t p = std::vector<int64_t>{3, 5, 7}[rng() % 3];
      int n = 1 + (int)(rng() % 4);
      IVec diag(n);
      for (auto& a : diag) {
        a = 1 + (int64_t)(rng() % (p - 1));
        if (rng() % 3 == 0) a *= p;
      }
      int64_t m = 1 + (int64_t)(rng() % 60);
      if (vp(p, m) > 1) continue;
      ++total;
      IntLattice L = IntLattice::diagonal(diag);
      Rational a = hanke_density(p, L, m), b = local_density(p, L, m);
      if (a == b) ++agree;
      else if (bad.empty()) bad = "p=" + std::to_string(p) + " m=" + std::to_string(m);
    }
    check("hanke sweep", agree == total, std::to_string(agree) + "/" + std::to_string(total) + (bad.empty() ? "" : " first " + bad));
  }
  if (!skip_decay) {
    namespace fs = std::filesystem;
    std::string dir = resolve_path(decay_dir);
    if (!fs::is_directory(dir)) throw ParseError("decay fixture directory '" + decay_dir + "' not found");
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (auto& f : files) {
      Config c = Config::load(f.string());
      CurveSpec s = curve_from_config(c);
      DecayRun r = run_decay(s, 2);
      bool ok = r.sub.found && !r.sub.indeterminate;
      std::string detail = ok ? rows_str(r.sub.basis) : "not found";
      if (ok && c.has("expect")) {
        IMat span = parse_rows(c.get("expect"), c.origin() + ": expect");
        SpanVerdict v = verify_span(r.Finf, span, r.A, 2, 2);
        ok = v.verdict == Verdict::True;
        detail += std::string(" expected span ") + verdict_str(v.verdict);
      }
      check("decay " + c.get("label", f.filename().string()), ok, detail);
    }
  }
  return failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"supersingular intersection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Out out;
  app.add_flag("--pretty", out.pretty, "aligned tables instead of records");
  app.add_option("--output", out.path, "write records to a file");

  std::string gram, curve, kind, method = "count", cfg, decay_dir = "fixtures/decay";
  int64_t ell = 0, M = 0;
  std::vector<std::string> ms;
  int p = 0, nmax = 2, B = 2, N = 0;
  bool minima = false, binary = false, rows = false, skip_decay = false;
  uint64_t seed = 1;

  auto* den = app.add_subcommand("density", "local density delta(ell, L, m)");
  den->add_option("--gram", gram, "Gram file")->required();
  den->add_option("--ell", ell, "prime")->required();
  den->add_option("--m", ms, "m values: 5, 1,2,3 or 1..20")->required();
  den->add_option("--method", method, "count, hanke or both");

  auto* eis = app.add_subcommand("eisenstein", "Eisenstein coefficients q_L(m)");
  eis->add_option("--gram", gram, "Gram file")->required();
  eis->add_option("--m", ms, "m values")->required();
  std::string ekind = "auto";
  eis->add_option("--kind", ekind, "auto, hilbert, siegel or definite");

  auto* th = app.add_subcommand("theta", "representation numbers r(m), m <= M");
  th->add_option("--gram", gram, "Gram file")->required();
  th->add_option("--M", M, "bound")->required();
  th->add_flag("--minima", minima, "successive minima");
  th->add_flag("--binary", binary, "least binary sublattice discriminant");

  auto* dec = app.add_subcommand("decay", "decay indices and the decaying submodule");
  dec->add_option("--curve", curve, "curve file")->required();
  dec->add_option("--case", kind, "override the case tag");
  dec->add_option("--p", p, "override p");
  dec->add_option("--nmax", nmax, "largest n");
  dec->add_option("--B", B, "primitive classes mod p^B");
  dec->add_option("--N", N, "truncation (default derived from A)");

  auto* bud = app.add_subcommand("budget", "intersection budget from a config file");
  bud->add_option("--config", cfg, "key=value config")->required();
  bud->add_flag("--rows", rows, "print every m");

  auto* st = app.add_subcommand("selftest", "golden densities and the decay regression matrix");
  st->add_option("--fixtures", decay_dir, "decay fixture directory");
  st->add_flag("--no-decay", skip_decay, "skip the decay matrix");
  st->add_option("--seed", seed, "seed for the randomized sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << Record("error").add("kind", "usage").add("message", e.what()).line() << "\n";
    return 1;
  }

  int rc = 0;
  try {
    if (*den) rc = cmd_density(out, gram, ell, ms, method);
    else if (*eis) rc = cmd_eisenstein(out, gram, ms, ekind);
    else if (*th) rc = cmd_theta(out, gram, M, minima, binary);
    else if (*dec) rc = cmd_decay(out, curve, kind, p, nmax, B, N);
    else if (*bud) rc = cmd_budget(out, cfg, rows);
    else if (*st) rc = cmd_selftest(out, decay_dir, skip_decay, seed);
    out.flush();
  } catch (const NonConvergent& e) {
    out.recs.clear();
    std::cout << Record("error").add("kind", e.kind()).add("message", e.what()).line() << "\n";
    return 2;
  } catch (const Error& e) {
    out.recs.clear();
    std::cout << Record("error").add("kind", e.kind()).add("message", e.what()).line() << "\n";
    return 1;
  } catch (const std::exception& e) {
    out.recs.clear();
    std::cout << Record("error").add("kind", "internal").add("message", e.what()).line() << "\n";
    return 1;
  }
  return rc;
}
