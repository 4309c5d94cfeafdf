#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ssint/budget.hpp"

namespace ssint {

// flat key=value text; '#' starts a comment, later keys override earlier ones
class Config {
public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  const std::string& get(const std::string& k) const;
  std::string get(const std::string& k, const std::string& def) const;
  int64_t get_int(const std::string& k) const;
  int64_t get_int(const std::string& k, int64_t def) const;
  const std::string& origin() const { return origin_; }
  const std::map<std::string, std::string>& items() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
  std::string origin_;
};

// Relative paths that do not exist are retried under $SSINT_FIXTURE_ROOT.
std::string resolve_path(const std::string& path);

int64_t parse_int(const std::string& s, const std::string& what);
std::vector<int64_t> parse_int_list(const std::string& s, const std::string& what);
// rows of equal length, "a b c; d e f"
IMat parse_rows(const std::string& s, const std::string& what);
// "a b c; d e f; ..." (commas also separate entries)
IMat parse_matrix(const std::string& s, const std::string& what);

// keys: label, convention = bilinear | qform, rows
IntLattice lattice_from_config(const Config& c);
IntLattice load_lattice(const std::string& path);

// "exp:c0 c1, exp:c0" -> terms with residue coefficients
std::vector<CurveTerm> parse_curve_terms(const std::string& s);
std::string format_curve_terms(const std::vector<CurveTerm>& t);

struct CurveSpec {
  CrystalCase kind = CrystalCase::HilbertSplit;
  int p = 5, d = 2;
  int precision = 0;  // 0: derived from N and n_max
  int N = 0;          // 0: derived from A and n_max
  Residue c{0};
  std::vector<CurveTerm> x, y, z;
};
// keys: case, p, d, precision, N, c, x, y, z
CurveSpec curve_from_config(const Config& c);
CurveSpec load_curve(const std::string& path);

struct DecayRun {
  int A = 0, N = 0, precision = 0;
  std::shared_ptr<CrystalModel> model;
  MatSeries Finf;
  SubmoduleResult sub;
  // table[i][n]: decay_index of w_i at n = 0..n_max
  std::vector<std::vector<DecayIndex>> table;
};
// A from a first pass, then N = A(1 + ... + p^n_max) + 1 unless the spec fixes N
DecayRun run_decay(const CurveSpec& s, int n_max, int B = 2);

TSetParams tset_from_config(const Config& c);
// curve keys plus lprime, global (paths), tset keys, M, exclude, nmax
DemoSpec demo_from_config(const Config& c);

// one output line: type=... key=value ...
class Record {
public:
  explicit Record(std::string type) : type_(std::move(type)) {}
  Record& add(const std::string& k, const std::string& v);
  Record& add(const std::string& k, int64_t v) { return add(k, std::to_string(v)); }
  Record& add(const std::string& k, int v) { return add(k, std::to_string(v)); }
  Record& add(const std::string& k, uint64_t v) { return add(k, std::to_string(v)); }
  Record& add(const std::string& k, const Rational& v) { return add(k, to_string(v)); }
  Record& add(const std::string& k, bool v) { return add(k, std::string(v ? "true" : "false")); }
  Record& add(const std::string& k, const char* v) { return add(k, std::string(v)); }
  const std::string& type() const { return type_; }
  const std::vector<std::pair<std::string, std::string>>& fields() const { return f_; }
  std::string line() const;

private:
  std::string type_;
  std::vector<std::pair<std::string, std::string>> f_;
};

// aligned columns per record type, for --pretty
std::string pretty_table(const std::vector<Record>& rs);

std::string format_vector(const std::vector<int64_t>& v);

} // namespace ssint
