#include "ssint/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ssint {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

} // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(no) + ": expected key = value");
    std::string k = trim(line.substr(0, eq));
    if (k.empty()) throw ParseError(origin + ":" + std::to_string(no) + ": empty key");
    c.kv_[k] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::string p = resolve_path(path);
  std::ifstream f(p);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), p);
}

const std::string& Config::get(const std::string& k) const {
  auto it = kv_.find(k);
  if (it == kv_.end()) throw ParseError(origin_ + ": missing key '" + k + "'");
  return it->second;
}

std::string Config::get(const std::string& k, const std::string& def) const {
  auto it = kv_.find(k);
  return it == kv_.end() ? def : it->second;
}

int64_t Config::get_int(const std::string& k) const { return parse_int(get(k), origin_ + ": " + k); }

int64_t Config::get_int(const std::string& k, int64_t def) const {
  return has(k) ? get_int(k) : def;
}

std::string resolve_path(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (fs::exists(p) || p.is_absolute()) return path;
  if (const char* root = std::getenv("SSINT_FIXTURE_ROOT")) {
    fs::path q = fs::path(root) / p;
    if (fs::exists(q)) return q.string();
    // "fixtures/x" under a root that already is the fixtures directory
    auto it = p.begin();
    if (it != p.end() && *it == "fixtures") {
      fs::path rest;
      for (++it; it != p.end(); ++it) rest /= *it;
      if (fs::exists(fs::path(root) / rest)) return (fs::path(root) / rest).string();
    }
  }
  return path;
}

int64_t parse_int(const std::string& s, const std::string& what) {
  std::string t = trim(s);
  if (t.empty()) throw ParseError(what + ": empty integer");
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw ParseError(what + ": not an integer '" + t + "'");
  }
  if (pos != t.size()) throw ParseError(what + ": not an integer '" + t + "'");
  return v;
}

std::vector<int64_t> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int64_t> out;
  for (auto& tok : split(s, ", \t"))
    if (!tok.empty()) out.push_back(parse_int(tok, what));
  return out;
}

IMat parse_rows(const std::string& s, const std::string& what) {
  IMat m;
  for (auto& row : split(s, ";")) {
    if (row.empty()) continue;
    m.push_back(parse_int_list(row, what));
  }
  if (m.empty()) throw ParseError(what + ": empty matrix");
  for (auto& r : m)
    if (r.size() != m[0].size()) throw ShapeMismatch(what + ": rows have different lengths");
  return m;
}

IMat parse_matrix(const std::string& s, const std::string& what) {
  IMat m = parse_rows(s, what);
  for (auto& r : m)
    if (r.size() != m.size()) throw ShapeMismatch(what + ": matrix is not square");
  return m;
}

IntLattice lattice_from_config(const Config& c) {
  IMat m = parse_matrix(c.get("rows"), c.origin() + ": rows");
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw ParseError(c.origin() + ": Gram matrix is not symmetric");
  std::string conv = c.get("convention", "bilinear");
  std::string label = c.get("label", "");
  if (conv == "bilinear") {
    IntLattice L(m, label);
    if (!L.is_even()) throw InvalidParameter(c.origin() + ": bilinear Gram must have even diagonal");
    return L;
  }
  if (conv == "qform") return IntLattice::from_qform(m, label);
  throw ParseError(c.origin() + ": convention must be bilinear or qform");
}

IntLattice load_lattice(const std::string& path) { return lattice_from_config(Config::load(path)); }

std::vector<CurveTerm> parse_curve_terms(const std::string& s) {
  std::vector<CurveTerm> out;
  for (auto& tok : split(s, ",")) {
    if (tok.empty()) continue;
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError("curve term '" + tok + "' needs exp:coeff");
    CurveTerm t;
    t.exp = (int)parse_int(tok.substr(0, colon), "curve exponent");
    if (t.exp < 1) throw InvalidParameter("curve exponents must be >= 1");
    t.coeff = parse_int_list(tok.substr(colon + 1), "curve coefficient");
    if (t.coeff.empty()) throw ParseError("curve term '" + tok + "' has no coefficient");
    out.push_back(t);
  }
  return out;
}

std::string format_curve_terms(const std::vector<CurveTerm>& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(t[i].exp) + ":";
    for (size_t j = 0; j < t[i].coeff.size(); ++j) s += (j ? " " : "") + std::to_string(t[i].coeff[j]);
  }
  return s;
}

CurveSpec curve_from_config(const Config& c) {
  CurveSpec s;
  s.kind = parse_case(c.get("case"));
  s.p = (int)c.get_int("p");
  s.d = (int)c.get_int("d", is_superspecial(s.kind) ? 2 : 4);
  s.precision = (int)c.get_int("precision", 0);
  s.N = (int)c.get_int("N", 0);
  if (c.has("c")) s.c = parse_int_list(c.get("c"), c.origin() + ": c");
  s.x = parse_curve_terms(c.get("x", ""));
  s.y = parse_curve_terms(c.get("y", ""));
  s.z = parse_curve_terms(c.get("z", ""));
  if (!is_prime(s.p) || s.p < 3) throw InvalidParameter(c.origin() + ": p must be an odd prime");
  if (s.precision < 0 || s.N < 0) throw InvalidParameter(c.origin() + ": negative precision");
  return s;
}

CurveSpec load_curve(const std::string& path) { return curve_from_config(Config::load(path)); }

DecayRun run_decay(const CurveSpec& s, int n_max, int B) {
  if (n_max < 0) throw InvalidParameter("nmax must be >= 0");
  DecayRun r;
  auto prec_for = [&](int N) {
    return s.precision ? s.precision : std::max(12, required_precision(s.p, n_max, N));
  };
  if (s.N) {
    r.N = s.N;
  } else {
    int N0 = 64;
    for (;;) {
      CrystalModel m0 = build_model(s.kind, s.p, s.d, prec_for(N0), s.c);
      try {
        r.A = non_ordinary_valuation(m0, make_curve(m0, N0, s.x, s.y, s.z));
        break;
      } catch (const NotGenericallyOrdinary&) {
        if (N0 >= 8192) throw;
        N0 *= 2;
      }
    }
    r.N = (int)Thresholds::dr(r.A, s.p, n_max) + 1;
  }
  r.precision = prec_for(r.N);
  r.model = std::make_shared<CrystalModel>(build_model(s.kind, s.p, s.d, r.precision, s.c));
  FormalCurve curve = make_curve(*r.model, r.N, s.x, s.y, s.z);
  r.A = non_ordinary_valuation(*r.model, curve);
  r.Finf = f_infinity(*r.model, curve);
  r.sub = find_decaying_submodule(*r.model, r.Finf, r.A, n_max, B);
  for (int i = 0; i < r.model->rank; ++i) {
    std::vector<int64_t> e(r.model->rank, 0);
    e[i] = 1;
    std::vector<DecayIndex> row;
    for (int n = 0; n <= n_max; ++n) row.push_back(decay_index(r.Finf, int_vector(r.model->P(), e), n));
    r.table.push_back(row);
  }
  return r;
}

TSetParams tset_from_config(const Config& c) {
  TSetParams t;
  std::string k = c.get("tset", "square");
  if (k == "square") t.kind = TSetParams::Square;
  else if (k == "prime-qr") t.kind = TSetParams::PrimeQR;
  else if (k == "hilbert") t.kind = TSetParams::Hilbert;
  else throw ParseError(c.origin() + ": tset must be square, prime-qr or hilbert");
  t.D = c.get_int("D", 1);
  t.N = c.get_int("N_T", 0);
  t.C = (int)c.get_int("C", 0);
  if (c.has("bad")) t.bad = parse_int_list(c.get("bad"), c.origin() + ": bad");
  t.field_disc = c.get_int("field_disc", 0);
  return t;
}

DemoSpec demo_from_config(const Config& c) {
  CurveSpec cs = curve_from_config(c);
  DemoSpec s;
  s.kind = cs.kind;
  s.p = cs.p;
  s.d = cs.d;
  s.c = cs.c;
  s.x = cs.x;
  s.y = cs.y;
  s.z = cs.z;
  s.n_decay = (int)c.get_int("nmax", 2);
  namespace fs = std::filesystem;
  auto rel = [&](const std::string& key) {
    std::string v = c.get(key);
    fs::path p(v);
    if (!p.is_absolute() && !fs::exists(p)) {
      fs::path q = fs::path(c.origin()).parent_path() / p;
      if (fs::exists(q)) return q.string();
    }
    return v;
  };
  s.Lprime = load_lattice(rel("lprime"));
  s.global = load_lattice(rel("global"));
  s.tset = tset_from_config(c);
  s.M = c.get_int("M", 500);
  if (c.has("exclude")) s.exclude = parse_int_list(c.get("exclude"), c.origin() + ": exclude");
  return s;
}

Record& Record::add(const std::string& k, const std::string& v) {
  f_.emplace_back(k, v);
  return *this;
}

std::string Record::line() const {
  std::string s = "type=" + type_;
  for (auto& [k, v] : f_) {
    s += ' ';
    s += k;
    s += '=';
    if (v.empty() || v.find_first_of(" \t=\"") != std::string::npos) {
      s += '"';
      for (char ch : v) {
        if (ch == '"' || ch == '\\') s += '\\';
        s += ch;
      }
      s += '"';
    } else {
      s += v;
    }
  }
  return s;
}

std::string pretty_table(const std::vector<Record>& rs) {
  std::string out;
  size_t i = 0;
  while (i < rs.size()) {
    size_t j = i;
    while (j < rs.size() && rs[j].type() == rs[i].type() && rs[j].fields().size() == rs[i].fields().size())
      ++j;
    const auto& head = rs[i].fields();
    std::vector<size_t> w(head.size());
    for (size_t c = 0; c < head.size(); ++c) w[c] = head[c].first.size();
    for (size_t r = i; r < j; ++r)
      for (size_t c = 0; c < head.size(); ++c) w[c] = std::max(w[c], rs[r].fields()[c].second.size());
    out += "[" + rs[i].type() + "]\n";
    auto row = [&](auto get) {
      std::string line;
      for (size_t c = 0; c < head.size(); ++c) {
        std::string cell = get(c);
        line += cell + std::string(w[c] - cell.size() + 2, ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    };
    row([&](size_t c) { return head[c].first; });
    for (size_t r = i; r < j; ++r) row([&](size_t c) { return rs[r].fields()[c].second; });
    i = j;
  }
  return out;
}

std::string format_vector(const std::vector<int64_t>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

} // namespace ssint
