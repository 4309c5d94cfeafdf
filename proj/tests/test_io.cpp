#include "doctest.h"
#include "ssint/io.hpp"

using namespace ssint;

TEST_SUITE("io") {

TEST_CASE("config") {
  Config c = Config::parse("# comment\np = 5\nx = 1:1, 3:0 1  # tail\np = 7\n");
  CHECK(c.get_int("p") == 7);
  CHECK(c.get("x") == "1:1, 3:0 1");
  CHECK(c.get("missing", "d") == "d");
  CHECK_THROWS_AS(c.get("missing"), ParseError);
  CHECK_THROWS_AS(Config::parse("no equals sign"), ParseError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file"), ParseError);
}

TEST_CASE("parsing") {
  CHECK(parse_int_list("1, 2 3", "l") == std::vector<int64_t>{1, 2, 3});
  CHECK_THROWS_AS(parse_int("x1", "n"), ParseError);
  CHECK(parse_matrix("2 1; 1 2", "g") == IMat{{2, 1}, {1, 2}});
  CHECK_THROWS_AS(parse_matrix("2 1; 1", "g"), ShapeMismatch);
  auto t = parse_curve_terms("1:1, 3:0 1");
  REQUIRE(t.size() == 2);
  CHECK(t[1].exp == 3);
  CHECK(format_curve_terms(t) == "1:1, 3:0 1");
  CHECK_THROWS(lattice_from_config(Config::parse("rows = 1 0; 0 2")));
  CHECK_THROWS(lattice_from_config(Config::parse("rows = 2 1; 0 2")));
  IntLattice q = lattice_from_config(Config::parse("convention = qform\nrows = 1 0; 0 1"));
  CHECK(q.gram() == IMat{{2, 0}, {0, 2}});
}

TEST_CASE("fixtures") {
  IntLattice L = load_lattice(SSINT_FIXTURES "/z4");
  CHECK(L.det() == 16);
  CurveSpec s = load_curve(SSINT_FIXTURES "/xt_yt");
  CHECK(s.kind == CrystalCase::HilbertSplit);
  CHECK(s.d == 2);
}

TEST_CASE("records") {
  Record r("density");
  r.add("ell", int64_t(5)).add("delta", rat(126, 125)).add("note", "two words");
  CHECK(r.line() == "type=density ell=5 delta=126/125 note=\"two words\"");
  CHECK(format_vector({1, -2}) == "(1,-2)");
  CHECK_FALSE(pretty_table({r}).empty());
}

}
