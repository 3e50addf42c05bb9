#include "doctest.h"
#include "plotqa/common.hpp"
#include "plotqa/table.hpp"

#include <cmath>
#include <set>

using namespace plotqa;

TEST_CASE("rng is deterministic and seed sensitive") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    (void)c.next();
  }
  Rng d(42), e(43);
  CHECK(d.next() != e.next());
}

TEST_CASE("rng uniform_int is inclusive and covers its range") {
  Rng r(7);
  std::set<int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(3, 6);
    CHECK(v >= 3);
    CHECK(v <= 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("rng normal has roughly unit moments") {
  Rng r(11);
  double s = 0, s2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(0, 1);
    s += x;
    s2 += x * x;
  }
  CHECK(std::fabs(s / n) < 0.03);
  CHECK(std::fabs(s2 / n - 1) < 0.05);
}

TEST_CASE("derive_seed separates tags and indices") {
  CHECK(derive_seed(1, "plot", 0) != derive_seed(1, "plot", 1));
  CHECK(derive_seed(1, "plot", 0) != derive_seed(1, "style", 0));
  CHECK(derive_seed(1, "plot", 0) == derive_seed(1, "plot", 0));
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("parse_number is strict") {
  CHECK(parse_number("12.5") == doctest::Approx(12.5));
  CHECK(parse_number(" 3 ") == doctest::Approx(3));
  CHECK(parse_number("2.000e+5") == doctest::Approx(200000));
  CHECK_FALSE(parse_number("12a"));
  CHECK_FALSE(parse_number(""));
  CHECK_FALSE(parse_number("inf"));
  CHECK_FALSE(parse_number("nan"));
}

TEST_CASE("number formatting") {
  CHECK(format_sci_e(200000) == "2.000e+5");
  CHECK(format_sci_e(0) == "0.000e+0");
  CHECK(format_sci_e(9999.9999) == "1.000e+4");
  CHECK(format_sci_e(0.00125) == "1.250e-3");
  CHECK(format_answer_number(3.14159) == "3.14");
  CHECK(format_answer_number(2.5) == "2.5");
  CHECK(format_answer_number(-0.001) == "0");
  CHECK(format_answer_number(123456) == "1.235e+5");
  CHECK(format_plain(7) == "7");
}

TEST_CASE("bbox helpers") {
  BBox a{0, 0, 10, 10}, b{5, 5, 10, 10}, c{10, 0, 5, 5};
  CHECK(overlaps(a, b));
  CHECK_FALSE(overlaps(a, c));  // touching edges do not overlap
  CHECK(contains(BBox{0, 0, 100, 100}, a));
  CHECK_FALSE(contains(a, b));
}

TEST_CASE("table csv round trip with quoting and missing cells") {
  SemiStructuredTable t({"Indoor, big", "Outdoor \"x\""}, {"Rating", "Score"});
  t.cells[0][0] = 0.1 + 0.2;
  t.cells[1][1] = 3.5e15;
  const auto csv = table_to_csv(t);
  const auto back = table_from_csv(csv);
  CHECK(back == t);
  CHECK(back.filled() == 2);
  CHECK(check_table(t).empty());
}
