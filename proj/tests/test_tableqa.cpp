#include "doctest.h"
#include "oracle.hpp"
#include "plotqa/tableqa.hpp"

using namespace plotqa;
using namespace plotqa::tableqa;

namespace {

SemiStructuredTable diesel_table() {
  SemiStructuredTable t({"2008", "2010", "2012", "2014"}, {"Lebanon", "Chile", "Peru", "Cuba"});
  double v = 0.5;
  for (auto& row : t.cells)
    for (auto& c : row) c = (v += 0.1);
  return t;
}

SemiStructuredTable single(std::vector<std::string> rows, std::vector<double> vals,
                           std::string header = "Price of diesel") {
  SemiStructuredTable t(std::move(rows), {std::move(header)});
  for (size_t i = 0; i < vals.size(); ++i) t.cells[i][0] = vals[i];
  return t;
}

}  // namespace

TEST_CASE("knowledge graph construction") {
  const auto kg = build_kg(diesel_table());
  CHECK(kg.row_nodes.size() == 4);
  CHECK(kg.entities.size() == 20);
  CHECK(kg.edges.size() == 20);
  CHECK(kg.to_table() == diesel_table());

  SemiStructuredTable one({"a"}, {"b"});
  one.cells[0][0] = 1;
  const auto k1 = build_kg(one);
  CHECK(k1.row_nodes.size() == 1);
  CHECK(k1.entities.size() == 2);
  CHECK(k1.edges.size() == 2);

  SemiStructuredTable sparse({"a", "b"}, {"c"});
  sparse.cells[0][0] = 1;
  CHECK(build_kg(sparse).edges.size() == 3);  // two row-header edges, one cell

  SemiStructuredTable dup({"a", "a"}, {"c"});
  CHECK_THROWS_AS(build_kg(dup), Error);
}

TEST_CASE("worked example parses") {
  const auto t = single({"2001", "2002", "2003"}, {0.5, 0.7, 0.9}, "Price of diesel");
  const auto ctx = ParseContext::of(t);
  const auto p = parse("In how many years, is the price of diesel greater than 0.6 units?", &ctx);
  CHECK(p.template_id == 56);
  REQUIRE(p.lf);
  CHECK(p.lf->to_sexpr() == "(count_where (column (series \"price of diesel\")) \">\" 0.59999999999999998)");
  CHECK(execute(*p.lf, build_kg(t)) == Answer::of_number(2));

  const auto m = parse("What is the median banana production?");
  CHECK(m.template_id == 49);
  CHECK(m.bindings.at("Y") == "banana production");
  CHECK(m.lf->to_sexpr() == "(median (column (series \"banana production\")))");

  CHECK_THROWS_AS(parse("hello world"), UnparseableQuestion);
}

TEST_CASE("executor fixtures") {
  const auto t = single({"a", "b", "c"}, {45, 52, 58.01}, "Number of students");
  CHECK(answer("What is the average number of students per city?", t).display() == "51.67");
  const auto kg = build_kg(t);
  using LF = LogicalForm;
  using Op = LF::Op;
  auto c = [](const char* r) {
    return LF::call(Op::cell, {LF::lit(std::string(r)), LF::col_at(0)});
  };
  CHECK(execute(LF::call(Op::ratio, {c("b"), c("b")}), kg) == Answer::of_number(1));
  const auto mono = single({"w", "x", "y", "z"}, {1, 2, 2, 3});
  const auto lf = LF::call(Op::monotonic_increasing, {LF::call(Op::column, {LF::col_at(0)})});
  CHECK(execute(lf, build_kg(mono)) == Answer::yes_no(true));
  CHECK(execute(lf, build_kg(mono), {true}) == Answer::yes_no(false));
  const auto flat = single({"a", "b"}, {4, 4});
  CHECK(answer("What is the difference between the highest and the lowest price of diesel?", flat) ==
        Answer::of_number(0));
}

TEST_CASE("missing data is unavailable, never a crash") {
  auto t = diesel_table();
  t.row_headers[0] = "200B";
  const auto a = answer("What is the price of diesel in Lebanon in the year 2008?", t);
  CHECK_FALSE(a.available());
  t = diesel_table();
  t.cells[1][0].reset();
  CHECK_FALSE(answer("What is the price of diesel in Lebanon in the year 2010?", t).available());
  CHECK(answer("What is the price of diesel in Lebanon in the year 2012?", t).available());
  CHECK_FALSE(answer("What is the title of the graph?", t).available());
}

TEST_CASE("scaling invariance") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    SemiStructuredTable t = oracle::random_table(rng);
    SemiStructuredTable scaled = t;
    const double k = 7.5;
    for (auto& row : scaled.cells)
      for (auto& c : row)
        if (c) *c *= k;
    using LF = LogicalForm;
    using Op = LF::Op;
    const auto col = LF::call(Op::column, {LF::col_at(0)});
    for (Op op : {Op::argmax, Op::argmin}) {
      const auto lf = LF::call(op, {col});
      Answer a, b;
      try { a = execute(lf, build_kg(t)); } catch (const AnswerUnavailable&) {}
      try { b = execute(lf, build_kg(scaled)); } catch (const AnswerUnavailable&) {}
      CHECK(a == b);
    }
    for (Op op : {Op::sum, Op::mean, Op::median}) {
      const auto lf = LF::call(op, {col});
      try {
        const double a = execute(lf, build_kg(t)).number;
        const double b = execute(lf, build_kg(scaled)).number;
        CHECK(b == doctest::Approx(a * k));
      } catch (const AnswerUnavailable&) {
      }
    }
  }
}

TEST_CASE("executor agrees with the brute-force oracle") {
  const auto r = oracle::run(2000, 77);
  CHECK_MESSAGE(r.mismatches == 0, r.first_failure);
  CHECK(r.checks > 50000);
}
