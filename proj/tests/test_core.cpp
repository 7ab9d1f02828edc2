#include <doctest.h>

#include <cmath>
#include <limits>

#include "tropikam/core.hpp"

using namespace tropikam;

TEST_CASE("matrix construction and access") {
  Matrix m{{1, 2}, {3, 4}};
  CHECK(m.rows() == 2);
  CHECK(m.square());
  CHECK(m(1, 0) == 3);
  CHECK(m.min_coeff() == 1);
  CHECK(m.max_coeff() == 4);
  CHECK(m.sum() == 10);
  CHECK(m.transposed()(0, 1) == 3);
  m -= 1.0;
  CHECK(m(0, 0) == 0);
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST_CASE("max_abs_diff needs equal shapes") {
  CHECK(max_abs_diff(Matrix{{1, 2}}, Matrix{{1, 5}}) == 3);
  CHECK_THROWS_AS(max_abs_diff(Matrix{{1}}, Matrix{{1, 2}}), DimensionError);
}

TEST_CASE("report pass/fail is derived from residuals") {
  Report r;
  r.add("a", 1e-12, 1e-9);
  CHECK(r.passed());
  r.add("b", std::numeric_limits<double>::quiet_NaN(), 1.0);
  CHECK_FALSE(r.passed());
  CHECK(std::isinf(r.residual("b")));
  CHECK_THROWS_AS(r.residual("missing"), std::out_of_range);

  Report outer;
  outer.append(r, "inner.");
  CHECK(outer.check("inner.a").passed());
  CHECK_FALSE(outer.passed());
}

TEST_CASE("parse errors carry a location") {
  const ParseError e("bad token", 3, 7);
  CHECK(e.line() == 3);
  CHECK(e.column() == 7);
  CHECK(std::string(e.what()).find("line 3, column 7") != std::string::npos);
}

TEST_CASE("default tolerances can be replaced") {
  const Tolerances saved = default_tolerances();
  Tolerances t;
  t.num = 1e-6;
  set_default_tolerances(t);
  CHECK(default_tolerances().num == 1e-6);
  set_default_tolerances(saved);
  CHECK(default_tolerances().num == 1e-9);
}
