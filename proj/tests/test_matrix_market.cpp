#include "saddle_rotor/matrix_market.hpp"
#include "saddle_rotor/random_instances.hpp"

#include <doctest.h>

#include <sstream>

using namespace saddle_rotor;

TEST_CASE("read array general") {
  std::istringstream in(
      "%%MatrixMarket matrix array real general\n"
      "% a comment\n"
      "2 3\n"
      "1\n2\n3\n4\n5\n6\n");
  Matrix m = read_matrix_market(in, "test");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  Matrix expected(2, 3);
  expected << 1, 3, 5, 2, 4, 6;  // column-major order
  CHECK((m - expected).norm() == 0.0);
}

TEST_CASE("read array symmetric lower triangle") {
  std::istringstream in(
      "%%MatrixMarket matrix array real symmetric\n"
      "2 2\n"
      "1\n2\n3\n");
  Matrix m = read_matrix_market(in, "test");
  Matrix expected(2, 2);
  expected << 1, 2, 2, 3;
  CHECK((m - expected).norm() == 0.0);
}

TEST_CASE("read coordinate general and symmetric") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 2\n"
      "1 2 5.5\n"
      "3 1 -1\n");
  Matrix m = read_matrix_market(in, "test");
  CHECK(m(0, 1) == 5.5);
  CHECK(m(2, 0) == -1.0);
  CHECK(m.cwiseAbs().sum() == 6.5);

  std::istringstream in2(
      "%%MatrixMarket matrix coordinate integer symmetric\n"
      "2 2 2\n"
      "1 1 2\n"
      "2 1 7\n");
  Matrix s = read_matrix_market(in2, "test");
  Matrix expected(2, 2);
  expected << 2, 7, 7, 0;
  CHECK((s - expected).norm() == 0.0);
}

TEST_CASE("malformed inputs raise parse errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(in, "test");
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("not a banner\n1 1\n0\n"), ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix array complex general\n1 1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix array real general\n0 2\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n5 5 1.0\n"),
      ParseError);
  CHECK_THROWS_AS(read_matrix_market_file("/nonexistent/path.mtx"), ParseError);
}

TEST_CASE("write then read round-trips exactly") {
  std::mt19937_64 rng(41);
  Matrix m = gaussian_matrix(rng, 5, 3);
  std::stringstream buf;
  write_matrix_market(buf, m);
  Matrix back = read_matrix_market(buf, "roundtrip");
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}
