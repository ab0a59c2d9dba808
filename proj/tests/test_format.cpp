#include <cmath>
#include <limits>

#include "blockea/format.hpp"
#include "doctest.h"

using blockea::format_number;
using blockea::parse_number;

TEST_CASE("numbers render like JavaScript") {
  CHECK(format_number(0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(20) == "20");
  CHECK(format_number(-7) == "-7");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(0.05) == "0.05");
  CHECK(format_number(1.0 / 3) == "0.3333333333333333");
  CHECK(format_number(4.0 / 3) == "1.3333333333333333");
  CHECK(format_number(2045.800000011921) == "2045.800000011921");
  CHECK(format_number(1e21) == "1e+21");
  CHECK(format_number(1e20) == "100000000000000000000");
  CHECK(format_number(123456789012345680000.0) == "123456789012345680000");
  CHECK(format_number(1e-7) == "1e-7");
  CHECK(format_number(1.5e-7) == "1.5e-7");
  CHECK(format_number(0.000001) == "0.000001");
  CHECK(format_number(-1.25e-10) == "-1.25e-10");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "NaN");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "Infinity");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-Infinity");
  CHECK(format_number(5e-324) == "5e-324");
  CHECK(format_number(1.7976931348623157e308) == "1.7976931348623157e+308");
  CHECK(format_number(9007199254740993.0) == "9007199254740992");
}

TEST_CASE("parse_number accepts what format_number writes") {
  for (double v : {0.0, 1.0, -3.5, 0.1, 1e21, 1e-7, 2045.800000011921, 1.0 / 3, 123456.789, -1e-300}) {
    auto back = parse_number(format_number(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(parse_number("12abc") == std::nullopt);
  CHECK(parse_number("") == std::nullopt);
  CHECK(parse_number(" ") == std::nullopt);
  CHECK(parse_number("1e3") == 1000.0);
  CHECK(parse_number("-0.5") == -0.5);
}
