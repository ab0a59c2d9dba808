#include <cmath>

#include "blockea/fitness.hpp"
#include "doctest.h"

using namespace blockea;
using namespace blockea::fitness;
using ea::Individual;
using ea::individual_from_text;

namespace {

double om(std::string_view s) { return onemax_value(individual_from_text(s)); }
double lo(std::string_view s) { return leading_ones_value(individual_from_text(s)); }
double jp(std::string_view s, std::int64_t k) { return jump_value(individual_from_text(s), k); }

Individual from_mask(unsigned mask, int n) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return Individual(std::move(v));
}

}  // namespace

TEST_CASE("onemax") {
  CHECK(om("00000") == 0);
  CHECK(om("11111") == 5);
  CHECK(om("1101") == 3);
}

TEST_CASE("leading ones") {
  CHECK(lo("0111") == 0);
  CHECK(lo("1111") == 4);
  CHECK(lo("1101") == 2);
}

TEST_CASE("jump") {
  CHECK(jp("11111", 2) == 7);
  CHECK(jp("11100", 2) == 5);
  CHECK(jp("11110", 2) == 1);
  CHECK_THROWS_AS(jp("11111", 0), BadGap);
  CHECK_THROWS_AS(jp("11111", 6), BadGap);
  CHECK(jp("11111", 5) == 10);
}

TEST_CASE("diversity") {
  using P = ea::Population;
  CHECK(diversity_mean_hamming(P{individual_from_text("0101"), individual_from_text("0101")}) == 0);
  CHECK(diversity_mean_hamming(P{individual_from_text("00"), individual_from_text("11")}) == 2);
  CHECK(diversity_mean_hamming(P{individual_from_text("00"), individual_from_text("01"), individual_from_text("11")}) ==
        doctest::Approx(4.0 / 3));
  CHECK_THROWS_AS(diversity_mean_hamming(P{individual_from_text("0")}), TooSmall);
  CHECK_THROWS_AS(diversity_mean_hamming(P{individual_from_text("0"), individual_from_text("01")}), ea::Error);
}

TEST_CASE("function relations hold exhaustively for n <= 12") {
  for (int n = 1; n <= 12; ++n) {
    double best_jump = -1;
    int best_count = 0;
    const std::int64_t k = std::min(n, 3);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const auto x = from_mask(mask, n);
      const double o = onemax_value(x);
      CHECK(o >= 0);
      CHECK(o <= n);
      CHECK(o + onemax_value(ea::complement(x)) == n);
      CHECK(leading_ones_value(x) <= o);
      const double j = jump_value(x, k);
      if (o <= n - k) CHECK(j == o + static_cast<double>(k));
      if (j > best_jump) {
        best_jump = j;
        best_count = 0;
      }
      if (j == best_jump) ++best_count;
      if (j == n + k) CHECK(o == n);
    }
    CHECK(best_jump == n + k);
    CHECK(best_count == 1);
  }
}

TEST_CASE("each objective call counts once; diversity never") {
  EvalCounter c;
  const auto x = individual_from_text("1101");
  onemax(x, c);
  CHECK(c.count() == 1);
  leading_ones(x, c);
  CHECK(c.count() == 2);
  jump(x, 2, c);
  CHECK(c.count() == 3);
  onemax(x, c);  // no caching
  CHECK(c.count() == 4);
  diversity_mean_hamming({x, x});
  CHECK(c.count() == 4);
  CHECK(c.best_so_far() == 3.0);
  CHECK_THROWS_AS(jump(x, 9, c), BadGap);
  CHECK(c.count() == 4);
  c.reset();
  CHECK(c.count() == 0);
  CHECK(!c.best_so_far().has_value());
}

TEST_CASE("best so far keeps the first maximiser") {
  EvalCounter c;
  onemax(individual_from_text("110"), c);
  onemax(individual_from_text("011"), c);
  onemax(individual_from_text("001"), c);
  CHECK(c.best_individual().to_string() == "110");
  CHECK(*c.best_so_far() == 2);
}

TEST_CASE("objective lookup and binding") {
  CHECK(objective_from_string("leading_ones") == ObjectiveKind::LeadingOnes);
  CHECK(!objective_from_string("sphere").has_value());
  EvalCounter c;
  Objective obj{ObjectiveKind::Jump, 2};
  auto f = obj.bind(c);
  CHECK(f(individual_from_text("11110")) == 1);
  CHECK(c.count() == 1);
}
