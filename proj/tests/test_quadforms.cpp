#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <set>

#include "cmtorus/quadforms.hpp"

using namespace cmtorus::quadforms;

namespace {

// Counts classes by reducing every primitive form (a, b, c) with
// 0 <= b < 2a and a^2 <= |d|, a looser range than the reduced-form bound.
std::int64_t classes_by_reduction(std::int64_t d) {
  std::set<QuadForm> seen;
  for (std::int64_t a = 1; a * a <= -d; ++a)
    for (std::int64_t b = 0; b < 2 * a; ++b) {
      const std::int64_t num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const QuadForm f{a, b, num / (4 * a)};
      if (is_primitive(f)) seen.insert(reduce(f));
    }
  return static_cast<std::int64_t>(seen.size());
}

}  // namespace

TEST_SUITE("quadforms") {

TEST_CASE("reduction") {
  CHECK(reduce({3, 4, 2}) == QuadForm{1, 0, 2});
  CHECK(reduce({1, 1, 6}) == QuadForm{1, 1, 6});
  CHECK(reduce({2, -1, 3}) == QuadForm{2, -1, 3});
  CHECK(reduce({4, 4, 3}) == QuadForm{3, 2, 3});
  CHECK(is_reduced({2, -1, 3}));
  CHECK(!is_reduced({2, -2, 3}));
  CHECK(!is_reduced({2, -1, 2}));
  CHECK_THROWS_AS(reduce({1, 3, 1}), NotPositiveDefinite);
  for (std::int64_t a = 1; a < 12; ++a)
    for (std::int64_t b = -20; b <= 20; ++b)
      for (std::int64_t c = 1; c < 12; ++c) {
        const QuadForm f{a, b, c};
        if (f.discriminant() >= 0) continue;
        const auto r = reduce(f);
        CHECK(is_reduced(r));
        CHECK(r.discriminant() == f.discriminant());
        CHECK(reduce(r) == r);
      }
}

TEST_CASE("discriminants") {
  CHECK(is_discriminant(-3));
  CHECK(is_discriminant(-4));
  CHECK(!is_discriminant(-5));
  CHECK(!is_discriminant(4));
  CHECK(is_fundamental(-3));
  CHECK(is_fundamental(-4));
  CHECK(is_fundamental(-8));
  CHECK(!is_fundamental(-12));
  CHECK(!is_fundamental(-16));
  CHECK(is_fundamental(-23));
  CHECK(!is_fundamental(-27));
}

TEST_CASE("small class numbers") {
  CHECK(class_number(-3) == 1);
  CHECK(class_number(-4) == 1);
  CHECK(class_number(-23) == 3);
  CHECK(class_number(-163) == 1);
  CHECK(class_number(-20) == 2);
  CHECK_THROWS_AS(class_number(-5), BadDiscriminant);
  CHECK_THROWS_AS(class_number(8), BadDiscriminant);
}

TEST_CASE("class number agrees with reduction counting up to 2000") {
  for (std::int64_t n = 3; n <= 2000; ++n) {
    const std::int64_t d = -n;
    if (!is_discriminant(d)) continue;
    INFO("d = " << d);
    CHECK(class_number(d) == classes_by_reduction(d));
  }
}

TEST_CASE("range sieve matches single computations") {
  const auto counts = class_numbers_in_range(3, 3000, 2);
  for (std::int64_t n = 3; n <= 3000; ++n) {
    const std::int64_t expected = is_discriminant(-n) ? class_number(-n) : 0;
    CHECK(counts[n - 3] == expected);
  }
  const auto window = class_numbers_in_range(1000, 1100);
  for (std::int64_t n = 1000; n <= 1100; ++n) CHECK(window[n - 1000] == counts[n - 3]);
}

TEST_CASE("kronecker symbol and prime classes") {
  CHECK(kronecker_prime(-23, 2) == 1);
  CHECK(kronecker_prime(-23, 3) == 1);
  CHECK(kronecker_prime(-23, 5) == -1);
  CHECK(kronecker_prime(-23, 23) == 0);
  CHECK(kronecker_prime(-4, 2) == 0);
  CHECK(prime_class(2, -23) == QuadForm{2, 1, 3});
  CHECK(prime_class(3, -23) == QuadForm{2, -1, 3});
  CHECK_THROWS_AS(prime_class(5, -23), NotSplit);
  CHECK_THROWS_AS(prime_class(4, -23), NotSplit);
}

TEST_CASE("split prime distinctness") {
  const auto r = split_prime_distinctness(-23, 2);
  CHECK(r.distinct);
  CHECK(r.classes.size() == 1);
  CHECK_THROWS_AS(split_prime_distinctness(-12, 1), BadDiscriminant);
  CHECK_THROWS_AS(split_prime_distinctness(-23, 3), QuadformsError);
  for (std::int64_t n = 3; n <= 3000; ++n) {
    if (!is_fundamental(-n)) continue;
    std::int64_t x = 0;
    while (4 * (x + 1) * (x + 1) <= n) ++x;
    CHECK(split_prime_distinctness(-n, x).distinct);
  }
}

TEST_CASE("growth table") {
  const auto rows = brauer_siegel_table(3, 100);
  REQUIRE(!rows.empty());
  CHECK(rows.front().discriminant == -3);
  CHECK(rows.front().h == 1);
  CHECK(rows.front().ratio == 0.0);
  for (const auto& r : rows) {
    CHECK(is_fundamental(r.discriminant));
    CHECK(r.h == class_number(r.discriminant));
  }
  const auto csv = to_csv(rows);
  CHECK(csv.rfind("discriminant,h,ratio\n-3,1,0.000000000000\n", 0) == 0);
  CHECK(median_ratio({{-4, 1, 0.0}, {-7, 1, 0.5}, {-8, 1, 1.0}, {-11, 1, 2.0}}, 3, 20) == 0.75);
  CHECK_THROWS_AS(median_ratio(rows, 5000, 6000), QuadformsError);
}

}  // TEST_SUITE
