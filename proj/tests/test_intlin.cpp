#include <doctest.h>

#include <random>

#include "cmtorus/intlin.hpp"

using namespace cmtorus::intlin;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = d(rng);
  return m;
}

IntMatrix stack(const IntMatrix& top, std::size_t zero_rows) {
  IntMatrix out = top;
  IntVector zero(top.cols(), 0);
  for (std::size_t i = 0; i < zero_rows; ++i) out.append_row(zero);
  return out;
}

}  // namespace

TEST_SUITE("intlin") {

TEST_CASE("hnf of a small lattice") {
  const auto h = hnf(IntMatrix::from_rows({{2, 4}, {6, 8}}));
  CHECK(h == IntMatrix::from_rows({{2, 0}, {0, 4}}));
}

TEST_CASE("hnf drops dependent rows and normalises above pivots") {
  const auto h = hnf(IntMatrix::from_rows({{3, 1, 4}, {6, 2, 8}, {0, 0, 5}}));
  REQUIRE(h.rows() == 2);
  CHECK(h(0, 0) == 3);
  CHECK(h(1, 2) == 5);
  CHECK(h(0, 2) >= 0);
  CHECK(h(0, 2) < 5);
}

TEST_CASE("snf invariant factors") {
  const auto s = snf(IntMatrix::from_rows({{2, 4}, {6, 8}}));
  CHECK(s.cokernel.invariant_factors == std::vector<Integer>{2, 4});
  CHECK(s.cokernel.free_rank == 0);
  CHECK(s.cokernel.to_string() == "Z/2 + Z/4");

  const auto t = snf(IntMatrix::from_rows({{2, 0, 0}, {0, 3, 0}}));
  CHECK(t.cokernel.invariant_factors == std::vector<Integer>{6});
  CHECK(t.cokernel.free_rank == 1);
}

TEST_CASE("snf of the zero matrix and the identity") {
  CHECK(snf(IntMatrix(2, 3)).cokernel.free_rank == 3);
  CHECK(snf(IntMatrix::identity(4)).cokernel.is_trivial());
}

TEST_CASE("random hnf and snf witnesses") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 5, cols = 1 + (trial / 5) % 5;
    const auto m = random_matrix(rng, rows, cols, 6);

    const auto h = hnf_with_transform(m);
    CHECK(h.transform * m == stack(h.form, rows - h.rank));
    CHECK(abs(determinant(h.transform)) == 1);
    CHECK(h.form == hnf(m));

    const auto s = snf(m);
    CHECK(s.p * m * s.q == s.diagonal);
    CHECK(abs(determinant(s.p)) == 1);
    CHECK(abs(determinant(s.q)) == 1);
    CHECK(s.rank == h.rank);
    const auto& f = s.cokernel.invariant_factors;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) CHECK(f[i + 1] % f[i] == 0);
    CHECK(s.cokernel.free_rank == cols - s.rank);
  }
}

TEST_CASE("left kernel annihilates and is saturated") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 4, 2, 5);
    const auto k = left_kernel(m);
    CHECK((k * m).is_zero());
    CHECK(k.rows() + hnf(m).rows() == 4);
    CHECK(is_primitive(Lattice::span(k)));
  }
}

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix::from_rows({{2, 4}, {6, 8}})) == -8);
  CHECK(determinant(IntMatrix::from_rows({{0, 1}, {1, 0}})) == -1);
  CHECK(determinant(IntMatrix::identity(5)) == 1);
}

TEST_CASE("dimension mismatch throws") {
  CHECK_THROWS_AS(IntMatrix::from_rows({{1, 2}}) * IntMatrix::from_rows({{1, 2}}), DimensionMismatch);
}

TEST_CASE("sum-even lattice has index two") {
  const auto l = Lattice::span(
      IntMatrix::from_rows({{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}, {2, 0, 0, 0}}));
  CHECK(l.rank() == 4);
  const auto q = quotient_with_images(Lattice::full(4), l);
  CHECK(q.structure.invariant_factors == std::vector<Integer>{2});
  CHECK(q.map.order(to_int_vector({1, 0, 0, 0})) == 2);
  CHECK(q.map.is_zero(to_int_vector({1, 1, 0, 0})));
  CHECK(!member(l, to_int_vector({1, 0, 1, 1})));
  CHECK(member(l, to_int_vector({1, 0, 1, 2})));
  CHECK(is_primitive(l) == false);
  CHECK(saturation(l) == Lattice::full(4));
}

TEST_CASE("coordinates reproduce the vector") {
  const auto l = Lattice::span(IntMatrix::from_rows({{2, 4, 0}, {0, 3, 3}}));
  const auto v = to_int_vector({4, 11, 3});
  const auto c = l.coordinates(v);
  REQUIRE(c.has_value());
  CHECK(std::span<const Integer>(*c) * l.basis() == v);
  CHECK(!l.coordinates(to_int_vector({1, 0, 0})).has_value());
}

TEST_CASE("quotient map orders and free part") {
  const auto sub = Lattice::span(IntMatrix::from_rows({{6, 0, 0}}));
  const auto q = quotient_with_images(Lattice::full(3), sub);
  CHECK(q.structure.invariant_factors == std::vector<Integer>{6});
  CHECK(q.structure.free_rank == 2);
  CHECK(q.map.order(to_int_vector({2, 0, 0})) == 3);
  CHECK(q.map.order(to_int_vector({0, 1, 0})) == 0);
  CHECK(q.map.image(to_int_vector({7, 0, 0})) == q.map.image(to_int_vector({1, 0, 0})));
}

TEST_CASE("quotient rejects a non-sublattice") {
  const auto a = Lattice::span(IntMatrix::from_rows({{2, 0}}));
  const auto b = Lattice::span(IntMatrix::from_rows({{1, 0}}));
  CHECK(contains(b, a));
  CHECK(!contains(a, b));
  CHECK_THROWS_AS(quotient_with_images(a, b), NotASublattice);
}

TEST_CASE("zero lattice keeps its ambient rank") {
  const auto z = Lattice::zero(3);
  CHECK(z.rank() == 0);
  CHECK(z.ambient_rank() == 3);
  CHECK(quotient_with_images(Lattice::full(3), z).structure.free_rank == 3);
}

}  // TEST_SUITE
