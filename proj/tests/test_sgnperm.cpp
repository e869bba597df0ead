#include <doctest.h>

#include <algorithm>
#include <set>

#include "cmtorus/sgnperm.hpp"

using namespace cmtorus::sgnperm;

TEST_SUITE("sgnperm") {

TEST_CASE("parse and print round trip") {
  const auto x = SignedPerm::parse("(1+3-)(2-)", 3);
  CHECK(x.image(1) == 3);
  CHECK(x.sign(1) == 1);
  CHECK(x.image(3) == 1);
  CHECK(x.sign(3) == -1);
  CHECK(x.image(2) == 2);
  CHECK(x.sign(2) == -1);
  CHECK(SignedPerm::parse(x.to_string(), 3) == x);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(SignedPerm::parse("(1+4+)", 3), ParseError);
  CHECK_THROWS_AS(SignedPerm::parse("(1+2)", 3), ParseError);
  CHECK_THROWS_AS(SignedPerm::identity(9), DegreeTooLarge);
}

TEST_CASE("composition sign rule") {
  const auto a = SignedPerm::parse("(1+2-)", 2);  // 1 -> 2 (+), 2 -> 1 (-)
  const auto b = flip(2, 1);
  const auto ab = a * b;
  // (a*b)(1) = a(b(1)) = a(1) = 2; sign = sign_a(1) * sign_b(1) = -1.
  CHECK(ab.image(1) == 2);
  CHECK(ab.sign(1) == -1);
  CHECK(ab.image(2) == 1);
  CHECK(ab.sign(2) == -1);
  CHECK_THROWS_AS(a * SignedPerm::identity(3), DegreeMismatch);
}

TEST_CASE("W_3 group axioms, exhaustively") {
  const auto w = weyl_group(3);
  const auto& e = w.elements();
  REQUIRE(e.size() == 48);
  CHECK(std::is_sorted(e.begin(), e.end()));
  const auto id = SignedPerm::identity(3);
  for (const auto& x : e) {
    CHECK(x * x.inverse() == id);
    CHECK(x.inverse() * x == id);
    CHECK(x * delta(3) == delta(3) * x);
    for (const auto& y : e) {
      CHECK(w.contains(x * y));
      for (const auto& z : e) {
        if ((x * (y * z)) != ((x * y) * z)) FAIL("not associative");
      }
    }
  }
}

TEST_CASE("cycle type is a complete class invariant in W_3") {
  const auto w = weyl_group(3);
  std::set<std::set<SignedPerm>> classes;
  for (const auto& x : w.elements()) {
    std::set<SignedPerm> cls;
    for (const auto& y : w.elements()) cls.insert(y * x * y.inverse());
    classes.insert(cls);
  }
  // W_3 has 10 conjugacy classes (bipartitions of 3).
  CHECK(classes.size() == 10);
  for (const auto& cls : classes) {
    const auto t = signed_cycle_type(*cls.begin());
    for (const auto& x : cls) CHECK(signed_cycle_type(x) == t);
    for (const auto& other : classes)
      if (other != cls) CHECK(signed_cycle_type(*other.begin()) != t);
  }
}

TEST_CASE("weyl group orders") {
  CHECK(weyl_group(1).order() == 2);
  CHECK(weyl_group(2).order() == 8);
  CHECK(weyl_group(4).order() == 384);
  CHECK(weyl_group(5).order() == 3840);
}

TEST_CASE("closure, transitivity and stabiliser") {
  const SignedPerm gens[] = {SignedPerm::parse("(1+2+3+)", 3), delta(3)};
  const auto g = closure(gens, 3);
  CHECK(g.order() == 6);
  CHECK(is_transitive(g));
  CHECK(stabilizer_of_one_positive(g).order() == 1);
  const auto c = g.canonical_generators();
  CHECK(closure(c, 3) == g);

  const SignedPerm flips[] = {flip(3, 2)};
  CHECK(!is_transitive(closure(flips, 3)));
}

TEST_CASE("conjugacy in W_g") {
  const SignedPerm a[] = {SignedPerm::parse("(1+2+)", 2)};
  const SignedPerm b[] = {SignedPerm::parse("(1-2-)", 2)};
  const SignedPerm c[] = {SignedPerm::parse("(1+2-)", 2)};
  const auto ga = closure(a, 2), gb = closure(b, 2), gc = closure(c, 2);
  CHECK(conjugate_in_wg(ga, gb));
  CHECK(!conjugate_in_wg(ga, gc));
  CHECK(ga.conjugacy_invariant() != gc.conjugacy_invariant());
}

TEST_CASE("serialized generators parse back") {
  const auto w = weyl_group(4);
  for (const auto& s : serialize_generators(w.canonical_generators()))
    CHECK(w.contains(SignedPerm::parse(s, 4)));
}

}  // TEST_SUITE
