#include <doctest.h>

#include "cmtorus/transfer.hpp"

using namespace cmtorus::transfer;
using cmtorus::glattice::FiniteGroup;

namespace {

// Every single-entry change of a witness matrix, tried against the verifier.
struct MutationSweep {
  std::size_t tried = 0;
  std::size_t survived = 0;
};

MutationSweep sweep(EquivalenceChain chain) {
  MutationSweep out;
  for (auto& step : chain.steps) {
    const int p = step.source.prime();
    for (FpMatrix* witness : {&step.subspace, &step.map})
      for (auto& row : *witness)
        for (auto& x : row) {
          const int old = x;
          for (int delta = 1; delta < p; ++delta) {
            x = (old + delta) % p;
            ++out.tried;
            if (verify_chain(chain).ok) ++out.survived;
          }
          x = old;
        }
  }
  return out;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("row reduction and determinants mod p") {
  const FpMatrix m{{1, 2, 0}, {2, 1, 0}};
  CHECK(row_reduce(m, 3) == FpMatrix{{1, 2, 0}});
  CHECK(row_reduce(m, 5).size() == 2);
  CHECK(determinant_mod({{1, 1}, {0, 1}}, 2) == 1);
  CHECK(determinant_mod({{1, 1}, {1, 1}}, 2) == 0);
  CHECK(determinant_mod({{2, 1}, {1, 2}}, 3) == 0);
  CHECK(multiply_mod({{1, 1}, {0, 1}}, {{1, 1}, {0, 1}}, 2) == FpMatrix{{1, 0}, {0, 1}});
}

TEST_CASE("permutation module and submodules") {
  const auto m = FpGModule::permutation(3, FiniteGroup::symmetric(3));
  CHECK(m.dim() == 3);
  const auto ones = submodule(m, {{1, 1, 1}});
  CHECK(ones.basis.size() == 1);
  CHECK(is_trivial(ones.module));
  const auto aug = submodule(m, {{1, 2, 0}});
  CHECK(aug.basis.size() == 2);
  // Over F_3 the all-ones vector has coordinate sum 0, so it lies in the
  // augmentation submodule.
  CHECK(submodule(aug.module, {{1, 0}}).basis.size() >= 1);
  const auto q = quotient(m, aug.basis);
  CHECK(q.module.dim() == 1);
  CHECK(is_trivial(q.module));
  CHECK_THROWS_AS(restrict_to(m, {{1, 0, 0}}), NotASubmodule);
  CHECK_THROWS_AS(quotient(m, {{0, 1, 0}}), NotASubmodule);
}

TEST_CASE("invalid actions are rejected") {
  const auto c2 = FiniteGroup::cyclic(2);
  CHECK_THROWS_AS(FpGModule(2, 1, c2, {{{1}}, {{0}}}), NotAModule);
  CHECK_NOTHROW(FpGModule(3, 1, c2, {{{1}}, {{2}}}));
}

TEST_CASE("isomorphism search") {
  const auto s3 = FiniteGroup::symmetric(3);
  const auto m = FpGModule::permutation(2, s3);
  const auto iso = find_isomorphism(m, m);
  REQUIRE(iso.has_value());
  CHECK(is_equivariant_isomorphism(m, m, *iso));
  CHECK(!find_isomorphism(m, FpGModule::trivial(2, s3, 3)).has_value());
  CHECK(!is_equivariant_isomorphism(m, m, {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST_CASE("least order-eight subgroup of S_4") {
  const auto d4 = least_order_eight_subgroup();
  CHECK(d4.size() == 8);
  CHECK(d4.front() == cmtorus::glattice::Permutation{0, 1, 2, 3});
}

TEST_CASE("built-in chains verify") {
  for (const auto& chain : {gerth_chain(), quartic_chain()}) {
    INFO(chain.name);
    const auto v = verify_chain(chain);
    CHECK(v.ok);
    CHECK(!v.failing_step.has_value());
  }
  CHECK(quartic_chain().steps.size() == 4);
}

TEST_CASE("every single-entry witness mutation is detected") {
  for (const auto& chain : {gerth_chain(), quartic_chain()}) {
    INFO(chain.name);
    const auto s = sweep(chain);
    CHECK(s.tried > 0);
    CHECK(s.survived == 0);
  }
}

TEST_CASE("broken connectivity is reported") {
  auto chain = quartic_chain();
  std::swap(chain.steps[0], chain.steps[1]);
  const auto v = verify_chain(chain);
  CHECK(!v.ok);
  CHECK(v.failing_step.has_value());
  CHECK(!v.reason.empty());
}

TEST_CASE("json form") {
  const auto j = to_json(gerth_chain());
  CHECK(j.contains("steps"));
  CHECK(j["steps"].size() == 1);
}

}  // TEST_SUITE
