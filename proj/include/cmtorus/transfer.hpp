#pragma once

// Finite modules over F_p for a finite group, and chains of module steps that
// each preserve class-group size up to negligible factors: passing to a
// submodule with trivial quotient, dividing out a trivial submodule, and an
// explicit equivariant isomorphism. Matrices act on column vectors.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmtorus/glattice.hpp"

namespace cmtorus::transfer {

using glattice::FiniteGroup;
/// Row-major matrix with entries in [0, p).
using FpMatrix = std::vector<std::vector<int>>;
using FpVector = std::vector<int>;

class TransferError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotASubmodule : public TransferError {
 public:
  using TransferError::TransferError;
};

class NotAModule : public TransferError {
 public:
  using TransferError::TransferError;
};

class FpGModule {
 public:
  FpGModule() = default;
  /// One dim x dim matrix per group element; validated as a homomorphism.
  FpGModule(int p, std::size_t dim, FiniteGroup group, std::vector<FpMatrix> action);
  /// Basis vector i goes to basis vector g(i).
  static FpGModule permutation(int p, const FiniteGroup& group);
  static FpGModule trivial(int p, const FiniteGroup& group, std::size_t dim);

  int prime() const { return p_; }
  std::size_t dim() const { return dim_; }
  const FiniteGroup& group() const { return group_; }
  const FpMatrix& action(std::size_t element) const { return action_[element]; }
  const std::vector<FpMatrix>& actions() const { return action_; }

  /// Same prime, dimension, group order and action matrices.
  friend bool operator==(const FpGModule& a, const FpGModule& b) {
    return a.p_ == b.p_ && a.dim_ == b.dim_ && a.action_ == b.action_;
  }

 private:
  int p_ = 2;
  std::size_t dim_ = 0;
  FiniteGroup group_;
  std::vector<FpMatrix> action_;
};

/// Reduced row echelon form mod p with zero rows removed.
FpMatrix row_reduce(const FpMatrix& m, int p);
/// Determinant mod p of a square matrix.
int determinant_mod(const FpMatrix& m, int p);
FpMatrix multiply_mod(const FpMatrix& a, const FpMatrix& b, int p);

struct Submodule {
  FpGModule module;
  FpMatrix basis;  // reduced echelon rows inside the parent's space
};

/// Smallest action-closed subspace containing the generators.
Submodule submodule(const FpGModule& m, const std::vector<FpVector>& generators);

/// The action restricted to a subspace given by reduced echelon rows; throws
/// NotASubmodule when the subspace is not action-closed.
FpGModule restrict_to(const FpGModule& m, const FpMatrix& basis);

struct QuotientModule {
  FpGModule module;
  FpMatrix projection;  // dim(M/N) x dim(M)
};

/// M / N for N given by reduced echelon rows. Throws NotASubmodule.
QuotientModule quotient(const FpGModule& m, const FpMatrix& basis);

/// Every group generator acts as the identity.
bool is_trivial(const FpGModule& m);

/// An invertible T with T * A(s) = B(s) * T for every generator s. The
/// equivariant maps are found by linear algebra; their span is searched
/// exhaustively when it has at most 2^16 elements, otherwise by a fixed-seed
/// random search (so absence is then not a proof).
std::optional<FpMatrix> find_isomorphism(const FpGModule& a, const FpGModule& b);

/// T is invertible and equivariant from a to b on all group generators.
bool is_equivariant_isomorphism(const FpGModule& a, const FpGModule& b, const FpMatrix& t);

enum class StepKind { SubmoduleWithTrivialQuotient, TrivialSubmoduleQuotient, Isomorphism };

std::string to_string(StepKind kind);

/// One step between source and target. For the two subspace kinds the target
/// is the submodule (resp. quotient) cut out by `subspace`; for Isomorphism
/// `map` sends source to target. A reversed step is walked target to source.
struct ChainStep {
  StepKind kind = StepKind::Isomorphism;
  std::string label;
  FpGModule source;
  FpGModule target;
  FpMatrix subspace;
  FpMatrix map;
  bool reversed = false;
};

struct EquivalenceChain {
  std::string name;
  std::vector<ChainStep> steps;
};

struct ChainVerification {
  bool ok = false;
  std::optional<std::size_t> failing_step;
  std::string reason;
};

/// Re-checks every witness and that consecutive steps share their modules.
ChainVerification verify_chain(const EquivalenceChain& chain);

/// S_3 permutation module over F_3 and its submodule spanned by a1-a2 and
/// a2-a3, whose quotient is trivial.
EquivalenceChain gerth_chain();

/// Over F_2 for S_4: the permutation module M, M1 = M / <all-ones>, the
/// submodule M2 of M1 spanned by a1+a2 and a1+a3, an isomorphism M2 -> N/N0,
/// and N = F_2[cosets of D_4] with N0 = <all-ones>.
EquivalenceChain quartic_chain();

/// The lexicographically least order-8 subgroup of S_4, as sorted 0-based
/// permutations.
std::vector<glattice::Permutation> least_order_eight_subgroup();

nlohmann::ordered_json to_json(const EquivalenceChain& chain);

}  // namespace cmtorus::transfer
