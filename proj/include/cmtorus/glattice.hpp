#pragma once

// Lattices with a finite group action: invariant Gram matrices, minimal
// vectors, faithfulness and bar-resolution cohomology in degrees 1 and 2.

#include <gmpxx.h>

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "cmtorus/intlin.hpp"
#include "cmtorus/sgnperm.hpp"

namespace cmtorus::glattice {

using intlin::IntMatrix;
using intlin::IntVector;
using Rational = mpq_class;
using RationalMatrix = std::vector<std::vector<Rational>>;

class GlatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAHomomorphism : public GlatticeError {
 public:
  using GlatticeError::GlatticeError;
};

class RankTooLarge : public GlatticeError {
 public:
  using GlatticeError::GlatticeError;
};

class GroupTooLarge : public GlatticeError {
 public:
  using GlatticeError::GlatticeError;
};

using Permutation = std::vector<int>;  // 0-based images

/// A finite group given by its complete multiplication table. Element 0 is
/// the identity. Permutation groups keep their permutations so modules can be
/// built from them.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  static FiniteGroup from_table(std::vector<std::vector<std::size_t>> table,
                                std::vector<std::size_t> generators);
  /// Closure of permutation generators; elements sorted lexicographically,
  /// composition (a*b)(i) = a(b(i)).
  static FiniteGroup from_permutations(const std::vector<Permutation>& generators, int degree);
  static FiniteGroup from_signed(const sgnperm::SignedGroup& group);
  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup symmetric(int degree);

  std::size_t order() const { return table_.size(); }
  std::size_t identity() const { return 0; }
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::vector<std::size_t>& generators() const { return generators_; }

  bool is_permutation_group() const { return !permutations_.empty(); }
  int degree() const { return degree_; }
  const Permutation& permutation(std::size_t e) const { return permutations_.at(e); }
  std::size_t index_of(const Permutation& p) const;

 private:
  void finish();

  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> generators_;
  std::vector<Permutation> permutations_;
  int degree_ = 0;
};

/// A free Z-module of rank d with an action by a finite group, matrices
/// acting on column vectors: action(g*h) = action(g) * action(h).
class GLattice {
 public:
  GLattice() = default;
  /// One matrix per group element; validated as a homomorphism into GL_d(Z).
  GLattice(FiniteGroup group, std::vector<IntMatrix> action);
  /// Extends generator images along the Cayley graph, then validates.
  static GLattice from_generator_images(FiniteGroup group, const std::vector<IntMatrix>& images);
  static GLattice trivial(FiniteGroup group, std::size_t rank);
  /// Z[G] with the left regular action.
  static GLattice regular(FiniteGroup group);
  /// Signed permutation matrices of a subgroup of W_g on Z^g.
  static GLattice signed_permutation(const sgnperm::SignedGroup& group);
  /// Permutation matrices of a permutation group.
  static GLattice permutation(const FiniteGroup& group);

  const FiniteGroup& group() const { return group_; }
  std::size_t rank() const { return rank_; }
  const IntMatrix& action(std::size_t element) const { return action_[element]; }

 private:
  FiniteGroup group_;
  std::vector<IntMatrix> action_;
  std::size_t rank_ = 0;
};

/// (1/|G|) * sum over g of action(g)^T action(g).
RationalMatrix invariant_gram(const GLattice& lattice);

Rational quadratic_form(const RationalMatrix& gram, const IntVector& v);

/// All nonzero integer vectors of minimal norm v^T Q v (closed under
/// negation), by exact Fincke-Pohst enumeration. Rank must be at most 8.
std::set<IntVector> minimal_vectors(const RationalMatrix& gram);
Rational minimum_norm(const RationalMatrix& gram);

bool is_faithful(const GLattice& lattice);

/// H^degree(G, L) for degree 1 or 2 via the inhomogeneous bar resolution.
/// Limits: |G| <= 48 for degree 1, |G| <= 24 for degree 2.
intlin::AbelianGroupStructure cohomology(const GLattice& lattice, int degree);

/// Coboundary d^n : C^n -> C^(n+1) as a matrix acting on row vectors, with
/// cochains flattened as (g_1, ..., g_n, coordinate) in row-major order.
IntMatrix coboundary_matrix(const GLattice& lattice, int n);

/// Fingerprint of the invariant-form normalisation loop: the form is
/// re-weighted until its minimal vectors span the whole space, then the
/// minimal vectors' Gram values are recorded. Equal for isomorphic lattices;
/// not claimed to separate non-isomorphic ones.
struct RepresentationFingerprint {
  std::size_t rank = 0;
  std::size_t group_order = 0;
  std::size_t iterations = 0;
  bool spans = false;
  std::size_t minimal_count = 0;
  std::vector<Rational> normalized_products;  // sorted <u,v>/min over minimal pairs
  intlin::AbelianGroupStructure span_quotient;

  friend bool operator==(const RepresentationFingerprint&,
                         const RepresentationFingerprint&) = default;
};

RepresentationFingerprint canonicalize_representation(const GLattice& lattice);

}  // namespace cmtorus::glattice
