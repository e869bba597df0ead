#pragma once

// The hyperoctahedral group W_g of signed permutations of {1..g}.
//
// An element takes i to image(i) with sign sign(i). Composition follows
//   (a*b)(i) = a(b(i)),   sign_{a*b}(i) = sign_a(b(i)) * sign_b(i).
// Text form is cycle notation with a sign after every point, e.g.
// "(1+3-)(2-)" takes 1 to 3 with sign +1, 3 to 1 with sign -1 and fixes 2
// with sign -1.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmtorus::sgnperm {

inline constexpr int kMaxDegree = 8;

class SgnpermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeMismatch : public SgnpermError {
 public:
  using SgnpermError::SgnpermError;
};

class DegreeTooLarge : public SgnpermError {
 public:
  using SgnpermError::SgnpermError;
};

class ParseError : public SgnpermError {
 public:
  using SgnpermError::SgnpermError;
};

/// Packed into one 64-bit word: degree in bits 40..43, the image of point i
/// (0-based) in the nibble at bit 8 + 4 * (7 - i), and the "sign is -1" flag
/// of point i at bit 7 - i. Comparing words of equal degree therefore orders
/// elements lexicographically by (image sequence, sign sequence) with + < -.
class SignedPerm {
 public:
  SignedPerm() = default;

  static SignedPerm identity(int degree);
  /// images and signs are 1-based points and +1/-1 values, one per point.
  static SignedPerm from_images(std::span<const int> images, std::span<const int> signs);
  /// Identity permutation with the given points (bit i = point i+1) negated.
  static SignedPerm sign_change(int degree, unsigned negative_mask);
  static SignedPerm parse(std::string_view text, int degree);
  static SignedPerm from_word(std::uint64_t word) { return SignedPerm(word); }

  int degree() const { return static_cast<int>((word_ >> 40) & 0xF); }
  /// 0-based image of 0-based point i.
  int at(int i) const { return static_cast<int>((word_ >> (8 + 4 * (7 - i))) & 0xF); }
  bool negative_at(int i) const { return (word_ >> (7 - i)) & 1U; }
  /// 1-based convenience accessors.
  int image(int point) const { return at(point - 1) + 1; }
  int sign(int point) const { return negative_at(point - 1) ? -1 : 1; }
  /// Bit i set when point i+1 carries sign -1.
  unsigned negative_mask() const;

  bool is_identity() const;
  SignedPerm inverse() const;
  std::uint64_t word() const { return word_; }
  std::string to_string() const;

  friend auto operator<=>(const SignedPerm&, const SignedPerm&) = default;

 private:
  explicit SignedPerm(std::uint64_t word) : word_(word) {}
  std::uint64_t word_ = 0;
};

SignedPerm compose(const SignedPerm& a, const SignedPerm& b);
inline SignedPerm operator*(const SignedPerm& a, const SignedPerm& b) { return compose(a, b); }

/// The all-signs-negative identity (complex conjugation); central in W_g.
SignedPerm delta(int degree);
/// The element flipping only the sign of the given 1-based point.
SignedPerm flip(int degree, int point);

/// Multiset of (cycle length, product of signs along the cycle), packed and
/// sorted; a complete conjugacy invariant of single elements of W_g.
std::uint64_t signed_cycle_type(const SignedPerm& x);

/// A subgroup of W_g with its full, sorted element list.
class SignedGroup {
 public:
  SignedGroup() = default;

  int degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<SignedPerm>& generators() const { return generators_; }
  const std::vector<SignedPerm>& elements() const { return elements_; }
  bool contains(const SignedPerm& x) const;
  std::size_t index_of(const SignedPerm& x) const;

  /// Greedy generating set taken from the sorted element list; depends only
  /// on the element set.
  std::vector<SignedPerm> canonical_generators() const;
  /// Sorted multiset of element cycle types; invariant under conjugation.
  std::vector<std::uint64_t> conjugacy_invariant() const;

  friend bool operator==(const SignedGroup& a, const SignedGroup& b) {
    return a.degree_ == b.degree_ && a.elements_ == b.elements_;
  }

 private:
  friend SignedGroup closure(std::span<const SignedPerm>, int);
  friend SignedGroup subgroup_from_elements(int, std::vector<SignedPerm>);
  int degree_ = 0;
  std::vector<SignedPerm> generators_;
  std::vector<SignedPerm> elements_;
};

/// Subgroup generated by gens; degree must not exceed kMaxDegree.
SignedGroup closure(std::span<const SignedPerm> gens, int degree);
/// Wraps an element list already known to be closed.
SignedGroup subgroup_from_elements(int degree, std::vector<SignedPerm> elements);

SignedGroup weyl_group(int degree);
bool is_transitive(const SignedGroup& group);
/// Elements fixing point 1 with sign +1.
SignedGroup stabilizer_of_one_positive(const SignedGroup& group);
/// Whether w * a * w^-1 = b for some w in W_g (exact backtracking search).
bool conjugate_in_wg(const SignedGroup& a, const SignedGroup& b);

std::vector<std::string> serialize_generators(const std::vector<SignedPerm>& gens);

}  // namespace cmtorus::sgnperm
