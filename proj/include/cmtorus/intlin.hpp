#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms, lattices,
// saturation and quotient-group structure. Everything here is over Z with
// GMP integers; there is no floating point in this module.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmtorus::intlin {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntlinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public IntlinError {
 public:
  using IntlinError::IntlinError;
};

class NotASublattice : public IntlinError {
 public:
  using IntlinError::IntlinError;
};

/// Dense row-major integer matrix. A matrix with zero rows still carries a
/// column count, so it can stand for the zero sublattice of Z^cols.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(std::span<const Integer> entries, std::size_t rows,
                            std::size_t cols);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Integer> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Integer> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  IntVector row_vector(std::size_t r) const;

  void append_row(std::span<const Integer> v);
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t r);

  IntMatrix transposed() const;
  bool is_zero() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
/// Row vector times matrix.
IntVector operator*(std::span<const Integer> v, const IntMatrix& m);
/// Matrix times column vector.
IntVector apply(const IntMatrix& m, std::span<const Integer> v);

Integer determinant(const IntMatrix& m);

/// Structure Z^r x Z/d_1 x ... x Z/d_k with d_i >= 2 and d_i | d_{i+1}.
struct AbelianGroupStructure {
  std::vector<Integer> invariant_factors;
  std::size_t free_rank = 0;

  bool is_trivial() const { return invariant_factors.empty() && free_rank == 0; }
  bool is_torsion_free() const { return invariant_factors.empty(); }
  /// Order of the torsion subgroup.
  Integer torsion_order() const;
  std::string to_string() const;

  friend bool operator==(const AbelianGroupStructure&,
                         const AbelianGroupStructure&) = default;
};

/// Row-style Hermite normal form of the row span, zero rows removed. Pivots
/// are positive and entries above a pivot lie in [0, pivot).
IntMatrix hnf(const IntMatrix& m);

struct HnfResult {
  IntMatrix form;       // rank x cols
  IntMatrix transform;  // rows x rows, unimodular; transform * m = [form; 0]
  std::size_t rank = 0;
};

HnfResult hnf_with_transform(const IntMatrix& m);

/// Basis (in Hermite form) of {x : x * m = 0}; always a saturated lattice.
IntMatrix left_kernel(const IntMatrix& m);

struct SmithResult {
  AbelianGroupStructure cokernel;  // of Z^cols / rowspan(m)
  IntMatrix diagonal;              // p * m * q
  IntMatrix p;                     // rows x rows, unimodular
  IntMatrix q;                     // cols x cols, unimodular
  std::size_t rank = 0;
};

SmithResult snf(const IntMatrix& m);

/// A sublattice of Z^n held by its Hermite basis, so equality is entrywise.
class Lattice {
 public:
  Lattice() = default;
  static Lattice span(const IntMatrix& generators);
  static Lattice span(const std::vector<IntVector>& generators, std::size_t ambient_rank);
  static Lattice full(std::size_t ambient_rank);
  static Lattice zero(std::size_t ambient_rank);

  std::size_t ambient_rank() const { return ambient_rank_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  /// Coordinates of v in the Hermite basis, or nullopt when v is not in the
  /// lattice.
  std::optional<IntVector> coordinates(std::span<const Integer> v) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::size_t ambient_rank_ = 0;
  IntMatrix basis_;
};

bool member(const Lattice& l, std::span<const Integer> v);
bool is_primitive(const Lattice& l);
/// (l tensor Q) intersected with Z^n.
Lattice saturation(const Lattice& l);
bool contains(const Lattice& outer, const Lattice& inner);

/// Maps vectors of an ambient lattice to their class in ambient/sub, written
/// in invariant-factor coordinates: torsion coordinates first (reduced into
/// [0, d_i)), then free coordinates.
class QuotientMap {
 public:
  QuotientMap() = default;
  QuotientMap(Lattice ambient, IntMatrix q, std::vector<Integer> diagonal,
              std::size_t rank);

  const AbelianGroupStructure& structure() const { return structure_; }
  IntVector image(std::span<const Integer> v) const;
  /// Order of the class of v; 0 means infinite order.
  Integer order(std::span<const Integer> v) const;
  bool is_zero(std::span<const Integer> v) const;

 private:
  Lattice ambient_;
  IntMatrix q_;
  std::vector<Integer> diagonal_;
  std::size_t rank_ = 0;
  std::vector<std::size_t> torsion_columns_;
  AbelianGroupStructure structure_;
};

struct Quotient {
  AbelianGroupStructure structure;
  QuotientMap map;
};

/// Structure of ambient/sub together with the class map. Throws
/// NotASublattice when sub is not contained in ambient.
Quotient quotient_with_images(const Lattice& ambient, const Lattice& sub);

IntVector to_int_vector(std::initializer_list<long> values);
std::string to_string(std::span<const Integer> v);

}  // namespace cmtorus::intlin
