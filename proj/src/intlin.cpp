#include "cmtorus/intlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace cmtorus::intlin {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::span<const Integer> entries, std::size_t rows,
                              std::size_t cols) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < entries.size() && i < rows && i < cols; ++i) {
    m(i, i) = entries[i];
  }
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  IntMatrix m(0, cols);
  for (const auto& r : rows) {
    IntVector v;
    for (long x : r) v.emplace_back(x);
    m.append_row(v);
  }
  return m;
}

IntVector IntMatrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return {s.begin(), s.end()};
}

void IntMatrix::append_row(std::span<const Integer> v) {
  if (v.size() != cols_) throw DimensionMismatch("append_row: wrong row length");
  data_.insert(data_.end(), v.begin(), v.end());
  ++rows_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    if ((*this)(src, c) != 0) (*this)(dst, c) += factor * (*this)(src, c);
  }
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    if ((*this)(r, src) != 0) (*this)(r, dst) += factor * (*this)(r, src);
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (auto& x : row(r)) x = -x;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += x * b(k, j);
    }
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix difference: shapes differ");
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix sum: shapes differ");
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

IntVector operator*(std::span<const Integer> v, const IntMatrix& m) {
  if (v.size() != m.rows()) throw DimensionMismatch("vector-matrix product: length mismatch");
  IntVector out(m.cols());
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[k] * m(k, j);
  }
  return out;
}

IntVector apply(const IntMatrix& m, std::span<const Integer> v) {
  if (v.size() != m.cols()) throw DimensionMismatch("matrix-vector product: length mismatch");
  IntVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && a(swap_with, k) == 0) ++swap_with;
      if (swap_with == n) return 0;
      a.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Integer AbelianGroupStructure::torsion_order() const {
  Integer order = 1;
  for (const auto& d : invariant_factors) order *= d;
  return order;
}

std::string AbelianGroupStructure::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream out;
  bool first = true;
  if (free_rank > 0) {
    out << "Z";
    if (free_rank > 1) out << "^" << free_rank;
    first = false;
  }
  for (const auto& d : invariant_factors) {
    if (!first) out << " + ";
    out << "Z/" << d.get_str();
    first = false;
  }
  return out.str();
}

namespace {

// Replace rows (a, b) by (s*a + t*b, -(b/g)*a + (a/g)*b) where g = s*x + t*y is
// the gcd of the pivot entries x, y. The 2x2 transform has determinant 1.
void gcd_combine_rows(IntMatrix& m, std::size_t a, std::size_t b, const Integer& x,
                      const Integer& y, IntMatrix* track) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  const Integer xg = x / g;
  const Integer yg = y / g;
  auto combine = [&](IntMatrix& mat) {
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      Integer ra = mat(a, c);
      Integer rb = mat(b, c);
      if (ra == 0 && rb == 0) continue;
      mat(a, c) = s * ra + t * rb;
      mat(b, c) = xg * rb - yg * ra;
    }
  };
  combine(m);
  if (track != nullptr) combine(*track);
}

HnfResult hnf_impl(const IntMatrix& m, bool want_transform) {
  IntMatrix h = m;
  IntMatrix u = want_transform ? IntMatrix::identity(m.rows()) : IntMatrix();
  IntMatrix* track = want_transform ? &u : nullptr;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        if (track) track->swap_rows(r, i);
        continue;
      }
      const Integer x = h(r, c);
      const Integer y = h(i, c);
      gcd_combine_rows(h, r, i, x, y, track);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      if (track) track->negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (h(i, c) == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      h.add_row_multiple(i, r, -q);
      if (track) track->add_row_multiple(i, r, -q);
    }
    ++r;
  }
  HnfResult result;
  result.rank = r;
  result.form = IntMatrix(0, h.cols());
  for (std::size_t i = 0; i < r; ++i) result.form.append_row(h.row(i));
  result.transform = std::move(u);
  return result;
}

}  // namespace

IntMatrix hnf(const IntMatrix& m) { return hnf_impl(m, false).form; }

HnfResult hnf_with_transform(const IntMatrix& m) { return hnf_impl(m, true); }

IntMatrix left_kernel(const IntMatrix& m) {
  auto res = hnf_with_transform(m);
  IntMatrix kernel(0, m.rows());
  for (std::size_t i = res.rank; i < m.rows(); ++i) kernel.append_row(res.transform.row(i));
  return hnf(kernel);
}

namespace {

struct SmithWork {
  IntMatrix s, p, q;

  void row_swap(std::size_t a, std::size_t b) {
    s.swap_rows(a, b);
    p.swap_rows(a, b);
  }
  void col_swap(std::size_t a, std::size_t b) {
    s.swap_cols(a, b);
    q.swap_cols(a, b);
  }
  void row_add(std::size_t dst, std::size_t src, const Integer& f) {
    s.add_row_multiple(dst, src, f);
    p.add_row_multiple(dst, src, f);
  }
  void col_add(std::size_t dst, std::size_t src, const Integer& f) {
    s.add_col_multiple(dst, src, f);
    q.add_col_multiple(dst, src, f);
  }
};

// Smallest nonzero |entry| in the submatrix [t.., t..]; ties broken by row then
// column.
bool find_pivot(const IntMatrix& s, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Integer best;
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j) {
      const Integer& x = s(i, j);
      if (x == 0) continue;
      if (!found || mpz_cmpabs(x.get_mpz_t(), best.get_mpz_t()) < 0) {
        best = abs(x);
        pi = i;
        pj = j;
        found = true;
      }
    }
  return found;
}

}  // namespace

SmithResult snf(const IntMatrix& m) {
  SmithWork w{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  const std::size_t limit = std::min(m.rows(), m.cols());
  std::size_t t = 0;
  for (; t < limit; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!find_pivot(w.s, t, pi, pj)) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < w.s.rows(); ++i) {
        if (w.s(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.s(i, t).get_mpz_t(), w.s(t, t).get_mpz_t());
        w.row_add(i, t, -q);
        if (w.s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < w.s.cols(); ++j) {
        if (w.s(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), w.s(t, j).get_mpz_t(), w.s(t, t).get_mpz_t());
        w.col_add(j, t, -q);
        if (w.s(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Bring the smallest remainder in row t / column t to the pivot.
        std::size_t bi = t, bj = t;
        Integer best = abs(w.s(t, t));
        for (std::size_t i = t + 1; i < w.s.rows(); ++i)
          if (w.s(i, t) != 0 && mpz_cmpabs(w.s(i, t).get_mpz_t(), best.get_mpz_t()) < 0) {
            best = abs(w.s(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < w.s.cols(); ++j)
          if (w.s(t, j) != 0 && mpz_cmpabs(w.s(t, j).get_mpz_t(), best.get_mpz_t()) < 0) {
            best = abs(w.s(t, j));
            bi = t;
            bj = j;
          }
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        continue;
      }
      // Divisibility: every remaining entry must be a multiple of the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < w.s.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < w.s.cols(); ++j) {
          if (w.s(i, j) != 0 && !mpz_divisible_p(w.s(i, j).get_mpz_t(), w.s(t, t).get_mpz_t())) {
            w.row_add(t, i, 1);
            divisible = false;
            break;
          }
        }
      if (divisible) break;
    }
    if (w.s(t, t) < 0) {
      w.s.negate_row(t);
      w.p.negate_row(t);
    }
  }
  SmithResult res;
  res.rank = t;
  for (std::size_t i = 0; i < t; ++i)
    if (w.s(i, i) > 1) res.cokernel.invariant_factors.push_back(w.s(i, i));
  res.cokernel.free_rank = m.cols() - t;
  res.diagonal = std::move(w.s);
  res.p = std::move(w.p);
  res.q = std::move(w.q);
  return res;
}

Lattice Lattice::span(const IntMatrix& generators) {
  Lattice l;
  l.ambient_rank_ = generators.cols();
  l.basis_ = hnf(generators);
  return l;
}

Lattice Lattice::span(const std::vector<IntVector>& generators, std::size_t ambient_rank) {
  return span(IntMatrix::from_rows(generators, ambient_rank));
}

Lattice Lattice::full(std::size_t ambient_rank) {
  return span(IntMatrix::identity(ambient_rank));
}

Lattice Lattice::zero(std::size_t ambient_rank) { return span(IntMatrix(0, ambient_rank)); }

std::optional<IntVector> Lattice::coordinates(std::span<const Integer> v) const {
  if (v.size() != ambient_rank_) throw DimensionMismatch("lattice membership: wrong vector length");
  IntVector rest(v.begin(), v.end());
  IntVector coords(basis_.rows());
  std::size_t col = 0;
  for (std::size_t k = 0; k < basis_.rows(); ++k) {
    while (basis_(k, col) == 0) {
      if (rest[col] != 0) return std::nullopt;
      ++col;
    }
    const Integer& pivot = basis_(k, col);
    if (!mpz_divisible_p(rest[col].get_mpz_t(), pivot.get_mpz_t())) return std::nullopt;
    coords[k] = rest[col] / pivot;
    if (coords[k] != 0)
      for (std::size_t c = col; c < ambient_rank_; ++c) rest[c] -= coords[k] * basis_(k, c);
    ++col;
  }
  for (std::size_t c = col; c < ambient_rank_; ++c)
    if (rest[c] != 0) return std::nullopt;
  return coords;
}

bool member(const Lattice& l, std::span<const Integer> v) { return l.coordinates(v).has_value(); }

bool is_primitive(const Lattice& l) { return snf(l.basis()).cokernel.is_torsion_free(); }

Lattice saturation(const Lattice& l) {
  const std::size_t n = l.ambient_rank();
  if (l.rank() == 0) return Lattice::zero(n);
  // Right kernel of the basis, then everything orthogonal to it.
  IntMatrix right_kernel = left_kernel(l.basis().transposed());
  if (right_kernel.rows() == 0) return Lattice::full(n);
  return Lattice::span(left_kernel(right_kernel.transposed()));
}

bool contains(const Lattice& outer, const Lattice& inner) {
  if (outer.ambient_rank() != inner.ambient_rank()) return false;
  for (std::size_t i = 0; i < inner.rank(); ++i)
    if (!member(outer, inner.basis().row(i))) return false;
  return true;
}

QuotientMap::QuotientMap(Lattice ambient, IntMatrix q, std::vector<Integer> diagonal,
                         std::size_t rank)
    : ambient_(std::move(ambient)), q_(std::move(q)), diagonal_(std::move(diagonal)), rank_(rank) {
  for (std::size_t i = 0; i < rank_; ++i) {
    if (diagonal_[i] > 1) {
      torsion_columns_.push_back(i);
      structure_.invariant_factors.push_back(diagonal_[i]);
    }
  }
  structure_.free_rank = ambient_.rank() - rank_;
}

IntVector QuotientMap::image(std::span<const Integer> v) const {
  auto coords = ambient_.coordinates(v);
  if (!coords) throw NotASublattice("quotient image: vector is not in the ambient lattice");
  IntVector y = std::span<const Integer>(*coords) * q_;
  IntVector out;
  out.reserve(torsion_columns_.size() + structure_.free_rank);
  for (std::size_t c : torsion_columns_) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), y[c].get_mpz_t(), diagonal_[c].get_mpz_t());
    out.push_back(r);
  }
  for (std::size_t c = rank_; c < y.size(); ++c) out.push_back(y[c]);
  return out;
}

Integer QuotientMap::order(std::span<const Integer> v) const {
  IntVector img = image(v);
  const std::size_t t = torsion_columns_.size();
  for (std::size_t i = t; i < img.size(); ++i)
    if (img[i] != 0) return 0;
  Integer order = 1;
  for (std::size_t i = 0; i < t; ++i) {
    const Integer& d = structure_.invariant_factors[i];
    Integer g = gcd(img[i], d);
    order = lcm(order, d / g);
  }
  return order;
}

bool QuotientMap::is_zero(std::span<const Integer> v) const {
  IntVector img = image(v);
  return std::all_of(img.begin(), img.end(), [](const Integer& x) { return x == 0; });
}

Quotient quotient_with_images(const Lattice& ambient, const Lattice& sub) {
  if (ambient.ambient_rank() != sub.ambient_rank())
    throw DimensionMismatch("quotient: lattices live in different spaces");
  IntMatrix coords(0, ambient.rank());
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    auto c = ambient.coordinates(sub.basis().row(i));
    if (!c) throw NotASublattice("quotient: sub basis row " + std::to_string(i) +
                                 " is not in the ambient lattice");
    coords.append_row(*c);
  }
  SmithResult s = snf(coords);
  std::vector<Integer> diag(s.rank);
  for (std::size_t i = 0; i < s.rank; ++i) diag[i] = s.diagonal(i, i);
  QuotientMap map(ambient, std::move(s.q), std::move(diag), s.rank);
  Quotient out{map.structure(), std::move(map)};
  return out;
}

IntVector to_int_vector(std::initializer_list<long> values) {
  IntVector v;
  for (long x : values) v.emplace_back(x);
  return v;
}

std::string to_string(std::span<const Integer> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + "]";
}

}  // namespace cmtorus::intlin
