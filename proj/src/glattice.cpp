#include "cmtorus/glattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>

namespace cmtorus::glattice {

using intlin::Integer;

void FiniteGroup::finish() {
  const std::size_t n = table_.size();
  inverse_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] == 0) {
        inverse_[a] = b;
        break;
      }
  for (std::size_t a = 0; a < n; ++a)
    if (inverse_[a] == n) throw GlatticeError("multiplication table has no inverse for an element");
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<std::size_t>> table,
                                    std::vector<std::size_t> generators) {
  const std::size_t n = table.size();
  for (const auto& row : table)
    if (row.size() != n) throw GlatticeError("multiplication table is not square");
  for (std::size_t a = 0; a < n; ++a)
    if (table[0][a] != a || table[a][0] != a) throw GlatticeError("element 0 must be the identity");
  FiniteGroup g;
  g.table_ = std::move(table);
  g.generators_ = std::move(generators);
  g.finish();
  return g;
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<Permutation>& generators, int degree) {
  Permutation id(degree);
  std::iota(id.begin(), id.end(), 0);
  auto compose = [degree](const Permutation& a, const Permutation& b) {
    Permutation c(degree);
    for (int i = 0; i < degree; ++i) c[i] = a[b[i]];
    return c;
  };
  for (const auto& s : generators)
    if (static_cast<int>(s.size()) != degree) throw GlatticeError("generator degree mismatch");
  std::vector<Permutation> elements{id};
  std::set<Permutation> seen{id};
  for (std::size_t k = 0; k < elements.size(); ++k)
    for (const auto& s : generators) {
      Permutation y = compose(elements[k], s);
      if (seen.insert(y).second) elements.push_back(std::move(y));
    }
  std::sort(elements.begin(), elements.end());
  std::map<Permutation, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
  const std::size_t n = elements.size();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));
  std::vector<std::size_t> gens;
  for (const auto& s : generators) {
    std::size_t i = index.at(s);
    if (i != 0 && std::find(gens.begin(), gens.end(), i) == gens.end()) gens.push_back(i);
  }
  FiniteGroup g = from_table(std::move(table), std::move(gens));
  g.permutations_ = std::move(elements);
  g.degree_ = degree;
  return g;
}

FiniteGroup FiniteGroup::from_signed(const sgnperm::SignedGroup& group) {
  const auto& el = group.elements();
  const std::size_t n = el.size();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = group.index_of(el[a] * el[b]);
  std::vector<std::size_t> gens;
  auto source = group.generators().empty() ? group.canonical_generators() : group.generators();
  for (const auto& s : source) {
    std::size_t i = group.index_of(s);
    if (i != 0 && std::find(gens.begin(), gens.end(), i) == gens.end()) gens.push_back(i);
  }
  return from_table(std::move(table), std::move(gens));
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw GlatticeError("cyclic group of order 0");
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  std::vector<std::size_t> gens;
  if (n > 1) gens.push_back(1);
  return from_table(std::move(table), std::move(gens));
}

FiniteGroup FiniteGroup::symmetric(int degree) {
  std::vector<Permutation> gens;
  if (degree >= 2) {
    Permutation t(degree), c(degree);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[0], t[1]);
    for (int i = 0; i < degree; ++i) c[i] = (i + 1) % degree;
    gens = {t, c};
  }
  return from_permutations(gens, degree);
}

std::size_t FiniteGroup::index_of(const Permutation& p) const {
  auto it = std::lower_bound(permutations_.begin(), permutations_.end(), p);
  if (it == permutations_.end() || *it != p) throw GlatticeError("permutation not in group");
  return static_cast<std::size_t>(it - permutations_.begin());
}

GLattice::GLattice(FiniteGroup group, std::vector<IntMatrix> action)
    : group_(std::move(group)), action_(std::move(action)) {
  const std::size_t n = group_.order();
  if (action_.size() != n) throw NotAHomomorphism("one action matrix per group element is required");
  rank_ = n == 0 ? 0 : action_[0].rows();
  for (const auto& m : action_)
    if (m.rows() != rank_ || m.cols() != rank_) throw NotAHomomorphism("action matrices must be d x d");
  if (action_[group_.identity()] != IntMatrix::identity(rank_))
    throw NotAHomomorphism("identity must act as the identity matrix");
  // Multiplicativity against a generating set extends to all products by
  // induction along the Cayley graph; without one, check every pair. A
  // homomorphism lands in GL_d(Z) since action(g) * action(g^-1) = I.
  const auto& gens = group_.generators();
  std::vector<bool> reached(n, false);
  reached[0] = true;
  std::vector<std::size_t> queue{0};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (std::size_t s : gens) {
      const std::size_t f = group_.multiply(queue[k], s);
      if (!reached[f]) {
        reached[f] = true;
        queue.push_back(f);
      }
    }
  const bool generated = queue.size() == n;
  for (std::size_t a = 0; a < n; ++a) {
    if (generated) {
      for (std::size_t s : gens)
        if (action_[a] * action_[s] != action_[group_.multiply(a, s)])
          throw NotAHomomorphism("action is not multiplicative");
    } else {
      for (std::size_t b = 0; b < n; ++b)
        if (action_[a] * action_[b] != action_[group_.multiply(a, b)])
          throw NotAHomomorphism("action is not multiplicative");
    }
  }
}

GLattice GLattice::from_generator_images(FiniteGroup group, const std::vector<IntMatrix>& images) {
  const auto& gens = group.generators();
  if (images.size() != gens.size()) throw NotAHomomorphism("one image per generator is required");
  const std::size_t n = group.order();
  const std::size_t d = images.empty() ? 0 : images[0].rows();
  std::vector<IntMatrix> action(n);
  std::vector<bool> done(n, false);
  action[0] = IntMatrix::identity(d);
  done[0] = true;
  std::vector<std::size_t> queue{0};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const std::size_t e = queue[k];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::size_t f = group.multiply(e, gens[i]);
      if (done[f]) continue;
      action[f] = action[e] * images[i];
      done[f] = true;
      queue.push_back(f);
    }
  }
  if (queue.size() != n) throw NotAHomomorphism("generators do not generate the group");
  return GLattice(std::move(group), std::move(action));
}

GLattice GLattice::trivial(FiniteGroup group, std::size_t rank) {
  std::vector<IntMatrix> action(group.order(), IntMatrix::identity(rank));
  return GLattice(std::move(group), std::move(action));
}

GLattice GLattice::regular(FiniteGroup group) {
  const std::size_t n = group.order();
  std::vector<IntMatrix> action;
  action.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    IntMatrix m(n, n);
    for (std::size_t h = 0; h < n; ++h) m(group.multiply(g, h), h) = 1;
    action.push_back(std::move(m));
  }
  return GLattice(std::move(group), std::move(action));
}

GLattice GLattice::signed_permutation(const sgnperm::SignedGroup& group) {
  const int g = group.degree();
  std::vector<IntMatrix> action;
  for (const auto& x : group.elements()) {
    IntMatrix m(g, g);
    for (int i = 0; i < g; ++i) m(x.at(i), i) = x.negative_at(i) ? -1 : 1;
    action.push_back(std::move(m));
  }
  return GLattice(FiniteGroup::from_signed(group), std::move(action));
}

GLattice GLattice::permutation(const FiniteGroup& group) {
  if (!group.is_permutation_group()) throw GlatticeError("not a permutation group");
  const int d = group.degree();
  std::vector<IntMatrix> action;
  for (std::size_t e = 0; e < group.order(); ++e) {
    IntMatrix m(d, d);
    const auto& p = group.permutation(e);
    for (int i = 0; i < d; ++i) m(p[i], i) = 1;
    action.push_back(std::move(m));
  }
  return GLattice(group, std::move(action));
}

RationalMatrix invariant_gram(const GLattice& lattice) {
  const std::size_t d = lattice.rank();
  const std::size_t n = lattice.group().order();
  RationalMatrix q(d, std::vector<Rational>(d));
  for (std::size_t e = 0; e < n; ++e) {
    const IntMatrix& a = lattice.action(e);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Integer s = 0;
        for (std::size_t k = 0; k < d; ++k) s += a(k, i) * a(k, j);
        q[i][j] += Rational(s);
      }
  }
  for (auto& row : q)
    for (auto& x : row) {
      x /= static_cast<unsigned long>(n);
      x.canonicalize();
    }
  return q;
}

Rational quadratic_form(const RationalMatrix& gram, const IntVector& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      s += gram[i][j] * Rational(v[i] * v[j]);
    }
  }
  return s;
}

namespace {

constexpr std::size_t kMaxEnumerationRank = 8;

// All nonzero v with v^T Q v <= bound, enumerated exactly from the
// decomposition q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2.
std::vector<IntVector> short_vectors(const RationalMatrix& gram, const Rational& bound) {
  const std::size_t n = gram.size();
  if (n > kMaxEnumerationRank)
    throw RankTooLarge("short vector enumeration is limited to rank 8");
  RationalMatrix a = gram;
  std::vector<Rational> diag(n);
  RationalMatrix mu(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = a[i][i];
    if (diag[i] <= 0) throw GlatticeError("Gram matrix is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) mu[i][j] = a[i][j] / diag[i];
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) a[j][k] -= a[i][j] * a[i][k] / diag[i];
  }
  std::vector<IntVector> out;
  IntVector x(n);
  std::function<void(std::size_t, const Rational&)> recurse = [&](std::size_t level,
                                                                   const Rational& budget) {
    const std::size_t i = level - 1;
    Rational center = 0;
    for (std::size_t j = i + 1; j < n; ++j) center -= mu[i][j] * Rational(x[j]);
    const double c = center.get_d();
    const double radius = std::sqrt(std::max(0.0, mpq_class(budget / diag[i]).get_d()));
    const long lo = static_cast<long>(std::floor(c - radius)) - 1;
    const long hi = static_cast<long>(std::ceil(c + radius)) + 1;
    for (long value = lo; value <= hi; ++value) {
      Rational offset = Rational(value) - center;
      Rational used = diag[i] * offset * offset;
      if (used > budget) continue;
      x[i] = value;
      if (i == 0) {
        bool nonzero = std::any_of(x.begin(), x.end(), [](const Integer& t) { return t != 0; });
        if (nonzero) out.push_back(x);
      } else {
        recurse(i, budget - used);
      }
    }
    x[i] = 0;
  };
  if (n > 0) recurse(n, bound);
  return out;
}

}  // namespace

Rational minimum_norm(const RationalMatrix& gram) {
  if (gram.empty()) throw GlatticeError("minimum of a rank 0 lattice");
  Rational bound = gram[0][0];
  for (std::size_t i = 1; i < gram.size(); ++i) bound = std::min(bound, gram[i][i]);
  Rational best = bound;
  for (const auto& v : short_vectors(gram, bound)) best = std::min(best, quadratic_form(gram, v));
  return best;
}

std::set<IntVector> minimal_vectors(const RationalMatrix& gram) {
  const Rational m = minimum_norm(gram);
  std::set<IntVector> out;
  for (auto& v : short_vectors(gram, m))
    if (quadratic_form(gram, v) == m) out.insert(std::move(v));
  return out;
}

bool is_faithful(const GLattice& lattice) {
  const IntMatrix id = IntMatrix::identity(lattice.rank());
  for (std::size_t e = 0; e < lattice.group().order(); ++e)
    if (e != lattice.group().identity() && lattice.action(e) == id) return false;
  return true;
}

namespace {

long small_entry(const Integer& x) {
  if (!x.fits_slong_p()) throw GlatticeError("action matrix entry too large for cochain assembly");
  return x.get_si();
}

std::size_t power(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Calls emit(row, col, value) for every (possibly repeated) contribution to
// the coboundary d^n; repeated positions must be summed.
template <typename Emit>
void for_each_coboundary_term(const GLattice& lattice, int n, Emit&& emit) {
  const FiniteGroup& grp = lattice.group();
  const std::size_t order = grp.order();
  const std::size_t d = lattice.rank();
  std::vector<std::vector<long>> act(order, std::vector<long>(d * d));
  for (std::size_t g = 0; g < order; ++g)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) act[g][k * d + l] = small_entry(lattice.action(g)(k, l));

  if (n == 0) {
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t col = g * d + k;
        for (std::size_t l = 0; l < d; ++l) emit(l, col, act[g][k * d + l]);
        emit(k, col, -1);
      }
  } else if (n == 1) {
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t h = 0; h < order; ++h) {
        const std::size_t gh = grp.multiply(g, h);
        for (std::size_t k = 0; k < d; ++k) {
          const std::size_t col = (g * order + h) * d + k;
          for (std::size_t l = 0; l < d; ++l) emit(h * d + l, col, act[g][k * d + l]);
          emit(gh * d + k, col, -1);
          emit(g * d + k, col, 1);
        }
      }
  } else if (n == 2) {
    for (std::size_t g = 0; g < order; ++g)
      for (std::size_t h = 0; h < order; ++h) {
        const std::size_t gh = grp.multiply(g, h);
        for (std::size_t x = 0; x < order; ++x) {
          const std::size_t hx = grp.multiply(h, x);
          for (std::size_t k = 0; k < d; ++k) {
            const std::size_t col = ((g * order + h) * order + x) * d + k;
            for (std::size_t l = 0; l < d; ++l) emit((h * order + x) * d + l, col, act[g][k * d + l]);
            emit((gh * order + x) * d + k, col, -1);
            emit((g * order + hx) * d + k, col, 1);
            emit((g * order + h) * d + k, col, -1);
          }
        }
      }
  } else {
    throw GlatticeError("coboundaries are implemented for n = 0, 1, 2");
  }
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Rank of d^n over F_p, rows reduced one at a time against an echelon basis.
std::size_t coboundary_rank_mod_p(const GLattice& lattice, int n, std::uint64_t p) {
  const std::size_t order = lattice.group().order();
  const std::size_t d = lattice.rank();
  const std::size_t rows = d * power(order, n);
  const std::size_t cols = d * power(order, n + 1);
  std::vector<std::vector<std::uint64_t>> dense(rows, std::vector<std::uint64_t>(cols, 0));
  for_each_coboundary_term(lattice, n, [&](std::size_t r, std::size_t c, long v) {
    const long m = v % static_cast<long>(p);
    dense[r][c] = (dense[r][c] + static_cast<std::uint64_t>(m < 0 ? m + static_cast<long>(p) : m)) % p;
  });
  std::vector<std::vector<std::uint64_t>> basis;  // each row normalised, leading 1
  std::vector<std::size_t> pivots;
  for (auto& row : dense) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::uint64_t f = row[pivots[b]];
      if (f == 0) continue;
      const auto& br = basis[b];
      for (std::size_t c = pivots[b]; c < cols; ++c)
        if (br[c]) row[c] = (row[c] + (p - f) * br[c]) % p;
    }
    std::size_t lead = 0;
    while (lead < cols && row[lead] == 0) ++lead;
    if (lead == cols) continue;
    const std::uint64_t inv = mod_pow(row[lead], p - 2, p);
    for (std::size_t c = lead; c < cols; ++c) row[c] = row[c] * inv % p;
    basis.push_back(std::move(row));
    pivots.push_back(lead);
  }
  return basis.size();
}

bool divides_any(std::uint64_t p, const std::vector<Integer>& values, std::size_t order) {
  if (order % p == 0) return true;
  for (const auto& v : values)
    if (mpz_divisible_ui_p(v.get_mpz_t(), p)) return true;
  return false;
}

}  // namespace

IntMatrix coboundary_matrix(const GLattice& lattice, int n) {
  const std::size_t order = lattice.group().order();
  const std::size_t d = lattice.rank();
  IntMatrix m(d * power(order, n), d * power(order, n + 1));
  for_each_coboundary_term(lattice, n, [&](std::size_t r, std::size_t c, long v) { m(r, c) += v; });
  return m;
}

intlin::AbelianGroupStructure cohomology(const GLattice& lattice, int degree) {
  const std::size_t order = lattice.group().order();
  if (degree != 1 && degree != 2) throw GlatticeError("cohomology is implemented in degrees 1 and 2");
  if (degree == 1 && order > 48) throw GroupTooLarge("H^1 requires |G| <= 48");
  if (degree == 2 && order > 24) throw GroupTooLarge("H^2 requires |G| <= 24");
  const std::size_t d = lattice.rank();
  const std::size_t cochains = d * power(order, degree);

  // Torsion of ker d^n / im d^(n-1) equals the torsion of C^n / im d^(n-1),
  // because C^n / ker d^n embeds in the free module C^(n+1).
  intlin::SmithResult incoming = intlin::snf(coboundary_matrix(lattice, degree - 1));
  intlin::AbelianGroupStructure result;
  result.invariant_factors = incoming.cokernel.invariant_factors;

  // rank_p(d^n) <= rank_Q(d^n) <= |C^n| - rank(d^(n-1)); equality of the
  // outer terms pins the rational rank exactly.
  const std::size_t upper = cochains - incoming.rank;
  std::size_t outgoing_rank = 0;
  bool pinned = false;
  for (std::uint64_t p : {2147483647ULL, 2147483629ULL, 2147483587ULL}) {
    if (divides_any(p, result.invariant_factors, order)) continue;
    if (coboundary_rank_mod_p(lattice, degree, p) == upper) {
      outgoing_rank = upper;
      pinned = true;
      break;
    }
  }
  if (!pinned) outgoing_rank = intlin::hnf(coboundary_matrix(lattice, degree)).rows();
  result.free_rank = cochains - outgoing_rank - incoming.rank;
  return result;
}

namespace {

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = Rational(m(i, j));
  return out;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RationalMatrix c(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

RationalMatrix transpose(const RationalMatrix& a) {
  if (a.empty()) return {};
  RationalMatrix t(a[0].size(), std::vector<Rational>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

RationalMatrix invert(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw GlatticeError("singular matrix in form re-weighting");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Rational f = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= f;
      inv[c][j] /= f;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational g = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= g * a[c][j];
        inv[r][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace

RepresentationFingerprint canonicalize_representation(const GLattice& lattice) {
  constexpr std::size_t kMaxRounds = 16;
  const std::size_t d = lattice.rank();
  RepresentationFingerprint fp;
  fp.rank = d;
  fp.group_order = lattice.group().order();
  if (d == 0) {
    fp.spans = true;
    return fp;
  }
  RationalMatrix q = invariant_gram(lattice);
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    const Rational m = minimum_norm(q);
    const auto mins = minimal_vectors(q);
    const intlin::Lattice span =
        intlin::Lattice::span(std::vector<IntVector>(mins.begin(), mins.end()), d);
    if (span.rank() == d) {
      fp.spans = true;
      break;
    }
    // Gram of the q-orthogonal projection onto the complement of the span:
    // q2 = q - q B (B^T q B)^-1 B^T q, with B the span basis as columns.
    const RationalMatrix basis_cols = transpose(to_rational(span.basis()));
    const RationalMatrix qb = multiply(q, basis_cols);
    const RationalMatrix middle = invert(multiply(transpose(basis_cols), qb));
    const RationalMatrix correction = multiply(multiply(qb, middle), transpose(qb));
    RationalMatrix q2 = q;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) q2[i][j] -= correction[i][j];

    // Shrink the complement until a new vector reaches the minimum norm.
    bool moved = false;
    Rational t_star;
    for (unsigned k = 1; k <= kMaxRounds && !moved; ++k) {
      const Rational t(1, 1UL << k);
      const Rational weight = 1 - t;
      RationalMatrix qt = q;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) qt[i][j] -= weight * q2[i][j];
      for (const auto& v : short_vectors(qt, m)) {
        const Rational off = quadratic_form(q2, v);
        if (off == 0) continue;
        const Rational tv = (quadratic_form(q, v) - m) / off;
        if (!moved || tv < t_star) t_star = tv;
        moved = true;
      }
    }
    if (!moved) break;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) q[i][j] -= t_star * q2[i][j];
    ++fp.iterations;
  }
  const Rational m = minimum_norm(q);
  const auto mins = minimal_vectors(q);
  fp.minimal_count = mins.size();
  for (const auto& u : mins)
    for (const auto& v : mins) {
      Rational s = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += q[i][j] * Rational(u[i] * v[j]);
      fp.normalized_products.push_back(s / m);
    }
  std::sort(fp.normalized_products.begin(), fp.normalized_products.end());
  const intlin::Lattice span = intlin::Lattice::span(std::vector<IntVector>(mins.begin(), mins.end()), d);
  fp.span_quotient = intlin::quotient_with_images(intlin::Lattice::full(d), span).structure;
  if (span.rank() == d) fp.spans = true;
  return fp;
}

}  // namespace cmtorus::glattice
