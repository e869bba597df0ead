#include "cmtorus/transfer.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace cmtorus::transfer {

using glattice::Permutation;
using nlohmann::ordered_json;

namespace {

int mod(long x, int p) {
  const long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inverse_mod(int a, int p) {
  // p is prime, so a^(p-2) inverts a.
  long result = 1, base = mod(a, p);
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<int>(result);
}

FpMatrix identity(std::size_t n) {
  FpMatrix m(n, FpVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

FpVector apply(const FpMatrix& m, const FpVector& v, int p) {
  FpVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    long s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<long>(m[i][j]) * v[j];
    out[i] = mod(s, p);
  }
  return out;
}

std::vector<std::size_t> pivots(const FpMatrix& rref) {
  std::vector<std::size_t> out;
  for (const auto& row : rref) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    out.push_back(c);
  }
  return out;
}

// Subtracts the echelon rows from v; returns the remainder and the
// coefficients used.
FpVector reduce(const FpMatrix& rref, const std::vector<std::size_t>& piv, FpVector v, int p,
                FpVector* coefficients = nullptr) {
  if (coefficients) coefficients->assign(rref.size(), 0);
  for (std::size_t r = 0; r < rref.size(); ++r) {
    const int c = v[piv[r]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod(v[j] - static_cast<long>(c) * rref[r][j], p);
    if (coefficients) (*coefficients)[r] = c;
  }
  return v;
}

bool is_zero(const FpVector& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

bool well_formed(const FpMatrix& m, std::size_t rows, std::size_t cols, int p) {
  if (m.size() != rows) return false;
  for (const auto& row : m) {
    if (row.size() != cols) return false;
    for (int x : row)
      if (x < 0 || x >= p) return false;
  }
  return true;
}

std::vector<std::size_t> generators_or_all(const FiniteGroup& g) {
  if (!g.generators().empty()) return g.generators();
  std::vector<std::size_t> all;
  for (std::size_t e = 1; e < g.order(); ++e) all.push_back(e);
  return all;
}

}  // namespace

FpMatrix multiply_mod(const FpMatrix& a, const FpMatrix& b, int p) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  FpMatrix out(n, FpVector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      long s = 0;
      for (std::size_t t = 0; t < k; ++t) s += static_cast<long>(a[i][t]) * b[t][j];
      out[i][j] = mod(s, p);
    }
  return out;
}

FpMatrix row_reduce(const FpMatrix& m, int p) {
  FpMatrix a = m;
  for (auto& row : a)
    for (auto& x : row) x = mod(x, p);
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t pr = r;
    while (pr < a.size() && a[pr][c] == 0) ++pr;
    if (pr == a.size()) continue;
    std::swap(a[r], a[pr]);
    const int inv = inverse_mod(a[r][c], p);
    for (auto& x : a[r]) x = mod(static_cast<long>(x) * inv, p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const int f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = mod(a[i][j] - static_cast<long>(f) * a[r][j], p);
    }
    ++r;
  }
  a.resize(r);
  return a;
}

int determinant_mod(const FpMatrix& m, int p) {
  const std::size_t n = m.size();
  FpMatrix a = m;
  long det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && mod(a[pr][c], p) == 0) ++pr;
    if (pr == n) return 0;
    if (pr != c) {
      std::swap(a[pr], a[c]);
      det = -det;
    }
    const int pivot = mod(a[c][c], p);
    det = mod(det * pivot, p);
    const int inv = inverse_mod(pivot, p);
    for (std::size_t i = c + 1; i < n; ++i) {
      const long f = static_cast<long>(mod(a[i][c], p)) * inv % p;
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) a[i][j] = mod(a[i][j] - f * a[c][j], p);
    }
  }
  return mod(det, p);
}

FpGModule::FpGModule(int p, std::size_t dim, FiniteGroup group, std::vector<FpMatrix> action)
    : p_(p), dim_(dim), group_(std::move(group)), action_(std::move(action)) {
  if (p_ < 2) throw NotAModule("modulus must be a prime");
  for (int d = 2; d * d <= p_; ++d)
    if (p_ % d == 0) throw NotAModule("modulus must be a prime");
  const std::size_t n = group_.order();
  if (action_.size() != n) throw NotAModule("one matrix per group element is required");
  for (const auto& a : action_)
    if (!well_formed(a, dim_, dim_, p_)) throw NotAModule("action matrices must be dim x dim over F_p");
  if (n > 0 && action_[0] != identity(dim_)) throw NotAModule("identity must act trivially");
  // Generator multiplicativity reaches every product when the generators
  // generate; otherwise every pair is checked.
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> queue;
  if (n > 0) {
    reached[0] = true;
    queue.push_back(0);
  }
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (std::size_t s : group_.generators()) {
      const std::size_t f = group_.multiply(queue[k], s);
      if (!reached[f]) {
        reached[f] = true;
        queue.push_back(f);
      }
    }
  std::vector<std::size_t> right = group_.generators();
  if (queue.size() != n) {
    right.clear();
    for (std::size_t b = 0; b < n; ++b) right.push_back(b);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b : right)
      if (multiply_mod(action_[a], action_[b], p_) != action_[group_.multiply(a, b)])
        throw NotAModule("action is not multiplicative");
}

FpGModule FpGModule::permutation(int p, const FiniteGroup& group) {
  if (!group.is_permutation_group()) throw NotAModule("permutation module needs a permutation group");
  const auto d = static_cast<std::size_t>(group.degree());
  std::vector<FpMatrix> action;
  for (std::size_t e = 0; e < group.order(); ++e) {
    FpMatrix m(d, FpVector(d, 0));
    const auto& perm = group.permutation(e);
    for (std::size_t i = 0; i < d; ++i) m[perm[i]][i] = 1;
    action.push_back(std::move(m));
  }
  return FpGModule(p, d, group, std::move(action));
}

FpGModule FpGModule::trivial(int p, const FiniteGroup& group, std::size_t dim) {
  return FpGModule(p, dim, group, std::vector<FpMatrix>(group.order(), identity(dim)));
}

FpGModule restrict_to(const FpGModule& m, const FpMatrix& basis) {
  const int p = m.prime();
  if (!well_formed(basis, basis.size(), m.dim(), p)) throw NotASubmodule("basis vectors have the wrong length");
  if (row_reduce(basis, p) != basis) throw NotASubmodule("basis is not in reduced echelon form");
  const auto piv = pivots(basis);
  const std::size_t k = basis.size();
  std::vector<FpMatrix> action;
  for (const auto& a : m.actions()) {
    FpMatrix r(k, FpVector(k, 0));
    for (std::size_t j = 0; j < k; ++j) {
      FpVector coeff;
      const auto rest = reduce(basis, piv, apply(a, basis[j], p), p, &coeff);
      if (!is_zero(rest)) throw NotASubmodule("subspace is not closed under the action");
      for (std::size_t i = 0; i < k; ++i) r[i][j] = coeff[i];
    }
    action.push_back(std::move(r));
  }
  return FpGModule(p, k, m.group(), std::move(action));
}

Submodule submodule(const FpGModule& m, const std::vector<FpVector>& generators) {
  const int p = m.prime();
  for (const auto& v : generators)
    if (v.size() != m.dim()) throw TransferError("generator has the wrong length");
  FpMatrix basis = row_reduce(generators, p);
  const auto gens = generators_or_all(m.group());
  for (bool grew = true; grew;) {
    grew = false;
    const auto piv = pivots(basis);
    for (std::size_t s : gens) {
      for (const auto& b : FpMatrix(basis)) {
        const auto v = reduce(basis, piv, apply(m.action(s), b, p), p);
        if (!is_zero(v)) {
          basis.push_back(v);
          basis = row_reduce(basis, p);
          grew = true;
          break;
        }
      }
      if (grew) break;
    }
  }
  Submodule out;
  out.module = restrict_to(m, basis);
  out.basis = std::move(basis);
  return out;
}

QuotientModule quotient(const FpGModule& m, const FpMatrix& basis) {
  restrict_to(m, basis);  // validates closure
  const int p = m.prime();
  const std::size_t d = m.dim();
  const auto piv = pivots(basis);
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < d; ++c)
    if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back(c);
  const std::size_t q = free.size();
  FpMatrix proj(q, FpVector(d, 0));
  for (std::size_t j = 0; j < d; ++j) {
    FpVector e(d, 0);
    e[j] = 1;
    const auto r = reduce(basis, piv, e, p);
    for (std::size_t i = 0; i < q; ++i) proj[i][j] = r[free[i]];
  }
  std::vector<FpMatrix> action;
  for (const auto& a : m.actions()) {
    FpMatrix r(q, FpVector(q, 0));
    for (std::size_t j = 0; j < q; ++j) {
      FpVector e(d, 0);
      e[free[j]] = 1;
      const auto image = apply(proj, apply(a, e, p), p);
      for (std::size_t i = 0; i < q; ++i) r[i][j] = image[i];
    }
    action.push_back(std::move(r));
  }
  return {FpGModule(p, q, m.group(), std::move(action)), std::move(proj)};
}

bool is_trivial(const FpGModule& m) {
  const auto id = identity(m.dim());
  for (std::size_t s : generators_or_all(m.group()))
    if (m.action(s) != id) return false;
  return true;
}

bool is_equivariant_isomorphism(const FpGModule& a, const FpGModule& b, const FpMatrix& t) {
  const int p = a.prime();
  if (b.prime() != p || a.dim() != b.dim() || a.group().order() != b.group().order()) return false;
  if (!well_formed(t, a.dim(), a.dim(), p)) return false;
  if (determinant_mod(t, p) == 0) return false;
  for (std::size_t s : generators_or_all(a.group()))
    if (multiply_mod(t, a.action(s), p) != multiply_mod(b.action(s), t, p)) return false;
  return true;
}

std::optional<FpMatrix> find_isomorphism(const FpGModule& a, const FpGModule& b) {
  const int p = a.prime();
  if (b.prime() != p || a.dim() != b.dim() || a.group().order() != b.group().order()) return std::nullopt;
  const std::size_t d = a.dim();
  if (is_equivariant_isomorphism(a, b, identity(d))) return identity(d);
  // Unknown t_ij sits at index i*d + j; each generator gives T A - B T = 0.
  FpMatrix system;
  for (std::size_t s : generators_or_all(a.group())) {
    const auto& as = a.action(s);
    const auto& bs = b.action(s);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        FpVector row(d * d, 0);
        for (std::size_t j = 0; j < d; ++j) {
          row[i * d + j] = mod(row[i * d + j] + as[j][k], p);
          row[j * d + k] = mod(row[j * d + k] - bs[i][j], p);
        }
        system.push_back(std::move(row));
      }
  }
  const FpMatrix rref = row_reduce(system, p);
  const auto piv = pivots(rref);
  std::vector<FpVector> kernel;
  for (std::size_t f = 0; f < d * d; ++f) {
    if (std::find(piv.begin(), piv.end(), f) != piv.end()) continue;
    FpVector v(d * d, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < rref.size(); ++r) v[piv[r]] = mod(-rref[r][f], p);
    kernel.push_back(std::move(v));
  }
  if (kernel.empty()) return std::nullopt;
  auto build = [&](const FpVector& coeff) {
    FpMatrix t(d, FpVector(d, 0));
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      if (coeff[k] == 0) continue;
      for (std::size_t x = 0; x < d * d; ++x)
        t[x / d][x % d] = mod(t[x / d][x % d] + static_cast<long>(coeff[k]) * kernel[k][x], p);
    }
    return t;
  };
  const std::size_t k = kernel.size();
  double space = 1;
  for (std::size_t i = 0; i < k; ++i) space *= p;
  if (space <= 65536) {
    FpVector coeff(k, 0);
    for (;;) {
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (++coeff[pos] < p) break;
        coeff[pos] = 0;
        if (pos == 0) return std::nullopt;
      }
      const auto t = build(coeff);
      if (determinant_mod(t, p) != 0) return t;
    }
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> dist(0, p - 1);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    FpVector coeff(k);
    for (auto& c : coeff) c = dist(rng);
    const auto t = build(coeff);
    if (determinant_mod(t, p) != 0) return t;
  }
  return std::nullopt;
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::SubmoduleWithTrivialQuotient: return "SubmoduleWithTrivialQuotient";
    case StepKind::TrivialSubmoduleQuotient: return "TrivialSubmoduleQuotient";
    case StepKind::Isomorphism: return "Isomorphism";
  }
  return "Isomorphism";
}

namespace {

std::optional<std::string> check_step(const ChainStep& step) {
  try {
    switch (step.kind) {
      case StepKind::SubmoduleWithTrivialQuotient: {
        if (restrict_to(step.source, step.subspace) != step.target)
          return "target is not the action restricted to the subspace";
        if (!is_trivial(quotient(step.source, step.subspace).module)) return "quotient is not trivial";
        return std::nullopt;
      }
      case StepKind::TrivialSubmoduleQuotient: {
        if (!is_trivial(restrict_to(step.source, step.subspace))) return "submodule is not trivial";
        if (quotient(step.source, step.subspace).module != step.target)
          return "target is not the quotient by the subspace";
        return std::nullopt;
      }
      case StepKind::Isomorphism:
        if (!is_equivariant_isomorphism(step.source, step.target, step.map))
          return "map is not an equivariant isomorphism";
        return std::nullopt;
    }
  } catch (const TransferError& e) {
    return std::string(e.what());
  }
  return "unknown step kind";
}

}  // namespace

ChainVerification verify_chain(const EquivalenceChain& chain) {
  ChainVerification out;
  const FpGModule* current = nullptr;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    const FpGModule& from = step.reversed ? step.target : step.source;
    const FpGModule& to = step.reversed ? step.source : step.target;
    if (current != nullptr && !(*current == from)) {
      out.failing_step = i;
      out.reason = "step does not start where the previous one ended";
      return out;
    }
    if (auto err = check_step(step)) {
      out.failing_step = i;
      out.reason = *err;
      return out;
    }
    current = &to;
  }
  out.ok = true;
  return out;
}

EquivalenceChain gerth_chain() {
  const auto s3 = FiniteGroup::symmetric(3);
  const auto m = FpGModule::permutation(3, s3);
  const auto n = submodule(m, {{1, 2, 0}, {0, 1, 2}});
  ChainStep step;
  step.kind = StepKind::SubmoduleWithTrivialQuotient;
  step.label = "M = F_3[S_3/S_2] contains N = <a1-a2, a2-a3> with M/N trivial";
  step.source = m;
  step.target = n.module;
  step.subspace = n.basis;
  return {"gerth", {step}};
}

std::vector<Permutation> least_order_eight_subgroup() {
  const auto s4 = FiniteGroup::symmetric(4);
  std::optional<std::vector<Permutation>> best;
  for (std::size_t a = 0; a < s4.order(); ++a)
    for (std::size_t b = a; b < s4.order(); ++b) {
      std::set<std::size_t> set{0};
      std::vector<std::size_t> queue{0};
      for (std::size_t k = 0; k < queue.size(); ++k)
        for (std::size_t s : {a, b}) {
          const std::size_t y = s4.multiply(queue[k], s);
          if (set.insert(y).second) queue.push_back(y);
        }
      if (set.size() != 8) continue;
      std::vector<Permutation> elements;
      for (std::size_t e : set) elements.push_back(s4.permutation(e));
      std::sort(elements.begin(), elements.end());
      if (!best || elements < *best) best = elements;
    }
  return *best;
}

EquivalenceChain quartic_chain() {
  const auto s4 = FiniteGroup::symmetric(4);
  const int p = 2;
  const auto m = FpGModule::permutation(p, s4);
  const auto m0 = submodule(m, {{1, 1, 1, 1}});
  const auto m1 = quotient(m, m0.basis);
  const auto m2 = submodule(m1.module, {apply(m1.projection, {1, 1, 0, 0}, p),
                                        apply(m1.projection, {1, 0, 1, 0}, p)});

  // N: the left action g . Dx = D x g^-1 on right cosets of D.
  const auto d4 = least_order_eight_subgroup();
  auto compose = [](const Permutation& x, const Permutation& y) {
    Permutation c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[y[i]];
    return c;
  };
  std::vector<std::vector<Permutation>> cosets;
  for (std::size_t e = 0; e < s4.order(); ++e) {
    std::vector<Permutation> coset;
    for (const auto& d : d4) coset.push_back(compose(d, s4.permutation(e)));
    std::sort(coset.begin(), coset.end());
    if (std::find(cosets.begin(), cosets.end(), coset) == cosets.end()) cosets.push_back(coset);
  }
  std::sort(cosets.begin(), cosets.end());
  auto coset_of = [&](const Permutation& x) {
    for (std::size_t c = 0; c < cosets.size(); ++c)
      if (std::binary_search(cosets[c].begin(), cosets[c].end(), x)) return c;
    throw TransferError("element outside every coset");
  };
  std::vector<FpMatrix> action;
  for (std::size_t e = 0; e < s4.order(); ++e) {
    const auto& g_inv = s4.permutation(s4.inverse(e));
    FpMatrix a(cosets.size(), FpVector(cosets.size(), 0));
    for (std::size_t c = 0; c < cosets.size(); ++c) a[coset_of(compose(cosets[c][0], g_inv))][c] = 1;
    action.push_back(std::move(a));
  }
  const FpGModule n(p, cosets.size(), s4, std::move(action));
  const auto n0 = submodule(n, {{1, 1, 1}});
  const auto nq = quotient(n, n0.basis);
  const auto t = find_isomorphism(m2.module, nq.module);
  if (!t) throw TransferError("no isomorphism between M2 and N/N0");

  EquivalenceChain chain{"quartic", {}};
  ChainStep s1;
  s1.kind = StepKind::TrivialSubmoduleQuotient;
  s1.label = "M = F_2^4 to M1 = M/M0, M0 = <a1+a2+a3+a4>";
  s1.source = m;
  s1.target = m1.module;
  s1.subspace = m0.basis;
  ChainStep s2;
  s2.kind = StepKind::SubmoduleWithTrivialQuotient;
  s2.label = "M1 contains M2 = <a1+a2, a1+a3> with M1/M2 trivial";
  s2.source = m1.module;
  s2.target = m2.module;
  s2.subspace = m2.basis;
  ChainStep s3;
  s3.kind = StepKind::Isomorphism;
  s3.label = "M2 isomorphic to N/N0";
  s3.source = m2.module;
  s3.target = nq.module;
  s3.map = *t;
  ChainStep s4step;
  s4step.kind = StepKind::TrivialSubmoduleQuotient;
  s4step.label = "N = F_2[S_4/D_4] to N/N0, N0 = <b1+b2+b3>";
  s4step.source = n;
  s4step.target = nq.module;
  s4step.subspace = n0.basis;
  s4step.reversed = true;
  chain.steps = {s1, s2, s3, s4step};
  return chain;
}

namespace {

ordered_json matrix_json(const FpMatrix& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

ordered_json module_json(const FpGModule& m) {
  ordered_json out;
  out["prime"] = m.prime();
  out["dim"] = m.dim();
  out["groupOrder"] = m.group().order();
  ordered_json gens = ordered_json::array();
  for (std::size_t s : m.group().generators()) gens.push_back(matrix_json(m.action(s)));
  out["generatorActions"] = gens;
  return out;
}

}  // namespace

ordered_json to_json(const EquivalenceChain& chain) {
  ordered_json out;
  out["chain"] = chain.name;
  ordered_json steps = ordered_json::array();
  for (const auto& s : chain.steps) {
    ordered_json j;
    j["kind"] = to_string(s.kind);
    j["label"] = s.label;
    j["reversed"] = s.reversed;
    j["source"] = module_json(s.source);
    j["target"] = module_json(s.target);
    if (s.kind == StepKind::Isomorphism) j["map"] = matrix_json(s.map);
    else j["subspace"] = matrix_json(s.subspace);
    steps.push_back(j);
  }
  out["steps"] = steps;
  const auto v = verify_chain(chain);
  out["verified"] = v.ok;
  if (v.failing_step) {
    out["failingStep"] = *v.failing_step;
    out["reason"] = v.reason;
  }
  return out;
}

}  // namespace cmtorus::transfer
