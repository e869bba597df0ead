#include "cmtorus/reciprocity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cmtorus/glattice.hpp"
#include "cmtorus/parallel.hpp"

namespace cmtorus::reciprocity {

using intlin::Integer;
using intlin::IntMatrix;
using intlin::Lattice;
using nlohmann::ordered_json;

IntVector w_vector(const SignedPerm& g) {
  const int n = g.degree();
  IntVector w(n, 0);
  for (int i = 0; i < n; ++i)
    if (g.negative_at(i)) w[g.at(i)] = 1;
  return w;
}

IntVector act(const SignedPerm& x, const IntVector& v) {
  const int n = x.degree();
  if (static_cast<int>(v.size()) != n) throw ReciprocityError("vector length differs from degree");
  IntVector out(n);
  for (int i = 0; i < n; ++i) out[x.at(i)] = x.negative_at(i) ? Integer(-v[i]) : v[i];
  return out;
}

namespace {

IntVector unit(int n, int i) {
  IntVector e(n, 0);
  e[i] = 1;
  return e;
}

IntVector difference(const IntVector& a, const IntVector& b) {
  IntVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

ordered_json integers_json(const std::vector<Integer>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

ordered_json matrix_json(const IntMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(integers_json(m.row_vector(r)));
  return out;
}

bool subset(const std::vector<SignedPerm>& small, const std::vector<SignedPerm>& big) {
  return std::all_of(small.begin(), small.end(), [&](const SignedPerm& x) {
    return std::binary_search(big.begin(), big.end(), x);
  });
}

bool stabilizes_class(const ReciprocityData& data, const SignedPerm& x, int i) {
  const IntVector e = unit(data.config.g, i);
  return data.cokernel.map.is_zero(difference(act(x, e), e));
}

bool is_cyclic_torsion(const intlin::AbelianGroupStructure& s) {
  return s.invariant_factors.size() <= 1;
}

// Elements of W_g preserving U, their images in S_g, and the components of
// the graph joining i and j when the transposition (i j) lies in that image.
ordered_json lattice_stabilizer_audit(const ReciprocityData& data) {
  const int g = data.config.g;
  const auto& basis = data.image.basis();
  std::size_t stab = 0;
  std::set<std::vector<int>> image;
  const auto weyl = sgnperm::weyl_group(g);
  for (const auto& w : weyl.elements()) {
    bool keeps = true;
    for (std::size_t r = 0; r < basis.rows() && keeps; ++r)
      keeps = intlin::member(data.image, act(w, basis.row_vector(r)));
    if (!keeps) continue;
    ++stab;
    std::vector<int> p(g);
    for (int i = 0; i < g; ++i) p[i] = w.at(i);
    image.insert(std::move(p));
  }
  std::vector<int> parent(g);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& p : image) {
    std::vector<int> moved;
    for (int i = 0; i < g; ++i)
      if (p[i] != i) moved.push_back(i);
    if (moved.size() == 2) parent[find(moved[0])] = find(moved[1]);
  }
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < g; ++i) comps[find(i)].push_back(i + 1);
  ordered_json components = ordered_json::array();
  for (const auto& [root, pts] : comps) components.push_back(pts);
  ordered_json out;
  out["latticeStabilizerOrder"] = stab;
  out["latticeStabilizerImageOrder"] = image.size();
  out["transpositionComponents"] = components;
  return out;
}

ordered_json data_json(const ReciprocityData& data) {
  ordered_json out;
  out["configKey"] = data.config.key();
  out["generators"] = sgnperm::serialize_generators(data.config.group.canonical_generators());
  ordered_json ws = ordered_json::array();
  for (const auto& w : data.w_vectors) ws.push_back(integers_json(w));
  out["wVectors"] = ws;
  out["imageBasis"] = matrix_json(data.image.basis());
  out["invariantFactors"] = integers_json(data.cokernel.structure.invariant_factors);
  out["freeRank"] = data.cokernel.structure.free_rank;
  out["piOrders"] = integers_json(data.pi_orders);
  return out;
}

std::size_t group_index(std::size_t order, std::size_t sub) { return sub == 0 ? 0 : order / sub; }

}  // namespace

ReciprocityData image_lattice(const CMConfig& config) {
  ReciprocityData data;
  data.config = config;
  std::set<IntVector> ws;
  for (const auto& x : config.group.elements()) ws.insert(w_vector(x));
  data.w_vectors.assign(ws.begin(), ws.end());
  const auto g = static_cast<std::size_t>(config.g);
  data.image = Lattice::span(data.w_vectors, g);
  data.cokernel = intlin::quotient_with_images(Lattice::full(g), data.image);
  for (int i = 0; i < config.g; ++i) data.pi_orders.push_back(data.cokernel.map.order(unit(config.g, i)));
  return data;
}

std::vector<SignedPerm> action_kernel_on_cokernel(const ReciprocityData& data) {
  std::vector<SignedPerm> out;
  for (const auto& x : data.config.group.elements()) {
    bool trivial = true;
    for (int i = 0; i < data.config.g && trivial; ++i) trivial = stabilizes_class(data, x, i);
    if (trivial) out.push_back(x);
  }
  return out;
}

std::vector<SignedPerm> stabilizer_of_pi1(const ReciprocityData& data) {
  std::vector<SignedPerm> out;
  for (const auto& x : data.config.group.elements())
    if (stabilizes_class(data, x, 0)) out.push_back(x);
  return out;
}

bool check_transport(const CMConfig& config) {
  for (int i = 1; i < config.g; ++i) {
    bool pos = false, neg = false;
    for (const auto& s : config.cm_type) (s.negative_at(i) ? neg : pos) = true;
    if (!pos || !neg) return false;
  }
  return true;
}

namespace {
// Above this order the group's multiplication table no longer fits comfortably.
constexpr std::size_t kTableOrderLimit = 4096;
}  // namespace

bool check_faithful_premise(const ReciprocityData& data) {
  if (!data.config.primitive || !data.config.faithful_on_core)
    throw PreconditionViolated("faithfulness premise needs a primitive config with trivial core");
  const Lattice sat = intlin::saturation(data.image);
  const std::size_t k = sat.rank();
  const auto& el = data.config.group.elements();
  if (el.size() > kTableOrderLimit) {
    // Too large for a multiplication table: test the kernel element-wise.
    for (const auto& x : el) {
      if (x.is_identity()) continue;
      bool fixes = true;
      for (std::size_t j = 0; j < k && fixes; ++j) {
        const auto b = sat.basis().row_vector(j);
        fixes = act(x, b) == b;
      }
      if (fixes) return false;
    }
    return true;
  }
  std::vector<IntMatrix> action;
  action.reserve(el.size());
  for (const auto& x : el) {
    IntMatrix m(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = sat.coordinates(act(x, sat.basis().row_vector(j)));
      if (!c) throw ReciprocityError("image lattice is not G-stable");
      for (std::size_t r = 0; r < k; ++r) m(r, j) = (*c)[r];
    }
    action.push_back(std::move(m));
  }
  const glattice::GLattice lattice(glattice::FiniteGroup::from_signed(data.config.group),
                                   std::move(action));
  return glattice::is_faithful(lattice);
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::FullImage: return "FullImage";
    case CertificateKind::TorsionFree: return "TorsionFree";
    case CertificateKind::IndexTwoSumEven: return "IndexTwoSumEven";
    case CertificateKind::CyclicThreeQuadraticAction: return "CyclicThreeQuadraticAction";
    case CertificateKind::SmallStabilizer: return "SmallStabilizer";
    case CertificateKind::NoCertificate: return "NoCertificate";
  }
  return "NoCertificate";
}

Lattice sum_even_lattice(std::size_t g) {
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i + 1 < g; ++i) {
    IntVector v(g, 0);
    v[i] = 1;
    v[i + 1] = -1;
    gens.push_back(v);
  }
  if (g > 0) {
    IntVector v(g, 0);
    v[0] = 2;
    gens.push_back(v);
  }
  return Lattice::span(gens, g);
}

namespace {

struct CyclicThreeFacts {
  bool holds = false;
  std::size_t kernel_order = 0;
  std::size_t kernel_index = 0;
  bool stabilizer_in_kernel = false;
};

CyclicThreeFacts cyclic_three_facts(const ReciprocityData& data) {
  CyclicThreeFacts f;
  const auto& s = data.cokernel.structure;
  if (s.free_rank != 0 || s.invariant_factors != std::vector<Integer>{3}) return f;
  const auto kernel = action_kernel_on_cokernel(data);
  f.kernel_order = kernel.size();
  f.kernel_index = group_index(data.config.group.order(), kernel.size());
  f.stabilizer_in_kernel = subset(data.config.stabilizer.elements(), kernel);
  f.holds = f.kernel_index <= 2 && f.stabilizer_in_kernel;
  return f;
}

struct SmallStabilizerFacts {
  bool holds = false;
  std::size_t stabilizer_order = 0;
  std::size_t stabilizer_index = 0;
  bool h_inside = false;
};

SmallStabilizerFacts small_stabilizer_facts(const ReciprocityData& data) {
  SmallStabilizerFacts f;
  if (!is_cyclic_torsion(data.cokernel.structure)) return f;
  const auto stab = stabilizer_of_pi1(data);
  f.stabilizer_order = stab.size();
  f.stabilizer_index = group_index(data.config.group.order(), stab.size());
  f.h_inside = subset(data.config.stabilizer.elements(), stab);
  f.holds = f.h_inside && f.stabilizer_index <= 4;
  return f;
}

bool index_two_sum_even_holds(const ReciprocityData& data) {
  const auto& s = data.cokernel.structure;
  return data.config.g == 4 && s.free_rank == 0 &&
         s.invariant_factors == std::vector<Integer>{2} &&
         data.image == sum_even_lattice(4);
}

}  // namespace

CokernelCertificate classify(const ReciprocityData& data) {
  CokernelCertificate cert;
  const auto& s = data.cokernel.structure;
  const int g = data.config.g;
  if (s.is_trivial()) {
    cert.kind = CertificateKind::FullImage;
    cert.evidence["imageBasis"] = matrix_json(data.image.basis());
    return cert;
  }
  if (s.is_torsion_free()) {
    cert.kind = CertificateKind::TorsionFree;
    cert.evidence["freeRank"] = s.free_rank;
    return cert;
  }
  if (g == 4 && index_two_sum_even_holds(data)) {
    cert.kind = CertificateKind::IndexTwoSumEven;
    cert.evidence["ambient"] = "X(K_0)*";
    cert.evidence["imageBasis"] = matrix_json(data.image.basis());
    cert.evidence["sumEvenBasis"] = matrix_json(sum_even_lattice(4).basis());
    return cert;
  }
  if (g == 5) {
    const auto f = cyclic_three_facts(data);
    if (f.holds) {
      cert.kind = CertificateKind::CyclicThreeQuadraticAction;
      cert.evidence["kernelOrder"] = f.kernel_order;
      cert.evidence["kernelIndex"] = f.kernel_index;
      cert.evidence["stabilizerInKernel"] = f.stabilizer_in_kernel;
      return cert;
    }
  }
  if (g == 6) {
    const auto f = small_stabilizer_facts(data);
    if (f.holds) {
      cert.kind = CertificateKind::SmallStabilizer;
      cert.evidence["torsion"] = integers_json(s.invariant_factors);
      cert.evidence["stabilizerOrder"] = f.stabilizer_order;
      cert.evidence["stabilizerIndex"] = f.stabilizer_index;
      cert.evidence["stabilizerContainsH"] = f.h_inside;
      cert.evidence["audit"] = lattice_stabilizer_audit(data);
      return cert;
    }
  }
  cert.kind = CertificateKind::NoCertificate;
  cert.evidence = data_json(data);
  if (g == 6) cert.evidence["audit"] = lattice_stabilizer_audit(data);
  return cert;
}

bool verify_certificate(const ReciprocityData& data, const CokernelCertificate& cert) {
  // Recompute B from the w vectors rather than trusting the stored quotient.
  const auto g = static_cast<std::size_t>(data.config.g);
  std::vector<IntVector> ws;
  for (const auto& x : data.config.group.elements()) ws.push_back(w_vector(x));
  const Lattice u = Lattice::span(ws, g);
  if (u != data.image) return false;
  const auto s = intlin::snf(u.basis()).cokernel;
  if (s != data.cokernel.structure) return false;
  switch (cert.kind) {
    case CertificateKind::FullImage: return s.is_trivial();
    case CertificateKind::TorsionFree: return s.is_torsion_free() && !s.is_trivial();
    case CertificateKind::IndexTwoSumEven: return index_two_sum_even_holds(data);
    case CertificateKind::CyclicThreeQuadraticAction:
      return data.config.g == 5 && cyclic_three_facts(data).holds;
    case CertificateKind::SmallStabilizer:
      return data.config.g == 6 && small_stabilizer_facts(data).holds;
    case CertificateKind::NoCertificate: return false;
  }
  return false;
}

bool kind_permitted(int g, CertificateKind kind) {
  switch (kind) {
    case CertificateKind::FullImage: return true;
    case CertificateKind::TorsionFree: return g >= 4;
    case CertificateKind::IndexTwoSumEven: return g == 4;
    case CertificateKind::CyclicThreeQuadraticAction: return g == 5;
    case CertificateKind::SmallStabilizer: return g == 6;
    case CertificateKind::NoCertificate: return false;
  }
  return false;
}

WeylCheck check_weyl_surjectivity(int g) {
  WeylCheck out;
  const auto config = cmtypes::make_config(sgnperm::weyl_group(g));
  const auto data = image_lattice(config);
  out.cokernel_trivial = data.cokernel.structure.is_trivial();
  out.witnesses_ok = true;
  for (int i = 0; i < g; ++i)
    if (w_vector(sgnperm::flip(g, i + 1)) != unit(g, i)) out.witnesses_ok = false;
  return out;
}

bool ConfigReport::passed() const {
  return certificate_valid && kind_allowed && transport && faithful.value_or(true);
}

ordered_json ConfigReport::to_json() const {
  ordered_json j;
  j["g"] = g;
  j["configKey"] = key;
  j["invariantFactors"] = integers_json(structure.invariant_factors);
  j["freeRank"] = structure.free_rank;
  if (pi_order == 0) j["piOrder"] = nullptr;
  else j["piOrder"] = pi_order.get_str();
  j["certificateKind"] = to_string(certificate.kind);
  j["evidence"] = certificate.evidence;
  j["certificateValid"] = certificate_valid;
  j["kindAllowed"] = kind_allowed;
  j["transport"] = transport;
  if (faithful) j["faithful"] = *faithful;
  else j["faithful"] = nullptr;
  j["pass"] = passed();
  return j;
}

ConfigReport verify_config(const CMConfig& config) {
  const auto data = image_lattice(config);
  ConfigReport r;
  r.g = config.g;
  r.key = config.key();
  r.structure = data.cokernel.structure;
  r.pi_order = data.pi_orders.empty() ? Integer(1) : data.pi_orders[0];
  // The orders are equal by transitivity; a mismatch means U is not G-stable.
  const bool orders_equal = std::all_of(data.pi_orders.begin(), data.pi_orders.end(),
                                        [&](const Integer& o) { return o == r.pi_order; });
  r.certificate = classify(data);
  r.certificate_valid = orders_equal && verify_certificate(data, r.certificate);
  r.kind_allowed = kind_permitted(config.g, r.certificate.kind);
  r.transport = check_transport(config);
  if (config.primitive && config.faithful_on_core) r.faithful = check_faithful_premise(data);
  return r;
}

std::vector<ConfigReport> verify_all(const std::vector<CMConfig>& configs, unsigned jobs) {
  std::vector<ConfigReport> out(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) { out[i] = verify_config(configs[i]); });
  return out;
}

}  // namespace cmtorus::reciprocity
