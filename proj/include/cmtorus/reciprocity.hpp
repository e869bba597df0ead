#pragma once

// The reciprocity map on cocharacters in pi-coordinates. Every group element
// g contributes w(g), the image of 1* - g*: bit i of w(g) is set exactly when
// g sends some point to i with sign -1. U is the span of all w(g) in
// X(K_0)* = Z^g and B = Z^g / U is the cokernel being classified.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmtorus/cmtypes.hpp"
#include "cmtorus/intlin.hpp"

namespace cmtorus::reciprocity {

using cmtypes::CMConfig;
using intlin::IntVector;
using sgnperm::SignedPerm;

class ReciprocityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolated : public ReciprocityError {
 public:
  using ReciprocityError::ReciprocityError;
};

/// 0/1 vector of length g.
IntVector w_vector(const SignedPerm& g);

/// Signed permutation action on pi-coordinates: (x.v)_{x(i)} = sign_x(i) v_i.
IntVector act(const SignedPerm& x, const IntVector& v);

struct ReciprocityData {
  CMConfig config;
  std::vector<IntVector> w_vectors;  // distinct w(g), sorted
  intlin::Lattice image;             // U
  intlin::Quotient cokernel;         // B with its class map
  std::vector<intlin::Integer> pi_orders;  // order of pi_i* mod U; 0 = infinite
};

ReciprocityData image_lattice(const CMConfig& config);

/// Elements of G acting trivially on B.
std::vector<SignedPerm> action_kernel_on_cokernel(const ReciprocityData& data);
/// Elements of G fixing the class of pi_1* in B.
std::vector<SignedPerm> stabilizer_of_pi1(const ReciprocityData& data);

/// For every i != 1 and sign e there is s in S with sign_s(i) = e.
bool check_transport(const CMConfig& config);

/// G acts faithfully on the saturation of U. Requires a primitive config
/// with trivial core.
bool check_faithful_premise(const ReciprocityData& data);

enum class CertificateKind {
  FullImage,
  TorsionFree,
  IndexTwoSumEven,
  CyclicThreeQuadraticAction,
  SmallStabilizer,
  NoCertificate,
};

std::string to_string(CertificateKind kind);

struct CokernelCertificate {
  CertificateKind kind = CertificateKind::NoCertificate;
  nlohmann::ordered_json evidence;
};

/// Sum-even sublattice of Z^g.
intlin::Lattice sum_even_lattice(std::size_t g);

/// Picks the certificate whose defining property holds; NoCertificate carries
/// the full data in its evidence.
CokernelCertificate classify(const ReciprocityData& data);
/// Re-checks a certificate's claim against the data from scratch.
bool verify_certificate(const ReciprocityData& data, const CokernelCertificate& cert);
/// Certificate kinds accepted for a given g by the case analysis.
bool kind_permitted(int g, CertificateKind kind);

struct WeylCheck {
  bool cokernel_trivial = false;
  bool witnesses_ok = false;
  bool ok() const { return cokernel_trivial && witnesses_ok; }
};

/// For G = W_g: B is trivial and the element flipping only point i has
/// w = e_i, for every i.
WeylCheck check_weyl_surjectivity(int g);

/// Per-configuration verification record.
struct ConfigReport {
  int g = 0;
  std::string key;
  intlin::AbelianGroupStructure structure;
  intlin::Integer pi_order;
  CokernelCertificate certificate;
  bool certificate_valid = false;
  bool kind_allowed = false;
  bool transport = false;
  std::optional<bool> faithful;  // empty when the premise does not apply
  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

ConfigReport verify_config(const CMConfig& config);

/// All reports for a list of configs, computed on `jobs` threads and returned
/// in input order.
std::vector<ConfigReport> verify_all(const std::vector<CMConfig>& configs, unsigned jobs);

}  // namespace cmtorus::reciprocity
