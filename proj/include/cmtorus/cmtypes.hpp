#pragma once

// Admissible CM configurations inside W_g: a subgroup G containing the
// all-negative element delta whose image in S_g is transitive, together with
// the derived CM type S (elements taking 1 somewhere with sign +1) and the
// stabiliser H of 1 with sign +1.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmtorus/sgnperm.hpp"

namespace cmtorus::cmtypes {

using sgnperm::SignedGroup;
using sgnperm::SignedPerm;

inline constexpr int kMaxEnumerationDegree = 6;
inline constexpr const char* kCacheVersion = "cmtorus-enumeration-v1";

class CmtypesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InadmissibleReason { MissingDelta, NotTransitive };

class NotAdmissible : public CmtypesError {
 public:
  NotAdmissible(InadmissibleReason reason, const std::string& what)
      : CmtypesError(what), reason_(reason) {}
  InadmissibleReason reason() const { return reason_; }

 private:
  InadmissibleReason reason_;
};

class DegreeTooLarge : public CmtypesError {
 public:
  using CmtypesError::CmtypesError;
};

struct CMConfig {
  int g = 0;
  SignedGroup group;
  std::vector<SignedPerm> cm_type;  // S, sorted
  SignedGroup stabilizer;           // H
  bool primitive = false;
  bool faithful_on_core = false;

  /// "order:<|G|>;gens:<canonical generators>" - depends only on the element set.
  std::string key() const;
};

CMConfig make_config(const SignedGroup& group);

/// Right stabiliser {h in G : S h = S} of the CM type.
SignedGroup right_stabilizer(const CMConfig& config);
/// Intersection of all conjugates of H in G.
SignedGroup core_of_stabilizer(const CMConfig& config);

struct EnumerationOptions {
  bool require_primitive = false;
  bool require_faithful_core = false;
  unsigned jobs = 1;
};

/// One representative of each W_g-conjugacy class of admissible subgroups
/// passing the filters, sorted by (order, key).
std::vector<CMConfig> enumerate_admissible(int g, const EnumerationOptions& options);

/// A transitive subgroup of S_g; permutations are 0-based image vectors.
struct PermGroupClass {
  int degree = 0;
  std::size_t order = 0;
  std::vector<std::vector<int>> generators;
  std::vector<std::vector<int>> elements;  // sorted
};

/// Transitive subgroups of S_g up to conjugacy, found by building the
/// subgroup lattice through cyclic extensions.
std::vector<PermGroupClass> transitive_image_catalog(int g);

/// Image of a signed group in S_g, as sorted 0-based permutations.
std::vector<std::vector<int>> unsigned_image(const SignedGroup& group);

/// Cache file handling: {version, g, flags, configs:[{generators, order,
/// primitive, faithfulCore}]}.
std::string cache_file_name(int g, const EnumerationOptions& options);
std::string serialize_enumeration(int g, const EnumerationOptions& options,
                                  const std::vector<CMConfig>& configs);
/// Returns nullopt when the text has a different version, degree or flags.
std::optional<std::vector<CMConfig>> parse_enumeration(const std::string& text, int g,
                                                       const EnumerationOptions& options);
/// Loads from dir when a valid cache exists, otherwise enumerates and writes.
std::vector<CMConfig> enumerate_cached(int g, const EnumerationOptions& options,
                                       const std::optional<std::filesystem::path>& cache_dir);

}  // namespace cmtorus::cmtypes
