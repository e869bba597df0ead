#include "cmtorus/cmtypes.hpp"

#include <algorithm>
#include <bitset>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "cmtorus/parallel.hpp"

namespace cmtorus::cmtypes {

using sgnperm::closure;

std::string CMConfig::key() const {
  std::string k = "order:" + std::to_string(group.order()) + ";gens:";
  const auto gens = group.canonical_generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) k += ",";
    k += gens[i].to_string();
  }
  return k;
}

SignedGroup right_stabilizer(const CMConfig& config) {
  const int g = config.g;
  // h is in the right stabiliser iff every s in S has the sign of h at 1
  // on the point h(1), i.e. s h still sends 1 somewhere positively.
  std::vector<bool> all_pos(g, true), all_neg(g, true);
  for (const auto& s : config.cm_type)
    for (int j = 0; j < g; ++j) {
      if (s.negative_at(j)) all_pos[j] = false;
      else all_neg[j] = false;
    }
  std::vector<SignedPerm> out;
  for (const auto& h : config.group.elements()) {
    const int j = h.at(0);
    if (h.negative_at(0) ? all_neg[j] : all_pos[j]) out.push_back(h);
  }
  return sgnperm::subgroup_from_elements(g, std::move(out));
}

SignedGroup core_of_stabilizer(const CMConfig& config) {
  // y^-1 x y lies in H exactly when x fixes y(1) with sign +1, so the core
  // is the set of elements fixing the orbit of 1 pointwise with sign +1.
  unsigned orbit = 0;
  for (const auto& y : config.group.elements()) orbit |= 1U << y.at(0);
  std::vector<SignedPerm> core;
  for (const auto& x : config.stabilizer.elements()) {
    bool fixes = true;
    for (int i = 0; i < config.g && fixes; ++i)
      if ((orbit >> i) & 1U) fixes = x.at(i) == i && !x.negative_at(i);
    if (fixes) core.push_back(x);
  }
  return sgnperm::subgroup_from_elements(config.g, std::move(core));
}

CMConfig make_config(const SignedGroup& group) {
  const int g = group.degree();
  if (g < 1) throw NotAdmissible(InadmissibleReason::NotTransitive, "degree must be at least 1");
  if (!group.contains(sgnperm::delta(g)))
    throw NotAdmissible(InadmissibleReason::MissingDelta, "group does not contain delta");
  if (!sgnperm::is_transitive(group))
    throw NotAdmissible(InadmissibleReason::NotTransitive, "image in S_g is not transitive");
  CMConfig c;
  c.g = g;
  c.group = group;
  for (const auto& x : group.elements())
    if (!x.negative_at(0)) c.cm_type.push_back(x);
  c.stabilizer = sgnperm::stabilizer_of_one_positive(group);
  c.primitive = right_stabilizer(c).elements() == c.stabilizer.elements();
  c.faithful_on_core = core_of_stabilizer(c).order() == 1;
  return c;
}

std::vector<std::vector<int>> unsigned_image(const SignedGroup& group) {
  std::vector<std::vector<int>> out;
  for (const auto& x : group.elements()) {
    std::vector<int> p(group.degree());
    for (int i = 0; i < group.degree(); ++i) p[i] = x.at(i);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

constexpr std::size_t kMaxSymmetricOrder = 720;
using ElementSet = std::bitset<kMaxSymmetricOrder>;

// S_g with elements in lexicographic order and a full multiplication table.
class SymmetricGroup {
 public:
  explicit SymmetricGroup(int g) : g_(g) {
    std::vector<int> p(g);
    std::iota(p.begin(), p.end(), 0);
    do {
      index_[p] = perms_.size();
      perms_.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const std::size_t n = perms_.size();
    mul_.assign(n, std::vector<std::uint16_t>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<int> c(g);
        for (int i = 0; i < g; ++i) c[i] = perms_[a][perms_[b][i]];
        mul_[a][b] = static_cast<std::uint16_t>(index_.at(c));
      }
    inv_.resize(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (mul_[a][b] == 0) inv_[a] = b;
    for (const auto& q : perms_) cycle_type_.push_back(cycle_type(q));
  }

  std::size_t size() const { return perms_.size(); }
  const std::vector<int>& perm(std::size_t i) const { return perms_[i]; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a][b]; }
  std::size_t conj(std::size_t c, std::size_t x) const { return mul_[mul_[c][x]][inv_[c]]; }
  unsigned type(std::size_t i) const { return cycle_type_[i]; }

  ElementSet closure(const std::vector<std::size_t>& gens) const {
    ElementSet set;
    set.set(0);
    std::vector<std::size_t> queue{0};
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (std::size_t s : gens) {
        const std::size_t y = mul(queue[k], s);
        if (!set.test(y)) {
          set.set(y);
          queue.push_back(y);
        }
      }
    return set;
  }

 private:
  unsigned cycle_type(const std::vector<int>& p) const {
    std::vector<unsigned> lens;
    std::vector<bool> seen(g_, false);
    for (int s = 0; s < g_; ++s) {
      if (seen[s]) continue;
      unsigned len = 0;
      for (int x = s; !seen[x]; x = p[x]) {
        seen[x] = true;
        ++len;
      }
      lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    unsigned code = 0;
    for (unsigned l : lens) code = code * 8 + l;
    return code;
  }

  int g_;
  std::vector<std::vector<int>> perms_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<std::vector<std::uint16_t>> mul_;
  std::vector<std::size_t> inv_;
  std::vector<unsigned> cycle_type_;
};

struct SubgroupClass {
  ElementSet elements;
  std::vector<std::size_t> generators;
  std::size_t order = 0;
  std::map<unsigned, std::size_t> type_histogram;
};

std::map<unsigned, std::size_t> histogram(const SymmetricGroup& sg, const ElementSet& set) {
  std::map<unsigned, std::size_t> h;
  for (std::size_t i = 0; i < sg.size(); ++i)
    if (set.test(i)) ++h[sg.type(i)];
  return h;
}

bool conjugate_sets(const SymmetricGroup& sg, const ElementSet& a, const ElementSet& b) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < sg.size(); ++i)
    if (a.test(i)) members.push_back(i);
  for (std::size_t c = 0; c < sg.size(); ++c) {
    bool ok = true;
    for (std::size_t x : members)
      if (!b.test(sg.conj(c, x))) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

bool transitive(const SymmetricGroup& sg, const ElementSet& set, int g) {
  unsigned orbit = 0;
  for (std::size_t i = 0; i < sg.size(); ++i)
    if (set.test(i)) orbit |= 1U << sg.perm(i)[0];
  return orbit == (1U << g) - 1U;
}

}  // namespace

std::vector<PermGroupClass> transitive_image_catalog(int g) {
  if (g < 1 || g > kMaxEnumerationDegree)
    throw DegreeTooLarge("transitive image catalog supports 1 <= g <= 6");
  const SymmetricGroup sg(g);
  std::vector<SubgroupClass> reps;
  {
    SubgroupClass trivial;
    trivial.elements.set(0);
    trivial.order = 1;
    trivial.type_histogram = histogram(sg, trivial.elements);
    reps.push_back(trivial);
  }
  std::unordered_set<ElementSet> seen{reps[0].elements};
  // Every subgroup is reached from a smaller one by adjoining one element, and
  // conjugating the chain shows class representatives suffice.
  for (std::size_t idx = 0; idx < reps.size(); ++idx) {
    for (std::size_t x = 0; x < sg.size(); ++x) {
      if (reps[idx].elements.test(x)) continue;
      std::vector<std::size_t> gens = reps[idx].generators;
      gens.push_back(x);
      ElementSet k = sg.closure(gens);
      if (!seen.insert(k).second) continue;
      SubgroupClass cand{k, gens, k.count(), histogram(sg, k)};
      bool known = false;
      for (const auto& r : reps) {
        if (r.order == cand.order && r.type_histogram == cand.type_histogram &&
            conjugate_sets(sg, cand.elements, r.elements)) {
          known = true;
          break;
        }
      }
      if (!known) reps.push_back(std::move(cand));
    }
  }
  std::vector<PermGroupClass> out;
  for (const auto& r : reps) {
    if (!transitive(sg, r.elements, g)) continue;
    PermGroupClass pc;
    pc.degree = g;
    pc.order = r.order;
    for (std::size_t i = 0; i < sg.size(); ++i)
      if (r.elements.test(i)) pc.elements.push_back(sg.perm(i));
    // Greedy generators from the sorted element list.
    std::vector<std::size_t> gens;
    ElementSet current = sg.closure(gens);
    for (std::size_t i = 0; i < sg.size() && current.count() < r.order; ++i) {
      if (!r.elements.test(i) || current.test(i)) continue;
      gens.push_back(i);
      current = sg.closure(gens);
    }
    for (std::size_t i : gens) pc.generators.push_back(sg.perm(i));
    out.push_back(std::move(pc));
  }
  std::sort(out.begin(), out.end(), [](const PermGroupClass& a, const PermGroupClass& b) {
    return std::tie(a.order, a.elements) < std::tie(b.order, b.elements);
  });
  return out;
}

namespace {

using Mask = unsigned;

Mask permute_mask(Mask n, const std::vector<int>& p) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if ((n >> i) & 1U) out |= 1U << p[i];
  return out;
}

// Bit i of the result is bit p(i) of s.
Mask pullback_mask(Mask s, const std::vector<int>& p) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if ((s >> p[i]) & 1U) out |= 1U << i;
  return out;
}

// Subspaces of F_2^g containing the all-ones vector, each as a sorted list.
std::vector<std::vector<Mask>> subspaces_with_all_ones(int g) {
  const Mask full = (1U << g) - 1U;
  std::vector<std::vector<Mask>> out;
  std::set<std::vector<Mask>> seen;
  std::vector<Mask> start = full == 0 ? std::vector<Mask>{0} : std::vector<Mask>{0, full};
  out.push_back(start);
  seen.insert(start);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    for (Mask v = 0; v <= full; ++v) {
      const auto& cur = out[idx];
      if (std::binary_search(cur.begin(), cur.end(), v)) continue;
      std::vector<Mask> next = cur;
      for (Mask x : cur) next.push_back(x ^ v);
      std::sort(next.begin(), next.end());
      if (seen.insert(next).second) out.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<Mask> subspace_basis(const std::vector<Mask>& space) {
  std::vector<Mask> basis;
  std::vector<Mask> span{0};
  for (Mask v : space) {
    if (std::find(span.begin(), span.end(), v) != span.end()) continue;
    basis.push_back(v);
    const std::size_t n = span.size();
    for (std::size_t i = 0; i < n; ++i) span.push_back(span[i] ^ v);
  }
  return basis;
}

Mask coset_min(Mask r, const std::vector<Mask>& space) {
  Mask best = r;
  for (Mask n : space) best = std::min(best, r ^ n);
  return best;
}

SignedPerm make_signed(const std::vector<int>& p, Mask negatives) {
  const int g = static_cast<int>(p.size());
  std::vector<int> images(g), signs(g);
  for (int i = 0; i < g; ++i) {
    images[i] = p[i] + 1;
    signs[i] = ((negatives >> i) & 1U) ? -1 : 1;
  }
  return SignedPerm::from_images(images, signs);
}

// G0 with a multiplication table, and the sign-mask tables needed to multiply
// pairs (p, c) with p in G0 and c a coset representative of F_2^g / N.
struct LiftTables {
  std::vector<std::vector<std::uint16_t>> mul;      // G0 product indices
  std::vector<std::vector<Mask>> pull;              // pull[s][p] = pullback of s along p
  std::vector<Mask> coset_rep;                      // least element of c + N
  std::vector<std::size_t> generator_index;
};

LiftTables make_tables(const PermGroupClass& image, const std::vector<Mask>& space, int g) {
  LiftTables t;
  const auto& el = image.elements;
  const std::size_t n = el.size();
  auto index = [&](const std::vector<int>& p) {
    return static_cast<std::size_t>(std::lower_bound(el.begin(), el.end(), p) - el.begin());
  };
  t.mul.assign(n, std::vector<std::uint16_t>(n));
  std::vector<int> c(g);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (int i = 0; i < g; ++i) c[i] = el[a][el[b][i]];
      t.mul[a][b] = static_cast<std::uint16_t>(index(c));
    }
  const Mask count = 1U << g;
  t.pull.assign(count, std::vector<Mask>(n));
  for (Mask s = 0; s < count; ++s)
    for (std::size_t p = 0; p < n; ++p) t.pull[s][p] = pullback_mask(s, el[p]);
  t.coset_rep.resize(count);
  for (Mask m = 0; m < count; ++m) t.coset_rep[m] = coset_min(m, space);
  for (const auto& gen : image.generators) t.generator_index.push_back(index(gen));
  return t;
}

// The lifted generators together with N generate a group of order |G0| |N|
// exactly when their image in W_g / N has order |G0|. In (p, c) form the
// product is (p1 p2, c2 + pullback(c1, p2)) taken modulo N.
bool lifts_close_up(const LiftTables& t, const std::vector<Mask>& lift, int g) {
  const std::size_t n = t.mul.size();
  const std::size_t width = std::size_t{1} << g;
  std::vector<bool> seen(n * width, false);
  std::vector<std::pair<std::size_t, Mask>> queue{{0, 0}};
  seen[0] = true;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const auto [p, c] = queue[k];
    for (std::size_t j = 0; j < lift.size(); ++j) {
      const std::size_t q = t.generator_index[j];
      const std::size_t np = t.mul[p][q];
      const Mask nc = t.coset_rep[lift[j] ^ t.pull[c][q]];
      if (seen[np * width + nc]) continue;
      seen[np * width + nc] = true;
      if (queue.size() == n) return false;
      queue.emplace_back(np, nc);
    }
  }
  return queue.size() == n;
}

struct WorkItem {
  const PermGroupClass* image = nullptr;
  std::vector<Mask> sign_part;
};

std::vector<SignedGroup> lifts_for(const WorkItem& item, int g) {
  const auto& gens0 = item.image->generators;
  const auto& space = item.sign_part;
  const LiftTables tables = make_tables(*item.image, space, g);
  std::vector<Mask> reps;
  for (Mask r = 0; r < (1U << g); ++r)
    if (tables.coset_rep[r] == r) reps.push_back(r);
  const std::vector<Mask> basis = subspace_basis(space);
  const std::size_t k = gens0.size();

  std::vector<SignedGroup> out;
  std::vector<std::size_t> choice(k, 0);
  std::vector<Mask> lift(k), moved(k);
  for (;;) {
    for (std::size_t j = 0; j < k; ++j) lift[j] = reps[choice[j]];
    // Conjugating by a pure sign change s replaces each lift c by
    // c + s + (s o p) modulo N; keep only the lexicographically least tuple.
    bool canonical = true;
    for (Mask s : reps) {
      if (s == 0) continue;
      for (std::size_t j = 0; j < k; ++j)
        moved[j] = tables.coset_rep[lift[j] ^ s ^ tables.pull[s][tables.generator_index[j]]];
      if (moved < lift) {
        canonical = false;
        break;
      }
    }
    if (canonical && lifts_close_up(tables, lift, g)) {
      std::vector<SignedPerm> gens;
      for (std::size_t j = 0; j < k; ++j) gens.push_back(make_signed(gens0[j], lift[j]));
      for (Mask b : basis) gens.push_back(SignedPerm::sign_change(g, b));
      out.push_back(closure(gens, g));
    }
    std::size_t pos = 0;
    while (pos < k && ++choice[pos] == reps.size()) choice[pos++] = 0;
    if (pos == k) break;
  }
  return out;
}

}  // namespace

std::vector<CMConfig> enumerate_admissible(int g, const EnumerationOptions& options) {
  if (g < 1 || g > kMaxEnumerationDegree)
    throw DegreeTooLarge("enumeration supports 1 <= g <= 6, got " + std::to_string(g));
  const auto catalog = transitive_image_catalog(g);
  const auto spaces = subspaces_with_all_ones(g);

  std::vector<WorkItem> items;
  for (const auto& image : catalog)
    for (const auto& space : spaces) {
      bool invariant = true;
      for (const auto& p : image.generators)
        for (Mask n : space)
          if (!std::binary_search(space.begin(), space.end(), permute_mask(n, p))) {
            invariant = false;
            break;
          }
      if (invariant) items.push_back({&image, space});
    }

  std::vector<std::vector<CMConfig>> found(items.size());
  parallel_for(items.size(), options.jobs, [&](std::size_t i) {
    for (auto& group : lifts_for(items[i], g)) {
      CMConfig c = make_config(group);
      if (options.require_primitive && !c.primitive) continue;
      if (options.require_faithful_core && !c.faithful_on_core) continue;
      found[i].push_back(std::move(c));
    }
  });

  // Conjugacy dedup within invariant buckets; first candidate in work order wins.
  struct Bucket {
    std::vector<std::size_t> members;
  };
  std::vector<CMConfig> candidates;
  for (auto& f : found)
    for (auto& c : f) candidates.push_back(std::move(c));
  std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    buckets[{candidates[i].group.order(), candidates[i].group.conjugacy_invariant()}].push_back(i);
  std::vector<std::vector<std::size_t>> bucket_list;
  for (auto& [key, members] : buckets) bucket_list.push_back(std::move(members));

  std::vector<std::vector<std::size_t>> kept(bucket_list.size());
  parallel_for(bucket_list.size(), options.jobs, [&](std::size_t b) {
    for (std::size_t i : bucket_list[b]) {
      bool duplicate = false;
      for (std::size_t r : kept[b])
        if (sgnperm::conjugate_in_wg(candidates[i].group, candidates[r].group)) {
          duplicate = true;
          break;
        }
      if (!duplicate) kept[b].push_back(i);
    }
  });

  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto& k : kept)
    for (std::size_t i : k) order.emplace_back(candidates[i].key(), i);
  std::vector<CMConfig> out;
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    const std::size_t oa = candidates[a.second].group.order();
    const std::size_t ob = candidates[b.second].group.order();
    return std::tie(oa, a.first) < std::tie(ob, b.first);
  });
  for (const auto& [key, i] : order) out.push_back(candidates[i]);
  return out;
}

std::string cache_file_name(int g, const EnumerationOptions& options) {
  return "enum-g" + std::to_string(g) + "-p" + (options.require_primitive ? "1" : "0") + "-f" +
         (options.require_faithful_core ? "1" : "0") + "-" + kCacheVersion + ".json";
}

std::string serialize_enumeration(int g, const EnumerationOptions& options,
                                  const std::vector<CMConfig>& configs) {
  nlohmann::ordered_json j;
  j["version"] = kCacheVersion;
  j["g"] = g;
  j["flags"] = {{"primitive", options.require_primitive},
                {"faithfulCore", options.require_faithful_core}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : configs) {
    nlohmann::ordered_json e;
    e["generators"] = sgnperm::serialize_generators(c.group.canonical_generators());
    e["order"] = c.group.order();
    e["primitive"] = c.primitive;
    e["faithfulCore"] = c.faithful_on_core;
    arr.push_back(std::move(e));
  }
  j["configs"] = std::move(arr);
  return j.dump(1) + "\n";
}

std::optional<std::vector<CMConfig>> parse_enumeration(const std::string& text, int g,
                                                       const EnumerationOptions& options) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (j.at("version").get<std::string>() != kCacheVersion) return std::nullopt;
    if (j.at("g").get<int>() != g) return std::nullopt;
    if (j.at("flags").at("primitive").get<bool>() != options.require_primitive) return std::nullopt;
    if (j.at("flags").at("faithfulCore").get<bool>() != options.require_faithful_core)
      return std::nullopt;
    std::vector<CMConfig> out;
    for (const auto& e : j.at("configs")) {
      std::vector<SignedPerm> gens;
      for (const auto& s : e.at("generators")) gens.push_back(SignedPerm::parse(s.get<std::string>(), g));
      CMConfig c = make_config(closure(gens, g));
      if (c.group.order() != e.at("order").get<std::size_t>() ||
          c.primitive != e.at("primitive").get<bool>() ||
          c.faithful_on_core != e.at("faithfulCore").get<bool>())
        return std::nullopt;
      out.push_back(std::move(c));
    }
    return out;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  } catch (const CmtypesError&) {
    return std::nullopt;
  } catch (const sgnperm::SgnpermError&) {
    return std::nullopt;
  }
}

std::vector<CMConfig> enumerate_cached(int g, const EnumerationOptions& options,
                                       const std::optional<std::filesystem::path>& cache_dir) {
  if (cache_dir) {
    const auto path = *cache_dir / cache_file_name(g, options);
    std::ifstream in(path);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      if (auto cached = parse_enumeration(buf.str(), g, options)) return *cached;
    }
  }
  auto configs = enumerate_admissible(g, options);
  if (cache_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*cache_dir, ec);
    const auto path = *cache_dir / cache_file_name(g, options);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << serialize_enumeration(g, options, configs);
    }
    std::filesystem::rename(tmp, path, ec);
  }
  return configs;
}

}  // namespace cmtorus::cmtypes
