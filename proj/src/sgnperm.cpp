#include "cmtorus/sgnperm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace cmtorus::sgnperm {

namespace {

constexpr std::uint64_t degree_bits(int degree) {
  return static_cast<std::uint64_t>(degree) << 40;
}

constexpr std::uint64_t image_bits(int i, int image) {
  return static_cast<std::uint64_t>(image) << (8 + 4 * (7 - i));
}

constexpr std::uint64_t sign_bit(int i) { return std::uint64_t{1} << (7 - i); }

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw DegreeTooLarge("signed permutations are limited to degree " +
                         std::to_string(kMaxDegree) + ", got " + std::to_string(degree));
}

}  // namespace

SignedPerm SignedPerm::identity(int degree) {
  check_degree(degree);
  std::uint64_t w = degree_bits(degree);
  for (int i = 0; i < degree; ++i) w |= image_bits(i, i);
  return SignedPerm(w);
}

SignedPerm SignedPerm::from_images(std::span<const int> images, std::span<const int> signs) {
  const int degree = static_cast<int>(images.size());
  check_degree(degree);
  if (signs.size() != images.size()) throw DegreeMismatch("image and sign sequences differ in length");
  std::uint64_t w = degree_bits(degree);
  unsigned seen = 0;
  for (int i = 0; i < degree; ++i) {
    const int img = images[i] - 1;
    if (img < 0 || img >= degree || (seen >> img) & 1U)
      throw ParseError("image sequence is not a permutation of 1.." + std::to_string(degree));
    seen |= 1U << img;
    if (signs[i] != 1 && signs[i] != -1) throw ParseError("signs must be +1 or -1");
    w |= image_bits(i, img);
    if (signs[i] == -1) w |= sign_bit(i);
  }
  return SignedPerm(w);
}

SignedPerm SignedPerm::sign_change(int degree, unsigned negative_mask) {
  SignedPerm id = identity(degree);
  std::uint64_t w = id.word_;
  for (int i = 0; i < degree; ++i)
    if ((negative_mask >> i) & 1U) w |= sign_bit(i);
  return SignedPerm(w);
}

SignedPerm SignedPerm::parse(std::string_view text, int degree) {
  check_degree(degree);
  std::array<int, kMaxDegree> img{};
  std::array<int, kMaxDegree> sgn{};
  for (int i = 0; i < degree; ++i) {
    img[i] = i + 1;
    sgn[i] = 1;
  }
  unsigned mentioned = 0;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (pos == text.size()) throw ParseError("empty signed permutation");
  while (pos < text.size()) {
    if (text[pos] != '(') throw ParseError("expected '(' in \"" + std::string(text) + "\"");
    ++pos;
    std::vector<std::pair<int, int>> cycle;
    for (;;) {
      skip_space();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      int value = 0;
      bool any_digit = false;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        any_digit = true;
        ++pos;
      }
      if (!any_digit || pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
        throw ParseError("expected point followed by '+' or '-' in \"" + std::string(text) + "\"");
      const int s = text[pos] == '+' ? 1 : -1;
      ++pos;
      if (value < 1 || value > degree)
        throw ParseError("point " + std::to_string(value) + " out of range for degree " +
                         std::to_string(degree));
      if ((mentioned >> (value - 1)) & 1U)
        throw ParseError("point " + std::to_string(value) + " repeated");
      mentioned |= 1U << (value - 1);
      cycle.emplace_back(value, s);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto [point, s] = cycle[k];
      img[point - 1] = cycle[(k + 1) % cycle.size()].first;
      sgn[point - 1] = s;
    }
    skip_space();
  }
  return from_images(std::span<const int>(img.data(), degree),
                     std::span<const int>(sgn.data(), degree));
}

unsigned SignedPerm::negative_mask() const {
  unsigned mask = 0;
  for (int i = 0; i < degree(); ++i)
    if (negative_at(i)) mask |= 1U << i;
  return mask;
}

bool SignedPerm::is_identity() const { return *this == identity(degree()); }

SignedPerm SignedPerm::inverse() const {
  const int g = degree();
  std::uint64_t w = degree_bits(g);
  for (int i = 0; i < g; ++i) {
    const int j = at(i);
    w |= image_bits(j, i);
    if (negative_at(i)) w |= sign_bit(j);
  }
  return SignedPerm(w);
}

std::string SignedPerm::to_string() const {
  const int g = degree();
  std::string out;
  unsigned visited = 0;
  for (int start = 0; start < g; ++start) {
    if ((visited >> start) & 1U) continue;
    out += '(';
    int p = start;
    do {
      visited |= 1U << p;
      out += std::to_string(p + 1);
      out += negative_at(p) ? '-' : '+';
      p = at(p);
    } while (p != start);
    out += ')';
  }
  return out;
}

SignedPerm compose(const SignedPerm& a, const SignedPerm& b) {
  const int g = a.degree();
  if (g != b.degree()) throw DegreeMismatch("compose: degrees differ");
  std::uint64_t w = degree_bits(g);
  for (int i = 0; i < g; ++i) {
    const int j = b.at(i);
    w |= image_bits(i, a.at(j));
    if (a.negative_at(j) != b.negative_at(i)) w |= sign_bit(i);
  }
  return SignedPerm::from_word(w);
}

SignedPerm delta(int degree) {
  return SignedPerm::sign_change(degree, (1U << degree) - 1U);
}

SignedPerm flip(int degree, int point) {
  if (point < 1 || point > degree) throw SgnpermError("flip: point out of range");
  return SignedPerm::sign_change(degree, 1U << (point - 1));
}

std::uint64_t signed_cycle_type(const SignedPerm& x) {
  const int g = x.degree();
  std::array<unsigned, kMaxDegree> codes{};
  int count = 0;
  unsigned visited = 0;
  for (int start = 0; start < g; ++start) {
    if ((visited >> start) & 1U) continue;
    unsigned length = 0;
    unsigned parity = 0;
    int p = start;
    do {
      visited |= 1U << p;
      ++length;
      parity ^= x.negative_at(p) ? 1U : 0U;
      p = x.at(p);
    } while (p != start);
    codes[count++] = (length << 1) | parity;
  }
  std::sort(codes.begin(), codes.begin() + count);
  std::uint64_t packed = 0;
  for (int k = 0; k < count; ++k) packed = (packed << 5) | codes[k];
  return packed;
}

bool SignedGroup::contains(const SignedPerm& x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::size_t SignedGroup::index_of(const SignedPerm& x) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
  if (it == elements_.end() || *it != x) throw SgnpermError("element not in group");
  return static_cast<std::size_t>(it - elements_.begin());
}

std::vector<SignedPerm> SignedGroup::canonical_generators() const {
  std::vector<SignedPerm> gens;
  SignedGroup current = closure(gens, degree_);
  for (const auto& x : elements_) {
    if (current.order() == order()) break;
    if (current.contains(x)) continue;
    gens.push_back(x);
    current = closure(gens, degree_);
  }
  return gens;
}

std::vector<std::uint64_t> SignedGroup::conjugacy_invariant() const {
  std::vector<std::uint64_t> types;
  types.reserve(elements_.size());
  for (const auto& x : elements_) types.push_back(signed_cycle_type(x));
  std::sort(types.begin(), types.end());
  return types;
}

SignedGroup closure(std::span<const SignedPerm> gens, int degree) {
  check_degree(degree);
  for (const auto& x : gens)
    if (x.degree() != degree) throw DegreeMismatch("closure: generator degree differs from group degree");
  SignedGroup group;
  group.degree_ = degree;
  group.generators_.assign(gens.begin(), gens.end());
  const SignedPerm id = SignedPerm::identity(degree);
  std::unordered_set<std::uint64_t> seen{id.word()};
  std::vector<SignedPerm> elements{id};
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (const auto& s : gens) {
      SignedPerm y = compose(elements[k], s);
      if (seen.insert(y.word()).second) elements.push_back(y);
    }
  }
  std::sort(elements.begin(), elements.end());
  group.elements_ = std::move(elements);
  return group;
}

SignedGroup subgroup_from_elements(int degree, std::vector<SignedPerm> elements) {
  SignedGroup group;
  group.degree_ = degree;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  group.elements_ = std::move(elements);
  group.generators_ = group.canonical_generators();
  return group;
}

SignedGroup weyl_group(int degree) {
  std::vector<SignedPerm> gens;
  for (int i = 1; i < degree; ++i) {
    std::vector<int> img(degree), sgn(degree, 1);
    for (int k = 0; k < degree; ++k) img[k] = k + 1;
    std::swap(img[i - 1], img[i]);
    gens.push_back(SignedPerm::from_images(img, sgn));
  }
  if (degree >= 1) gens.push_back(flip(degree, 1));
  return closure(gens, degree);
}

bool is_transitive(const SignedGroup& group) {
  const int g = group.degree();
  if (g <= 1) return true;
  unsigned orbit = 1;
  for (const auto& x : group.elements()) orbit |= 1U << x.at(0);
  return orbit == (1U << g) - 1U;
}

SignedGroup stabilizer_of_one_positive(const SignedGroup& group) {
  std::vector<SignedPerm> h;
  for (const auto& x : group.elements())
    if (x.degree() >= 1 && x.at(0) == 0 && !x.negative_at(0)) h.push_back(x);
  return subgroup_from_elements(group.degree(), std::move(h));
}

namespace {

class ConjugatorSearch {
 public:
  ConjugatorSearch(const SignedGroup& a, const SignedGroup& b)
      : target_(b), gens_(a.canonical_generators()), g_(a.degree()) {
    for (const auto& y : b.elements())
      for (int i = 0; i < g_; ++i) reach_[i][y.at(i)] |= y.negative_at(i) ? 2U : 1U;
  }

  bool run() { return assign(0); }

 private:
  // Constraint for generator x on point i whose image is also assigned: the
  // conjugate w x w^-1 sends w(i) to w(x(i)) with sign
  // sign_w(x(i)) * sign_x(i) * sign_w(i); b must contain such a move.
  bool consistent(int k) const {
    for (const auto& x : gens_) {
      for (int i = 0; i <= k; ++i) {
        const int xi = x.at(i);
        if (xi > k) continue;
        if (i != k && xi != k) continue;
        const bool neg = neg_[xi] ^ x.negative_at(i) ^ neg_[i];
        if (!(reach_[img_[i]][img_[xi]] & (neg ? 2U : 1U))) return false;
      }
    }
    return true;
  }

  bool assign(int k) {
    if (k == g_) {
      std::vector<int> images(g_), signs(g_);
      for (int i = 0; i < g_; ++i) {
        images[i] = img_[i] + 1;
        signs[i] = neg_[i] ? -1 : 1;
      }
      const SignedPerm w = SignedPerm::from_images(images, signs);
      const SignedPerm w_inv = w.inverse();
      for (const auto& x : gens_)
        if (!target_.contains(w * x * w_inv)) return false;
      return true;
    }
    for (int j = 0; j < g_; ++j) {
      if ((used_ >> j) & 1U) continue;
      used_ |= 1U << j;
      img_[k] = j;
      for (int s = 0; s < 2; ++s) {
        neg_[k] = s == 1;
        if (consistent(k) && assign(k + 1)) return true;
      }
      used_ &= ~(1U << j);
    }
    return false;
  }

  const SignedGroup& target_;
  std::vector<SignedPerm> gens_;
  int g_;
  std::array<std::array<unsigned, kMaxDegree>, kMaxDegree> reach_{};
  std::array<int, kMaxDegree> img_{};
  std::array<bool, kMaxDegree> neg_{};
  unsigned used_ = 0;
};

}  // namespace

bool conjugate_in_wg(const SignedGroup& a, const SignedGroup& b) {
  if (a.degree() != b.degree() || a.order() != b.order()) return false;
  if (a == b) return true;
  if (a.conjugacy_invariant() != b.conjugacy_invariant()) return false;
  return ConjugatorSearch(a, b).run();
}

std::vector<std::string> serialize_generators(const std::vector<SignedPerm>& gens) {
  std::vector<std::string> out;
  out.reserve(gens.size());
  for (const auto& x : gens) out.push_back(x.to_string());
  return out;
}

}  // namespace cmtorus::sgnperm
