#include "cmtorus/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "cmtorus/parallel.hpp"

namespace cmtorus::quadforms {

namespace {

std::int64_t floor_div(std::int64_t x, std::int64_t y) {
  std::int64_t q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool squarefree(std::int64_t n) {
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

void require_discriminant(std::int64_t d) {
  if (!is_discriminant(d)) throw BadDiscriminant("discriminant must be negative and 0 or 1 mod 4");
}

}  // namespace

std::string QuadForm::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

bool is_reduced(const QuadForm& f) {
  if (f.a <= 0 || std::abs(f.b) > f.a || f.a > f.c) return false;
  if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

bool is_primitive(const QuadForm& f) {
  return std::gcd(std::gcd(f.a, f.b), f.c) == 1;
}

QuadForm reduce(QuadForm f) {
  const std::int64_t d = f.discriminant();
  if (d >= 0 || f.a <= 0) throw NotPositiveDefinite("form must have a > 0 and negative discriminant");
  for (;;) {
    // Translate b into (-a, a]; this keeps the discriminant.
    if (f.b > f.a || f.b <= -f.a) {
      const std::int64_t k = floor_div(f.a - f.b, 2 * f.a);
      const std::int64_t nb = f.b + 2 * k * f.a;
      f.c = (nb * nb - d) / (4 * f.a);
      f.b = nb;
    }
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

bool is_discriminant(std::int64_t d) {
  if (d >= 0) return false;
  const std::int64_t r = ((d % 4) + 4) % 4;
  return r == 0 || r == 1;
}

bool is_fundamental(std::int64_t d) {
  if (!is_discriminant(d)) return false;
  const std::int64_t n = -d;
  if (((d % 4) + 4) % 4 == 1) return squarefree(n);
  const std::int64_t m = d / 4;
  const std::int64_t r = ((m % 4) + 4) % 4;
  return (r == 2 || r == 3) && squarefree(-m);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::int64_t class_number(std::int64_t d) {
  require_discriminant(d);
  const std::int64_t n = -d;
  std::int64_t h = 0;
  for (std::int64_t a = 1; 3 * a * a <= n; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - d) & 1) != 0) continue;
      const std::int64_t num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const QuadForm f{a, b, num / (4 * a)};
      if (is_reduced(f) && is_primitive(f)) ++h;
    }
  return h;
}

int kronecker_prime(std::int64_t d, std::int64_t p) {
  if (!is_prime(p)) throw QuadformsError("kronecker_prime needs a prime");
  if (p == 2) {
    if (d % 2 == 0) return 0;
    const std::int64_t r = ((d % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  const std::int64_t r = ((d % p) + p) % p;
  if (r == 0) return 0;
  // Euler's criterion.
  std::int64_t result = 1, base = r;
  for (std::int64_t e = (p - 1) / 2; e > 0; e >>= 1) {
    if (e & 1) result = static_cast<std::int64_t>(static_cast<__int128>(result) * base % p);
    base = static_cast<std::int64_t>(static_cast<__int128>(base) * base % p);
  }
  return result == 1 ? 1 : -1;
}

bool is_split(std::int64_t p, std::int64_t d) { return kronecker_prime(d, p) == 1; }

QuadForm prime_class(std::int64_t p, std::int64_t d) {
  require_discriminant(d);
  if (!is_prime(p)) throw NotSplit("not a prime");
  if (!is_split(p, d)) throw NotSplit("prime " + std::to_string(p) + " does not split");
  const std::int64_t m = 4 * p;
  const std::int64_t target = ((d % m) + m) % m;
  for (std::int64_t b = 0; b < m; ++b)
    if (b * b % m == target) return reduce(QuadForm{p, b, (b * b - d) / m});
  throw NotSplit("no square root of the discriminant");
}

SplitPrimeReport split_prime_distinctness(std::int64_t d, std::int64_t bound) {
  if (!is_fundamental(d)) throw BadDiscriminant("split prime distinctness needs a fundamental discriminant");
  if (4 * bound * bound > -d) throw QuadformsError("bound exceeds sqrt(|d|)/2");
  SplitPrimeReport report;
  report.discriminant = d;
  report.bound = bound;
  std::set<QuadForm> seen;
  for (std::int64_t p = 2; p <= bound; ++p) {
    if (!is_prime(p) || !is_split(p, d)) continue;
    const QuadForm f = prime_class(p, d);
    report.classes.emplace_back(p, f);
    if (!seen.insert(f).second) report.distinct = false;
  }
  return report;
}

std::vector<std::int64_t> class_numbers_in_range(std::int64_t min_abs, std::int64_t max_abs,
                                                 unsigned jobs) {
  if (min_abs < 3 || max_abs < min_abs) throw QuadformsError("range must satisfy 3 <= min <= max");
  const std::int64_t amax = isqrt(max_abs / 3);
  const auto width = static_cast<std::size_t>(max_abs - min_abs + 1);
  jobs = std::max(1U, jobs);
  std::vector<std::vector<std::int64_t>> partial(jobs, std::vector<std::int64_t>(width, 0));
  // Worker t handles leading coefficients a = t+1, t+1+jobs, ...
  parallel_for(jobs, jobs, [&](std::size_t t) {
    auto& counts = partial[t];
    for (std::int64_t a = static_cast<std::int64_t>(t) + 1; a <= amax; a += jobs)
      for (std::int64_t b = -a + 1; b <= a; ++b) {
        const std::int64_t c0 = std::max(a, (min_abs + b * b + 4 * a - 1) / (4 * a));
        for (std::int64_t c = c0;; ++c) {
          const std::int64_t n = 4 * a * c - b * b;
          if (n > max_abs) break;
          if (c == a && b < 0) continue;
          if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
          ++counts[n - min_abs];
        }
      }
  });
  std::vector<std::int64_t> out(width, 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < width; ++i) out[i] += p[i];
  return out;
}

std::vector<BrauerSiegelRow> brauer_siegel_table(std::int64_t min_abs, std::int64_t max_abs,
                                                 unsigned jobs) {
  const auto counts = class_numbers_in_range(min_abs, max_abs, jobs);
  // Squarefree sieve over [1, max_abs] for the fundamental test.
  std::vector<bool> sqf(static_cast<std::size_t>(max_abs) + 1, true);
  for (std::int64_t p = 2; p * p <= max_abs; ++p)
    for (std::int64_t k = p * p; k <= max_abs; k += p * p) sqf[k] = false;
  auto fundamental = [&](std::int64_t n) {
    if (n % 4 == 3) return static_cast<bool>(sqf[n]);
    if (n % 4 != 0) return false;
    const std::int64_t m = n / 4;
    return (m % 4 == 1 || m % 4 == 2) && sqf[m];
  };
  std::vector<BrauerSiegelRow> rows;
  for (std::int64_t n = min_abs; n <= max_abs; ++n) {
    if (!fundamental(n)) continue;
    BrauerSiegelRow r;
    r.discriminant = -n;
    r.h = counts[n - min_abs];
    r.ratio = std::log(static_cast<double>(r.h)) / (0.5 * std::log(static_cast<double>(n)));
    rows.push_back(r);
  }
  return rows;
}

double median_ratio(const std::vector<BrauerSiegelRow>& rows, std::int64_t lo, std::int64_t hi) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (-r.discriminant >= lo && -r.discriminant <= hi) v.push_back(r.ratio);
  if (v.empty()) throw QuadformsError("no rows in the requested band");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

std::string to_csv(const std::vector<BrauerSiegelRow>& rows) {
  std::string out = "discriminant,h,ratio\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12f", r.ratio);
    out += std::to_string(r.discriminant) + "," + std::to_string(r.h) + "," + buf + "\n";
  }
  return out;
}

}  // namespace cmtorus::quadforms
