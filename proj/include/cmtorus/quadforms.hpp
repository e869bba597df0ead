#pragma once

// Positive definite binary quadratic forms ax^2 + bxy + cy^2 of negative
// discriminant: reduction, class numbers by counting reduced forms, classes
// of split primes, and class-number growth tables.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmtorus::quadforms {

class QuadformsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public QuadformsError {
 public:
  using QuadformsError::QuadformsError;
};

class BadDiscriminant : public QuadformsError {
 public:
  using QuadformsError::QuadformsError;
};

class NotSplit : public QuadformsError {
 public:
  using QuadformsError::QuadformsError;
};

struct QuadForm {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t c = 1;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  std::string to_string() const;
  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

bool is_reduced(const QuadForm& f);
bool is_primitive(const QuadForm& f);
/// The unique reduced form properly equivalent to f.
QuadForm reduce(QuadForm f);

/// Negative discriminant that is 0 or 1 mod 4.
bool is_discriminant(std::int64_t d);
/// Discriminant of an imaginary quadratic field.
bool is_fundamental(std::int64_t d);
bool is_prime(std::int64_t n);

/// Number of reduced primitive forms of discriminant d, found by running a
/// over 1..sqrt(|d|/3).
std::int64_t class_number(std::int64_t d);

/// Kronecker symbol (d | p) for a prime p.
int kronecker_prime(std::int64_t d, std::int64_t p);
bool is_split(std::int64_t p, std::int64_t d);

/// Reduced form of (p, b, (b^2 - d)/(4p)) with b the least nonnegative
/// solution of b^2 = d mod 4p.
QuadForm prime_class(std::int64_t p, std::int64_t d);

struct SplitPrimeReport {
  std::int64_t discriminant = 0;
  std::int64_t bound = 0;
  std::vector<std::pair<std::int64_t, QuadForm>> classes;  // by increasing prime
  bool distinct = true;
};

/// Classes of all split primes p <= bound; requires d fundamental and
/// bound <= sqrt(|d|)/2.
SplitPrimeReport split_prime_distinctness(std::int64_t d, std::int64_t bound);

/// Reduced primitive form counts for every |d| in [min_abs, max_abs],
/// found by walking all reduced forms in that range at once. Entry k is the
/// count for |d| = min_abs + k (zero when -(min_abs + k) is no discriminant).
std::vector<std::int64_t> class_numbers_in_range(std::int64_t min_abs, std::int64_t max_abs,
                                                 unsigned jobs = 1);

struct BrauerSiegelRow {
  std::int64_t discriminant = 0;  // negative
  std::int64_t h = 0;
  double ratio = 0;  // ln h / ln sqrt|d|
};

/// One row per fundamental discriminant with |d| in [min_abs, max_abs],
/// sorted by |d|.
std::vector<BrauerSiegelRow> brauer_siegel_table(std::int64_t min_abs, std::int64_t max_abs,
                                                 unsigned jobs = 1);

/// Median ratio of the rows with |d| in [lo, hi]; the mean of the middle two
/// for an even count.
double median_ratio(const std::vector<BrauerSiegelRow>& rows, std::int64_t lo, std::int64_t hi);

/// `discriminant,h,ratio` header and one line per row; ratio to 12 places.
std::string to_csv(const std::vector<BrauerSiegelRow>& rows);

}  // namespace cmtorus::quadforms
