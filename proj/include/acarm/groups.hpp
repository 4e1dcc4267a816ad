#pragma once

// Unit groups mod L: the Davenport-type constant n(L) for sets of distinct
// units, its upper bound lambda(L) (1 + ln(L / lambda(L))), and solvers for
// "find a nonempty subset whose product is 1 mod M".

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "acarm/types.hpp"

namespace acarm::groups {

using Rational = boost::multiprecision::mpq_rational;

struct GroupBoundReport {
  BigInt L;
  BigInt lambda;
  double eq1_bound = 0.0;  // lambda (1 + ln(L / lambda))
  std::optional<std::uint64_t> n_exact;
  std::optional<double> log_e3y_bound;  // 3 y theta, when y and theta are supplied

  /// e^{3 y theta}; +inf once it leaves double range.
  std::optional<double> e3y_bound() const;
};

/// lambda(L) and the real-valued bound on n(L). Requires L >= 2.
GroupBoundReport eq1_bound(const BigInt& L);

struct LambdaSmoothBound {
  double log_bound = 0.0;  // 2 y theta
  double bound = 0.0;      // e^{2 y theta}, +inf on overflow
  /// prod over primes r <= y of r^{a_r}, a_r maximal with r^{a_r} <= y^theta.
  BigInt exact_product;
};

/// Requires y >= 2 and 1 < theta < 2.
LambdaSmoothBound lambda_smooth_bound(std::uint64_t y, double theta);

/// Exact n(L): one more than the largest set of distinct units mod L with no
/// nonempty subset of product 1. Exhaustive search; throws DomainError when
/// phi(L) > size_cap.
std::uint64_t n_exact(std::uint64_t L, std::uint64_t size_cap = 24);

enum class SubsetStrategy { automatic, exhaustive, meet_in_middle, randomized };

/// Inclusive bounds on subset cardinality.
struct SizeWindow {
  std::size_t min = 1;
  std::size_t max = std::numeric_limits<std::size_t>::max();
};

struct SearchBudget {
  std::uint64_t seed = 0;
  unsigned rounds = 64;  // randomized strategy only
};

inline constexpr std::size_t kExhaustiveMax = 25;
inline constexpr std::size_t kMeetInMiddleMax = 40;

struct SubsetSolution {
  BigInt modulus;
  std::vector<BigInt> elements;   // as supplied
  std::vector<std::size_t> chosen;  // ascending indices into elements
  bool product_check = false;     // recomputed product == 1 mod modulus
};

/// Finds a nonempty subset of `elements` with product 1 mod M whose size lies in
/// `window`. `automatic` picks exhaustive up to 25 elements, meet-in-the-middle
/// up to 40, randomized beyond. Exhaustive and meet-in-the-middle return nullopt
/// only when no such subset exists; randomized samples `rounds` random windows of
/// at most 40 elements (seeded) and may miss. Throws DomainError on a non-unit.
std::optional<SubsetSolution> find_subset_product_one(
    std::span<const BigInt> elements, const BigInt& M,
    SubsetStrategy strategy = SubsetStrategy::automatic,
    std::optional<SizeWindow> window = std::nullopt, const SearchBudget& budget = {});

/// Number of nonempty subsets with product 1 mod M and size within `window`.
/// Requires at most 25 elements.
std::uint64_t count_subset_solutions(std::span<const BigInt> elements, const BigInt& M,
                                     std::optional<SizeWindow> window = std::nullopt);

/// C(r, t) / C(r, n), exact.
Rational binomial_ratio(std::uint64_t r, std::uint64_t t, std::uint64_t n);

/// Counting check for small instances: r = |elements| > t > n. Counts subsets
/// of size in [t - n, t] with product 1 and compares against C(r,t)/C(r,n).
struct CountingCheck {
  std::uint64_t count = 0;
  Rational bound;
  bool satisfied = false;  // count >= bound
};
CountingCheck counting_check(std::span<const BigInt> elements, const BigInt& M,
                             std::uint64_t t, std::uint64_t n);

}  // namespace acarm::groups
