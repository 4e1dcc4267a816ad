#pragma once

// Least primes in arithmetic progressions, and empirical worst-case statistics
// for the first-prime bounds p << m (log m)^2 and p << m (log m)^A.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acarm/types.hpp"

namespace acarm::ap {

/// p = residue + k * modulus (or p = d * k + a in shifted form, where
/// modulus = d and residue = a).
struct ApHit {
  BigInt modulus;
  BigInt residue;
  BigInt p;
  BigInt k;
};

/// Smallest prime p <= cap with p == c mod m. c is normalized into [0, m).
/// Throws DomainError if gcd(c, m) > 1, except when the normalized c is itself
/// a prime equal to that gcd, which is then returned with k = 0.
/// Throws BudgetExceeded if no prime is found up to cap.
ApHit least_prime_in_ap(const BigInt& c, const BigInt& m, const BigInt& cap);

/// Least k with 1 <= k < k_cap such that d * k + a is a prime (> 1).
/// Throws DomainError if gcd(d, a) > 1 and BudgetExceeded once k reaches k_cap.
ApHit least_k_shift(const BigInt& d, std::int64_t a, std::uint64_t k_cap);

/// Same search starting from k_start with an inclusive upper bound, skipping
/// primes for which `excluded(p)` holds. Returns nullopt if none found.
/// Used where the caller needs an inclusive budget or an exclusion list.
std::optional<ApHit> scan_shift(const BigInt& d, std::int64_t a, std::uint64_t k_start,
                                std::uint64_t k_last,
                                const std::function<bool(const BigInt&)>& excluded = {});

struct HbStatistic {
  std::uint64_t m = 0;
  std::uint64_t worst_c = 0;
  std::uint64_t worst_p = 0;
  double ratio2 = 0.0;  // worst_p / (m (ln m)^2)
  double ratioA = 0.0;  // worst_p / (m (ln m)^A)
};

struct HbScanOptions {
  std::uint64_t m_lo = 3;
  std::uint64_t m_hi = 3;
  double A = 2.0;
  std::uint64_t cap = 0;  // required; least primes above this abort the scan
  unsigned threads = 1;
};

inline constexpr std::uint64_t kHbMaxModulus = std::uint64_t{1} << 20;

/// For every m in [m_lo, m_hi] with m >= 3, the worst least prime over all
/// residues coprime to m. Moduli below 3 are skipped (ln m <= ln 2 makes the
/// ratios meaningless). Output ordered by m and identical for any thread count.
std::vector<HbStatistic> hb_scan(const HbScanOptions& options);

/// Header row then one row per statistic, ratios fixed to 6 decimals.
std::string to_csv(const std::vector<HbStatistic>& rows);

}  // namespace acarm::ap
