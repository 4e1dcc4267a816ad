#pragma once

// Deciding and enumerating a-Carmichael numbers: composite n such that
// p - a divides n - a for every prime p dividing n. a = 1 is the classical
// Korselt criterion.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acarm/arith.hpp"
#include "acarm/types.hpp"

namespace acarm::korselt {

struct CertificateEntry {
  BigInt p;
  BigInt divisor;   // p - a, signed
  BigInt quotient;  // (n - a) / (p - a)
};

/// Self-verifying witness of the a-Carmichael property.
struct Certificate {
  BigInt n;
  std::int64_t a = 0;
  std::vector<CertificateEntry> entries;
  bool squarefree = false;
  bool composite = false;

  /// Re-derives every claim from scratch: primality of each p, that the entries
  /// are exactly the distinct prime factors of n, and divisor * quotient == n - a.
  /// When `require_squarefree` is set, also checks that n is squarefree.
  bool verify(bool require_squarefree = true) const;
};

enum class Refutation {
  too_small,        // n < 2
  prime,            // n is prime
  not_squarefree,   // p^2 | n, only when squarefreeness is required
  factor_equals_a,  // some prime factor p == a, so p - a == 0
  divisibility,     // some p - a does not divide n - a
};

std::string to_string(Refutation r);

struct CheckResult {
  bool verdict = false;
  std::optional<Certificate> certificate;  // set iff verdict
  std::optional<Refutation> reason;        // set iff !verdict
  std::string detail;                      // human-readable reason, e.g. "9 ∤ 559"

  explicit operator bool() const { return verdict; }
};

/// Total predicate: every integer n is accepted. The first failing condition is
/// reported in the order too_small, prime, not_squarefree, factor_equals_a,
/// divisibility (prime factors ascending). Divisibility is by |p - a|.
/// Throws BudgetExceeded if n cannot be factored within `budget`.
CheckResult check(const BigInt& n, std::int64_t a, bool require_squarefree = true,
                  const arith::FactorBudget& budget = {});

/// All n <= limit with check(n, a, require_squarefree) true, ascending.
/// Uses a segmented cofactor sieve; the range is split across `threads`
/// workers with a deterministic merge.
std::vector<std::uint64_t> enumerate(std::int64_t a, std::uint64_t limit,
                                     bool require_squarefree = true, unsigned threads = 1);

/// b^n == b mod n for every 0 <= b < n. Stops at the first failing base.
bool fermat_cross_check(std::uint64_t n);

}  // namespace acarm::korselt
