#pragma once

// Exact integer arithmetic: primality, factorization, smoothness, unit-group
// exponent and multiplicative order. Every other module builds on these.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "acarm/types.hpp"

namespace acarm::arith {

struct PrimePower {
  BigInt p;
  unsigned e = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition. `factors` is sorted by strictly increasing prime;
/// empty exactly when n == 1.
struct Factorization {
  BigInt n = 1;
  std::vector<PrimePower> factors;

  bool squarefree() const;
  /// Reassembled product of the prime powers.
  BigInt product() const;
  /// Largest prime factor; throws DomainError on n == 1.
  const BigInt& largest_prime() const;
};

enum class Verdict { prime, composite };

struct PrimalityResult {
  BigInt n;
  Verdict verdict = Verdict::composite;
  bool deterministic = true;
  /// Upper bound on the probability the verdict is wrong; 0 when deterministic.
  double error_bound = 0.0;

  bool is_prime() const { return verdict == Verdict::prime; }
};

/// Numbers below this are decided by a proven Miller-Rabin witness set.
/// It is 2^64: every uint64_t is handled deterministically.
inline constexpr unsigned kDeterministicBits = 64;
inline constexpr unsigned kDefaultRounds = 40;

struct FactorBudget {
  /// Inputs with more decimal digits than this are refused outright.
  unsigned max_digits = 200;
  /// Total Pollard-rho iterations allowed across the whole factorization.
  /// Inputs below 2^64 always finish quickly and are not metered.
  std::uint64_t max_rho_iterations = std::uint64_t{1} << 28;
};

// -- 64-bit primitives ------------------------------------------------------

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Sorted (prime, exponent) pairs; empty for n <= 1.
std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n);

// -- arbitrary precision ----------------------------------------------------

/// n < 2 yields a composite-by-convention verdict with deterministic certainty.
/// Inputs of at least 2^64 get `rounds` Miller-Rabin rounds with bases derived
/// deterministically from n, and error bound 4^-rounds.
PrimalityResult is_prime(const BigInt& n, unsigned rounds = kDefaultRounds);

/// Shorthand for is_prime(n).is_prime().
bool probably_prime(const BigInt& n);

/// Full factorization by trial division then Brent's rho with recursion.
/// Throws BudgetExceeded rather than returning a partial answer.
Factorization factor(const BigInt& n, const FactorBudget& budget = {});

/// P(n), the largest prime factor. Requires n >= 2.
BigInt largest_prime_factor(const BigInt& n, const FactorBudget& budget = {});

/// True iff every prime factor of n is at most y. n == 1 is smooth.
bool is_y_smooth(const BigInt& n, std::uint64_t y, const FactorBudget& budget = {});

/// Carmichael's function: the exponent of (Z/nZ)^x.
BigInt carmichael_lambda(const BigInt& n, const FactorBudget& budget = {});
BigInt carmichael_lambda(const Factorization& f);

BigInt euler_phi(const BigInt& n, const FactorBudget& budget = {});
BigInt euler_phi(const Factorization& f);

/// Least t >= 1 with u^t = 1 mod n. Throws DomainError when gcd(u, n) > 1.
BigInt multiplicative_order(const BigInt& u, const BigInt& n,
                            const FactorBudget& budget = {});

/// Modular inverse of u mod m; throws DomainError when it does not exist.
BigInt inverse_mod(const BigInt& u, const BigInt& m);

/// Bit-packed sieve of Eratosthenes over [0, limit].
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  /// Requires n <= limit().
  bool is_prime(std::uint64_t n) const {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    return !(composite_[n >> 7] >> ((n >> 1) & 63) & 1);
  }
  std::vector<std::uint64_t> primes() const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> composite_;  // odd numbers only
};

/// Primes up to `limit`, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace acarm::arith
