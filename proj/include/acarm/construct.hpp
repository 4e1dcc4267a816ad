#pragma once

// The construction pipeline for a-Carmichael numbers:
//   1. Q: primes q in [y^theta / ln y, y^theta] with q = -1 mod alpha and
//      (q - 1) y-smooth; L = prod Q.
//   2. Blocks Q_i: products of A + 1 consecutive members of Q.
//   3. For every nonempty product d of blocks, the least k with d k + a prime;
//      the slice P_k is the largest bucket of primes sharing one k.
//   4. P: least prime = a mod L k, k' = (P - a) / (L k).
//   5. A subset of the slice with product 1 mod L k k' gives n' and n = P n',
//      which is checked independently before being returned.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acarm/groups.hpp"
#include "acarm/korselt.hpp"
#include "acarm/types.hpp"

namespace acarm::construct {

enum class Mode { strict, relaxed };

struct ConstructionParams {
  std::int64_t a = 1;
  std::uint64_t y = 20;
  double theta = 1.5;
  unsigned A = 1;
  std::uint64_t alpha = 1;
  std::uint64_t k_cap = 0;       // relaxed mode; k < k_cap
  std::uint64_t kprime_cap = 0;  // relaxed mode; k' <= kprime_cap
  Mode mode = Mode::relaxed;
  std::uint64_t seed = 0;
  /// Relaxed mode only: explicit pairwise-coprime block integers replacing
  /// steps 1-2. L is their product.
  std::vector<BigInt> blocks;
  groups::SubsetStrategy strategy = groups::SubsetStrategy::automatic;
  unsigned subset_rounds = 64;
  unsigned threads = 1;
};

/// Parses the flat `key = value` format; `#` starts a comment.
/// Keys: mode, a, y, theta, A, alpha, k_cap, kprime_cap, seed, blocks
/// (comma separated), strategy, subset_rounds, threads. Unknown keys throw.
ConstructionParams parse_params(std::string_view text);
std::string format_params(const ConstructionParams& p);

std::string to_string(Mode m);
std::string to_string(groups::SubsetStrategy s);

struct SmoothPrimeSet {
  std::vector<std::uint64_t> Q;
  BigInt L = 1;
  double lower = 0.0;  // y^theta / ln y
  double upper = 0.0;  // y^theta

  std::size_t omega() const { return Q.size(); }
};

SmoothPrimeSet build_Q(const ConstructionParams& params);

struct BlockSet {
  std::vector<BigInt> blocks;
  std::vector<std::uint64_t> leftover;
};

BlockSet build_blocks(const SmoothPrimeSet& Q, unsigned A);

struct SliceHit {
  BigInt d;
  BigInt p;
  std::uint64_t block_mask = 0;  // which blocks make up d
};

struct PrimeSlice {
  std::uint64_t k = 0;
  std::vector<SliceHit> hits;  // ascending d
};

struct SliceSearch {
  PrimeSlice best;
  std::size_t divisors = 0;         // nonempty block products tried
  std::size_t skipped_gcd = 0;      // d sharing a factor with a
  std::size_t budget_failures = 0;  // d with no prime below k_cap
  std::size_t distinct_k = 0;       // number of nonempty buckets
  /// Primes reached from two different d (necessarily with different k).
  std::size_t cross_slice_collisions = 0;
};

inline constexpr std::size_t kMaxBlocks = 24;

/// Tries every nonempty block product d, buckets the least-k hits by k and
/// returns the largest bucket (ties to the smallest k). Throws BudgetExceeded
/// when no d produced a prime, InvariantViolation on a repeated prime inside
/// the winning bucket.
SliceSearch find_best_slice(std::span<const BigInt> blocks, std::int64_t a, std::uint64_t k_cap,
                            unsigned threads = 1);

struct PrimeP {
  BigInt P;
  BigInt kprime;
};

/// Least prime P = a mod L k with P > a and k' = (P - a) / (L k) <= kprime_cap,
/// skipping any prime in `exclude`.
PrimeP find_P(const BigInt& L, std::uint64_t k, std::int64_t a, std::uint64_t kprime_cap,
              std::span<const BigInt> exclude = {});

/// The slice did not contain a subset with product 1 mod M.
class InsufficientPrimes : public BudgetExceeded {
 public:
  InsufficientPrimes(std::size_t slice_size, BigInt modulus, double eq1_bound);
  std::size_t slice_size;
  BigInt modulus;
  double eq1_bound;
};

struct ConstructionResult {
  ConstructionParams params;
  std::vector<std::uint64_t> Q;
  BigInt L;
  std::vector<BigInt> blocks;
  std::uint64_t k = 0;
  std::uint64_t k_cap = 0;
  std::uint64_t kprime_cap = 0;
  std::vector<SliceHit> slice;
  BigInt P;
  BigInt kprime;
  BigInt modulus;  // L k k'
  std::vector<SliceHit> chosen;
  BigInt n_prime;
  BigInt n;
  korselt::Certificate certificate;
  std::vector<std::string> trace;
  std::vector<std::pair<std::string, double>> timings_ms;
};

/// Reduces the slice mod L k k', finds a product-one subset, forms n = P n',
/// asserts the divisibility chain and certifies n with korselt::check.
ConstructionResult assemble(const PrimeSlice& slice, const BigInt& L, const PrimeP& big_prime,
                            std::uint64_t k, const ConstructionParams& params,
                            std::vector<std::string>* trace = nullptr);

/// Runs every stage. Deterministic for fixed params (including seed).
/// If a stage throws, the log gathered so far is moved into `failure_trace`.
ConstructionResult run_pipeline(const ConstructionParams& params,
                                std::vector<std::string>* failure_trace = nullptr);

/// Literal re-check of n' = 1, P = a mod L k k' and (p - a) | (n - a) for every
/// prime factor. Returns a description of the first failure, or empty.
std::string verify_chain(const ConstructionResult& r);

}  // namespace acarm::construct
