#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace acarm {

/// Arbitrary-precision signed integer (GMP backed).
using BigInt = boost::multiprecision::mpz_int;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured search or factoring budget ran out before an answer was found.
/// Distinct from a negative answer: the question is still open.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed. Always a bug or a broken assumption.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

inline std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (v < 0) return std::nullopt;
  if (v == 0) return std::uint64_t{0};
  if (boost::multiprecision::msb(v) >= 64) return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Natural log of a positive integer, accurate for values far beyond double range.
double log_of(const BigInt& v);

}  // namespace acarm
