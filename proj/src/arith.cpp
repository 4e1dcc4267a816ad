#include "acarm/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <gmp.h>

namespace acarm {

double log_of(const BigInt& v) {
  if (v <= 0) throw DomainError("log_of: argument must be positive");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.backend().data());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace acarm

namespace acarm::arith {
namespace {

constexpr std::array<std::uint64_t, 12> kWitnesses64 = {2,  3,  5,  7,  11, 13,
                                                        17, 19, 23, 29, 31, 37};

constexpr std::uint64_t kTrialBound = 1000;

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(kTrialBound);
  return primes;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t base) {
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = pow_mod(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool miller_rabin_big(const BigInt& n, const BigInt& base) {
  BigInt d = n - 1;
  unsigned s = 0;
  while (!boost::multiprecision::bit_test(d, 0)) {
    d >>= 1;
    ++s;
  }
  const BigInt n_minus_1 = n - 1;
  BigInt x = boost::multiprecision::powm(base, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

std::uint64_t rho_u64(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = rho_u64(n);
  factor_u64_into(d, out);
  factor_u64_into(n / d, out);
}

// Brent's variant with batched gcds. Charges iterations against `remaining`.
BigInt rho_big(const BigInt& n, std::uint64_t& remaining) {
  for (unsigned c = 1;; ++c) {
    auto f = [&](const BigInt& x) { return BigInt((x * x + c) % n); };
    BigInt y = 2, x = 2, ys = 2, q = 1, g = 1;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        const std::uint64_t steps = std::min(m, r - k);
        if (steps > remaining) {
          throw BudgetExceeded("factor: Pollard rho iteration budget exhausted on " +
                               n.str());
        }
        remaining -= steps;
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = (q * abs(x - y)) % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_big_into(const BigInt& n, std::vector<BigInt>& out, std::uint64_t& remaining) {
  if (n == 1) return;
  if (auto small = to_u64(n)) {
    std::vector<std::uint64_t> primes;
    factor_u64_into(*small, primes);
    for (auto p : primes) out.emplace_back(p);
    return;
  }
  if (probably_prime(n)) {
    out.push_back(n);
    return;
  }
  const BigInt d = rho_big(n, remaining);
  factor_big_into(d, out, remaining);
  factor_big_into(n / d, out, remaining);
}

std::vector<PrimePower> collect(std::vector<BigInt> primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (auto& p : primes) {
    if (!out.empty() && out.back().p == p) {
      ++out.back().e;
    } else {
      out.push_back({std::move(p), 1});
    }
  }
  return out;
}

}  // namespace

// -- Factorization ----------------------------------------------------------

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& f) { return f.e == 1; });
}

BigInt Factorization::product() const {
  BigInt acc = 1;
  for (const auto& f : factors) acc *= boost::multiprecision::pow(f.p, f.e);
  return acc;
}

const BigInt& Factorization::largest_prime() const {
  if (factors.empty()) throw DomainError("largest prime factor of 1 is undefined");
  return factors.back().p;
}

// -- primality --------------------------------------------------------------

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
    if (n % p == 0) return n == p;
  }
  if (n < 53 * 53) return true;
  for (std::uint64_t base : kWitnesses64) {
    if (!miller_rabin_u64(n, base)) return false;
  }
  return true;
}

PrimalityResult is_prime(const BigInt& n, unsigned rounds) {
  PrimalityResult result{n, Verdict::composite, true, 0.0};
  if (n < 2) return result;
  if (auto small = to_u64(n)) {
    if (is_prime_u64(*small)) result.verdict = Verdict::prime;
    return result;
  }
  for (std::uint64_t p : small_primes()) {
    if (boost::multiprecision::integer_modulus(n, p) == 0) return result;
  }
  // Bases are a pure function of n so verdicts are reproducible.
  std::mt19937_64 rng(n.convert_to<std::uint64_t>() ^ 0x9e3779b97f4a7c15ULL);
  if (!miller_rabin_big(n, 2)) return result;
  for (unsigned i = 0; i < rounds; ++i) {
    const BigInt base = 3 + BigInt(rng()) % (n - 4);
    if (!miller_rabin_big(n, base)) return result;
  }
  result.verdict = Verdict::prime;
  result.deterministic = false;
  result.error_bound = std::pow(4.0, -static_cast<double>(rounds));
  return result;
}

bool probably_prime(const BigInt& n) { return is_prime(n).is_prime(); }

// -- factorization ----------------------------------------------------------

std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  if (n <= 1) return out;
  auto push = [&](std::uint64_t p) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  };
  for (std::uint64_t p : small_primes()) {
    if (p * p > n) break;
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  }
  if (n == 1) return out;
  if (n < kTrialBound * kTrialBound) {
    push(n);
    return out;
  }
  std::vector<std::uint64_t> rest;
  factor_u64_into(n, rest);
  std::sort(rest.begin(), rest.end());
  for (auto p : rest) push(p);
  return out;
}

Factorization factor(const BigInt& n, const FactorBudget& budget) {
  if (n < 1) throw DomainError("factor: n must be positive, got " + n.str());
  Factorization result{n, {}};
  const std::size_t digits = n.str().size();
  if (digits > budget.max_digits) {
    throw BudgetExceeded("factor: " + std::to_string(digits) + "-digit input exceeds the " +
                         std::to_string(budget.max_digits) + "-digit budget");
  }
  if (auto small = to_u64(n)) {
    for (auto [p, e] : factor_u64(*small)) result.factors.push_back({BigInt(p), e});
    return result;
  }
  BigInt rest = n;
  std::vector<BigInt> primes;
  for (std::uint64_t p : small_primes()) {
    while (boost::multiprecision::integer_modulus(rest, p) == 0) {
      primes.emplace_back(p);
      rest /= p;
    }
  }
  std::uint64_t remaining = budget.max_rho_iterations;
  factor_big_into(rest, primes, remaining);
  result.factors = collect(std::move(primes));
  return result;
}

BigInt largest_prime_factor(const BigInt& n, const FactorBudget& budget) {
  if (n < 2) throw DomainError("largest_prime_factor: n must be at least 2");
  return factor(n, budget).largest_prime();
}

bool is_y_smooth(const BigInt& n, std::uint64_t y, const FactorBudget& budget) {
  if (n < 1) throw DomainError("is_y_smooth: n must be positive");
  if (n == 1) return true;
  return factor(n, budget).largest_prime() <= y;
}

// -- unit group -------------------------------------------------------------

BigInt carmichael_lambda(const Factorization& f) {
  BigInt acc = 1;
  for (const auto& [p, e] : f.factors) {
    BigInt part;
    if (p == 2) {
      part = e == 1 ? BigInt(1) : e == 2 ? BigInt(2) : BigInt(1) << (e - 2);
    } else {
      part = boost::multiprecision::pow(p, e - 1) * (p - 1);
    }
    acc = boost::multiprecision::lcm(acc, part);
  }
  return acc;
}

BigInt carmichael_lambda(const BigInt& n, const FactorBudget& budget) {
  return carmichael_lambda(factor(n, budget));
}

BigInt euler_phi(const Factorization& f) {
  BigInt acc = 1;
  for (const auto& [p, e] : f.factors) acc *= boost::multiprecision::pow(p, e - 1) * (p - 1);
  return acc;
}

BigInt euler_phi(const BigInt& n, const FactorBudget& budget) {
  return euler_phi(factor(n, budget));
}

BigInt multiplicative_order(const BigInt& u, const BigInt& n, const FactorBudget& budget) {
  if (n < 2) throw DomainError("multiplicative_order: modulus must be at least 2");
  BigInt base = u % n;
  if (base < 0) base += n;
  if (gcd(base, n) != 1) {
    throw DomainError("multiplicative_order: " + u.str() + " is not a unit mod " + n.str() +
                      " (gcd " + BigInt(gcd(base, n)).str() + ")");
  }
  BigInt t = carmichael_lambda(n, budget);
  for (const auto& [r, e] : factor(t, budget).factors) {
    for (unsigned i = 0; i < e; ++i) {
      if (boost::multiprecision::powm(base, t / r, n) != 1) break;
      t /= r;
    }
  }
  return t;
}

BigInt inverse_mod(const BigInt& u, const BigInt& m) {
  BigInt result;
  if (m < 1 || mpz_invert(result.backend().data(), u.backend().data(), m.backend().data()) == 0) {
    throw DomainError("inverse_mod: " + u.str() + " is not invertible mod " + m.str());
  }
  return result;
}

// -- sieve ------------------------------------------------------------------

PrimeSieve::PrimeSieve(std::uint64_t limit)
    : limit_(limit), composite_((limit >> 7) + 1, 0) {
  composite_[0] |= 1;  // 1 is not prime
  for (std::uint64_t p = 3; p * p <= limit; p += 2) {
    if (composite_[p >> 7] >> ((p >> 1) & 63) & 1) continue;
    for (std::uint64_t q = p * p; q <= limit; q += 2 * p) {
      composite_[q >> 7] |= std::uint64_t{1} << ((q >> 1) & 63);
    }
  }
}

std::vector<std::uint64_t> PrimeSieve::primes() const {
  std::vector<std::uint64_t> out;
  if (limit_ >= 2) out.push_back(2);
  for (std::uint64_t n = 3; n <= limit_; n += 2) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  return PrimeSieve(limit).primes();
}

}  // namespace acarm::arith
