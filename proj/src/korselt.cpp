#include "acarm/korselt.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace acarm::korselt {
namespace {

CheckResult refute(Refutation reason, std::string detail) {
  CheckResult r;
  r.reason = reason;
  r.detail = std::move(detail);
  return r;
}

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// One segment [lo, hi) of the cofactor sieve. `base` holds every prime up to
// sqrt(hi - 1).
std::vector<std::uint64_t> scan_segment(std::uint64_t lo, std::uint64_t hi, std::int64_t a,
                                        bool require_squarefree,
                                        const std::vector<std::uint64_t>& base) {
  const std::size_t len = hi - lo;
  std::vector<std::uint64_t> rem(len);
  std::vector<std::uint8_t> multiplicity(len, 0);
  std::vector<std::uint8_t> failed(len, 0);
  std::vector<std::uint8_t> squarefree(len, 1);
  for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i;

  auto test_prime = [&](std::size_t i, std::uint64_t p) {
    const i128 n = static_cast<i128>(lo + i);
    const i128 shift = static_cast<i128>(p) - a;
    if (shift == 0 || (n - a) % abs128(shift) != 0) failed[i] = 1;
  };

  for (std::uint64_t p : base) {
    if (p * p >= hi) break;
    std::uint64_t start = (lo + p - 1) / p * p;
    if (start < p) start = p;
    for (std::uint64_t m = start; m < hi; m += p) {
      const std::size_t i = m - lo;
      unsigned e = 0;
      while (rem[i] % p == 0) {
        rem[i] /= p;
        ++e;
      }
      multiplicity[i] = static_cast<std::uint8_t>(multiplicity[i] + e);
      if (e > 1) squarefree[i] = 0;
      if (!failed[i]) test_prime(i, p);
    }
  }

  std::vector<std::uint64_t> hits;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t n = lo + i;
    if (n < 2) continue;
    if (rem[i] > 1) {
      multiplicity[i] = static_cast<std::uint8_t>(multiplicity[i] + 1);
      if (!failed[i]) test_prime(i, rem[i]);
    }
    if (multiplicity[i] < 2 || failed[i]) continue;
    if (require_squarefree && !squarefree[i]) continue;
    hits.push_back(n);
  }
  return hits;
}

}  // namespace

std::string to_string(Refutation r) {
  switch (r) {
    case Refutation::too_small: return "too small";
    case Refutation::prime: return "prime";
    case Refutation::not_squarefree: return "not squarefree";
    case Refutation::factor_equals_a: return "prime factor equals a";
    case Refutation::divisibility: return "divisibility";
  }
  return "unknown";
}

bool Certificate::verify(bool require_squarefree) const {
  if (n < 2 || !composite) return false;
  if (require_squarefree && !squarefree) return false;
  if (entries.empty()) return false;
  const BigInt shifted = n - a;
  BigInt rest = n;
  BigInt previous = 0;
  bool is_squarefree = true;
  for (const auto& e : entries) {
    if (e.p <= previous || !arith::probably_prime(e.p)) return false;
    previous = e.p;
    if (e.divisor != e.p - a || e.divisor == 0) return false;
    if (e.divisor * e.quotient != shifted) return false;
    if (rest % e.p != 0) return false;
    rest /= e.p;
    if (rest % e.p == 0) {
      is_squarefree = false;
      while (rest % e.p == 0) rest /= e.p;
    }
  }
  if (rest != 1) return false;
  if (is_squarefree != squarefree) return false;
  // composite: more than one prime factor counted with multiplicity
  return entries.size() > 1 || !is_squarefree;
}

CheckResult check(const BigInt& n, std::int64_t a, bool require_squarefree,
                  const arith::FactorBudget& budget) {
  if (n < 2) return refute(Refutation::too_small, "n = " + n.str() + " < 2");
  if (arith::probably_prime(n)) return refute(Refutation::prime, n.str() + " is prime");

  const arith::Factorization f = arith::factor(n, budget);
  const bool squarefree = f.squarefree();
  if (require_squarefree && !squarefree) {
    for (const auto& [p, e] : f.factors) {
      if (e > 1) return refute(Refutation::not_squarefree, p.str() + "^2 | " + n.str());
    }
  }

  const BigInt shifted = n - a;
  Certificate cert{n, a, {}, squarefree, true};
  for (const auto& [p, e] : f.factors) {
    if (p == a) {
      return refute(Refutation::factor_equals_a, "prime factor " + p.str() + " equals a");
    }
    const BigInt divisor = p - a;
    if (shifted % abs(divisor) != 0) {
      return refute(Refutation::divisibility, BigInt(abs(divisor)).str() + " ∤ " + shifted.str());
    }
    cert.entries.push_back({p, divisor, shifted / divisor});
  }

  CheckResult r;
  r.verdict = true;
  r.certificate = std::move(cert);
  return r;
}

std::vector<std::uint64_t> enumerate(std::int64_t a, std::uint64_t limit,
                                     bool require_squarefree, unsigned threads) {
  if (limit < 2) throw DomainError("enumerate: limit must be at least 2");
  if (limit > (std::uint64_t{1} << 44)) throw DomainError("enumerate: limit above 2^44");

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const std::vector<std::uint64_t> base = arith::primes_up_to(root);

  constexpr std::uint64_t kSegment = std::uint64_t{1} << 16;
  const std::uint64_t segments = limit / kSegment + 1;
  std::vector<std::vector<std::uint64_t>> per_segment(segments);

  auto work = [&](unsigned worker, unsigned stride) {
    for (std::uint64_t s = worker; s < segments; s += stride) {
      const std::uint64_t lo = s * kSegment;
      const std::uint64_t hi = std::min(lo + kSegment, limit + 1);
      per_segment[s] = scan_segment(lo, hi, a, require_squarefree, base);
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  std::vector<std::uint64_t> out;
  for (auto& seg : per_segment) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

bool fermat_cross_check(std::uint64_t n) {
  if (n < 2) throw DomainError("fermat_cross_check: n must be at least 2");
  for (std::uint64_t b = 2; b < n; ++b) {
    if (arith::pow_mod(b, n, n) != b) return false;
  }
  return true;
}

}  // namespace acarm::korselt
