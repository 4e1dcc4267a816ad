#include "acarm/ap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "acarm/arith.hpp"

namespace acarm::ap {
namespace {

constexpr std::uint64_t kWheelBound = 2000;

const std::vector<std::uint64_t>& wheel_primes() {
  static const std::vector<std::uint64_t> primes = arith::primes_up_to(kWheelBound);
  return primes;
}

std::uint64_t mod_small(const BigInt& v, std::uint64_t r) {
  BigInt m = v % r;
  if (m < 0) m += r;
  return m.convert_to<std::uint64_t>();
}

// d * k + a for k in [k_start, k_last] fits comfortably in a signed 64-bit word.
bool fits_fast_path(const BigInt& d, const BigInt& a, std::uint64_t k_last) {
  const BigInt top = d * k_last + abs(a);
  return top < (BigInt(1) << 62);
}

std::optional<ApHit> scan_fast(std::uint64_t d, std::int64_t a, std::uint64_t k_start,
                               std::uint64_t k_last,
                               const std::function<bool(const BigInt&)>& excluded) {
  for (std::uint64_t k = k_start; k <= k_last; ++k) {
    const std::int64_t p = static_cast<std::int64_t>(d * k) + a;
    if (p < 2 || !arith::is_prime_u64(static_cast<std::uint64_t>(p))) continue;
    if (excluded && excluded(BigInt(p))) continue;
    return ApHit{BigInt(d), BigInt(a), BigInt(p), BigInt(k)};
  }
  return std::nullopt;
}

// Candidates are stepped through a wheel of small primes so that only
// survivors reach Miller-Rabin.
std::optional<ApHit> scan_big(const BigInt& d, const BigInt& a, std::uint64_t k_start,
                              std::uint64_t k_last,
                              const std::function<bool(const BigInt&)>& excluded) {
  const auto& wheel = wheel_primes();
  std::vector<std::uint64_t> step(wheel.size()), cur(wheel.size());
  BigInt p = d * k_start + a;
  for (std::size_t i = 0; i < wheel.size(); ++i) {
    step[i] = mod_small(d, wheel[i]);
    cur[i] = mod_small(p, wheel[i]);
  }
  for (std::uint64_t k = k_start;; ++k) {
    bool candidate = p > 1;
    for (std::size_t i = 0; candidate && i < wheel.size(); ++i) {
      if (cur[i] == 0 && p != wheel[i]) candidate = false;
    }
    if (candidate && arith::probably_prime(p) && !(excluded && excluded(p))) {
      return ApHit{d, a, p, BigInt(k)};
    }
    if (k == k_last) break;
    p += d;
    for (std::size_t i = 0; i < wheel.size(); ++i) {
      cur[i] += step[i];
      if (cur[i] >= wheel[i]) cur[i] -= wheel[i];
    }
  }
  return std::nullopt;
}

std::optional<ApHit> scan_any(const BigInt& d, const BigInt& a, std::uint64_t k_start,
                              std::uint64_t k_last,
                              const std::function<bool(const BigInt&)>& excluded) {
  if (d < 1) throw DomainError("progression step must be positive, got " + d.str());
  if (k_start > k_last) return std::nullopt;
  if (fits_fast_path(d, a, k_last)) {
    return scan_fast(d.convert_to<std::uint64_t>(), a.convert_to<std::int64_t>(), k_start,
                     k_last, excluded);
  }
  return scan_big(d, a, k_start, k_last, excluded);
}

std::uint64_t euler_phi_u64(std::uint64_t m) {
  std::uint64_t phi = m;
  for (auto [p, e] : arith::factor_u64(m)) phi = phi / p * (p - 1);
  return phi;
}

HbStatistic scan_modulus(std::uint64_t m, double A, std::uint64_t cap,
                         const arith::PrimeSieve& sieve,
                         const std::vector<std::uint64_t>& primes) {
  std::vector<std::uint8_t> open(m, 0);
  for (std::uint64_t r = 0; r < m; ++r) open[r] = std::gcd(r, m) == 1;
  std::uint64_t remaining = euler_phi_u64(m);

  HbStatistic stat;
  stat.m = m;
  auto take = [&](std::uint64_t p) {
    const std::uint64_t r = p % m;
    if (!open[r]) return false;
    open[r] = 0;
    if (--remaining == 0) {
      stat.worst_c = r;
      stat.worst_p = p;
      return true;
    }
    return false;
  };

  bool done = false;
  for (std::uint64_t p : primes) {
    if (p > cap) break;
    if ((done = take(p))) break;
  }
  for (std::uint64_t p = sieve.limit() + 1; !done && p <= cap; ++p) {
    if (arith::is_prime_u64(p)) done = take(p);
  }
  if (!done) {
    const auto c = std::find(open.begin(), open.end(), 1) - open.begin();
    throw BudgetExceeded("hb_scan: no prime == " + std::to_string(c) + " mod " +
                         std::to_string(m) + " up to cap " + std::to_string(cap));
  }
  const double lm = std::log(static_cast<double>(m));
  stat.ratio2 = static_cast<double>(stat.worst_p) / (static_cast<double>(m) * lm * lm);
  stat.ratioA = static_cast<double>(stat.worst_p) / (static_cast<double>(m) * std::pow(lm, A));
  return stat;
}

}  // namespace

std::optional<ApHit> scan_shift(const BigInt& d, std::int64_t a, std::uint64_t k_start,
                                std::uint64_t k_last,
                                const std::function<bool(const BigInt&)>& excluded) {
  return scan_any(d, BigInt(a), k_start, k_last, excluded);
}

ApHit least_prime_in_ap(const BigInt& c, const BigInt& m, const BigInt& cap) {
  if (m < 1) throw DomainError("least_prime_in_ap: modulus must be positive");
  BigInt residue = c % m;
  if (residue < 0) residue += m;
  const BigInt g = gcd(residue, m);
  if (g != 1) {
    if (residue == g && arith::probably_prime(residue)) {
      if (residue > cap) throw BudgetExceeded("least_prime_in_ap: cap below " + residue.str());
      return ApHit{m, residue, residue, 0};
    }
    throw DomainError("least_prime_in_ap: gcd(" + residue.str() + ", " + m.str() + ") = " +
                      g.str() + ", no prime possible");
  }
  if (cap < residue) {
    throw BudgetExceeded("least_prime_in_ap: cap " + cap.str() + " below residue");
  }
  const BigInt k_last_big = (cap - residue) / m;
  const std::uint64_t k_last = k_last_big > BigInt(std::numeric_limits<std::uint64_t>::max())
                                   ? std::numeric_limits<std::uint64_t>::max()
                                   : k_last_big.convert_to<std::uint64_t>();
  auto hit = scan_any(m, residue, 0, k_last, {});
  if (!hit) {
    throw BudgetExceeded("least_prime_in_ap: no prime == " + residue.str() + " mod " + m.str() +
                         " up to cap " + cap.str());
  }
  return *hit;
}

ApHit least_k_shift(const BigInt& d, std::int64_t a, std::uint64_t k_cap) {
  if (d < 1) throw DomainError("least_k_shift: d must be positive");
  if (const BigInt g = gcd(d, BigInt(a)); g != 1) {
    throw DomainError("least_k_shift: gcd(" + d.str() + ", " + std::to_string(a) + ") = " +
                      g.str() + " divides every d*k + a");
  }
  std::optional<ApHit> hit;
  if (k_cap > 1) hit = scan_any(d, BigInt(a), 1, k_cap - 1, {});
  if (!hit) {
    throw BudgetExceeded("least_k_shift: no prime d*k + a with k < " + std::to_string(k_cap) +
                         " for (d, a) = (" + d.str() + ", " + std::to_string(a) + ")");
  }
  return *hit;
}

std::vector<HbStatistic> hb_scan(const HbScanOptions& options) {
  if (options.cap == 0) throw DomainError("hb_scan: cap must be given explicitly");
  if (options.m_hi > kHbMaxModulus) {
    throw DomainError("hb_scan: moduli above " + std::to_string(kHbMaxModulus) +
                      " are not supported");
  }
  const std::uint64_t lo = std::max<std::uint64_t>(options.m_lo, 3);
  if (options.m_hi < lo) return {};

  const std::uint64_t sieve_limit = std::min<std::uint64_t>(options.cap, std::uint64_t{1} << 32);
  const arith::PrimeSieve sieve(sieve_limit);
  const std::vector<std::uint64_t> primes = sieve.primes();

  const std::size_t count = options.m_hi - lo + 1;
  std::vector<HbStatistic> out(count);
  std::vector<std::exception_ptr> errors(count);
  auto work = [&](unsigned worker, unsigned stride) {
    for (std::size_t i = worker; i < count; i += stride) {
      try {
        out[i] = scan_modulus(lo + i, options.A, options.cap, sieve, primes);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string to_csv(const std::vector<HbStatistic>& rows) {
  std::string out = "m,worst_c,worst_p,ratio2,ratioA\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.6f,%.6f\n",
                  static_cast<unsigned long long>(r.m), static_cast<unsigned long long>(r.worst_c),
                  static_cast<unsigned long long>(r.worst_p), r.ratio2, r.ratioA);
    out += buf;
  }
  return out;
}

}  // namespace acarm::ap
