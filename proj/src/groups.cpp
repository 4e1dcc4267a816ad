#include "acarm/groups.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "acarm/arith.hpp"

namespace acarm::groups {
namespace {

// Multiplicative group arithmetic mod m with a machine-word or GMP backing.
// `key` is a 64-bit digest used for hashing; equal values have equal keys.
struct WordRing {
  using value_type = std::uint64_t;
  std::uint64_t m;

  value_type one() const { return 1 % m; }
  value_type mul(value_type a, value_type b) const { return arith::mul_mod(a, b, m); }
  value_type from(const BigInt& v) const { return mod_nonneg(v).convert_to<std::uint64_t>(); }
  value_type inverse(value_type a) const {
    return arith::inverse_mod(BigInt(a), BigInt(m)).convert_to<std::uint64_t>();
  }
  std::uint64_t key(value_type v) const { return v; }
  static constexpr bool exact_keys = true;

  BigInt mod_nonneg(const BigInt& v) const {
    BigInt r = v % m;
    if (r < 0) r += m;
    return r;
  }
};

struct BigRing {
  using value_type = BigInt;
  BigInt m;

  value_type one() const { return BigInt(1) % m; }
  value_type mul(const value_type& a, const value_type& b) const { return (a * b) % m; }
  value_type from(const BigInt& v) const {
    BigInt r = v % m;
    if (r < 0) r += m;
    return r;
  }
  value_type inverse(const value_type& a) const { return arith::inverse_mod(a, m); }
  std::uint64_t key(const value_type& v) const {
    return static_cast<std::uint64_t>(mpz_getlimbn(v.backend().data(), 0));
  }
  static constexpr bool exact_keys = false;
};

struct Window {
  std::size_t lo;
  std::size_t hi;
};

Window resolve(std::optional<SizeWindow> w, std::size_t n) {
  Window out{1, n};
  if (w) {
    out.lo = std::max<std::size_t>(w->min, 1);
    out.hi = std::min(w->max, n);
  }
  return out;
}

template <class Ring>
bool exhaustive_dfs(const Ring& ring, const std::vector<typename Ring::value_type>& vals,
                    Window w, std::size_t start, const typename Ring::value_type& prod,
                    std::vector<std::size_t>& chosen) {
  const auto one = ring.one();
  for (std::size_t i = start; i < vals.size(); ++i) {
    const auto next = ring.mul(prod, vals[i]);
    chosen.push_back(i);
    const std::size_t size = chosen.size();
    if (size >= w.lo && next == one) return true;
    if (size < w.hi && exhaustive_dfs(ring, vals, w, i + 1, next, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

template <class Ring>
std::uint64_t count_dfs(const Ring& ring, const std::vector<typename Ring::value_type>& vals,
                        Window w, std::size_t start, std::size_t size,
                        const typename Ring::value_type& prod) {
  std::uint64_t total = 0;
  const auto one = ring.one();
  for (std::size_t i = start; i < vals.size(); ++i) {
    const auto next = ring.mul(prod, vals[i]);
    if (size + 1 >= w.lo && next == one) ++total;
    if (size + 1 < w.hi) total += count_dfs(ring, vals, w, i + 1, size + 1, next);
  }
  return total;
}

template <class Ring>
typename Ring::value_type product_of(const Ring& ring,
                                     const std::vector<typename Ring::value_type>& vals,
                                     std::size_t offset, std::uint64_t mask) {
  auto acc = ring.one();
  for (std::size_t j = 0; mask; ++j, mask >>= 1) {
    if (mask & 1) acc = ring.mul(acc, vals[offset + j]);
  }
  return acc;
}

// Splits vals into halves A (first h) and B; tabulates every A subset product
// keyed by digest, then walks B subsets looking up the inverse of their product.
// Both walks go in Gray-code order so each step costs one multiplication.
template <class Ring>
std::optional<std::vector<std::size_t>> meet_in_middle(
    const Ring& ring, const std::vector<typename Ring::value_type>& vals, Window w) {
  using V = typename Ring::value_type;
  const std::size_t n = vals.size();
  if (n == 0 || w.lo > w.hi) return std::nullopt;
  const std::size_t h = n / 2;
  const std::size_t nb = n - h;

  std::vector<V> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = ring.inverse(vals[i]);

  struct Entry {
    std::uint64_t key;
    std::uint32_t mask;
    bool operator<(const Entry& o) const { return key != o.key ? key < o.key : mask < o.mask; }
  };
  std::vector<Entry> table;
  table.reserve(std::size_t{1} << h);
  {
    V prod = ring.one();
    std::uint32_t mask = 0;
    table.push_back({ring.key(prod), 0});
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << h); ++g) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(g));
      mask ^= std::uint32_t{1} << bit;
      prod = ring.mul(prod, (mask >> bit & 1) ? vals[bit] : inv[bit]);
      table.push_back({ring.key(prod), mask});
    }
  }
  std::sort(table.begin(), table.end());

  V target = ring.one();  // inverse of the current B product
  std::uint64_t bmask = 0;
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << nb); ++g) {
    if (g > 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(g));
      bmask ^= std::uint64_t{1} << bit;
      target = ring.mul(target, (bmask >> bit & 1) ? inv[h + bit] : vals[h + bit]);
    }
    const std::size_t bsize = static_cast<std::size_t>(std::popcount(bmask));
    if (bsize > w.hi) continue;
    const std::uint64_t key = ring.key(target);
    auto it = std::lower_bound(table.begin(), table.end(), Entry{key, 0});
    for (; it != table.end() && it->key == key; ++it) {
      const std::size_t size = bsize + static_cast<std::size_t>(std::popcount(it->mask));
      if (size == 0 || size < w.lo || size > w.hi) continue;
      if constexpr (!Ring::exact_keys) {
        if (product_of(ring, vals, 0, it->mask) != target) continue;
      }
      std::vector<std::size_t> chosen;
      for (std::size_t j = 0; j < h; ++j) {
        if (it->mask >> j & 1) chosen.push_back(j);
      }
      for (std::size_t j = 0; j < nb; ++j) {
        if (bmask >> j & 1) chosen.push_back(h + j);
      }
      return chosen;
    }
  }
  return std::nullopt;
}

// Repeatedly draws a random sub-collection of at most kMeetInMiddleMax elements
// and runs meet-in-the-middle on it. Seeded with a hand-rolled Fisher-Yates so
// the draw sequence does not depend on the standard library implementation.
template <class Ring>
std::optional<std::vector<std::size_t>> randomized(
    const Ring& ring, const std::vector<typename Ring::value_type>& vals, Window w,
    const SearchBudget& budget) {
  using V = typename Ring::value_type;
  const std::size_t n = vals.size();
  const std::size_t take = std::min(n, kMeetInMiddleMax);
  std::mt19937_64 rng(budget.seed);
  std::vector<std::size_t> order(n);
  for (unsigned round = 0; round < budget.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(order[i], order[j]);
    }
    std::vector<V> sample(take);
    for (std::size_t i = 0; i < take; ++i) sample[i] = vals[order[i]];
    Window sw{w.lo, std::min(w.hi, take)};
    if (auto found = meet_in_middle(ring, sample, sw)) {
      std::vector<std::size_t> chosen;
      for (auto i : *found) chosen.push_back(order[i]);
      return chosen;
    }
  }
  return std::nullopt;
}

template <class Ring>
std::optional<std::vector<std::size_t>> solve(const Ring& ring, std::span<const BigInt> elements,
                                              SubsetStrategy strategy, Window w,
                                              const SearchBudget& budget) {
  std::vector<typename Ring::value_type> vals;
  vals.reserve(elements.size());
  for (const auto& e : elements) vals.push_back(ring.from(e));
  if (w.lo > w.hi) return std::nullopt;

  switch (strategy) {
    case SubsetStrategy::exhaustive: {
      std::vector<std::size_t> chosen;
      if (exhaustive_dfs(ring, vals, w, 0, ring.one(), chosen)) return chosen;
      return std::nullopt;
    }
    case SubsetStrategy::meet_in_middle:
      if (vals.size() > 2 * 31) {
        throw DomainError("meet_in_middle: at most 62 elements supported");
      }
      return meet_in_middle(ring, vals, w);
    case SubsetStrategy::randomized:
      return randomized(ring, vals, w, budget);
    case SubsetStrategy::automatic:
      break;
  }
  if (vals.size() <= kExhaustiveMax) return solve(ring, elements, SubsetStrategy::exhaustive, w, budget);
  if (vals.size() <= kMeetInMiddleMax) return meet_in_middle(ring, vals, w);
  return randomized(ring, vals, w, budget);
}

void require_units(std::span<const BigInt> elements, const BigInt& M) {
  if (M < 2) throw DomainError("modulus must be at least 2, got " + M.str());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (gcd(elements[i], M) != 1) {
      throw DomainError("element " + std::to_string(i) + " (" + elements[i].str() +
                        ") is not a unit mod " + M.str());
    }
  }
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;
  }
  return acc;
}

}  // namespace

std::optional<double> GroupBoundReport::e3y_bound() const {
  if (!log_e3y_bound) return std::nullopt;
  return std::exp(*log_e3y_bound);
}

GroupBoundReport eq1_bound(const BigInt& L) {
  if (L < 2) throw DomainError("eq1_bound: L must be at least 2");
  GroupBoundReport report;
  report.L = L;
  report.lambda = arith::carmichael_lambda(L);
  const double log_lambda = log_of(report.lambda);
  report.eq1_bound = std::exp(log_lambda) * (1.0 + log_of(L) - log_lambda);
  return report;
}

LambdaSmoothBound lambda_smooth_bound(std::uint64_t y, double theta) {
  if (y < 2) throw DomainError("lambda_smooth_bound: y must be at least 2");
  if (!(theta > 1.0 && theta < 2.0)) {
    throw DomainError("lambda_smooth_bound: theta must lie strictly between 1 and 2");
  }
  LambdaSmoothBound out;
  out.log_bound = 2.0 * static_cast<double>(y) * theta;
  out.bound = std::exp(out.log_bound);
  const double log_cap = theta * std::log(static_cast<double>(y)) + 1e-12;
  out.exact_product = 1;
  for (std::uint64_t r : arith::primes_up_to(y)) {
    const double lr = std::log(static_cast<double>(r));
    unsigned a = 1;
    while (static_cast<double>(a + 1) * lr <= log_cap) ++a;
    out.exact_product *= boost::multiprecision::pow(BigInt(r), a);
  }
  return out;
}

std::uint64_t n_exact(std::uint64_t L, std::uint64_t size_cap) {
  if (L < 2) throw DomainError("n_exact: L must be at least 2");
  std::vector<std::uint64_t> units;
  for (std::uint64_t u = 1; u < L; ++u) {
    if (std::gcd(u, L) == 1) units.push_back(u);
  }
  if (units.size() > size_cap) {
    throw DomainError("n_exact: phi(" + std::to_string(L) + ") = " +
                      std::to_string(units.size()) + " exceeds size cap " +
                      std::to_string(size_cap));
  }
  std::vector<std::uint64_t> inv(L, 0);
  for (auto u : units) inv[u] = arith::inverse_mod(BigInt(u), BigInt(L)).convert_to<std::uint64_t>();

  // Sigma is the bitset of nonempty subset products of the current free set.
  const std::size_t words = (L + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  auto test = [](const Bits& b, std::uint64_t i) { return b[i >> 6] >> (i & 63) & 1; };
  auto set = [](Bits& b, std::uint64_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); };

  std::size_t best = 0;
  auto dfs = [&](auto&& self, std::size_t start, std::size_t size, const Bits& sigma) -> void {
    best = std::max(best, size);
    for (std::size_t i = start; i < units.size(); ++i) {
      if (size + (units.size() - i) <= best) return;
      const std::uint64_t u = units[i];
      if (u == 1 || test(sigma, inv[u])) continue;
      Bits next = sigma;
      set(next, u);
      for (std::uint64_t s = 0; s < L; ++s) {
        if (test(sigma, s)) set(next, u * s % L);
      }
      self(self, i + 1, size + 1, next);
    }
  };
  dfs(dfs, 0, 0, Bits(words, 0));
  return best + 1;
}

std::optional<SubsetSolution> find_subset_product_one(std::span<const BigInt> elements,
                                                      const BigInt& M, SubsetStrategy strategy,
                                                      std::optional<SizeWindow> window,
                                                      const SearchBudget& budget) {
  require_units(elements, M);
  const Window w = resolve(window, elements.size());
  std::optional<std::vector<std::size_t>> chosen;
  if (auto small = to_u64(M)) {
    chosen = solve(WordRing{*small}, elements, strategy, w, budget);
  } else {
    chosen = solve(BigRing{M}, elements, strategy, w, budget);
  }
  if (!chosen) return std::nullopt;

  std::sort(chosen->begin(), chosen->end());
  SubsetSolution sol;
  sol.modulus = M;
  sol.elements.assign(elements.begin(), elements.end());
  sol.chosen = std::move(*chosen);
  BigInt prod = 1;
  for (auto i : sol.chosen) prod = prod * elements[i] % M;
  if (prod < 0) prod += M;
  sol.product_check = prod == 1;
  if (!sol.product_check || sol.chosen.empty()) {
    throw InvariantViolation("subset solver returned a subset whose product is not 1");
  }
  return sol;
}

std::uint64_t count_subset_solutions(std::span<const BigInt> elements, const BigInt& M,
                                     std::optional<SizeWindow> window) {
  if (elements.size() > kExhaustiveMax) {
    throw DomainError("count_subset_solutions: at most 25 elements");
  }
  require_units(elements, M);
  const Window w = resolve(window, elements.size());
  if (w.lo > w.hi) return 0;
  if (auto small = to_u64(M)) {
    WordRing ring{*small};
    std::vector<std::uint64_t> vals;
    for (const auto& e : elements) vals.push_back(ring.from(e));
    return count_dfs(ring, vals, w, 0, 0, ring.one());
  }
  BigRing ring{M};
  std::vector<BigInt> vals;
  for (const auto& e : elements) vals.push_back(ring.from(e));
  return count_dfs(ring, vals, w, 0, 0, ring.one());
}

Rational binomial_ratio(std::uint64_t r, std::uint64_t t, std::uint64_t n) {
  const BigInt den = binomial(r, n);
  if (den == 0) throw DomainError("binomial_ratio: C(r, n) is zero");
  return Rational(binomial(r, t), den);
}

CountingCheck counting_check(std::span<const BigInt> elements, const BigInt& M,
                             std::uint64_t t, std::uint64_t n) {
  const std::uint64_t r = elements.size();
  if (!(r > t && t > n)) {
    throw DomainError("counting_check: requires r > t > n");
  }
  CountingCheck out;
  out.count = count_subset_solutions(elements, M, SizeWindow{t - n, t});
  out.bound = binomial_ratio(r, t, n);
  out.satisfied = Rational(out.count) >= out.bound;
  return out;
}

}  // namespace acarm::groups
