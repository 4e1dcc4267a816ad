#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "acarm/arith.hpp"
#include "acarm/groups.hpp"
#include "oracle.hpp"

using acarm::BigInt;
namespace groups = acarm::groups;

namespace {

std::vector<std::uint64_t> units(std::uint64_t L) {
  std::vector<std::uint64_t> u;
  for (std::uint64_t x = 1; x < L; ++x) {
    if (std::gcd(x, L) == 1) u.push_back(x);
  }
  return u;
}

/// One more than the largest product-one-free set of distinct units, by
/// dynamic programming over all subsets of the unit group.
std::uint64_t brute_n(std::uint64_t L) {
  const auto u = units(L);
  const std::size_t m = u.size();
  std::vector<std::uint64_t> prod(std::size_t{1} << m, 1 % L);
  std::vector<bool> free(std::size_t{1} << m, false);
  free[0] = true;
  std::uint64_t best = 0;
  for (std::size_t mask = 1; mask < prod.size(); ++mask) {
    const unsigned low = __builtin_ctzll(mask);
    prod[mask] = prod[mask & (mask - 1)] * u[low] % L;
    bool ok = prod[mask] != 1 % L;
    for (std::size_t i = 0; ok && i < m; ++i) {
      if (mask >> i & 1) ok = free[mask & ~(std::size_t{1} << i)];
    }
    free[mask] = ok;
    if (ok) best = std::max<std::uint64_t>(best, __builtin_popcountll(mask));
  }
  return best + 1;
}

std::vector<BigInt> big(std::initializer_list<std::uint64_t> xs) {
  return {xs.begin(), xs.end()};
}

std::uint64_t brute_count(const std::vector<std::uint64_t>& xs, std::uint64_t M, std::size_t lo,
                          std::size_t hi) {
  std::uint64_t count = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << xs.size()); ++mask) {
    const std::size_t size = __builtin_popcountll(mask);
    if (size < lo || size > hi) continue;
    std::uint64_t p = 1 % M;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (mask >> i & 1) p = p * xs[i] % M;
    }
    count += p == 1 % M;
  }
  return count;
}

}  // namespace

TEST(Eq1Bound, FrozenValues) {
  auto r = groups::eq1_bound(BigInt(8));
  EXPECT_EQ(r.lambda, 2);
  EXPECT_NEAR(r.eq1_bound, 2.0 * (1.0 + std::log(4.0)), 1e-12);
  r = groups::eq1_bound(BigInt(561));
  EXPECT_EQ(r.lambda, 80);
  EXPECT_NEAR(r.eq1_bound, 80.0 * (1.0 + std::log(561.0 / 80.0)), 1e-9);
  EXPECT_THROW(groups::eq1_bound(BigInt(1)), acarm::DomainError);
}

TEST(NExact, FrozenValues) {
  EXPECT_EQ(groups::n_exact(8), 3u);
  EXPECT_EQ(groups::n_exact(3), 2u);
}

TEST(NExact, MatchesSubsetDynamicProgramme) {
  for (std::uint64_t L = 2; L <= 60; ++L) {
    if (oracle::phi(L) > 16) continue;
    ASSERT_EQ(groups::n_exact(L), brute_n(L)) << L;
  }
}

TEST(NExact, RespectsBound) {
  for (std::uint64_t L = 2; L <= 200; ++L) {
    if (oracle::phi(L) > 20) continue;
    const auto r = groups::eq1_bound(BigInt(L));
    EXPECT_LT(static_cast<double>(groups::n_exact(L, 20)), r.eq1_bound) << L;
  }
}

TEST(NExact, CapIsEnforced) {
  EXPECT_THROW(groups::n_exact(101, 20), acarm::DomainError);
}

TEST(LambdaSmooth, FrozenValues) {
  auto b = groups::lambda_smooth_bound(5, 1.5);
  EXPECT_NEAR(b.log_bound, 15.0, 1e-12);
  EXPECT_EQ(b.exact_product, 8 * 9 * 5);
  b = groups::lambda_smooth_bound(2, 1.1);
  EXPECT_NEAR(b.log_bound, 4.4, 1e-12);
  EXPECT_EQ(b.exact_product, 2);
  EXPECT_THROW(groups::lambda_smooth_bound(5, 2.0), acarm::DomainError);
  EXPECT_THROW(groups::lambda_smooth_bound(1, 1.5), acarm::DomainError);
}

TEST(LambdaSmooth, ProductIsBelowBound) {
  for (std::uint64_t y = 2; y < 60; ++y) {
    for (double theta : {1.1, 1.5, 1.9}) {
      const auto b = groups::lambda_smooth_bound(y, theta);
      // Independent rebuild of the product.
      BigInt expect = 1;
      const double cap = std::pow(static_cast<double>(y), theta);
      for (std::uint64_t r = 2; r <= y; ++r) {
        if (!oracle::is_prime(r)) continue;
        std::uint64_t pw = r;
        while (static_cast<double>(pw * r) <= cap) pw *= r;
        expect *= pw;
      }
      EXPECT_EQ(b.exact_product, expect) << y << " " << theta;
      EXPECT_LE(acarm::log_of(b.exact_product), b.log_bound);
    }
  }
}

TEST(SubsetProduct, FrozenValues) {
  const auto e = big({3, 5, 7});
  auto s = groups::find_subset_product_one(e, BigInt(8));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->chosen, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(s->product_check);

  const auto none = big({3, 5});
  EXPECT_FALSE(groups::find_subset_product_one(none, BigInt(8)));
}

TEST(SubsetProduct, NonUnitIsRejected) {
  const auto e = big({3, 6});
  EXPECT_THROW(groups::find_subset_product_one(e, BigInt(8)), acarm::DomainError);
}

TEST(SubsetProduct, StrategiesAgreeOnExistence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t M = 3 + rng() % 5000;
    std::vector<std::uint64_t> xs;
    const std::size_t r = 1 + rng() % 14;
    while (xs.size() < r) {
      const std::uint64_t x = 1 + rng() % (M - 1);
      if (std::gcd(x, M) == 1) xs.push_back(x);
    }
    const std::vector<BigInt> e(xs.begin(), xs.end());
    const std::size_t lo = 1 + rng() % 3, hi = lo + rng() % r;
    const groups::SizeWindow w{lo, hi};
    const bool exists = brute_count(xs, M, lo, hi) > 0;
    for (auto strategy : {groups::SubsetStrategy::exhaustive,
                          groups::SubsetStrategy::meet_in_middle}) {
      const auto s = groups::find_subset_product_one(e, BigInt(M), strategy, w);
      ASSERT_EQ(s.has_value(), exists) << trial;
      if (!s) continue;
      std::uint64_t p = 1;
      for (auto i : s->chosen) p = p * xs[i] % M;
      EXPECT_EQ(p, 1u);
      EXPECT_GE(s->chosen.size(), lo);
      EXPECT_LE(s->chosen.size(), hi);
    }
  }
}

TEST(SubsetProduct, RandomizedIsSeededAndVerified) {
  // 60 random units mod a prime near 10^6: far more subsets than group elements.
  const BigInt M = 1000003;
  std::vector<BigInt> e;
  std::mt19937_64 rng(5);
  while (e.size() < 60) e.push_back(BigInt(1 + rng() % 1000002));
  groups::SearchBudget budget{42, 16};
  const auto a = groups::find_subset_product_one(e, M, groups::SubsetStrategy::randomized,
                                                 std::nullopt, budget);
  const auto b = groups::find_subset_product_one(e, M, groups::SubsetStrategy::randomized,
                                                 std::nullopt, budget);
  ASSERT_TRUE(a);
  ASSERT_TRUE(b);
  EXPECT_EQ(a->chosen, b->chosen);
  BigInt p = 1;
  for (auto i : a->chosen) p = p * e[i] % M;
  EXPECT_EQ(p, 1);
}

TEST(SubsetCount, MatchesEnumeration) {
  const auto e = big({1, 3, 5, 7});
  EXPECT_EQ(groups::count_subset_solutions(e, BigInt(8), groups::SizeWindow{1, 4}),
            brute_count({1, 3, 5, 7}, 8, 1, 4));
}

TEST(Binomial, RatioIsExact) {
  for (std::uint64_t r = 3; r < 30; ++r) {
    for (std::uint64_t t = 2; t < r; ++t) {
      for (std::uint64_t n = 1; n < t; ++n) {
        EXPECT_EQ(groups::binomial_ratio(r, t, n),
                  groups::Rational(oracle::binom(r, t), oracle::binom(r, n)));
      }
    }
  }
}

TEST(CountingCheck, RandomInstances) {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 30) {
    const std::uint64_t M = 3 + rng() % 48;
    const auto u = units(M);
    if (u.size() > 16 || u.size() < 4) continue;
    const std::uint64_t n = groups::n_exact(M, 16);
    std::vector<std::uint64_t> xs = u;
    std::shuffle(xs.begin(), xs.end(), rng);
    xs.resize(std::min<std::size_t>(xs.size(), 15));
    if (xs.size() <= n + 1) continue;
    const std::uint64_t t = n + 1 + rng() % (xs.size() - n - 1);
    const std::vector<BigInt> e(xs.begin(), xs.end());
    const auto c = groups::counting_check(e, BigInt(M), t, n);
    EXPECT_EQ(c.count, brute_count(xs, M, t - n, t));
    EXPECT_EQ(c.bound, groups::Rational(oracle::binom(xs.size(), t), oracle::binom(xs.size(), n)));
    EXPECT_TRUE(c.satisfied) << "M=" << M << " r=" << xs.size() << " t=" << t << " n=" << n;
    ++checked;
  }
}

TEST(CountingCheck, RequiresOrderedSizes) {
  const auto e = big({1, 3, 5, 7});
  EXPECT_THROW(groups::counting_check(e, BigInt(8), 3, 3), acarm::DomainError);
  EXPECT_THROW(groups::counting_check(e, BigInt(8), 4, 3), acarm::DomainError);
}
