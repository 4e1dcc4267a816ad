#include <gtest/gtest.h>

#include <numeric>

#include "acarm/ap.hpp"
#include "acarm/arith.hpp"
#include "oracle.hpp"

using acarm::BigInt;
namespace ap = acarm::ap;

namespace {

std::uint64_t least_prime(std::uint64_t c, std::uint64_t m) {
  for (std::uint64_t p = c % m;; p += m) {
    if (oracle::is_prime(p)) return p;
  }
}

}  // namespace

TEST(LeastPrime, FrozenValues) {
  auto hit = ap::least_prime_in_ap(BigInt(1), BigInt(9), BigInt(1000000));
  EXPECT_EQ(hit.p, 19);
  EXPECT_EQ(hit.k, 2);
}

TEST(LeastPrime, AgreesWithLinearScan) {
  for (std::uint64_t m = 1; m < 60; ++m) {
    for (std::uint64_t c = 0; c < m; ++c) {
      if (std::gcd(c, m) != 1) continue;
      const auto hit = ap::least_prime_in_ap(BigInt(c), BigInt(m), BigInt(1000000));
      ASSERT_EQ(hit.p, least_prime(c, m)) << c << " mod " << m;
      EXPECT_EQ(hit.p, hit.residue + hit.k * hit.modulus);
    }
  }
}

TEST(LeastPrime, NormalizesResidue) {
  EXPECT_EQ(ap::least_prime_in_ap(BigInt(-1), BigInt(4), BigInt(100)).p, 3);
  EXPECT_EQ(ap::least_prime_in_ap(BigInt(13), BigInt(4), BigInt(100)).p, 5);
}

TEST(LeastPrime, SharedFactor) {
  EXPECT_THROW(ap::least_prime_in_ap(BigInt(4), BigInt(6), BigInt(100)), acarm::DomainError);
  const auto hit = ap::least_prime_in_ap(BigInt(3), BigInt(6), BigInt(100));
  EXPECT_EQ(hit.p, 3);
  EXPECT_EQ(hit.k, 0);
}

TEST(LeastPrime, CapIsExplicit) {
  EXPECT_THROW(ap::least_prime_in_ap(BigInt(1), BigInt(9), BigInt(18)), acarm::BudgetExceeded);
  EXPECT_EQ(ap::least_prime_in_ap(BigInt(1), BigInt(9), BigInt(19)).p, 19);
}

TEST(Shift, FrozenValues) {
  auto hit = ap::least_k_shift(BigInt(10), 1, 100);
  EXPECT_EQ(hit.k, 1);
  EXPECT_EQ(hit.p, 11);
  hit = ap::least_k_shift(BigInt(10), 3, 100);
  EXPECT_EQ(hit.p, 13);
  hit = ap::least_k_shift(BigInt(4), -1, 100);
  EXPECT_EQ(hit.k, 1);
  EXPECT_EQ(hit.p, 3);
}

TEST(Shift, AgreesWithLinearScan) {
  for (std::int64_t a : {-5, -1, 1, 2, 7}) {
    for (std::uint64_t d = 1; d < 300; ++d) {
      if (std::gcd(d, static_cast<std::uint64_t>(std::abs(a))) != 1) {
        EXPECT_THROW(ap::least_k_shift(BigInt(d), a, 10000), acarm::DomainError);
        continue;
      }
      std::uint64_t k = 1;
      while (true) {
        const std::int64_t p = static_cast<std::int64_t>(d * k) + a;
        if (p > 1 && oracle::is_prime(static_cast<std::uint64_t>(p))) break;
        ++k;
      }
      const auto hit = ap::least_k_shift(BigInt(d), a, 10000);
      ASSERT_EQ(hit.k, k) << d << " " << a;
      EXPECT_EQ(hit.p, BigInt(d) * k + a);
    }
  }
}

TEST(Shift, BudgetIsExclusive) {
  // 35 k + 1 is first prime at k = 2.
  EXPECT_THROW(ap::least_k_shift(BigInt(35), 1, 2), acarm::BudgetExceeded);
  EXPECT_EQ(ap::least_k_shift(BigInt(35), 1, 3).p, 71);
}

TEST(Shift, ScanHonoursExclusions) {
  const auto hit = ap::scan_shift(BigInt(6), 1, 1, 10, [](const BigInt& p) { return p == 7; });
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->p, 13);
  EXPECT_FALSE(ap::scan_shift(BigInt(35), 1, 1, 1));

  // Wide values take the arbitrary-precision path.
  const BigInt d = BigInt(1) << 70;
  const auto wide = ap::scan_shift(d, 1, 1, 100000);
  ASSERT_TRUE(wide);
  std::uint64_t k = 1;
  while (!acarm::arith::probably_prime(d * k + 1)) ++k;
  EXPECT_EQ(wide->k, k);
}

TEST(HbScan, SmallModuli) {
  ap::HbScanOptions opts;
  opts.m_lo = 1;
  opts.m_hi = 4;
  opts.cap = 1000;
  const auto rows = ap::hb_scan(opts);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].m, 3u);
  EXPECT_EQ(rows[0].worst_p, 7u);
  EXPECT_EQ(rows[1].m, 4u);
  EXPECT_EQ(rows[1].worst_c, 1u);
  EXPECT_EQ(rows[1].worst_p, 5u);
  EXPECT_NEAR(rows[1].ratio2, 5.0 / (4.0 * std::pow(std::log(4.0), 2)), 1e-12);
}

TEST(HbScan, AgreesWithPerResidueScan) {
  ap::HbScanOptions opts;
  opts.m_lo = 3;
  opts.m_hi = 120;
  opts.A = 3.0;
  opts.cap = 100000;
  for (const auto& row : ap::hb_scan(opts)) {
    std::uint64_t worst = 0, worst_c = 0;
    for (std::uint64_t c = 1; c < row.m; ++c) {
      if (std::gcd(c, row.m) != 1) continue;
      const auto p = least_prime(c, row.m);
      if (p > worst) worst = p, worst_c = c;
    }
    ASSERT_EQ(row.worst_p, worst) << row.m;
    EXPECT_EQ(row.worst_c, worst_c) << row.m;
    const double lm = std::log(static_cast<double>(row.m));
    EXPECT_NEAR(row.ratioA, worst / (row.m * lm * lm * lm), 1e-12);
  }
}

TEST(HbScan, DeterministicAcrossThreads) {
  ap::HbScanOptions opts;
  opts.m_lo = 3;
  opts.m_hi = 400;
  opts.cap = 10000000;
  const auto csv = ap::to_csv(ap::hb_scan(opts));
  opts.threads = 5;
  EXPECT_EQ(ap::to_csv(ap::hb_scan(opts)), csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,worst_c,worst_p,ratio2,ratioA");
}

TEST(HbScan, CapIsRequiredAndEnforced) {
  ap::HbScanOptions opts;
  opts.m_lo = 3;
  opts.m_hi = 10;
  EXPECT_THROW(ap::hb_scan(opts), acarm::DomainError);
  opts.cap = 10;
  EXPECT_THROW(ap::hb_scan(opts), acarm::BudgetExceeded);
}
