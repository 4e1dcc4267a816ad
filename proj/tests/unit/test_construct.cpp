#include <gtest/gtest.h>

#include "acarm/construct.hpp"
#include "oracle.hpp"

using acarm::BigInt;
namespace construct = acarm::construct;

namespace {

construct::ConstructionParams relaxed(std::int64_t a) {
  construct::ConstructionParams p;
  p.mode = construct::Mode::relaxed;
  p.a = a;
  p.blocks = {3, 4, 5, 7, 11, 13, 17, 19, 23};
  p.k_cap = 1000;
  p.kprime_cap = 100000;
  p.seed = 1;
  return p;
}

/// (p - a) | (n - a) for every prime factor p, checked by trial division of n'
/// against the reported primes.
void expect_a_carmichael(const construct::ConstructionResult& r) {
  const std::int64_t a = r.params.a;
  BigInt rebuilt = r.P;
  EXPECT_EQ(BigInt(r.n - a) % BigInt(abs(BigInt(r.P - a))), 0);
  for (const auto& h : r.chosen) {
    rebuilt *= h.p;
    EXPECT_TRUE(acarm::arith::probably_prime(h.p));
    EXPECT_EQ(BigInt(r.n - a) % BigInt(abs(BigInt(h.p - a))), 0) << h.p;
  }
  EXPECT_EQ(rebuilt, r.n);
}

}  // namespace

TEST(Params, ParseAndFormatRoundTrip) {
  const auto p = construct::parse_params(
      "# comment\nmode = relaxed\na = -1\nblocks = 3, 4,5\nk_cap = 10\nkprime_cap=20\n"
      "strategy = meet_in_middle\nseed = 9\n");
  EXPECT_EQ(p.mode, construct::Mode::relaxed);
  EXPECT_EQ(p.a, -1);
  EXPECT_EQ(p.blocks, (std::vector<BigInt>{3, 4, 5}));
  EXPECT_EQ(p.k_cap, 10u);
  EXPECT_EQ(p.kprime_cap, 20u);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(p.strategy, acarm::groups::SubsetStrategy::meet_in_middle);
  const auto q = construct::parse_params(construct::format_params(p));
  EXPECT_EQ(construct::format_params(q), construct::format_params(p));
}

TEST(Params, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(construct::parse_params("colour = blue\n"), acarm::DomainError);
  EXPECT_THROW(construct::parse_params("y = twenty\n"), acarm::DomainError);
  EXPECT_THROW(construct::parse_params("mode = loose\n"), acarm::DomainError);
  EXPECT_THROW(construct::parse_params("just a line\n"), acarm::DomainError);
}

TEST(BuildQ, AgreesWithSmoothnessOracle) {
  construct::ConstructionParams p;
  p.y = 20;
  p.theta = 1.5;
  const auto Q = construct::build_Q(p);
  EXPECT_NEAR(Q.lower, std::pow(20.0, 1.5) / std::log(20.0), 1e-9);
  EXPECT_NEAR(Q.upper, std::pow(20.0, 1.5), 1e-9);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t q = 2; q <= 89; ++q) {
    if (q < Q.lower || !oracle::is_prime(q)) continue;
    if (oracle::trial_factor(q - 1).back().first <= 20) expect.push_back(q);
  }
  EXPECT_EQ(Q.Q, expect);
  ASSERT_FALSE(Q.Q.empty());
  EXPECT_EQ(Q.Q.front(), 31u);
  BigInt L = 1;
  for (auto q : expect) L *= q;
  EXPECT_EQ(Q.L, L);
}

TEST(BuildQ, EmptyRangeIsAnError) {
  construct::ConstructionParams p;
  p.y = 3;
  p.theta = 1.1;
  EXPECT_THROW(construct::build_Q(p), acarm::DomainError);
}

TEST(Blocks, ConsecutiveGroups) {
  construct::SmoothPrimeSet Q;
  Q.Q = {31, 37, 41, 43, 61};
  const auto b = construct::build_blocks(Q, 1);
  EXPECT_EQ(b.blocks, (std::vector<BigInt>{31 * 37, 41 * 43}));
  EXPECT_EQ(b.leftover, (std::vector<std::uint64_t>{61}));
}

TEST(Slice, ToyInstance) {
  const std::vector<BigInt> blocks{6, 35};
  const auto s = construct::find_best_slice(blocks, 1, 50);
  EXPECT_EQ(s.divisors, 3u);
  EXPECT_EQ(s.best.k, 1u);
  ASSERT_EQ(s.best.hits.size(), 2u);
  EXPECT_EQ(s.best.hits[0].d, 6);
  EXPECT_EQ(s.best.hits[0].p, 7);
  EXPECT_EQ(s.best.hits[1].d, 210);
  EXPECT_EQ(s.best.hits[1].p, 211);
}

TEST(Slice, BlocksMustBeCoprime) {
  const std::vector<BigInt> shared{6, 10};
  EXPECT_THROW(construct::find_best_slice(shared, 1, 50), acarm::DomainError);
}

TEST(Slice, ExhaustedCapsAreReported) {
  const std::vector<BigInt> blocks{6, 35};
  try {
    construct::find_best_slice(blocks, 1, 1);
    FAIL() << "expected a budget error";
  } catch (const acarm::BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("conjecture budget exceeded"), std::string::npos);
  }
}

TEST(FindP, FrozenValues) {
  auto P = construct::find_P(BigInt(10), 1, 1, 100);
  EXPECT_EQ(P.P, 11);
  EXPECT_EQ(P.kprime, 1);
  P = construct::find_P(BigInt(10), 1, 3, 100);
  EXPECT_EQ(P.P, 13);
  P = construct::find_P(BigInt(8), 1, 1, 100);
  EXPECT_EQ(P.P, 17);
  EXPECT_EQ(P.kprime, 2);
  const std::vector<BigInt> exclude{17};
  EXPECT_EQ(construct::find_P(BigInt(8), 1, 1, 100, exclude).P, 41);
  EXPECT_THROW(construct::find_P(BigInt(8), 1, 1, 1), acarm::BudgetExceeded);
}

TEST(Pipeline, RelaxedPositiveShift) {
  const auto r = construct::run_pipeline(relaxed(1));
  EXPECT_TRUE(r.certificate.verify());
  EXPECT_EQ(construct::verify_chain(r), "");
  expect_a_carmichael(r);
  EXPECT_EQ(r.modulus, r.L * r.k * r.kprime);
  EXPECT_EQ(BigInt(r.n_prime % r.modulus), 1);
}

TEST(Pipeline, RelaxedNegativeShift) {
  const auto r = construct::run_pipeline(relaxed(-1));
  EXPECT_TRUE(r.certificate.verify());
  EXPECT_EQ(construct::verify_chain(r), "");
  expect_a_carmichael(r);
}

TEST(Pipeline, Deterministic) {
  const auto a = construct::run_pipeline(relaxed(1));
  const auto b = construct::run_pipeline(relaxed(1));
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Pipeline, StrictTinyFailsClosed) {
  construct::ConstructionParams p;
  p.mode = construct::Mode::strict;
  p.y = 10;
  std::vector<std::string> trace;
  EXPECT_THROW(construct::run_pipeline(p, &trace), acarm::BudgetExceeded);
  EXPECT_FALSE(trace.empty());
}

TEST(Pipeline, RejectsDegenerateInputs) {
  auto p = relaxed(0);
  EXPECT_THROW(construct::run_pipeline(p), acarm::DomainError);
  p = relaxed(1);
  p.mode = construct::Mode::strict;
  EXPECT_THROW(construct::run_pipeline(p), acarm::DomainError);
  p = relaxed(1);
  p.k_cap = 0;
  EXPECT_THROW(construct::run_pipeline(p), acarm::DomainError);
}

TEST(VerifyChain, DetectsTampering) {
  auto r = construct::run_pipeline(relaxed(1));
  r.n_prime += 1;
  EXPECT_NE(construct::verify_chain(r), "");
}
