#pragma once

// Calculator for the counting argument: with e = omega / (A + 1),
//   r = (7/4)^e,  t = (3/2)^e,  n <= e^{3 y theta},
// the binomial chain bounding C(r,t)/C(r,n) from below, the size bound on
// X = P x^t, and the resulting exponent. Everything is natural-log space.

#include <cstdint>
#include <vector>

#include "acarm/types.hpp"

namespace acarm::bounds {

struct CountingInputs {
  std::uint64_t y = 0;
  double theta = 1.5;
  unsigned A = 1;
  double gamma = 1.0;
  std::uint64_t omega = 0;
  double kappa = 1.0;  // L <= e^{kappa y^theta}
};

/// One line of the binomial lower-bound chain, as a natural log.
struct ChainStep {
  const char* label;
  double log_value;
};

struct CountingReport {
  CountingInputs inputs;
  double e = 0.0;  // omega / (A + 1)
  double log_r = 0.0;
  double log_t = 0.0;
  double log_n_bound = 0.0;  // 3 y theta
  double r = 0.0;            // exp(log_r), +inf on overflow
  double t = 0.0;
  double n_bound = 0.0;

  /// r > t > n_bound. When false the remaining chain is still evaluated but
  /// carries no implication.
  bool applicable = false;
  bool n_below_five_quarters = false;  // n < (5/4)^e
  bool n_below_t_over_20 = false;      // n <= t / 20

  /// Four displays, from (7/6)^{et} / ((7/5)^e e)^{t/20} down to
  /// exp(t ln 1.1 gamma y^theta / ((A+1) ln y)).
  std::vector<ChainStep> chain;
  bool chain_holds = false;  // each step >= the next
  double log_binom_lower = 0.0;  // first chain display

  double log_L_upper = 0.0;  // kappa y^theta
  double log_X_upper = 0.0;  // ln((L ln^{2A+1} L)(L ln^{A+1} L)^t)
  double log_X_rhs = 0.0;    // 3 y^theta t
  bool eq2_holds = false;    // log_X_upper < log_X_rhs

  double logloglog_X = 0.0;
  bool eq3_holds = false;  // (lll X)^2 >= ln y

  double exponent = 0.0;  // (ln 1.1 / (3(A+1))) gamma / (lll X)^2
  double log_count_lower = 0.0;  // t y^theta (ln 1.1/(A+1)) (gamma / ln y)
  double log_count_rhs = 0.0;    // exponent * ln X
  bool final_holds = false;
};

/// Requires 1 < theta < 2, gamma > 0, y >= 2.
CountingReport counting_report(const CountingInputs& inputs);

struct BinomSandwich {
  std::uint64_t u = 0;
  std::uint64_t v = 0;
  BigInt exact;
  double lower = 0.0;  // (u/v)^v
  double upper = 0.0;  // (ue/v)^v, +inf on overflow
  double log_lower = 0.0;
  double log_exact = 0.0;
  double log_upper = 0.0;
  bool lower_holds = false;  // decided in exact integer arithmetic
  bool upper_holds = false;  // exact, against a rational lower bound on e
};

/// Requires 0 < v <= u <= 1000.
BinomSandwich binom_bound_check(std::uint64_t u, std::uint64_t v);

}  // namespace acarm::bounds
