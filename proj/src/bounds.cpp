#include "acarm/bounds.hpp"

#include <cmath>

namespace acarm::bounds {
namespace {

// e > 2.71828182845, used to certify the upper side of the sandwich.
const BigInt kELowerNum("271828182845");
const BigInt kELowerDen("100000000000");

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;
  }
  return acc;
}

}  // namespace

CountingReport counting_report(const CountingInputs& in) {
  if (!(in.theta > 1.0 && in.theta < 2.0)) {
    throw DomainError("counting_report: theta must lie strictly between 1 and 2");
  }
  if (!(in.gamma > 0.0)) throw DomainError("counting_report: gamma must be positive");
  if (in.y < 2) throw DomainError("counting_report: y must be at least 2");

  CountingReport rep;
  rep.inputs = in;
  const double y = static_cast<double>(in.y);
  const double a1 = static_cast<double>(in.A) + 1.0;
  const double y_theta = std::pow(y, in.theta);
  const double log_y = std::log(y);
  const double ln11 = std::log(1.1);

  rep.e = static_cast<double>(in.omega) / a1;
  rep.log_r = rep.e * std::log(7.0 / 4.0);
  rep.log_t = rep.e * std::log(3.0 / 2.0);
  rep.log_n_bound = 3.0 * y * in.theta;
  rep.r = std::exp(rep.log_r);
  rep.t = std::exp(rep.log_t);
  rep.n_bound = std::exp(rep.log_n_bound);

  rep.applicable = rep.log_r > rep.log_t && rep.log_t > rep.log_n_bound;
  rep.n_below_five_quarters = rep.log_n_bound < rep.e * std::log(5.0 / 4.0);
  rep.n_below_t_over_20 = rep.log_n_bound <= rep.log_t - std::log(20.0);

  const double t = rep.t;
  rep.chain = {
      {"(7/6)^{et} / ((7/5)^e e)^{t/20}",
       t * rep.e * std::log(7.0 / 6.0) - (t / 20.0) * (rep.e * std::log(7.0 / 5.0) + 1.0)},
      {"((7/6)/(7/5)^{1/20})^{et} (1/e)^{t/20}",
       t * rep.e * (std::log(7.0 / 6.0) - std::log(7.0 / 5.0) / 20.0) - t / 20.0},
      {"1.1^{et}", t * rep.e * ln11},
      {"exp(t ln1.1 gamma y^theta / ((A+1) ln y))", t * ln11 / a1 * (in.gamma * y_theta / log_y)},
  };
  rep.chain_holds = true;
  for (std::size_t i = 0; i + 1 < rep.chain.size(); ++i) {
    // the first two displays are algebraically equal; allow rounding
    const double slack = 1e-12 * std::max(1.0, std::abs(rep.chain[i].log_value));
    if (rep.chain[i].log_value + slack < rep.chain[i + 1].log_value) rep.chain_holds = false;
  }
  rep.log_binom_lower = rep.chain.front().log_value;

  rep.log_L_upper = in.kappa * y_theta;
  const double log_log_L = std::log(rep.log_L_upper);
  const double log_P = rep.log_L_upper + (2.0 * in.A + 1.0) * log_log_L;
  const double log_x = rep.log_L_upper + a1 * log_log_L;
  rep.log_X_upper = log_P + t * log_x;
  rep.log_X_rhs = 3.0 * y_theta * t;
  rep.eq2_holds = rep.log_X_upper < rep.log_X_rhs;

  rep.logloglog_X = std::log(std::log(rep.log_X_upper));
  rep.eq3_holds = rep.logloglog_X * rep.logloglog_X >= log_y;

  rep.exponent = ln11 / (3.0 * a1) * (in.gamma / (rep.logloglog_X * rep.logloglog_X));
  rep.log_count_lower = t * y_theta * (ln11 / a1) * (in.gamma / log_y);
  rep.log_count_rhs = rep.exponent * rep.log_X_upper;
  rep.final_holds = rep.log_count_lower >= rep.log_count_rhs;
  return rep;
}

BinomSandwich binom_bound_check(std::uint64_t u, std::uint64_t v) {
  if (!(v > 0 && v <= u && u <= 1000)) {
    throw DomainError("binom_bound_check: requires 0 < v <= u <= 1000");
  }
  BinomSandwich out;
  out.u = u;
  out.v = v;
  out.exact = binomial(u, v);
  const double du = static_cast<double>(u), dv = static_cast<double>(v);
  out.log_lower = dv * (std::log(du) - std::log(dv));
  out.log_upper = dv * (std::log(du) + 1.0 - std::log(dv));
  out.log_exact = log_of(out.exact);
  out.lower = std::exp(out.log_lower);
  out.upper = std::exp(out.log_upper);

  using boost::multiprecision::pow;
  const BigInt u_pow = pow(BigInt(u), static_cast<unsigned>(v));
  const BigInt v_pow = pow(BigInt(v), static_cast<unsigned>(v));
  // (u/v)^v <= C  <=>  u^v <= C v^v
  out.lower_holds = u_pow <= out.exact * v_pow;
  // C <= (u e_lo / v)^v  <=>  C v^v den^v <= u^v num^v, and e_lo < e
  out.upper_holds = out.exact * v_pow * pow(kELowerDen, static_cast<unsigned>(v)) <=
                    u_pow * pow(kELowerNum, static_cast<unsigned>(v));
  return out;
}

}  // namespace acarm::bounds
