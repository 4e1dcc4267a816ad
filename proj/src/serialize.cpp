#include "acarm/serialize.hpp"

namespace acarm {

using nlohmann::json;

json to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  if (auto u = to_u64(v)) return *u;
  return v.str();
}

namespace {

json big_list(const std::vector<BigInt>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json hits_json(const std::vector<construct::SliceHit>& hits) {
  json out = json::array();
  for (const auto& h : hits) out.push_back({{"d", to_json(h.d)}, {"p", to_json(h.p)}});
  return out;
}

}  // namespace

namespace korselt {

json to_json(const Certificate& c) {
  json factors = json::array();
  for (const auto& e : c.entries) {
    factors.push_back({{"p", acarm::to_json(e.p)},
                       {"divisor", acarm::to_json(e.divisor)},
                       {"quotient", acarm::to_json(e.quotient)}});
  }
  return {{"n", acarm::to_json(c.n)},
          {"a", c.a},
          {"factors", factors},
          {"squarefree", c.squarefree},
          {"composite", c.composite}};
}

json to_json(const CheckResult& r) {
  if (r.verdict) return {{"verdict", true}, {"certificate", to_json(*r.certificate)}};
  return {{"verdict", false}, {"reason", to_string(*r.reason)}, {"detail", r.detail}};
}

}  // namespace korselt

namespace groups {

json to_json(const GroupBoundReport& r) {
  json out = {{"L", acarm::to_json(r.L)},
              {"lambda", acarm::to_json(r.lambda)},
              {"eq1_bound", r.eq1_bound}};
  if (r.n_exact) out["n_exact"] = *r.n_exact;
  if (r.log_e3y_bound) {
    out["log_e3y_bound"] = *r.log_e3y_bound;
    out["e3y_bound"] = *r.e3y_bound();  // null when it overflows
  }
  return out;
}

}  // namespace groups

namespace bounds {

json to_json(const CountingReport& r) {
  json chain = json::array();
  for (const auto& step : r.chain) chain.push_back({{"display", step.label}, {"log", step.log_value}});
  const auto& in = r.inputs;
  return {
      {"inputs",
       {{"y", in.y}, {"theta", in.theta}, {"A", in.A}, {"gamma", in.gamma},
        {"omega", in.omega}, {"kappa", in.kappa}}},
      {"e", r.e},
      {"log_r", r.log_r},
      {"log_t", r.log_t},
      {"log_n_bound", r.log_n_bound},
      {"applicable", r.applicable},
      {"n_below_five_quarters", r.n_below_five_quarters},
      {"n_below_t_over_20", r.n_below_t_over_20},
      {"chain", chain},
      {"chain_holds", r.chain_holds},
      {"log_binom_lower", r.log_binom_lower},
      {"log_L_upper", r.log_L_upper},
      {"log_X_upper", r.log_X_upper},
      {"log_X_rhs", r.log_X_rhs},
      {"eq2_holds", r.eq2_holds},
      {"logloglog_X", r.logloglog_X},
      {"eq3_holds", r.eq3_holds},
      {"exponent", r.exponent},
      {"log_count_lower", r.log_count_lower},
      {"log_count_rhs", r.log_count_rhs},
      {"final_holds", r.final_holds},
  };
}

json to_json(const BinomSandwich& s) {
  return {{"u", s.u},
          {"v", s.v},
          {"lower", s.lower},
          {"exact", acarm::to_json(s.exact)},
          {"upper", s.upper},
          {"lower_holds", s.lower_holds},
          {"upper_holds", s.upper_holds}};
}

}  // namespace bounds

namespace construct {

json to_json(const ConstructionParams& p) {
  json out = {{"mode", to_string(p.mode)},
              {"a", p.a},
              {"y", p.y},
              {"theta", p.theta},
              {"A", p.A},
              {"alpha", p.alpha},
              {"k_cap", p.k_cap},
              {"kprime_cap", p.kprime_cap},
              {"seed", p.seed},
              {"strategy", to_string(p.strategy)},
              {"subset_rounds", p.subset_rounds},
              {"threads", p.threads}};
  if (!p.blocks.empty()) out["blocks"] = big_list(p.blocks);
  return out;
}

json to_json(const ConstructionResult& r, bool with_timings) {
  json out = {{"params", to_json(r.params)},
              {"Q", r.Q},
              {"L", acarm::to_json(r.L)},
              {"blocks", big_list(r.blocks)},
              {"k", r.k},
              {"k_cap", r.k_cap},
              {"kprime_cap", r.kprime_cap},
              {"slice", hits_json(r.slice)},
              {"P", acarm::to_json(r.P)},
              {"kprime", acarm::to_json(r.kprime)},
              {"modulus", acarm::to_json(r.modulus)},
              {"chosen", hits_json(r.chosen)},
              {"n_prime", acarm::to_json(r.n_prime)},
              {"n", acarm::to_json(r.n)},
              {"certificate", korselt::to_json(r.certificate)}};
  if (with_timings) {
    json t = json::object();
    for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
    out["timings"] = t;
  }
  return out;
}

}  // namespace construct

}  // namespace acarm
