#include "acarm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acarm/ap.hpp"
#include "acarm/arith.hpp"
#include "acarm/bounds.hpp"
#include "acarm/construct.hpp"
#include "acarm/groups.hpp"
#include "acarm/korselt.hpp"
#include "acarm/serialize.hpp"

namespace acarm::cli {
namespace {

using nlohmann::json;

struct Globals {
  std::string format;  // empty: per-command default
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cap;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

BigInt parse_integer(const std::string& text, const char* what) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    throw UsageError(std::string("malformed integer for ") + what + ": '" + text + "'");
  }
  return BigInt(text.front() == '+' ? text.substr(1) : text);
}

std::int64_t parse_i64(const std::string& text, const char* what) {
  const BigInt v = parse_integer(text, what);
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max()) {
    throw UsageError(std::string(what) + " does not fit in 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  const auto v = to_u64(parse_integer(text, what));
  if (!v) throw UsageError(std::string(what) + " must be a non-negative 64-bit integer");
  return *v;
}

// Echoes the resolved configuration: embedded for json, on stderr otherwise.
void emit(std::ostream& out, std::ostream& err, const std::string& format, json config,
          json body, const std::string& plain) {
  if (format == "json") {
    json doc = {{"config", std::move(config)}};
    doc.update(body);
    out << doc.dump(2) << "\n";
  } else {
    err << "# config: " << config.dump() << "\n";
    out << plain;
  }
}

json base_config(const std::string& command, const Globals& g, const std::string& format) {
  json c = {{"command", command}, {"format", format}, {"threads", g.threads}};
  c["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  c["cap"] = g.cap ? json(*g.cap) : json(nullptr);
  return c;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (format == f) return;
  }
  throw UsageError("format '" + format + "' is not supported by this command");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"a-Carmichael number toolkit", "acarm"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized searches");
  app.add_option("--cap", g.cap, "Search budget (command specific)");

  std::string n_text, a_text, limit_text, L_text, params_path, trace_path;
  std::string m_lo_text, m_hi_text;
  bool relax_squarefree = false;
  bool timings = false;
  double exponent = 2.0;

  auto* check = app.add_subcommand("check", "Decide whether n is an a-Carmichael number");
  check->add_option("n", n_text)->required();
  check->add_option("a", a_text)->required();
  check->add_flag("--relax-squarefree", relax_squarefree);

  auto* enumerate = app.add_subcommand("enumerate", "List a-Carmichael numbers up to a limit");
  enumerate->add_option("a", a_text)->required();
  enumerate->add_option("limit", limit_text)->required();
  enumerate->add_flag("--relax-squarefree", relax_squarefree);

  auto* construct_cmd = app.add_subcommand("construct", "Run the construction pipeline");
  construct_cmd->add_option("params", params_path, "key = value parameter file")->required();
  construct_cmd->add_option("--trace", trace_path, "Write the stage log to this file");
  construct_cmd->add_flag("--timings", timings, "Include wall-clock timings in the output");

  auto* hb = app.add_subcommand("hb-scan", "Worst least prime in progressions per modulus");
  hb->add_option("m_lo", m_lo_text)->required();
  hb->add_option("m_hi", m_hi_text)->required();
  hb->add_option("-A,--exponent", exponent, "Exponent A for ratioA");

  bounds::CountingInputs counting;
  std::vector<std::uint64_t> binom;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the counting-argument chain");
  bounds_cmd->add_option("--y", counting.y)->required();
  bounds_cmd->add_option("--theta", counting.theta)->required();
  bounds_cmd->add_option("--A", counting.A)->required();
  bounds_cmd->add_option("--gamma", counting.gamma)->required();
  bounds_cmd->add_option("--omega", counting.omega)->required();
  bounds_cmd->add_option("--kappa", counting.kappa)->required();
  bounds_cmd->add_option("--binom", binom, "Also check the binomial sandwich at u v")
      ->expected(2);

  std::uint64_t n_exact_cap = 20;
  std::optional<std::uint64_t> gb_y;
  std::optional<double> gb_theta;
  auto* group_bound = app.add_subcommand("group-bound", "lambda(L), the n(L) bound, exact n(L)");
  group_bound->add_option("L", L_text)->required();
  group_bound->add_option("--n-exact-cap", n_exact_cap, "Largest phi(L) searched exactly");
  group_bound->add_option("--y", gb_y);
  group_bound->add_option("--theta", gb_theta);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*check) {
      const std::string format = g.format.empty() ? "json" : g.format;
      require_format(format, {"json", "text"});
      const BigInt n = parse_integer(n_text, "n");
      const std::int64_t a = parse_i64(a_text, "a");
      arith::FactorBudget budget;
      if (g.cap) budget.max_rho_iterations = *g.cap;
      auto result = korselt::check(n, a, !relax_squarefree, budget);
      json config = base_config("check", g, format);
      config["n"] = to_json(n);
      config["a"] = a;
      config["require_squarefree"] = !relax_squarefree;
      std::ostringstream plain;
      if (result) {
        plain << n << " is " << a << "-Carmichael:";
        for (const auto& e : result.certificate->entries) {
          plain << " (" << e.p << ", " << e.divisor << ", " << e.quotient << ")";
        }
        plain << "\n";
      } else {
        plain << n << " is not " << a << "-Carmichael: " << korselt::to_string(*result.reason)
              << " (" << result.detail << ")\n";
      }
      emit(out, err, format, config, korselt::to_json(result), plain.str());
      return result ? kSuccess : kRefuted;
    }

    if (*enumerate) {
      const std::string format = g.format.empty() ? "text" : g.format;
      const std::int64_t a = parse_i64(a_text, "a");
      const std::uint64_t limit = parse_u64(limit_text, "limit");
      if (limit < 2) throw UsageError("limit must be at least 2");
      const auto values = korselt::enumerate(a, limit, !relax_squarefree, g.threads);
      json config = base_config("enumerate", g, format);
      config["a"] = a;
      config["limit"] = limit;
      config["require_squarefree"] = !relax_squarefree;
      std::ostringstream plain;
      if (format == "csv") {
        plain << "n\n";
        for (auto v : values) plain << v << "\n";
      } else {
        for (std::size_t i = 0; i < values.size(); ++i) plain << (i ? " " : "") << values[i];
        plain << "\n";
      }
      emit(out, err, format, config, {{"values", values}}, plain.str());
      return kSuccess;
    }

    if (*construct_cmd) {
      const std::string format = g.format.empty() ? "json" : g.format;
      require_format(format, {"json"});
      std::ifstream in(params_path);
      if (!in) throw UsageError("cannot read parameter file '" + params_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      construct::ConstructionParams params = construct::parse_params(buf.str());
      if (g.seed) params.seed = *g.seed;
      if (g.threads > 1) params.threads = g.threads;
      json config = base_config("construct", g, format);
      config["params_file"] = params_path;
      config["params"] = construct::to_json(params);
      std::vector<std::string> partial;
      auto write_trace = [&](const std::vector<std::string>& lines,
                             const std::vector<std::pair<std::string, double>>& stages) {
        if (trace_path.empty()) return;
        std::ofstream trace(trace_path);
        for (const auto& line : lines) trace << line << "\n";
        for (const auto& [stage, ms] : stages) trace << "timing " << stage << "_ms=" << ms << "\n";
      };
      try {
        auto result = construct::run_pipeline(params, &partial);
        write_trace(result.trace, result.timings_ms);
        emit(out, err, format, config, construct::to_json(result, timings), "");
        return kSuccess;
      } catch (const BudgetExceeded& e) {
        partial.push_back(std::string("failed: ") + e.what());
        write_trace(partial, {});
        emit(out, err, format, config, {{"error", {{"kind", "budget"}, {"message", e.what()}}}},
             "");
        err << "budget: " << e.what() << "\n";
        return kBudget;
      }
    }

    if (*hb) {
      const std::string format = g.format.empty() ? "csv" : g.format;
      require_format(format, {"csv", "json"});
      ap::HbScanOptions opts;
      opts.m_lo = parse_u64(m_lo_text, "m_lo");
      opts.m_hi = parse_u64(m_hi_text, "m_hi");
      opts.A = exponent;
      opts.cap = g.cap.value_or(10'000'000);
      opts.threads = g.threads;
      json config = base_config("hb-scan", g, format);
      config["m_lo"] = opts.m_lo;
      config["m_hi"] = opts.m_hi;
      config["A"] = opts.A;
      config["cap"] = opts.cap;
      const auto rows = ap::hb_scan(opts);
      json body = json::array();
      for (const auto& r : rows) {
        body.push_back({{"m", r.m}, {"worst_c", r.worst_c}, {"worst_p", r.worst_p},
                        {"ratio2", r.ratio2}, {"ratioA", r.ratioA}});
      }
      emit(out, err, format, config, {{"rows", body}}, ap::to_csv(rows));
      return kSuccess;
    }

    if (*bounds_cmd) {
      const std::string format = g.format.empty() ? "json" : g.format;
      require_format(format, {"json"});
      json body = {{"report", bounds::to_json(bounds::counting_report(counting))}};
      if (!binom.empty()) body["binom"] = bounds::to_json(bounds::binom_bound_check(binom[0], binom[1]));
      emit(out, err, format, base_config("bounds", g, format), body, "");
      return kSuccess;
    }

    if (*group_bound) {
      const std::string format = g.format.empty() ? "json" : g.format;
      require_format(format, {"json"});
      const BigInt L = parse_integer(L_text, "L");
      if (L < 2) throw UsageError("L must be at least 2");
      auto report = groups::eq1_bound(L);
      if (auto small = to_u64(L); small && arith::euler_phi(L) <= n_exact_cap) {
        report.n_exact = groups::n_exact(*small, n_exact_cap);
      }
      if (gb_y && gb_theta) report.log_e3y_bound = 3.0 * static_cast<double>(*gb_y) * *gb_theta;
      json config = base_config("group-bound", g, format);
      config["n_exact_cap"] = n_exact_cap;
      emit(out, err, format, config, groups::to_json(report), "");
      return kSuccess;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace acarm::cli
