#include "acarm/construct.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "acarm/ap.hpp"
#include "acarm/arith.hpp"

namespace acarm::construct {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DomainError("params: bad value for " + std::string(key) + ": '" + std::string(value) +
                      "'");
  }
  return out;
}

BigInt parse_big(std::string_view key, std::string_view value) {
  value = trim(value);
  const bool digits = !value.empty() && std::all_of(value.begin(), value.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
  if (!digits) {
    throw DomainError("params: bad integer in " + std::string(key) + ": '" + std::string(value) +
                      "'");
  }
  return BigInt(std::string(value));
}

// Saturating ceil((ln L)^A).
std::uint64_t log_power_cap(const BigInt& L, unsigned A) {
  const double v = std::ceil(std::pow(log_of(L), static_cast<double>(A)));
  if (!(v < 9.0e18)) return std::uint64_t{9} * 1000000000000000000ULL;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

void validate_blocks(std::span<const BigInt> blocks) {
  if (blocks.empty()) throw DomainError("find_best_slice: no blocks");
  if (blocks.size() > kMaxBlocks) {
    throw DomainError("find_best_slice: at most " + std::to_string(kMaxBlocks) + " blocks");
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i] < 2) throw DomainError("block " + blocks[i].str() + " must be at least 2");
    for (std::size_t j = 0; j < i; ++j) {
      if (gcd(blocks[i], blocks[j]) != 1) {
        throw DomainError("blocks " + blocks[j].str() + " and " + blocks[i].str() +
                          " are not coprime");
      }
    }
  }
}

struct MaskHit {
  std::uint64_t mask;
  std::uint64_t k;
  BigInt d;
  BigInt p;
};

struct WorkerOutput {
  std::vector<MaskHit> hits;
  std::vector<BigInt> failures;
  std::size_t skipped = 0;
};

}  // namespace

std::string to_string(Mode m) { return m == Mode::strict ? "strict" : "relaxed"; }

std::string to_string(groups::SubsetStrategy s) {
  switch (s) {
    case groups::SubsetStrategy::automatic: return "automatic";
    case groups::SubsetStrategy::exhaustive: return "exhaustive";
    case groups::SubsetStrategy::meet_in_middle: return "meet_in_middle";
    case groups::SubsetStrategy::randomized: return "randomized";
  }
  return "automatic";
}

ConstructionParams parse_params(std::string_view text) {
  ConstructionParams p;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("params: line " + std::to_string(line_no) + " is not key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "mode") {
      if (value == "strict") p.mode = Mode::strict;
      else if (value == "relaxed") p.mode = Mode::relaxed;
      else throw DomainError("params: mode must be strict or relaxed");
    } else if (key == "a") {
      p.a = parse_number<std::int64_t>(key, value);
    } else if (key == "y") {
      p.y = parse_number<std::uint64_t>(key, value);
    } else if (key == "theta") {
      p.theta = parse_number<double>(key, value);
    } else if (key == "A") {
      p.A = parse_number<unsigned>(key, value);
    } else if (key == "alpha") {
      p.alpha = parse_number<std::uint64_t>(key, value);
    } else if (key == "k_cap") {
      p.k_cap = parse_number<std::uint64_t>(key, value);
    } else if (key == "kprime_cap") {
      p.kprime_cap = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed") {
      p.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "subset_rounds") {
      p.subset_rounds = parse_number<unsigned>(key, value);
    } else if (key == "threads") {
      p.threads = parse_number<unsigned>(key, value);
    } else if (key == "strategy") {
      using S = groups::SubsetStrategy;
      if (value == "automatic") p.strategy = S::automatic;
      else if (value == "exhaustive") p.strategy = S::exhaustive;
      else if (value == "meet_in_middle") p.strategy = S::meet_in_middle;
      else if (value == "randomized") p.strategy = S::randomized;
      else throw DomainError("params: unknown strategy '" + std::string(value) + "'");
    } else if (key == "blocks") {
      p.blocks.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        p.blocks.push_back(parse_big(key, rest.substr(0, comma)));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    } else {
      throw DomainError("params: unknown key '" + std::string(key) + "' on line " +
                        std::to_string(line_no));
    }
  }
  return p;
}

std::string format_params(const ConstructionParams& p) {
  std::ostringstream out;
  out << "mode = " << to_string(p.mode) << "\n"
      << "a = " << p.a << "\n"
      << "y = " << p.y << "\n"
      << "theta = " << p.theta << "\n"
      << "A = " << p.A << "\n"
      << "alpha = " << p.alpha << "\n"
      << "k_cap = " << p.k_cap << "\n"
      << "kprime_cap = " << p.kprime_cap << "\n"
      << "seed = " << p.seed << "\n"
      << "strategy = " << to_string(p.strategy) << "\n"
      << "subset_rounds = " << p.subset_rounds << "\n"
      << "threads = " << p.threads << "\n";
  if (!p.blocks.empty()) {
    out << "blocks = ";
    for (std::size_t i = 0; i < p.blocks.size(); ++i) out << (i ? "," : "") << p.blocks[i];
    out << "\n";
  }
  return out.str();
}

// -- Q and blocks -----------------------------------------------------------

SmoothPrimeSet build_Q(const ConstructionParams& params) {
  if (params.y < 3) throw DomainError("build_Q: y must be at least 3");
  if (!(params.theta > 1.0 && params.theta < 2.0)) {
    throw DomainError("build_Q: theta must lie strictly between 1 and 2");
  }
  if (params.alpha < 1) throw DomainError("build_Q: alpha must be at least 1");

  SmoothPrimeSet out;
  const double y = static_cast<double>(params.y);
  out.upper = std::pow(y, params.theta);
  out.lower = out.upper / std::log(y);
  if (out.upper > 1e15) throw DomainError("build_Q: y^theta above 1e15 is out of range");

  const auto first = static_cast<std::uint64_t>(std::ceil(out.lower));
  const auto last = static_cast<std::uint64_t>(std::floor(out.upper));
  const char* last_rejection = nullptr;
  for (std::uint64_t q = first; q <= last; ++q) {
    if (!arith::is_prime_u64(q)) {
      last_rejection = "primality";
      continue;
    }
    if ((q + 1) % params.alpha != 0) {
      last_rejection = "q = -1 mod alpha";
      continue;
    }
    const auto f = arith::factor_u64(q - 1);
    if (!f.empty() && f.back().first > params.y) {
      last_rejection = "P(q - 1) <= y";
      continue;
    }
    if (params.a % static_cast<std::int64_t>(q) == 0) {
      last_rejection = "gcd(q, a) = 1";
      continue;
    }
    out.Q.push_back(q);
  }
  if (out.Q.empty()) {
    std::ostringstream msg;
    msg << "build_Q: parameters too small, no q in [" << out.lower << ", " << out.upper << "]";
    if (last_rejection) {
      msg << "; the last candidate was eliminated by the " << last_rejection << " filter";
    } else {
      msg << " (the range holds no integers)";
    }
    throw DomainError(msg.str());
  }
  for (auto q : out.Q) out.L *= q;
  return out;
}

BlockSet build_blocks(const SmoothPrimeSet& Q, unsigned A) {
  const std::size_t width = static_cast<std::size_t>(A) + 1;
  if (Q.omega() < width) {
    throw DomainError("build_blocks: |Q| = " + std::to_string(Q.omega()) +
                      " is smaller than A + 1 = " + std::to_string(width));
  }
  BlockSet out;
  const std::size_t count = Q.omega() / width;
  for (std::size_t i = 0; i < count; ++i) {
    BigInt block = 1;
    for (std::size_t j = 0; j < width; ++j) block *= Q.Q[i * width + j];
    out.blocks.push_back(std::move(block));
  }
  out.leftover.assign(Q.Q.begin() + static_cast<std::ptrdiff_t>(count * width), Q.Q.end());
  return out;
}

// -- slices -----------------------------------------------------------------

SliceSearch find_best_slice(std::span<const BigInt> blocks, std::int64_t a, std::uint64_t k_cap,
                            unsigned threads) {
  validate_blocks(blocks);
  const std::size_t b = blocks.size();
  const std::uint64_t masks = std::uint64_t{1} << b;
  const BigInt big_a(a);

  threads = std::max(1u, threads);
  std::vector<WorkerOutput> outputs(threads);
  auto work = [&](unsigned worker) {
    WorkerOutput& out = outputs[worker];
    for (std::uint64_t mask = 1 + worker; mask < masks; mask += threads) {
      BigInt d = 1;
      for (std::size_t j = 0; j < b; ++j) {
        if (mask >> j & 1) d *= blocks[j];
      }
      if (gcd(d, big_a) != 1) {
        ++out.skipped;
        continue;
      }
      auto hit = k_cap > 1 ? ap::scan_shift(d, a, 1, k_cap - 1) : std::nullopt;
      if (!hit) {
        out.failures.push_back(d);
        continue;
      }
      out.hits.push_back({mask, hit->k.convert_to<std::uint64_t>(), std::move(d), hit->p});
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  SliceSearch search;
  search.divisors = masks - 1;
  std::vector<MaskHit> all;
  std::vector<BigInt> failures;
  for (auto& out : outputs) {
    search.skipped_gcd += out.skipped;
    std::move(out.hits.begin(), out.hits.end(), std::back_inserter(all));
    std::move(out.failures.begin(), out.failures.end(), std::back_inserter(failures));
  }
  std::sort(all.begin(), all.end(), [](const MaskHit& x, const MaskHit& y) { return x.d < y.d; });
  search.budget_failures = failures.size();

  if (all.empty()) {
    std::sort(failures.begin(), failures.end());
    std::ostringstream msg;
    msg << "conjecture budget exceeded: no d*k + a prime with k < " << k_cap << " for any of "
        << failures.size() << " block products (a = " << a << ")";
    if (!failures.empty()) {
      msg << "; failing d include";
      for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
        msg << " " << failures[i];
      }
    }
    throw BudgetExceeded(msg.str());
  }

  std::map<std::uint64_t, std::vector<SliceHit>> buckets;
  for (auto& h : all) buckets[h.k].push_back({h.d, h.p, h.mask});
  search.distinct_k = buckets.size();
  for (auto& [k, hits] : buckets) {
    if (hits.size() > search.best.hits.size()) {
      search.best.k = k;
      search.best.hits = hits;
    }
  }

  std::vector<BigInt> primes;
  for (const auto& h : search.best.hits) primes.push_back(h.p);
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) {
    throw InvariantViolation("find_best_slice: a prime occurs twice in slice k = " +
                             std::to_string(search.best.k));
  }

  primes.clear();
  for (const auto& h : all) primes.push_back(h.p);
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 1; i < primes.size(); ++i) {
    if (primes[i] == primes[i - 1]) ++search.cross_slice_collisions;
  }
  // If every block exceeds the k budget, d1 k1 = d2 k2 with d1 != d2 would force
  // a block to divide some k < k_cap, so no prime can be reached twice.
  const bool blocks_exceed_budget =
      std::all_of(blocks.begin(), blocks.end(), [&](const BigInt& q) { return q >= k_cap; });
  if (blocks_exceed_budget && search.cross_slice_collisions > 0) {
    throw InvariantViolation("find_best_slice: prime reached from two block products although "
                             "every block exceeds k_cap");
  }
  return search;
}

PrimeP find_P(const BigInt& L, std::uint64_t k, std::int64_t a, std::uint64_t kprime_cap,
              std::span<const BigInt> exclude) {
  const BigInt step = L * k;
  if (step < 1) throw DomainError("find_P: L k must be positive");
  if (gcd(step, BigInt(a)) != 1) {
    throw DomainError("find_P: gcd(a, L k) = " + gcd(step, BigInt(a)).str());
  }
  std::vector<BigInt> sorted(exclude.begin(), exclude.end());
  std::sort(sorted.begin(), sorted.end());
  auto excluded = [&](const BigInt& p) {
    return std::binary_search(sorted.begin(), sorted.end(), p);
  };
  auto hit = ap::scan_shift(step, a, 1, kprime_cap, excluded);
  if (!hit) {
    throw BudgetExceeded("find_P: no prime P = a mod L k with k' <= " +
                         std::to_string(kprime_cap));
  }
  return {hit->p, hit->k};
}

// -- assembly ---------------------------------------------------------------

InsufficientPrimes::InsufficientPrimes(std::size_t size, BigInt mod, double bound)
    : BudgetExceeded("insufficient primes: no subset of the " + std::to_string(size) +
                     " usable slice primes has product 1 mod " + mod.str() +
                     " (n(M) bound " + std::to_string(bound) + ")"),
      slice_size(size),
      modulus(std::move(mod)),
      eq1_bound(bound) {}

std::string verify_chain(const ConstructionResult& r) {
  const BigInt& M = r.modulus;
  if (M != r.L * r.k * r.kprime) return "modulus differs from L k k'";
  if (r.chosen.empty()) return "empty subset";
  BigInt n_prime = 1;
  for (const auto& h : r.chosen) n_prime *= h.p;
  if (n_prime != r.n_prime) return "n' differs from the product of chosen primes";
  if (r.n != r.P * r.n_prime) return "n differs from P n'";
  if (r.n_prime % M != BigInt(1) % M) return "n' is not 1 mod L k k'";
  if (r.P - r.params.a != M) return "P - a differs from L k k'";
  if ((r.n - r.params.a) % M != 0) return "n is not a mod L k k'";
  for (const auto& h : r.chosen) {
    const BigInt shift = h.p - r.params.a;
    if (shift != h.d * r.k) return "p - a != d k for p = " + h.p.str();
    if (r.L % h.d != 0) return "d does not divide L for p = " + h.p.str();
    if (M % shift != 0) return "d k does not divide L k k' for p = " + h.p.str();
    if ((r.n - r.params.a) % shift != 0) return "p - a does not divide n - a for p = " + h.p.str();
  }
  return {};
}

ConstructionResult assemble(const PrimeSlice& slice, const BigInt& L, const PrimeP& big_prime,
                            std::uint64_t k, const ConstructionParams& params,
                            std::vector<std::string>* trace) {
  if (slice.hits.empty()) throw DomainError("assemble: empty slice");
  ConstructionResult r;
  r.params = params;
  r.L = L;
  r.k = k;
  r.P = big_prime.P;
  r.kprime = big_prime.kprime;
  r.modulus = L * k * big_prime.kprime;
  r.slice = slice.hits;

  std::vector<SliceHit> usable;
  std::vector<BigInt> residues;
  for (const auto& h : slice.hits) {
    if (h.p == r.P) throw DomainError("assemble: P must differ from every slice prime");
    if (gcd(h.p, r.modulus) != 1) continue;
    usable.push_back(h);
    residues.push_back(h.p);
  }
  if (trace) {
    trace->push_back("assemble modulus=" + r.modulus.str() + " usable=" +
                     std::to_string(usable.size()) + " dropped_non_units=" +
                     std::to_string(slice.hits.size() - usable.size()));
  }

  std::optional<groups::SubsetSolution> sol;
  if (!residues.empty()) {
    sol = groups::find_subset_product_one(residues, r.modulus, params.strategy, std::nullopt,
                                          {params.seed, params.subset_rounds});
  }
  if (!sol) {
    throw InsufficientPrimes(usable.size(), r.modulus, groups::eq1_bound(r.modulus).eq1_bound);
  }

  r.n_prime = 1;
  for (auto i : sol->chosen) {
    r.chosen.push_back(usable[i]);
    r.n_prime *= usable[i].p;
  }
  r.n = r.P * r.n_prime;
  if (trace) {
    trace->push_back("subset size=" + std::to_string(r.chosen.size()) + " n=" + r.n.str());
  }

  if (auto failure = verify_chain(r); !failure.empty()) {
    throw InvariantViolation("divisibility chain broken: " + failure);
  }
  auto verdict = korselt::check(r.n, params.a, true);
  if (!verdict) {
    throw InvariantViolation("constructed n = " + r.n.str() + " failed verification: " +
                             verdict.detail);
  }
  r.certificate = std::move(*verdict.certificate);
  return r;
}

namespace {

ConstructionResult run_stages(const ConstructionParams& params, std::vector<std::string>& trace) {
  if (params.a == 0) throw DomainError("run_pipeline: a = 0 is degenerate and not constructed");
  if (params.A < 1) throw DomainError("run_pipeline: A must be positive");
  const bool explicit_blocks = !params.blocks.empty();
  if (explicit_blocks && params.mode == Mode::strict) {
    throw DomainError("run_pipeline: explicit blocks are only accepted in relaxed mode");
  }

  std::vector<std::pair<std::string, double>> timings;
  trace.push_back("params mode=" + to_string(params.mode) + " a=" + std::to_string(params.a) +
                  " seed=" + std::to_string(params.seed));

  auto t0 = Clock::now();
  std::vector<std::uint64_t> Q;
  std::vector<BigInt> blocks;
  BigInt L = 1;
  if (explicit_blocks) {
    validate_blocks(params.blocks);
    blocks = params.blocks;
    for (const auto& b : blocks) L *= b;
    trace.push_back("blocks explicit count=" + std::to_string(blocks.size()) + " L=" + L.str());
  } else {
    SmoothPrimeSet set = build_Q(params);
    trace.push_back("Q omega=" + std::to_string(set.omega()) + " range=[" +
                    std::to_string(set.lower) + "," + std::to_string(set.upper) + "]");
    BlockSet block_set = build_blocks(set, params.A);
    trace.push_back("blocks count=" + std::to_string(block_set.blocks.size()) +
                    " leftover=" + std::to_string(block_set.leftover.size()));
    Q = std::move(set.Q);
    L = std::move(set.L);
    blocks = std::move(block_set.blocks);
  }
  timings.emplace_back("setup", elapsed_ms(t0));

  std::uint64_t k_cap = params.k_cap;
  std::uint64_t kprime_cap = params.kprime_cap;
  if (params.mode == Mode::strict) {
    k_cap = kprime_cap = log_power_cap(L, params.A);
  } else if (k_cap == 0 || kprime_cap == 0) {
    throw DomainError("run_pipeline: relaxed mode needs explicit k_cap and kprime_cap");
  }
  trace.push_back("caps k_cap=" + std::to_string(k_cap) +
                  " kprime_cap=" + std::to_string(kprime_cap));

  t0 = Clock::now();
  SliceSearch search = find_best_slice(blocks, params.a, k_cap, params.threads);
  timings.emplace_back("slice", elapsed_ms(t0));
  trace.push_back("slice k=" + std::to_string(search.best.k) +
                  " size=" + std::to_string(search.best.hits.size()) +
                  " divisors=" + std::to_string(search.divisors) +
                  " skipped_gcd=" + std::to_string(search.skipped_gcd) +
                  " budget_failures=" + std::to_string(search.budget_failures) +
                  " distinct_k=" + std::to_string(search.distinct_k) +
                  " cross_slice_collisions=" + std::to_string(search.cross_slice_collisions));

  t0 = Clock::now();
  std::vector<BigInt> slice_primes;
  for (const auto& h : search.best.hits) slice_primes.push_back(h.p);
  PrimeP big = find_P(L, search.best.k, params.a, kprime_cap, slice_primes);
  if (params.mode == Mode::strict &&
      big.kprime.convert_to<double>() > std::pow(log_of(L), static_cast<double>(params.A))) {
    throw BudgetExceeded("find_P: k' = " + big.kprime.str() + " exceeds (ln L)^A");
  }
  timings.emplace_back("find_P", elapsed_ms(t0));
  trace.push_back("P=" + big.P.str() + " kprime=" + big.kprime.str());

  t0 = Clock::now();
  ConstructionResult r = assemble(search.best, L, big, search.best.k, params, &trace);
  timings.emplace_back("assemble", elapsed_ms(t0));
  trace.push_back("verified n=" + r.n.str());

  r.Q = std::move(Q);
  r.blocks = std::move(blocks);
  r.k_cap = k_cap;
  r.kprime_cap = kprime_cap;
  r.timings_ms = std::move(timings);
  return r;
}

}  // namespace

ConstructionResult run_pipeline(const ConstructionParams& params,
                                std::vector<std::string>* failure_trace) {
  std::vector<std::string> trace;
  try {
    ConstructionResult r = run_stages(params, trace);
    r.trace = std::move(trace);
    return r;
  } catch (...) {
    if (failure_trace) *failure_trace = std::move(trace);
    throw;
  }
}

}  // namespace acarm::construct
