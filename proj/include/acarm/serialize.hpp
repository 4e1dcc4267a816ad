#pragma once

// JSON views of the result types. Integers that fit in 64 bits are emitted as
// JSON numbers; larger ones as decimal strings.

#include <json.hpp>

#include "acarm/bounds.hpp"
#include "acarm/construct.hpp"
#include "acarm/groups.hpp"
#include "acarm/korselt.hpp"

namespace acarm {

nlohmann::json to_json(const BigInt& v);

namespace korselt {
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const CheckResult& r);
}  // namespace korselt

namespace groups {
nlohmann::json to_json(const GroupBoundReport& r);
}

namespace bounds {
nlohmann::json to_json(const CountingReport& r);
nlohmann::json to_json(const BinomSandwich& s);
}  // namespace bounds

namespace construct {
nlohmann::json to_json(const ConstructionParams& p);
/// `with_timings` adds wall-clock timings, which are not reproducible.
nlohmann::json to_json(const ConstructionResult& r, bool with_timings = false);
}  // namespace construct

}  // namespace acarm
