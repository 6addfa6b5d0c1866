// Config, trace, and report serialization.
#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pricing.hpp"
#include "cfmm/simulate.hpp"
#include "cfmm/types.hpp"
#include "cfmm/value.hpp"
#include "cfmm/verify.hpp"

namespace cfmm {

// Parses a pool configuration object: kind, reserves, gamma, weights,
// alpha/beta. Unknown fields are rejected; validation errors list every
// problem found, not just the first.
PoolSpec pool_from_json(const nlohmann::json& j);
PoolSpec load_pool(const std::string& path);

nlohmann::json pool_to_json(const PoolSpec& spec);
nlohmann::json reported_price_to_json(const ReportedPrice& p);
nlohmann::json arbitrage_to_json(const ArbitrageResult& r);
nlohmann::json reserve_value_to_json(const ReserveValueResult& r);
nlohmann::json check_report_to_json(const CheckReport& r);
nlohmann::json trace_stats_to_json(const TraceStats& s);

// Trace CSV: header
//   step,price_1..n,delta_1..n,lambda_1..n,reserve_1..n,reported_1..n,
//   reserve_value,hold_value,cum_profit
// Numbers carry 17 significant digits so a replay of the emitted price
// columns reproduces the trace exactly.
void write_trace_csv(std::ostream& os, const SimTrace& trace);
void write_trace_csv(const std::string& path, const SimTrace& trace);

// Replay CSV: header step,price_1..price_n.
ReplayModel read_replay_csv(std::istream& is);
ReplayModel read_replay_csv(const std::string& path);

}  // namespace cfmm
