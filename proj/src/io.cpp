#include "cfmm/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cfmm {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Vec vec_from_json(const json& j, const std::string& field,
                  std::vector<std::string>& errors) {
  Vec out;
  if (!j.is_array()) {
    errors.push_back(field + " must be an array of numbers");
    return out;
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      errors.push_back(field + " must contain only numbers");
      return {};
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

PoolSpec pool_from_json(const json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) throw std::invalid_argument("pool config must be a JSON object");

  static const std::set<std::string> known = {"kind",    "reserves", "gamma",
                                              "weights", "alpha",    "beta"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) errors.push_back("unknown field '" + it.key() + "'");
  }

  PoolSpec spec;
  std::string kind;
  bool kind_ok = false;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    errors.push_back("field 'kind' (string) is required");
  } else {
    kind = j["kind"].get<std::string>();
    kind_ok = true;
    if (kind == "product")
      spec.kind = PoolKind::Product;
    else if (kind == "mean")
      spec.kind = PoolKind::Mean;
    else if (kind == "curve")
      spec.kind = PoolKind::Curve;
    else {
      errors.push_back("field 'kind' must be one of product, mean, curve");
      kind_ok = false;
    }
  }

  if (!j.contains("reserves")) {
    errors.push_back("field 'reserves' is required");
  } else {
    spec.reserves = Reserves(vec_from_json(j["reserves"], "reserves", errors));
    spec.n = static_cast<int>(spec.reserves.size());
  }

  spec.gamma = 1.0;
  if (j.contains("gamma")) {
    if (!j["gamma"].is_number())
      errors.push_back("field 'gamma' must be a number");
    else
      spec.gamma = j["gamma"].get<double>();
  }

  if (kind == "mean") {
    if (!j.contains("weights"))
      errors.push_back("mean pools require field 'weights'");
    else
      spec.weights = vec_from_json(j["weights"], "weights", errors);
  } else if (j.contains("weights")) {
    errors.push_back("field 'weights' is only valid for mean pools");
  }

  if (kind == "curve") {
    for (const char* f : {"alpha", "beta"}) {
      if (!j.contains(f))
        errors.push_back(std::string("curve pools require field '") + f + "'");
      else if (!j[f].is_number())
        errors.push_back(std::string("field '") + f + "' must be a number");
    }
    if (j.contains("alpha") && j["alpha"].is_number()) spec.alpha = j["alpha"];
    if (j.contains("beta") && j["beta"].is_number()) spec.beta = j["beta"];
  } else {
    for (const char* f : {"alpha", "beta"})
      if (j.contains(f))
        errors.push_back(std::string("field '") + f + "' is only valid for curve pools");
  }

  if (kind == "product" && spec.n >= 2)
    spec.weights.assign(static_cast<std::size_t>(spec.n), 1.0 / spec.n);

  // Semantic validation runs whenever the shape allows it, so one pass
  // reports structural and semantic problems together.
  if (kind_ok && spec.n > 0) {
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      errors.push_back(e.what());
    }
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid pool config:";
    for (const auto& e : errors) os << "\n  - " << e;
    throw std::invalid_argument(os.str());
  }
  return spec;
}

PoolSpec load_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pool config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("pool config is not valid JSON (" + path +
                                "): " + e.what());
  }
  return pool_from_json(j);
}

json pool_to_json(const PoolSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["reserves"] = spec.reserves.r;
  j["gamma"] = spec.gamma;
  if (spec.kind == PoolKind::Mean) j["weights"] = spec.weights;
  if (spec.kind == PoolKind::Curve) {
    j["alpha"] = spec.alpha;
    j["beta"] = spec.beta;
  }
  return j;
}

json reported_price_to_json(const ReportedPrice& p) {
  return json{{"raw_gradient", p.raw_gradient},
              {"numeraire", p.numeraire},
              {"normalized", p.normalized}};
}

json arbitrage_to_json(const ArbitrageResult& r) {
  return json{{"delta", r.trade.delta},
              {"lambda", r.trade.lambda},
              {"post_reserves", r.post_reserves.r},
              {"profit", r.profit},
              {"dual_lambda", r.dual_lambda},
              {"status", to_string(r.status)}};
}

json reserve_value_to_json(const ReserveValueResult& r) {
  return json{{"value", r.value},
              {"dual_lambda", r.dual_lambda},
              {"primal_value", r.primal_value},
              {"duality_gap", r.duality_gap},
              {"method", to_string(r.method)}};
}

json check_report_to_json(const CheckReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back(json{{"seed", f.seed},
                            {"inputs", f.inputs},
                            {"observed", f.observed},
                            {"bound", f.bound}});
  }
  return json{{"check", r.check},
              {"samples", r.samples},
              {"seed", r.seed},
              {"failures", failures}};
}

json trace_stats_to_json(const TraceStats& s) {
  return json{{"final_value", s.final_value},
              {"min_value", s.min_value},
              {"max_value", s.max_value},
              {"total_profit", s.total_profit},
              {"max_price_gap", s.max_price_gap},
              {"trade_fraction", s.trade_fraction}};
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  const int n = trace.n;
  os << "step";
  for (const char* group : {"price", "delta", "lambda", "reserve", "reported"})
    for (int i = 1; i <= n; ++i) os << ',' << group << '_' << i;
  os << ",reserve_value,hold_value,cum_profit\n";
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const SimStep& s = trace.steps[t];
    os << t;
    for (double x : s.prices) os << ',' << fmt17(x);
    for (double x : s.trade.delta) os << ',' << fmt17(x);
    for (double x : s.trade.lambda) os << ',' << fmt17(x);
    for (double x : s.reserves) os << ',' << fmt17(x);
    for (double x : s.reported) os << ',' << fmt17(x);
    os << ',' << fmt17(s.reserve_value) << ',' << fmt17(s.hold_value) << ','
       << fmt17(s.cum_profit) << '\n';
  }
}

void write_trace_csv(const std::string& path, const SimTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open trace output: " + path);
  write_trace_csv(out, trace);
}

ReplayModel read_replay_csv(std::istream& is) {
  ReplayModel model;
  std::string line;
  if (!std::getline(is, line))
    throw std::invalid_argument("replay CSV is empty");
  // Header row: step,price_1..price_n (extra columns, e.g. a full trace,
  // are tolerated; only the price block is read).
  std::size_t n = 0;
  {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (cell != "step")
      throw std::invalid_argument("replay CSV must start with a 'step' column");
    while (std::getline(ss, cell, ',')) {
      if (cell.rfind("price_", 0) == 0)
        ++n;
      else
        break;
    }
    if (n == 0) throw std::invalid_argument("replay CSV has no price columns");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // step index
    Vec row;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(ss, cell, ','))
        throw std::invalid_argument("replay CSV row is too short");
      row.push_back(std::stod(cell));
    }
    model.prices.push_back(std::move(row));
  }
  return model;
}

ReplayModel read_replay_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open replay CSV: " + path);
  return read_replay_csv(in);
}

}  // namespace cfmm
