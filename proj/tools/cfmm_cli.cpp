// Command-line front end: pool pricing, arbitrage, valuation, simulation, and
// property-check suites with machine-readable output.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cfmm/arbitrage.hpp"
#include "cfmm/io.hpp"
#include "cfmm/pool.hpp"
#include "cfmm/pricing.hpp"
#include "cfmm/simulate.hpp"
#include "cfmm/value.hpp"
#include "cfmm/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

using nlohmann::json;

cfmm::PriceVector parse_prices(const std::string& arg, std::size_t n) {
  cfmm::Vec c;
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    json j;
    in >> j;
    if (!j.is_array()) throw std::invalid_argument("price file must hold a JSON array");
    for (const auto& v : j) c.push_back(v.get<double>());
  } else {
    std::stringstream ss(arg);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(std::stod(cell));
  }
  cfmm::PriceVector prices(std::move(c));
  prices.validate();
  if (prices.size() != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " prices, got " +
                                std::to_string(prices.size()));
  return prices;
}

std::string resolve_out(const std::string& out, const std::string& fallback_name) {
  if (!out.empty()) return out;
  if (const char* dir = std::getenv("CFMM_OUT_DIR"))
    return (std::filesystem::path(dir) / fallback_name).string();
  return {};
}

void emit_json(const json& j, const std::string& out_path, bool pretty) {
  std::string text = pretty ? j.dump(2) : j.dump();
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output path: " + out_path);
    f << text << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant function market maker analysis"};
  app.require_subcommand(1);

  std::string pool_path, prices_arg, out_path, format = "json", suite = "all",
              replay_path;
  int numeraire = 0, steps = 1000, samples = 200;
  std::uint64_t seed = 0;
  double mu = 0.0, sigma = 0.05, dt = 1.0, threshold = 0.0;
  bool pretty = false;

  app.add_flag("--pretty", pretty, "Human-readable JSON output");

  auto add_pool = [&](CLI::App* cmd) {
    cmd->add_option("--pool", pool_path, "Pool config JSON")->required();
    cmd->add_option("--out", out_path, "Output path (default: stdout, or $CFMM_OUT_DIR)");
  };

  auto* cmd_price = app.add_subcommand("price", "Reported price at current reserves");
  add_pool(cmd_price);
  cmd_price->add_option("--numeraire", numeraire, "Numeraire coin index");

  auto* cmd_arb = app.add_subcommand("arb", "Optimal arbitrage trade");
  add_pool(cmd_arb);
  cmd_arb->add_option("--prices", prices_arg, "Reference prices (comma list or JSON file)")
      ->required();

  auto* cmd_value = app.add_subcommand("value", "Total reserve value via duality");
  add_pool(cmd_value);
  cmd_value->add_option("--prices", prices_arg, "Reference prices (comma list or JSON file)")
      ->required();

  auto* cmd_sim = app.add_subcommand("simulate", "Arbitrageur-driven simulation");
  add_pool(cmd_sim);
  cmd_sim->add_option("--steps", steps, "Number of steps");
  cmd_sim->add_option("--seed", seed, "RNG seed");
  cmd_sim->add_option("--mu", mu, "GBM drift per unit time");
  cmd_sim->add_option("--sigma", sigma, "GBM volatility per sqrt unit time");
  cmd_sim->add_option("--dt", dt, "Time units per step");
  cmd_sim->add_option("--threshold", threshold, "Minimum profit to execute a trade");
  cmd_sim->add_option("--replay", replay_path, "Replay price CSV instead of GBM");
  cmd_sim->add_option("--format", format, "Trace format: csv or json");

  auto* cmd_check = app.add_subcommand("check", "Property-verifier suites");
  add_pool(cmd_check);
  cmd_check->add_option("--prices", prices_arg, "Reference prices for path checks");
  cmd_check->add_option("--suite", suite,
                        "Suite: path-deficiency, monotone-phi, or all");
  cmd_check->add_option("--seed", seed, "RNG seed");
  cmd_check->add_option("--samples", samples, "Samples per suite");

  CLI11_PARSE(app, argc, argv);

  try {
    cfmm::PoolSpec pool = cfmm::load_pool(pool_path);
    const auto n = static_cast<std::size_t>(pool.n);

    if (cmd_price->parsed()) {
      auto rp = cfmm::reported_price(pool, pool.reserves, numeraire);
      json j = cfmm::reported_price_to_json(rp);
      if (pool.gamma < 1.0) {
        // Informational fee band around the point estimate, pairwise
        // [gamma * p, p / gamma].
        json band = json::array();
        for (double p : rp.normalized)
          band.push_back(json{pool.gamma * p, p / pool.gamma});
        j["fee_band"] = band;
      }
      emit_json(j, resolve_out(out_path, "price.json"), pretty);
      return kExitOk;
    }

    if (cmd_arb->parsed()) {
      auto c = parse_prices(prices_arg, n);
      auto res = cfmm::solve_arbitrage(pool, c);
      emit_json(cfmm::arbitrage_to_json(res), resolve_out(out_path, "arb.json"),
                pretty);
      return kExitOk;
    }

    if (cmd_value->parsed()) {
      auto c = parse_prices(prices_arg, n);
      auto res = cfmm::reserve_value(pool, c);
      json j = cfmm::reserve_value_to_json(res);
      if (pool.kind == cfmm::PoolKind::Curve && pool.alpha > 0.0)
        j["curve_lower_bound"] = cfmm::curve_value_lower_bound(pool, c);
      emit_json(j, resolve_out(out_path, "value.json"), pretty);
      return kExitOk;
    }

    if (cmd_sim->parsed()) {
      cfmm::SimConfig config;
      config.pool = pool;
      config.steps = steps;
      config.seed = seed;
      config.dt = dt;
      config.profit_threshold = threshold;
      if (!replay_path.empty())
        config.model = cfmm::read_replay_csv(replay_path);
      else
        config.model = cfmm::GbmModel{mu, sigma};

      auto trace = cfmm::simulate(config);
      auto stats = cfmm::trace_stats(trace);

      std::string out = resolve_out(out_path, format == "csv" ? "trace.csv"
                                                              : "trace.json");
      if (format == "csv") {
        if (out.empty())
          cfmm::write_trace_csv(std::cout, trace);
        else
          cfmm::write_trace_csv(out, trace);
        // Summary JSON always accompanies the trace on stderr-free channels:
        // stdout when writing to a file, alongside otherwise.
        if (!out.empty()) emit_json(cfmm::trace_stats_to_json(stats), "", pretty);
      } else if (format == "json") {
        json j = cfmm::trace_stats_to_json(stats);
        j["steps"] = trace.steps.size();
        emit_json(j, out, pretty);
      } else {
        throw std::invalid_argument("field 'format' must be csv or json");
      }
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      json suites = json::array();
      bool all_passed = true;
      auto run_suite = [&](const cfmm::CheckReport& report) {
        suites.push_back(cfmm::check_report_to_json(report));
        all_passed = all_passed && report.passed();
      };
      if (suite == "path-deficiency" || suite == "all") {
        cfmm::PriceVector c = prices_arg.empty()
                                  ? cfmm::PriceVector(cfmm::Vec(n, 1.0))
                                  : parse_prices(prices_arg, n);
        run_suite(cfmm::check_path_deficiency(pool, c, samples, 5, seed));
      }
      if (suite == "monotone-phi" || suite == "all") {
        run_suite(cfmm::check_monotone_phi(pool, samples, seed));
      }
      if (suites.empty())
        throw std::invalid_argument("unknown check suite: " + suite);
      emit_json(suites, resolve_out(out_path, "check.json"), pretty);
      return all_passed ? kExitOk : kExitCheckFailed;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const cfmm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalError;
  }
  return kExitOk;
}
