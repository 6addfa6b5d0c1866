#include <sstream>

#include <nlohmann/json.hpp>

#include "cfmm/io.hpp"
#include "cfmm/pool.hpp"
#include "cfmm/simulate.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cfmm;
using nlohmann::json;

TEST_CASE("pool config round trip") {
  auto spec = PoolSpec::curve({2.0, 3.0}, 1.5, 0.75, 0.997);
  auto j = pool_to_json(spec);
  auto back = pool_from_json(j);
  CHECK(back.kind == spec.kind);
  CHECK(back.alpha == spec.alpha);
  CHECK(back.beta == spec.beta);
  CHECK(back.gamma == spec.gamma);
  CHECK(back.reserves.r == spec.reserves.r);
}

TEST_CASE("config errors are all reported at once") {
  json j = {{"kind", "mean"},
            {"reserves", {1.0, -2.0}},
            {"gamma", 2.0},
            {"weights", {0.5, 0.6}},
            {"bogus", 1}};
  try {
    pool_from_json(j);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("gamma") != std::string::npos);
    CHECK(msg.find("reserve") != std::string::npos);
    CHECK(msg.find("weight") != std::string::npos);
  }
}

TEST_CASE("unknown kind and missing fields are rejected") {
  CHECK_THROWS_AS(pool_from_json(json{{"kind", "parabola"},
                                      {"reserves", {1.0, 1.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pool_from_json(json{{"kind", "curve"},
                                      {"reserves", {1.0, 1.0}}}),
                  std::invalid_argument);  // alpha/beta required
}

TEST_CASE("trace CSV round-trips through the replay reader") {
  SimConfig cfg;
  cfg.pool = PoolSpec::product({20.0, 20.0}, 0.997);
  cfg.model = GbmModel{0.0, 0.4};
  cfg.steps = 50;
  cfg.dt = 0.01;
  cfg.seed = 77;
  auto trace = simulate(cfg);

  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  auto replay = read_replay_csv(in);
  REQUIRE(replay.prices.size() == trace.steps.size());

  cfg.model = replay;
  auto again = simulate(cfg);
  REQUIRE(again.steps.size() == trace.steps.size());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    for (int j = 0; j < trace.n; ++j) {
      CHECK(again.steps[i].prices[j] == trace.steps[i].prices[j]);
      CHECK(again.steps[i].reserves[j] == trace.steps[i].reserves[j]);
    }
    CHECK(again.steps[i].cum_profit == trace.steps[i].cum_profit);
  }
}

TEST_CASE("csv header layout") {
  SimTrace trace;
  trace.n = 2;
  SimStep s;
  s.prices = {1.0, 2.0};
  s.trade = Trade::zero(2);
  s.reserves = {3.0, 4.0};
  s.reported = {1.0, 2.0};
  s.reserve_value = 5.0;
  s.hold_value = 6.0;
  s.cum_profit = 0.0;
  trace.steps.push_back(s);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::string header = out.str().substr(0, out.str().find('\n'));
  CHECK(header ==
        "step,price_1,price_2,delta_1,delta_2,lambda_1,lambda_2,"
        "reserve_1,reserve_2,reported_1,reported_2,"
        "reserve_value,hold_value,cum_profit");
}
