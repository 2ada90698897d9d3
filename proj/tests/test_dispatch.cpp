#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chillops/common.hpp"
#include "chillops/dispatch.hpp"

using namespace chillops;
using namespace chillops::dispatch;

namespace {

// catalog kW column for the reference loads, and the loads themselves
const double kRefLoads[] = {2267.2, 2233.7, 2181.4, 2283.2, 2291.3, 2326.0,
                            2348.9, 2323.4, 2335.7, 2324.9, 2297.9, 2327.2,
                            2291.2, 2284.2, 2293.1, 2219.3, 2188.4, 2148.3,
                            2135.3, 2109.3};

double max_curve_slope(const PlantConfig& plant) {
  double worst = 0.0;
  for (const auto& c : plant.chillers) {
    for (int i = 0; i <= 700; ++i) {
      const double x = c.min_plr + (1.0 - c.min_plr) * i / 700.0;
      const double s = std::abs(c.curve.coeff[1] + 2 * c.curve.coeff[2] * x +
                                3 * c.curve.coeff[3] * x * x);
      worst = std::max(worst, s);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("an exact cubic is recovered to 1e-8") {
  std::vector<PartLoadPoint> table;
  const double a = 40, b = 210, c = -130, d = 95;
  for (double x = 0.2; x <= 1.001; x += 0.1) {
    const double p = a + b * x + c * x * x + d * x * x * x;
    table.push_back({x, p / (x * 800), p});
  }
  PowerCurve fit = fit_power_curve(table);
  CHECK(fit.coeff[0] == doctest::Approx(a).epsilon(1e-8));
  CHECK(fit.coeff[1] == doctest::Approx(b).epsilon(1e-8));
  CHECK(fit.coeff[2] == doctest::Approx(c).epsilon(1e-8));
  CHECK(fit.coeff[3] == doctest::Approx(d).epsilon(1e-8));
}

TEST_CASE("catalog tables fit within the confirmed residual bound") {
  // the independent least-squares oracle reports 0.974 % and 0.553 % worst
  // relative residuals for the large and small machine respectively; the
  // frozen contract bound is 2 %
  PlantConfig plant = default_plant();
  for (const auto& ch : plant.chillers) {
    REQUIRE(ch.table.size() == 9);
    double worst = 0.0;
    for (const auto& row : ch.table) {
      const double rel = std::abs(ch.curve(row.plr) - row.power_kw) / row.power_kw;
      worst = std::max(worst, rel);
    }
    CHECK(worst <= 0.02);
    CHECK(worst <= (ch.capacity_rt == 1000.0 ? 0.0098 : 0.0056));
  }
}

TEST_CASE("degenerate fits are rejected") {
  std::vector<PartLoadPoint> table = {
      {0.5, 1.0, 100}, {0.5, 1.0, 100}, {0.5, 1.0, 100}, {0.5, 1.0, 100}};
  CHECK_THROWS_AS(fit_power_curve(table), InputError);
  CHECK_THROWS_AS(fit_power_curve({{0.5, 1.0, 100}}), InputError);
}

TEST_CASE("catalog rows are internally consistent within 1.5 kW") {
  PlantConfig plant = default_plant();
  int rows = 0;
  for (const auto& ch : plant.chillers) {
    ch.validate();  // throws beyond the bound
    for (const auto& row : ch.table) {
      CHECK(std::abs(row.power_kw - row.eff_kw_rt * row.plr * ch.capacity_rt) <=
            1.5);
      ++rows;
    }
  }
  CHECK(rows == 36);  // four machines, two distinct tables
}

TEST_CASE("chiller power: off draws nothing, catalog points match the fit") {
  PlantConfig plant = default_plant();
  const auto& big = plant.chillers[0];
  const auto& small = plant.chillers[3];
  CHECK(chiller_power(big, 0.0) == 0.0);
  CHECK(chiller_power(big, 0.8) == doctest::Approx(373.70202020202026).epsilon(1e-12));
  CHECK(std::abs(chiller_power(big, 0.8) - 374.0) / 374.0 < 0.02);
  CHECK(chiller_power(small, 1.0) == doctest::Approx(248.62626262626242).epsilon(1e-12));
  CHECK(std::abs(chiller_power(small, 1.0) - 249.0) / 249.0 < 0.02);
  CHECK_THROWS_AS(chiller_power(big, -0.1), InputError);
  CHECK_THROWS_AS(chiller_power(big, 0.2), InputError);        // below min_plr
  CHECK_NOTHROW(chiller_power(big, 0.2, /*strict=*/false));
}

TEST_CASE("the fitted curves preserve the efficiency ordering that drives "
          "the sequencing result") {
  PlantConfig plant = default_plant();
  const double eff_big_60 =
      plant.chillers[0].curve(0.6) / (0.6 * 1000.0);
  const double eff_small_90 =
      plant.chillers[3].curve(0.9) / (0.9 * 500.0);
  CHECK(eff_big_60 < eff_small_90);
}

// ---------------------------------------------------------------------------
// exhaustive oracle
// ---------------------------------------------------------------------------

TEST_CASE("zero load parks the whole plant") {
  PlantConfig plant = default_plant();
  auto s = optimize_dispatch_bruteforce(plant, 0.0);
  CHECK(s.feasible);
  CHECK(s.total_power_kw == 0.0);
  for (double p : s.plr) CHECK(p == 0.0);
}

TEST_CASE("loads beyond the plant capacity come back infeasible") {
  PlantConfig plant = default_plant();
  auto s = optimize_dispatch_bruteforce(plant, 3600.0);
  CHECK(!s.feasible);
  auto ga = optimize_dispatch_ga(plant, 3600.0, GaConfig{});
  CHECK(!ga.feasible);
}

TEST_CASE("the reference peak load runs three large machines") {
  PlantConfig plant = default_plant();
  auto s = optimize_dispatch_bruteforce(plant, 2267.2);
  CHECK(s.feasible);
  CHECK(s.plr[3] == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(s.plr[i] >= 0.3);
  // frozen from the independent grid search: (0.75, 0.76, 0.76)
  CHECK(s.total_power_kw == doctest::Approx(1063.4966666666667).epsilon(1e-9));
  // within 0.52 % of the published 1069.0 kW schedule value
  CHECK(std::abs(s.total_power_kw - 1069.0) / 1069.0 < 0.0052);
  CHECK(solution_is_valid(plant, s, 2267.2));
}

TEST_CASE("every reference load keeps the small machine off") {
  PlantConfig plant = default_plant();
  for (double load : kRefLoads) {
    auto s = optimize_dispatch_bruteforce(plant, load);
    REQUIRE(s.feasible);
    CHECK(s.plr[3] == 0.0);
    CHECK(s.supplied_rt + 1e-9 >= load);
    CHECK(solution_is_valid(plant, s, load));
  }
}

TEST_CASE("identical machines are interchangeable in the optimum") {
  PlantConfig plant = default_plant();
  PlantConfig shuffled = plant;
  std::swap(shuffled.chillers[0], shuffled.chillers[2]);
  for (double load : {900.0, 1750.0, 2267.2, 3100.0}) {
    auto a = optimize_dispatch_bruteforce(plant, load);
    auto b = optimize_dispatch_bruteforce(shuffled, load);
    CHECK(a.total_power_kw == doctest::Approx(b.total_power_kw).epsilon(1e-12));
    auto pa = a.plr, pb = b.plr;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    for (std::size_t i = 0; i < pa.size(); ++i)
      CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
  }
}

TEST_CASE("optimal power grows with load") {
  PlantConfig plant = default_plant();
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    const double load = 3400.0 * i / 50.0;
    auto s = optimize_dispatch_bruteforce(plant, load);
    REQUIRE(s.feasible);
    CHECK(s.total_power_kw >= prev - 1e-9);
    prev = s.total_power_kw;
  }
}

TEST_CASE("ties resolve to the lexicographically smallest loading vector") {
  // two identical machines, symmetric optimum: the canonical (sorted)
  // representative must come back
  PlantConfig plant;
  for (int i = 0; i < 2; ++i) {
    ChillerSpec c = default_plant().chillers[0];
    c.id = "A" + std::to_string(i);
    plant.chillers.push_back(c);
  }
  auto s = optimize_dispatch_bruteforce(plant, 1100.0);
  REQUIRE(s.feasible);
  CHECK(s.plr[0] <= s.plr[1] + 1e-12);
}

// ---------------------------------------------------------------------------
// genetic algorithm
// ---------------------------------------------------------------------------

TEST_CASE("a lone chiller lands at exactly half load") {
  PlantConfig plant;
  plant.chillers.push_back(default_plant().chillers[0]);
  GaConfig cfg;
  cfg.seed = 99;
  auto s = optimize_dispatch_ga(plant, 500.0, cfg);
  REQUIRE(s.feasible);
  CHECK(std::abs(s.plr[0] - 0.5) <= 1e-3);
  auto oracle = optimize_dispatch_bruteforce(plant, 500.0);
  CHECK(std::abs(s.total_power_kw - oracle.total_power_kw) /
            oracle.total_power_kw <
        1e-3);
}

TEST_CASE("ga tracks the oracle within 0.1 percent on random loads") {
  PlantConfig plant = default_plant();
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> dist(600.0, 3400.0);
  const double slack = max_curve_slope(plant) * 0.01 + 1e-6;
  int good = 0;
  for (int i = 0; i < 20; ++i) {
    const double load = dist(rng);
    auto oracle = optimize_dispatch_bruteforce(plant, load);
    GaConfig cfg;
    cfg.seed = 9000 + i;
    auto ga = optimize_dispatch_ga(plant, load, cfg);
    REQUIRE(ga.feasible);
    REQUIRE(oracle.feasible);
    CHECK(solution_is_valid(plant, ga, load));
    if (ga.total_power_kw <= oracle.total_power_kw * 1.001) ++good;
    // the exhaustive optimum can only be beaten within grid resolution
    CHECK(ga.total_power_kw >= oracle.total_power_kw - slack);
  }
  CHECK(good >= 19);
}

TEST_CASE("the reference peak load keeps the small machine off under the ga") {
  PlantConfig plant = default_plant();
  GaConfig cfg;
  cfg.seed = 2267;
  auto s = optimize_dispatch_ga(plant, 2267.2, cfg);
  REQUIRE(s.feasible);
  CHECK(s.plr[3] == 0.0);
}

TEST_CASE("ga configs are validated") {
  GaConfig cfg;
  cfg.population = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = GaConfig{};
  cfg.crossover = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = GaConfig{};
  cfg.elitism = cfg.population;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("retarget keeps the running set and hits the boundary") {
  PlantConfig plant = default_plant();
  DispatchSolution s;
  s.plr = {0.8, 0.7, 0.9, 0.0};
  auto up = retarget_solution(plant, s, 2500.0);
  CHECK(up.supplied_rt == doctest::Approx(2500.0).epsilon(1e-9));
  CHECK(up.plr[3] == 0.0);
  auto down = retarget_solution(plant, s, 2000.0);
  CHECK(down.supplied_rt == doctest::Approx(2000.0).epsilon(1e-9));
  for (int i = 0; i < 3; ++i) CHECK(down.plr[i] >= 0.3);
  // unreachable target pins at the loading floor
  auto floor = retarget_solution(plant, s, 100.0);
  CHECK(floor.supplied_rt == doctest::Approx(900.0).epsilon(1e-9));
}

// ---------------------------------------------------------------------------
// scheduling
// ---------------------------------------------------------------------------

TEST_CASE("plan energy is power times slot hours") {
  PlantConfig plant = default_plant();
  LoadSeries loads;
  loads.start = parse_iso8601("2023-08-15T08:30:00");
  loads.values = {2267.2, 2267.2};
  GaConfig cfg;
  auto plan = schedule_dispatch(plant, loads, cfg);
  REQUIRE(plan.slots.size() == 2);
  CHECK(!plan.partial);
  const double p0 = plan.slots[0].solution.total_power_kw;
  const double p1 = plan.slots[1].solution.total_power_kw;
  CHECK(plan.energy_kwh == doctest::Approx(0.5 * (p0 + p1)).epsilon(1e-12));
  CHECK(plan.max_demand_kw == doctest::Approx(std::max(p0, p1)));
}

TEST_CASE("the reference schedule peaks within half a percent of its "
          "published maximum demand") {
  PlantConfig plant = default_plant();
  LoadSeries loads;
  loads.start = parse_iso8601("2023-08-15T08:30:00");
  loads.values.assign(std::begin(kRefLoads), std::end(kRefLoads));
  GaConfig cfg;
  auto plan = schedule_dispatch(plant, loads, cfg, /*use_oracle=*/true);
  CHECK(!plan.partial);
  CHECK(std::abs(plan.max_demand_kw - 1096.4) / 1096.4 < 0.005);
}

TEST_CASE("zero loads produce a zero-energy plan") {
  PlantConfig plant = default_plant();
  LoadSeries loads;
  loads.start = parse_iso8601("2023-08-15T00:00:00");
  loads.values.assign(4, 0.0);
  auto plan = schedule_dispatch(plant, loads, GaConfig{}, true);
  CHECK(plan.energy_kwh == 0.0);
  CHECK(plan.max_demand_kw == 0.0);
}

TEST_CASE("infeasible slots mark the plan partial and are listed") {
  PlantConfig plant = default_plant();
  LoadSeries loads;
  loads.start = parse_iso8601("2023-08-15T00:00:00");
  loads.values = {1000.0, 4000.0, 1000.0};
  auto plan = schedule_dispatch(plant, loads, GaConfig{}, true);
  CHECK(plan.partial);
  REQUIRE(plan.infeasible_slots.size() == 1);
  CHECK(plan.infeasible_slots[0] == 1);
}

TEST_CASE("plants round-trip through their file format") {
  PlantConfig plant = default_plant();
  PlantConfig back = load_plant_text(save_plant(plant, "hdr"));
  REQUIRE(back.chillers.size() == plant.chillers.size());
  for (std::size_t i = 0; i < back.chillers.size(); ++i) {
    CHECK(back.chillers[i].capacity_rt == plant.chillers[i].capacity_rt);
    CHECK(back.chillers[i].curve.coeff == plant.chillers[i].curve.coeff);
  }
  CHECK(back.total_capacity_rt() == doctest::Approx(3500.0));
  CHECK(back.total_capacity_kw(3.517) == doctest::Approx(12309.5));
}

TEST_CASE("best-efficiency loadings sit where the fitted curves say") {
  PlantConfig plant = default_plant();
  const double big = max_efficiency_plr(plant.chillers[0]);
  const double small = max_efficiency_plr(plant.chillers[3]);
  // frozen from the independent scan of the fitted curves
  CHECK(big == doctest::Approx(0.8144).epsilon(1e-3));
  CHECK(small == doctest::Approx(0.9385).epsilon(1e-3));
}
