#include <doctest.h>

#include <cmath>

#include "chillops/common.hpp"
#include "chillops/tes.hpp"

using namespace chillops;
using namespace chillops::tes;

namespace {

const double kConv = 3.517;  // thermal kW per RT

TariffSchedule default_tariff() { return TariffSchedule{}; }

/// Day profile on the half-hour grid; `level_of` maps minutes-of-day to RT.
template <typename F>
LoadSeries day_profile(F level_of) {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-15T00:00:00");  // a Tuesday
  s.provenance = Provenance::Predicted;
  for (int i = 0; i < 48; ++i) s.values.push_back(level_of(i * 30));
  return s;
}

void check_ledger_invariants(const EnergyReport& e, double eta) {
  const double h = 0.5;
  double prev_soc = e.ledger.empty() ? 0.0 : e.ledger.front().soc_kwh -
                                                 e.ledger.front().charge_kwh +
                                                 e.ledger.front().discharge_kwh / eta;
  double charged = 0.0, discharged = 0.0;
  for (const auto& row : e.ledger) {
    // thermal balance, exact in consistent units
    const double balance = row.chiller_out_rt +
                           row.discharge_kwh / (kConv * h) -
                           row.charge_kwh / (kConv * h);
    CHECK(std::abs(balance - row.load_rt) <= 1e-6);
    CHECK(row.soc_kwh >= -1e-9);
    CHECK(row.soc_kwh <= e.tes_capacity_kwh + 1e-6);
    // state evolves by the declared flows
    const double expect =
        prev_soc + row.charge_kwh - row.discharge_kwh / eta;
    CHECK(row.soc_kwh == doctest::Approx(expect).epsilon(1e-9));
    prev_soc = row.soc_kwh;
    charged += row.charge_kwh;
    discharged += row.discharge_kwh;
  }
  CHECK(charged == doctest::Approx(e.charged_kwh).epsilon(1e-12));
  CHECK(discharged == doctest::Approx(e.discharged_kwh).epsilon(1e-12));
  CHECK(discharged <= eta * charged + 1e-6);
}

}  // namespace

TEST_CASE("peak window membership, including a wrapped window") {
  TariffSchedule t = default_tariff();
  CHECK(!t.in_peak(parse_iso8601("2023-08-15T06:59:00")));
  CHECK(t.in_peak(parse_iso8601("2023-08-15T07:00:00")));
  CHECK(t.in_peak(parse_iso8601("2023-08-15T22:59:00")));
  CHECK(!t.in_peak(parse_iso8601("2023-08-15T23:00:00")));

  t.peak_start_min = 22 * 60;
  t.peak_end_min = 6 * 60;
  CHECK(t.in_peak(parse_iso8601("2023-08-15T23:30:00")));
  CHECK(t.in_peak(parse_iso8601("2023-08-15T03:00:00")));
  CHECK(!t.in_peak(parse_iso8601("2023-08-15T12:00:00")));
}

TEST_CASE("cost arithmetic reproduces the published analysis rows") {
  TariffSchedule t = default_tariff();
  CapexRates cx;

  EnergyReport base;
  base.peak_kwh = 13295.7;
  base.offpeak_kwh = 1174.9;
  base.total_kwh = base.peak_kwh + base.offpeak_kwh;
  base.max_demand_kw = 1096.4;
  TesConfig no_tes;
  CostReport cb = cost_analysis(base, 12309.5, no_tes, t, cx);
  CHECK(std::abs(cb.daily_peak_tariff - 3944.8) / 3944.8 < 0.001);
  CHECK(std::abs(cb.daily_offpeak_tariff - 216.5) / 216.5 < 0.001);
  CHECK(std::abs(cb.daily_tariff - 4161.4) / 4161.4 < 0.001);
  CHECK(cb.chiller_capital == doctest::Approx(8050413.0));  // exact product
  CHECK(std::abs(cb.ten_year_total - 25407720.09) / 25407720.09 < 1e-4);

  EnergyReport p1;
  p1.peak_kwh = 10882.4;
  p1.offpeak_kwh = 3349.9;
  p1.max_demand_kw = 837.0;
  TesConfig tes1;
  tes1.capacity_kwh = 20217.4;
  CostReport c1 = cost_analysis(p1, 7034.0, tes1, t, cx, &cb);
  CHECK(std::abs(c1.total_capital - 6037492.1) / 6037492.1 < 0.001);
  CHECK(c1.has_savings);
  CHECK(std::lround(c1.capital_savings * 100.0) == 25);

  EnergyReport p4;
  p4.peak_kwh = 9735.7;
  p4.offpeak_kwh = 4867.8;
  p4.max_demand_kw = 608.5;
  TesConfig tes4;
  tes4.capacity_kwh = 35809.3;
  CostReport c4 = cost_analysis(p4, 5275.5, tes4, t, cx, &cb);
  CHECK(std::lround(c4.ten_year_savings * 100.0) == 17);
  CHECK(std::lround(c4.operating_savings * 100.0) == 13);
}

TEST_CASE("cost identities recompute from the energy fields") {
  TariffSchedule t = default_tariff();
  CapexRates cx;
  EnergyReport e;
  e.peak_kwh = 5000.0;
  e.offpeak_kwh = 2000.0;
  e.max_demand_kw = 700.0;
  TesConfig tes;
  tes.capacity_kwh = 10000.0;
  CostReport r = cost_analysis(e, 8000.0, tes, t, cx);
  CHECK(r.chiller_capital == doctest::Approx(8000.0 * 654.0));
  CHECK(r.tes_capital == doctest::Approx(10000.0 * 71.09));
  CHECK(r.total_capital == doctest::Approx(r.chiller_capital + r.tes_capital));
  CHECK(r.daily_tariff ==
        doctest::Approx(5000.0 * 0.2967 + 2000.0 * 0.1843));
  CHECK(r.yearly_operating ==
        doctest::Approx(365.0 * r.daily_tariff + 12.0 * r.monthly_capacity));
  CHECK(r.ten_year_total ==
        doctest::Approx(r.total_capital + 10.0 * r.yearly_operating));
}

TEST_CASE("raising the peak rate never lowers the daily tariff") {
  CapexRates cx;
  EnergyReport e;
  e.peak_kwh = 4000.0;
  e.offpeak_kwh = 3000.0;
  e.max_demand_kw = 500.0;
  TesConfig tes;
  double prev = -1.0;
  for (double rate = 0.05; rate < 0.6; rate += 0.05) {
    TariffSchedule t = default_tariff();
    t.peak_rate = rate;
    CostReport r = cost_analysis(e, 5000.0, tes, t, cx);
    CHECK(r.daily_tariff >= prev);
    prev = r.daily_tariff;
  }
}

TEST_CASE("lower maximum demand means a strictly lower capacity charge") {
  TariffSchedule t = default_tariff();
  CapexRates cx;
  TesConfig tes;
  EnergyReport a, b;
  a.max_demand_kw = 900.0;
  b.max_demand_kw = 750.0;
  CostReport ra = cost_analysis(a, 5000.0, tes, t, cx);
  CostReport rb = cost_analysis(b, 5000.0, tes, t, cx);
  CHECK(rb.monthly_capacity < ra.monthly_capacity);
}

TEST_CASE("identical reports compare at zero savings") {
  TariffSchedule t = default_tariff();
  CapexRates cx;
  EnergyReport e;
  e.peak_kwh = 4000.0;
  e.offpeak_kwh = 1000.0;
  e.max_demand_kw = 600.0;
  TesConfig tes;
  CostReport base = cost_analysis(e, 7000.0, tes, t, cx);
  base.name = "baseline";
  CostReport same = cost_analysis(e, 7000.0, tes, t, cx, &base);
  same.name = "same";
  CHECK(same.capital_savings == doctest::Approx(0.0));
  CHECK(same.operating_savings == doctest::Approx(0.0));
  CHECK(same.ten_year_savings == doctest::Approx(0.0));
  const std::string table = compare_proposals({base, same}, "hdr");
  CHECK(table.find("ranking_10yr=") != std::string::npos);
  CHECK_THROWS_AS(compare_proposals({base}, ""), InputError);
}

TEST_CASE("published proposal energies rank the fourth design best") {
  TariffSchedule t = default_tariff();
  CapexRates cx;
  auto mk = [&](const char* name, double peak, double off, double demand,
                double fleet_kw, double tes_kwh,
                const CostReport* base) {
    EnergyReport e;
    e.peak_kwh = peak;
    e.offpeak_kwh = off;
    e.max_demand_kw = demand;
    TesConfig tc;
    tc.capacity_kwh = tes_kwh;
    CostReport r = cost_analysis(e, fleet_kw, tc, t, cx, base);
    r.name = name;
    return r;
  };
  CostReport base = mk("baseline", 13295.7, 1174.9, 1096.4, 12309.5, 0.0, nullptr);
  std::vector<CostReport> all = {
      base,
      mk("p1", 10882.4, 3349.9, 837.0, 7034.0, 20217.4, &base),
      mk("p2", 6696.0, 7672.5, 959.1, 8792.5, 51879.2, &base),
      mk("p3", 3564.0, 11036.8, 1379.6, 12309.5, 74394.1, &base),
      mk("p4", 9735.7, 4867.8, 608.5, 5275.5, 35809.3, &base)};
  const std::string table = compare_proposals(all, "");
  CHECK(table.find("ranking_10yr=p4>") != std::string::npos);
  CHECK(std::lround(all[4].ten_year_savings * 100.0) == 17);
}

// ---------------------------------------------------------------------------
// simulation
// ---------------------------------------------------------------------------

TEST_CASE("preset 0 with no storage equals the per-slot dispatch plan") {
  ProposalConfig p;
  p.name = "baseline";
  p.preset = 0;
  p.fleet = dispatch::default_plant();
  LoadSeries day = day_profile([](int mod) {
    return mod >= 9 * 60 && mod < 18 * 60 ? 2100.0 : 400.0;
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  EnergyReport e = simulate_proposal(p, day, default_tariff(), ga, phys);
  CHECK(e.charged_kwh == 0.0);
  CHECK(e.discharged_kwh == 0.0);
  check_ledger_invariants(e, p.tes.eta);

  auto plan = dispatch::schedule_dispatch(p.fleet, day, ga, false);
  CHECK(e.total_kwh == doctest::Approx(plan.energy_kwh).epsilon(1e-12));
  CHECK(e.max_demand_kw == doctest::Approx(plan.max_demand_kw).epsilon(1e-12));
}

TEST_CASE("a flat day under the all-day preset needs no storage flow") {
  ProposalConfig p;
  p.name = "p4";
  p.preset = 4;
  auto plant = dispatch::default_plant();
  p.fleet.chillers = {plant.chillers[0], plant.chillers[3]};  // 1000 + 500
  p.tes.auto_capacity = true;
  LoadSeries day = day_profile([](int) { return 1200.0; });
  dispatch::GaConfig ga;
  PhysConstants phys;
  EnergyReport e = simulate_proposal(p, day, default_tariff(), ga, phys);
  CHECK(e.charged_kwh <= 1.0);     // kWh over the whole day
  CHECK(e.discharged_kwh <= 1.0);
  // constant loading all day: the maximum demand is the constant power
  CHECK(e.max_demand_kw ==
        doctest::Approx(e.total_kwh / 24.0).epsilon(1e-6));
  check_ledger_invariants(e, p.tes.eta);
}

TEST_CASE("a two-level day under preset 1 charges off-peak, discharges in-peak") {
  ProposalConfig p;
  p.name = "p1";
  p.preset = 1;
  auto plant = dispatch::default_plant();
  p.fleet.chillers = {plant.chillers[0], plant.chillers[1]};  // two large
  p.tes.auto_capacity = true;
  // night level below the fixed chiller's best-efficiency output, day level
  // above what two machines at the solved flat level can carry alone
  LoadSeries day = day_profile([](int mod) {
    return mod >= 7 * 60 && mod < 23 * 60 ? 1700.0 : 300.0;
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  const TariffSchedule tariff = default_tariff();
  EnergyReport e = simulate_proposal(p, day, tariff, ga, phys);
  check_ledger_invariants(e, p.tes.eta);
  CHECK(e.charged_kwh > 100.0);
  CHECK(e.discharged_kwh > 100.0);
  for (const auto& row : e.ledger) {
    if (row.charge_kwh > 0) CHECK(!row.peak);
    if (row.discharge_kwh > 0) CHECK(row.peak);
  }
  // cyclic: the store ends the day where it started
  const auto& first = e.ledger.front();
  const double initial =
      first.soc_kwh - first.charge_kwh + first.discharge_kwh / p.tes.eta;
  CHECK(std::abs(e.ledger.back().soc_kwh - initial) <=
        0.01 * std::max(e.tes_capacity_kwh, 1.0));
}

TEST_CASE("presets 2 and 3 shift the day load into off-peak charging") {
  auto plant = dispatch::default_plant();
  LoadSeries day = day_profile([](int mod) {
    return mod >= 9 * 60 && mod < 18 * 60 ? 1500.0 : 350.0;
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  for (int preset : {2, 3}) {
    ProposalConfig p;
    p.name = "p" + std::to_string(preset);
    p.preset = preset;
    p.fleet = plant;
    p.tes.auto_capacity = true;
    EnergyReport e = simulate_proposal(p, day, default_tariff(), ga, phys);
    check_ledger_invariants(e, p.tes.eta);
    CHECK(e.charged_kwh > 0.0);
    CHECK(e.discharged_kwh > 0.0);
    // the solved set works off-peak under these presets
    double offpeak_out = 0.0, peak_out = 0.0;
    for (const auto& row : e.ledger)
      (row.peak ? peak_out : offpeak_out) += row.chiller_out_rt;
    CHECK(offpeak_out > 0.0);
    CHECK(peak_out > 0.0);
  }
}

TEST_CASE("a degenerate store collapses the policy to load following") {
  ProposalConfig p;
  p.name = "tiny";
  p.preset = 1;
  auto plant = dispatch::default_plant();
  p.fleet.chillers = {plant.chillers[0], plant.chillers[1]};
  p.tes.capacity_kwh = 0.0;  // nothing to shift with
  LoadSeries day = day_profile([](int mod) {
    return mod >= 7 * 60 && mod < 23 * 60 ? 1700.0 : 300.0;
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  EnergyReport e = simulate_proposal(p, day, default_tariff(), ga, phys);
  CHECK(e.charged_kwh == 0.0);
  CHECK(e.discharged_kwh == 0.0);
  check_ledger_invariants(e, p.tes.eta);
}

TEST_CASE("a day the solved set cannot carry is infeasible") {
  ProposalConfig p;
  p.name = "over";
  p.preset = 1;
  auto plant = dispatch::default_plant();
  p.fleet.chillers = {plant.chillers[0], plant.chillers[1]};
  p.tes.capacity_kwh = 0.0;
  LoadSeries day = day_profile([](int mod) {
    return mod >= 7 * 60 && mod < 23 * 60 ? 2300.0 : 300.0;  // beyond 2000 RT
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  CHECK_THROWS_AS(simulate_proposal(p, day, default_tariff(), ga, phys),
                  InfeasibleError);
}

TEST_CASE("an undersized fleet names the failing slot") {
  ProposalConfig p;
  p.name = "small";
  p.preset = 0;
  auto plant = dispatch::default_plant();
  p.fleet.chillers = {plant.chillers[3]};  // 500 RT against a 1500 RT day
  LoadSeries day = day_profile([](int mod) {
    return mod >= 9 * 60 && mod < 18 * 60 ? 1500.0 : 200.0;
  });
  dispatch::GaConfig ga;
  PhysConstants phys;
  CHECK_THROWS_WITH_AS(simulate_proposal(p, day, default_tariff(), ga, phys),
                       doctest::Contains("2023-08-15"), InfeasibleError);
}

TEST_CASE("profiles that are not a whole day are rejected") {
  ProposalConfig p;
  p.name = "x";
  p.preset = 0;
  p.fleet = dispatch::default_plant();
  LoadSeries half;
  half.start = parse_iso8601("2023-08-15T00:00:00");
  half.values.assign(24, 500.0);
  dispatch::GaConfig ga;
  PhysConstants phys;
  CHECK_THROWS_AS(simulate_proposal(p, half, default_tariff(), ga, phys),
                  InputError);
}

TEST_CASE("config validation catches bad storage parameters") {
  TesConfig tes;
  tes.eta = 0.0;
  CHECK_THROWS_AS(tes.validate(), ConfigError);
  tes = TesConfig{};
  tes.capacity_kwh = 100.0;
  tes.initial_soc_kwh = 200.0;
  CHECK_THROWS_AS(tes.validate(), ConfigError);
  TariffSchedule t;
  t.peak_rate = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
