#include "chillops/tes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"

namespace chillops::tes {

void TariffSchedule::validate() const {
  if (!(peak_rate > 0) || !(offpeak_rate > 0) || !(capacity_rate > 0))
    throw ConfigError("tariff rates must be strictly positive");
  if (peak_start_min == peak_end_min)
    throw ConfigError("peak window must not be degenerate");
}

bool TariffSchedule::in_peak(TimePoint t) const {
  const int m = minutes_of_day(t);
  if (peak_start_min < peak_end_min)
    return m >= peak_start_min && m < peak_end_min;
  return m >= peak_start_min || m < peak_end_min;  // window wraps midnight
}

void CapexRates::validate() const {
  if (!(chiller_per_kw > 0) || !(tes_per_kwh > 0))
    throw ConfigError("capital cost rates must be strictly positive");
}

void TesConfig::validate() const {
  if (!(eta > 0 && eta <= 1.0))
    throw ConfigError("tes retention must be in (0, 1]");
  if (!auto_capacity) {
    if (capacity_kwh < 0) throw ConfigError("tes capacity must be >= 0");
    if (initial_soc_kwh < 0 || initial_soc_kwh > capacity_kwh)
      throw ConfigError("tes initial charge must lie within [0, capacity]");
  } else if (initial_soc_kwh != 0.0) {
    throw ConfigError("auto-sized storage starts empty");
  }
}

void ProposalConfig::validate() const {
  if (preset < 0 || preset > 4)
    throw ConfigError("proposal preset must be 0..4");
  if (fleet.chillers.empty()) throw ConfigError("proposal fleet is empty");
  tes.validate();
}

// ============================================================================
// Policy plumbing
// ============================================================================

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SetSolution {
  std::vector<double> plr;  // fleet-wide
  double supplied_rt = 0.0;
  double power_kw = 0.0;
};

dispatch::PlantConfig subplant(const dispatch::PlantConfig& fleet,
                               const std::vector<std::size_t>& set) {
  dispatch::PlantConfig p;
  for (std::size_t i : set) p.chillers.push_back(fleet.chillers[i]);
  return p;
}

SetSolution to_fleet(const dispatch::PlantConfig& fleet,
                     const std::vector<std::size_t>& set,
                     const dispatch::DispatchSolution& s) {
  SetSolution out;
  out.plr.assign(fleet.chillers.size(), 0.0);
  for (std::size_t j = 0; j < set.size(); ++j) out.plr[set[j]] = s.plr[j];
  out.supplied_rt = s.supplied_rt;
  out.power_kw = s.total_power_kw;
  return out;
}

/// Most efficient split of a flat thermal level over a chiller set.
SetSolution split_level(const dispatch::PlantConfig& fleet,
                        const std::vector<std::size_t>& set, double level_rt,
                        double grid_step) {
  SetSolution out;
  out.plr.assign(fleet.chillers.size(), 0.0);
  if (level_rt <= 0.0 || set.empty()) return out;
  const dispatch::PlantConfig sub = subplant(fleet, set);
  const double cap = sub.total_capacity_rt();
  const double target = std::min(level_rt, cap);
  dispatch::DispatchSolution s =
      dispatch::optimize_dispatch_exact(sub, target, grid_step);
  if (!s.feasible)
    throw InfeasibleError("chiller set cannot supply the requested level");
  return to_fleet(fleet, set, s);
}

SetSolution rescale(const dispatch::PlantConfig& fleet, const SetSolution& base,
                    double target_rt) {
  dispatch::DispatchSolution s;
  s.plr = base.plr;
  s.supplied_rt = base.supplied_rt;
  s.total_power_kw = base.power_kw;
  dispatch::DispatchSolution r = dispatch::retarget_solution(fleet, s, target_rt);
  SetSolution out;
  out.plr = r.plr;
  out.supplied_rt = r.supplied_rt;
  out.power_kw = r.total_power_kw;
  return out;
}

struct Policy {
  std::vector<std::size_t> solved_set;
  bool solved_in_peak = false;
  bool whole_day = false;
  std::vector<std::size_t> fixed_set;  // runs in the other window at max-eff
};

Policy make_policy(const dispatch::PlantConfig& fleet, int preset) {
  std::vector<std::size_t> order(fleet.chillers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fleet.chillers[a].capacity_rt > fleet.chillers[b].capacity_rt;
  });

  Policy p;
  switch (preset) {
    case 1: {
      if (order.size() < 2)
        throw ConfigError("preset 1 needs at least two chillers");
      p.fixed_set = {order[0]};
      p.solved_set = {order[0], order[1]};
      p.solved_in_peak = true;
      break;
    }
    case 2: {
      p.fixed_set = {order[0]};
      p.solved_set = order;
      p.solved_in_peak = false;
      break;
    }
    case 3: {
      const double cap_max = fleet.chillers[order[0]].capacity_rt;
      for (std::size_t i : order)
        if (fleet.chillers[i].capacity_rt == cap_max) p.solved_set.push_back(i);
      p.fixed_set = {order.back()};
      p.solved_in_peak = false;
      break;
    }
    case 4: {
      p.solved_set = order;
      p.whole_day = true;
      break;
    }
    default:
      throw ConfigError("policy preset must be 1..4 here");
  }
  std::sort(p.solved_set.begin(), p.solved_set.end());
  std::sort(p.fixed_set.begin(), p.fixed_set.end());
  return p;
}

struct SimResult {
  bool ok = true;
  std::size_t bad_slot = 0;
  std::string what;
  double terminal_soc = 0.0;
  double max_soc = 0.0;
  std::vector<SlotLedger> ledger;
};

/// One pass over the day: planned chiller output per slot, storage absorbing
/// surplus (throttling the chillers when it cannot) and covering deficits.
SimResult run_sim(const dispatch::PlantConfig& fleet, const LoadSeries& loads,
                  const TariffSchedule& tariff, const PhysConstants& phys,
                  const TesConfig& tes, double capacity_kwh,
                  const std::vector<const SetSolution*>& plan) {
  SimResult res;
  const double h = static_cast<double>(loads.step) / 3600.0;
  const double conv = phys.kw_per_rt;  // RT -> thermal kW
  double soc = tes.initial_soc_kwh;
  res.max_soc = soc;

  for (std::size_t i = 0; i < loads.values.size(); ++i) {
    const TimePoint t = loads.time_at(i);
    const double load = std::max(0.0, loads.values[i]);
    SetSolution sol = *plan[i];

    double out = sol.supplied_rt;
    double charge = 0.0, discharge = 0.0;
    if (out >= load) {
      const double headroom = capacity_kwh - soc;
      const double rate_cap = tes.max_charge_kw > 0 ? tes.max_charge_kw * h : kInf;
      const double absorbable = std::max(0.0, std::min(headroom, rate_cap));
      double desired = (out - load) * conv * h;
      if (desired > absorbable + 1e-9) {
        sol = rescale(fleet, sol, load + absorbable / (conv * h));
        out = sol.supplied_rt;
        desired = (out - load) * conv * h;
        if (desired > absorbable + 1e-6) {
          res.ok = false;
          res.bad_slot = i;
          res.what = "surplus exceeds storage at " + format_iso8601(t);
          return res;
        }
      }
      charge = std::max(0.0, desired);
      soc += charge;
    } else if ((load - out) * conv * h <= 1e-9) {
      // rounding dust from the loading rescale, not a real deficit
    } else {
      const double need = (load - out) * conv * h;
      const double rate_cap =
          tes.max_discharge_kw > 0 ? tes.max_discharge_kw * h : kInf;
      const double avail = std::min(soc * tes.eta, rate_cap);
      if (need > avail + 1e-9) {
        res.ok = false;
        res.bad_slot = i;
        res.what = "load unmet and storage empty at " + format_iso8601(t);
        return res;
      }
      discharge = need;
      soc -= discharge / tes.eta;
      if (soc < 0) soc = 0;
    }
    res.max_soc = std::max(res.max_soc, soc);

    SlotLedger row;
    row.time = t;
    row.load_rt = load;
    row.chiller_out_rt = out;
    row.power_kw = sol.power_kw;
    row.charge_kwh = charge;
    row.discharge_kwh = discharge;
    row.soc_kwh = soc;
    row.peak = tariff.in_peak(t);
    row.plr = sol.plr;
    res.ledger.push_back(std::move(row));
  }
  res.terminal_soc = soc;
  return res;
}

EnergyReport summarize(const SimResult& sim, const LoadSeries& loads,
                       double capacity_kwh) {
  EnergyReport rep;
  const double h = static_cast<double>(loads.step) / 3600.0;
  for (const auto& row : sim.ledger) {
    const double kwh = row.power_kw * h;
    rep.total_kwh += kwh;
    (row.peak ? rep.peak_kwh : rep.offpeak_kwh) += kwh;
    rep.max_demand_kw = std::max(rep.max_demand_kw, row.power_kw);
    rep.charged_kwh += row.charge_kwh;
    rep.discharged_kwh += row.discharge_kwh;
  }
  rep.tes_capacity_kwh = capacity_kwh;
  rep.ledger = sim.ledger;
  return rep;
}

}  // namespace

EnergyReport simulate_proposal(const ProposalConfig& p, const LoadSeries& loads,
                               const TariffSchedule& tariff,
                               const dispatch::GaConfig& ga,
                               const PhysConstants& phys) {
  p.validate();
  tariff.validate();
  phys.validate();
  if (loads.values.empty()) throw InputError("empty day profile");
  if (static_cast<std::int64_t>(loads.values.size()) * loads.step != kSecPerDay)
    throw InputError("proposal simulation expects exactly one 24 h profile");

  const std::size_t n_slots = loads.values.size();

  if (p.preset == 0) {
    // dispatch-optimal every slot, storage untouched
    dispatch::DispatchPlan plan =
        dispatch::schedule_dispatch(p.fleet, loads, ga, false);
    if (plan.partial)
      throw InfeasibleError(
          "policy cannot meet load at " +
          format_iso8601(plan.slots[plan.infeasible_slots.front()].time));
    SimResult sim;
    double cap = p.tes.auto_capacity ? 0.0 : p.tes.capacity_kwh;
    double soc = p.tes.initial_soc_kwh;
    for (std::size_t i = 0; i < n_slots; ++i) {
      const auto& slot = plan.slots[i];
      if (std::abs(slot.solution.supplied_rt - slot.load_rt) > 1e-6)
        throw InfeasibleError("minimum loading floor prevents exact supply at " +
                              format_iso8601(slot.time));
      SlotLedger row;
      row.time = slot.time;
      row.load_rt = slot.load_rt;
      row.chiller_out_rt = slot.solution.supplied_rt;
      row.power_kw = slot.solution.total_power_kw;
      row.soc_kwh = soc;
      row.peak = tariff.in_peak(slot.time);
      row.plr = slot.solution.plr;
      sim.ledger.push_back(std::move(row));
    }
    sim.terminal_soc = soc;
    sim.max_soc = soc;
    return summarize(sim, loads, cap);
  }

  const Policy policy = make_policy(p.fleet, p.preset);
  const double grid = 0.01;

  // fixed side: designated chillers at their best-efficiency loading
  SetSolution fixed_sol;
  fixed_sol.plr.assign(p.fleet.chillers.size(), 0.0);
  for (std::size_t i : policy.fixed_set) {
    const auto& ch = p.fleet.chillers[i];
    const double plr = dispatch::max_efficiency_plr(ch);
    fixed_sol.plr[i] = plr;
    fixed_sol.supplied_rt += plr * ch.capacity_rt;
    fixed_sol.power_kw += dispatch::chiller_power(ch, plr);
  }

  const double solved_cap = [&] {
    double s = 0.0;
    for (std::size_t i : policy.solved_set)
      s += p.fleet.chillers[i].capacity_rt;
    return s;
  }();

  auto plan_for = [&](const SetSolution& solved_sol) {
    std::vector<const SetSolution*> plan(n_slots);
    for (std::size_t i = 0; i < n_slots; ++i) {
      const bool peak = tariff.in_peak(loads.time_at(i));
      const bool solved_here = policy.whole_day || (peak == policy.solved_in_peak);
      plan[i] = solved_here ? &solved_sol : &fixed_sol;
    }
    return plan;
  };

  const double h = static_cast<double>(loads.step) / 3600.0;
  const double conv = phys.kw_per_rt;

  TesConfig sized = p.tes;
  double level = 0.0;

  if (p.tes.auto_capacity) {
    // Unclamped, slot flows do not depend on the state of charge, so the
    // cyclic level solves on the daily net flow alone; the prefix-sum
    // envelope then yields the store size and where in the cycle midnight
    // falls (the initial charge).
    auto net_flow = [&](double x, std::vector<double>* flows) {
      const SetSolution solved_sol =
          split_level(p.fleet, policy.solved_set, x, grid);
      const auto plan = plan_for(solved_sol);
      double sum = 0.0;
      for (std::size_t i = 0; i < n_slots; ++i) {
        const double load = std::max(0.0, loads.values[i]);
        const double out = plan[i]->supplied_rt;
        const double flow = out >= load
                                ? (out - load) * conv * h
                                : -(load - out) * conv * h / p.tes.eta;
        if (flows) flows->push_back(flow);
        sum += flow;
      }
      return sum;
    };

    double lo = 0.0, hi = solved_cap;
    if (net_flow(lo, nullptr) > 0.0)
      throw InfeasibleError(
          "storage cannot return to its initial charge: the fixed chillers "
          "overcharge it even with the solved set off");
    if (net_flow(hi, nullptr) < 0.0)
      throw InfeasibleError(
          "storage cannot be recharged within the day at full chiller output");
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (net_flow(mid, nullptr) >= 0.0 ? hi : lo) = mid;
    }
    level = hi;

    std::vector<double> flows;
    net_flow(level, &flows);
    double prefix = 0.0, min_prefix = 0.0, max_prefix = 0.0;
    for (double f : flows) {
      prefix += f;
      min_prefix = std::min(min_prefix, prefix);
      max_prefix = std::max(max_prefix, prefix);
    }
    sized.auto_capacity = false;
    sized.initial_soc_kwh = -min_prefix;
    sized.capacity_kwh = (max_prefix - min_prefix) * (1.0 + 1e-12) + 1e-9;
  } else {
    // explicit store: bisect the solved level on the end-of-day drift with
    // the capacity clamps active
    auto simulate_level = [&](double x) {
      const SetSolution solved_sol =
          split_level(p.fleet, policy.solved_set, x, grid);
      return run_sim(p.fleet, loads, tariff, phys, p.tes, p.tes.capacity_kwh,
                     plan_for(solved_sol));
    };
    auto drift = [&](const SimResult& r) {
      if (!r.ok) {
        // unmet load means the store ran dry (drive the level up); an
        // unabsorbable surplus means it overflowed (drive the level down)
        return r.what.find("unmet") != std::string::npos ? -1e18 : 1e18;
      }
      return r.terminal_soc - p.tes.initial_soc_kwh;
    };
    double lo = 0.0, hi = solved_cap;
    if (drift(simulate_level(lo)) >= 0.0) {
      level = lo;
    } else if (drift(simulate_level(hi)) < 0.0) {
      level = hi;
    } else {
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (drift(simulate_level(mid)) >= 0.0 ? hi : lo) = mid;
      }
      level = hi;
    }
  }

  const SetSolution solved_sol =
      split_level(p.fleet, policy.solved_set, level, grid);
  SimResult sim = run_sim(p.fleet, loads, tariff, phys, sized,
                          sized.capacity_kwh, plan_for(solved_sol));
  if (!sim.ok) throw InfeasibleError("policy cannot meet load: " + sim.what);

  const double cyc_tol = 0.01 * std::max(sized.capacity_kwh, 1.0);
  if (std::abs(sim.terminal_soc - sized.initial_soc_kwh) > cyc_tol)
    throw InfeasibleError(
        "storage does not return to its initial charge over the day (drift " +
        csv::format_double(sim.terminal_soc - sized.initial_soc_kwh) + " kWh)");

  return summarize(sim, loads, sized.capacity_kwh);
}

// ============================================================================
// Money
// ============================================================================

CostReport cost_analysis(const EnergyReport& e, double fleet_kw,
                         const TesConfig& tes, const TariffSchedule& t,
                         const CapexRates& c, const CostReport* baseline) {
  t.validate();
  c.validate();
  CostReport r;
  r.chiller_capital = fleet_kw * c.chiller_per_kw;
  const double tes_kwh = tes.auto_capacity ? e.tes_capacity_kwh : tes.capacity_kwh;
  r.tes_capital = tes_kwh * c.tes_per_kwh;
  r.total_capital = r.chiller_capital + r.tes_capital;
  r.daily_peak_tariff = e.peak_kwh * t.peak_rate;
  r.daily_offpeak_tariff = e.offpeak_kwh * t.offpeak_rate;
  r.daily_tariff = r.daily_peak_tariff + r.daily_offpeak_tariff;
  r.monthly_capacity = e.max_demand_kw * t.capacity_rate;
  r.yearly_operating = 365.0 * r.daily_tariff + 12.0 * r.monthly_capacity;
  r.ten_year_total = r.total_capital + 10.0 * r.yearly_operating;
  if (baseline) {
    r.has_savings = true;
    r.capital_savings = 1.0 - r.total_capital / baseline->total_capital;
    r.operating_savings = 1.0 - r.yearly_operating / baseline->yearly_operating;
    r.ten_year_savings = 1.0 - r.ten_year_total / baseline->ten_year_total;
  }
  return r;
}

std::string compare_proposals(const std::vector<CostReport>& reports,
                              const std::string& header) {
  if (reports.size() < 2)
    throw InputError("comparison needs a baseline and at least one proposal");

  csv::Writer w;
  if (!header.empty()) w.comment(header);

  std::vector<std::size_t> rank(reports.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].ten_year_total < reports[b].ten_year_total;
  });
  std::string ranking = "ranking_10yr=";
  for (std::size_t i = 0; i < rank.size(); ++i) {
    if (i) ranking += ">";
    ranking += reports[rank[i]].name;
  }
  w.comment(ranking);

  std::vector<std::string> head = {"item", "unit"};
  for (const auto& r : reports) head.push_back(r.name);
  w.row(head);

  char buf[40];
  auto money_row = [&](const std::string& item, const std::string& unit,
                       auto getter) {
    std::vector<std::string> cells = {item, unit};
    for (const auto& r : reports) {
      std::snprintf(buf, sizeof buf, "%.1f", getter(r));
      cells.push_back(buf);
    }
    w.row(cells);
  };
  auto pct_row = [&](const std::string& item, auto getter) {
    std::vector<std::string> cells = {item, "%"};
    for (const auto& r : reports) {
      if (!r.has_savings) {
        cells.push_back("n/a");
      } else {
        std::snprintf(buf, sizeof buf, "%.0f", getter(r) * 100.0);
        cells.push_back(buf);
      }
    }
    w.row(cells);
  };

  money_row("chiller_capital", "$", [](const CostReport& r) { return r.chiller_capital; });
  money_row("tes_capital", "$", [](const CostReport& r) { return r.tes_capital; });
  money_row("total_capital", "$", [](const CostReport& r) { return r.total_capital; });
  pct_row("capital_savings", [](const CostReport& r) { return r.capital_savings; });
  money_row("daily_peak_tariff", "$/day", [](const CostReport& r) { return r.daily_peak_tariff; });
  money_row("daily_offpeak_tariff", "$/day", [](const CostReport& r) { return r.daily_offpeak_tariff; });
  money_row("daily_tariff", "$/day", [](const CostReport& r) { return r.daily_tariff; });
  money_row("monthly_capacity", "$/month", [](const CostReport& r) { return r.monthly_capacity; });
  money_row("yearly_operating", "$", [](const CostReport& r) { return r.yearly_operating; });
  pct_row("operating_savings", [](const CostReport& r) { return r.operating_savings; });
  money_row("ten_year_total", "$", [](const CostReport& r) { return r.ten_year_total; });
  pct_row("ten_year_savings", [](const CostReport& r) { return r.ten_year_savings; });
  return w.str();
}

std::string save_energy_ledger(const EnergyReport& e, const std::string& header) {
  csv::Writer w;
  if (!header.empty()) w.comment(header);
  std::ostringstream meta;
  meta << "total_kwh=" << csv::format_double(e.total_kwh)
       << " peak_kwh=" << csv::format_double(e.peak_kwh)
       << " offpeak_kwh=" << csv::format_double(e.offpeak_kwh)
       << " max_demand_kw=" << csv::format_double(e.max_demand_kw)
       << " charged_kwh=" << csv::format_double(e.charged_kwh)
       << " discharged_kwh=" << csv::format_double(e.discharged_kwh)
       << " tes_capacity_kwh=" << csv::format_double(e.tes_capacity_kwh);
  w.comment(meta.str());
  w.row({"time", "load_rt", "chiller_out_rt", "power_kw", "charge_kwh",
         "discharge_kwh", "soc_kwh", "peak"});
  char buf[40];
  for (const auto& row : e.ledger) {
    std::vector<std::string> cells;
    cells.push_back(format_hhmm(minutes_of_day(row.time)));
    for (double v : {row.load_rt, row.chiller_out_rt, row.power_kw,
                     row.charge_kwh, row.discharge_kwh, row.soc_kwh}) {
      std::snprintf(buf, sizeof buf, "%.4f", v);
      cells.push_back(buf);
    }
    cells.push_back(row.peak ? "1" : "0");
    w.row(cells);
  }
  return w.str();
}

}  // namespace chillops::tes
