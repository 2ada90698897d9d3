#pragma once

#include <string>
#include <vector>

#include "chillops/dispatch.hpp"
#include "chillops/series.hpp"

namespace chillops::tes {

struct TariffSchedule {
  double peak_rate = 0.2967;      // $/kWh
  double offpeak_rate = 0.1843;   // $/kWh
  double capacity_rate = 16.48;   // $/kW/month
  int peak_start_min = 7 * 60;    // [start, end) local time
  int peak_end_min = 23 * 60;

  void validate() const;
  bool in_peak(TimePoint t) const;
};

struct CapexRates {
  double chiller_per_kw = 654.00;
  double tes_per_kwh = 71.09;

  void validate() const;
};

struct TesConfig {
  double capacity_kwh = 0.0;  // thermal; ignored when auto_capacity
  bool auto_capacity = false; // size to the maximum state of charge reached
  double max_charge_kw = 0.0;    // thermal; <= 0 means unlimited
  double max_discharge_kw = 0.0; // thermal; <= 0 means unlimited
  double eta = 0.999;            // round-trip retention, applied on discharge
  double initial_soc_kwh = 0.0;

  void validate() const;
};

/// Presets mirror the studied plant redesigns; 0 runs the fleet
/// dispatch-optimally every slot with no storage interaction (the baseline).
///  1: off-peak, the largest chiller at max-efficiency loading charges the
///     store; peak, the two largest chillers at a solved flat level plus
///     discharge.
///  2: off-peak, the whole fleet at a solved level charges; peak, one
///     largest chiller at max-efficiency loading plus discharge.
///  3: off-peak, all largest-capacity chillers at a solved level charge;
///     peak, the smallest chiller at max-efficiency loading plus discharge.
///  4: the whole fleet at one solved flat level around the clock, storage
///     absorbing the imbalance.
struct ProposalConfig {
  std::string name;
  dispatch::PlantConfig fleet;
  int preset = 0;
  TesConfig tes;

  void validate() const;
};

struct SlotLedger {
  TimePoint time = 0;
  double load_rt = 0.0;
  double chiller_out_rt = 0.0;
  double power_kw = 0.0;       // electrical
  double charge_kwh = 0.0;     // thermal into the store
  double discharge_kwh = 0.0;  // thermal delivered to the building
  double soc_kwh = 0.0;        // at end of slot
  bool peak = false;
  std::vector<double> plr;
};

struct EnergyReport {
  double total_kwh = 0.0;  // electrical
  double peak_kwh = 0.0;
  double offpeak_kwh = 0.0;
  double max_demand_kw = 0.0;
  double charged_kwh = 0.0;     // thermal
  double discharged_kwh = 0.0;  // thermal
  double tes_capacity_kwh = 0.0;
  std::vector<SlotLedger> ledger;
};

/// Simulates one design over a full-day profile (48 half-hour slots).
/// Flat chiller levels are solved so the state of charge closes the day
/// where it started; a slot whose load cannot be met raises an
/// infeasibility error naming it.
EnergyReport simulate_proposal(const ProposalConfig& p, const LoadSeries& loads,
                               const TariffSchedule& tariff,
                               const dispatch::GaConfig& ga,
                               const PhysConstants& phys);

struct CostReport {
  std::string name;
  double chiller_capital = 0.0;
  double tes_capital = 0.0;
  double total_capital = 0.0;
  double daily_peak_tariff = 0.0;
  double daily_offpeak_tariff = 0.0;
  double daily_tariff = 0.0;
  double monthly_capacity = 0.0;
  double yearly_operating = 0.0;
  double ten_year_total = 0.0;
  // versus the baseline, when one was given
  bool has_savings = false;
  double capital_savings = 0.0;   // fractions, 0.25 = 25 %
  double operating_savings = 0.0;
  double ten_year_savings = 0.0;
};

CostReport cost_analysis(const EnergyReport& e, double fleet_kw,
                         const TesConfig& tes, const TariffSchedule& t,
                         const CapexRates& c,
                         const CostReport* baseline = nullptr);

/// First report is the baseline; emits the cost-comparison table with the
/// savings rows and ranks designs by their ten-year totals.
std::string compare_proposals(const std::vector<CostReport>& reports,
                              const std::string& header);

std::string save_energy_ledger(const EnergyReport& e, const std::string& header);

}  // namespace chillops::tes
