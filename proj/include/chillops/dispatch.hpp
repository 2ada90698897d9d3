#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chillops/series.hpp"

namespace chillops::dispatch {

struct PartLoadPoint {
  double plr;         // part load ratio
  double eff_kw_rt;   // kW per RT at that loading
  double power_kw;    // electrical input
};

/// Least-squares cubic of power (kW) against PLR over all table rows.
struct PowerCurve {
  std::array<double, 4> coeff{};  // a + b x + c x^2 + d x^3
  std::vector<double> residuals;  // per fitted row

  double operator()(double plr) const {
    return coeff[0] + plr * (coeff[1] + plr * (coeff[2] + plr * coeff[3]));
  }
};

PowerCurve fit_power_curve(const std::vector<PartLoadPoint>& table);

struct ChillerSpec {
  std::string id;
  double capacity_rt = 0.0;
  std::vector<PartLoadPoint> table;
  PowerCurve curve;
  double min_plr = 0.3;

  /// Table consistency (power vs eff x PLR x capacity within 1.5 kW),
  /// monotone PLR grid, fitted curve positive on the admissible range.
  void validate() const;
};

struct PlantConfig {
  std::vector<ChillerSpec> chillers;

  double total_capacity_rt() const;
  double total_capacity_kw(double kw_per_rt) const {
    return total_capacity_rt() * kw_per_rt;
  }
};

/// Catalog data for the studied plant: three 1000 RT machines and one
/// 500 RT machine.
PlantConfig default_plant();

std::string save_plant(const PlantConfig& p, const std::string& header);
PlantConfig load_plant_text(const std::string& text);
PlantConfig load_plant_file(const std::string& path);

/// Power draw at a given loading; off (plr = 0) draws nothing. In strict
/// mode the loading must be 0 or within [min_plr, 1]; evaluation mode lets
/// optimizers probe out-of-range candidates.
double chiller_power(const ChillerSpec& spec, double plr, bool strict = true);

struct DispatchSolution {
  std::vector<double> plr;
  double total_power_kw = 0.0;
  double supplied_rt = 0.0;
  bool feasible = false;
};

/// Both operating constraints, checked independently of any optimizer:
/// every loading is 0 or in [min_plr, 1], and supply covers the load
/// (1e-9 RT slack for float dust).
bool solution_is_valid(const PlantConfig& plant, const DispatchSolution& s,
                       double load_rt);

/// Exhaustive search over the per-chiller grid {0} U {min_plr .. 1.0}.
/// Identical chillers are canonicalized (non-decreasing loadings), ties
/// resolve to the lexicographically smallest vector. Loads beyond total
/// capacity return an infeasible solution rather than throwing.
DispatchSolution optimize_dispatch_bruteforce(const PlantConfig& plant,
                                              double load_rt,
                                              double grid_step = 0.01);

struct GaConfig {
  int population = 80;
  int generations = 200;
  double crossover = 0.8;
  double mutation = 0.1;
  double mutation_sigma = 0.05;  // PLR units
  int elitism = 2;
  double func_tol = 1e-6;
  int stall_window = 30;
  double constraint_tol = 1.0;  // RT
  std::uint64_t seed = 42;

  void validate() const;
};

/// Penalty GA over per-chiller (on/off, loading) genomes with
/// fitness-proportional selection, single-point crossover, Gaussian loading
/// mutation and on/off bit flips. The final solution is repaired to the
/// exact feasibility boundary (scaling loadings up when slightly short,
/// trimming surplus down while power decreases).
DispatchSolution optimize_dispatch_ga(const PlantConfig& plant, double load_rt,
                                      const GaConfig& cfg);

/// Keeps the running set and rescales its loadings so supply lands on
/// `target_rt`. Loadings pin at [min_plr, 1]; a pinned-out-of-reach target
/// leaves the nearest attainable supply.
DispatchSolution retarget_solution(const PlantConfig& plant,
                                   const DispatchSolution& s, double target_rt);

/// Exhaustive grid solution polished to the exact supply boundary; the
/// continuous trim is kept only when it does not cost power.
DispatchSolution optimize_dispatch_exact(const PlantConfig& plant,
                                         double load_rt,
                                         double grid_step = 0.01);

struct DispatchSlot {
  TimePoint time = 0;
  double load_rt = 0.0;
  DispatchSolution solution;
};

struct DispatchPlan {
  std::vector<DispatchSlot> slots;
  double energy_kwh = 0.0;
  double max_demand_kw = 0.0;
  bool partial = false;  // some slots infeasible
  std::vector<std::size_t> infeasible_slots;
};

/// One optimization per slot (GA by default, the exhaustive oracle when
/// `use_oracle`). GA slots are seeded cfg.seed + slot index.
DispatchPlan schedule_dispatch(const PlantConfig& plant, const LoadSeries& loads,
                               const GaConfig& cfg, bool use_oracle = false,
                               double grid_step = 0.01);

std::string save_dispatch_plan(const DispatchPlan& plan, const PlantConfig& plant,
                               const std::string& header);

/// Loading that minimizes kW per RT on the fitted curve over [min_plr, 1].
double max_efficiency_plr(const ChillerSpec& spec);

}  // namespace chillops::dispatch
