#include "chillops/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include <json.hpp>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"
#include "chillops/kernels.hpp"

namespace chillops::dispatch {

using json = nlohmann::ordered_json;

// ============================================================================
// Power curve
// ============================================================================

PowerCurve fit_power_curve(const std::vector<PartLoadPoint>& table) {
  if (table.size() < 4)
    throw InputError("power curve fit needs at least four table rows");

  // normal equations for the cubic Vandermonde system
  double ata[4][4] = {};
  double atb[4] = {};
  for (const auto& row : table) {
    double xp[4] = {1.0, row.plr, row.plr * row.plr, row.plr * row.plr * row.plr};
    for (int i = 0; i < 4; ++i) {
      atb[i] += xp[i] * row.power_kw;
      for (int j = 0; j < 4; ++j) ata[i][j] += xp[i] * xp[j];
    }
  }

  // Gaussian elimination with partial pivoting
  int perm[4] = {0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(ata[perm[r]][col]) > std::abs(ata[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double diag = ata[perm[col]][col];
    if (std::abs(diag) < 1e-10)
      throw InputError("power curve fit is rank deficient (duplicate loadings?)");
    for (int r = col + 1; r < 4; ++r) {
      const double f = ata[perm[r]][col] / diag;
      for (int c = col; c < 4; ++c) ata[perm[r]][c] -= f * ata[perm[col]][c];
      atb[perm[r]] -= f * atb[perm[col]];
    }
  }
  PowerCurve out;
  for (int col = 3; col >= 0; --col) {
    double v = atb[perm[col]];
    for (int c = col + 1; c < 4; ++c) v -= ata[perm[col]][c] * out.coeff[c];
    out.coeff[col] = v / ata[perm[col]][col];
  }
  out.residuals.reserve(table.size());
  for (const auto& row : table) out.residuals.push_back(out(row.plr) - row.power_kw);
  return out;
}

// ============================================================================
// Chiller and plant
// ============================================================================

void ChillerSpec::validate() const {
  if (!(capacity_rt > 0)) throw InputError("chiller capacity must be positive");
  if (!(min_plr > 0 && min_plr < 1)) throw InputError("min_plr must be in (0,1)");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table[i];
    if (row.plr < 0.2 - 1e-12 || row.plr > 1.0 + 1e-12)
      throw InputError("part-load table loading outside [0.2, 1.0]");
    if (i > 0 && !(row.plr > table[i - 1].plr))
      throw InputError("part-load table loadings must strictly increase");
    const double implied = row.eff_kw_rt * row.plr * capacity_rt;
    if (std::abs(row.power_kw - implied) > 1.5)
      throw InputError("part-load table row inconsistent beyond 1.5 kW at PLR " +
                       csv::format_double(row.plr));
  }
  for (int i = 0; i <= 140; ++i) {
    const double x = min_plr + (1.0 - min_plr) * i / 140.0;
    if (!(curve(x) > 0))
      throw InputError("fitted power curve not positive over the operating range");
  }
}

double PlantConfig::total_capacity_rt() const {
  double s = 0.0;
  for (const auto& c : chillers) s += c.capacity_rt;
  return s;
}

PlantConfig default_plant() {
  // catalog part-load data from the site equipment specifications
  const std::vector<PartLoadPoint> table_1000 = {
      {0.2, 0.767, 153}, {0.3, 0.632, 190}, {0.4, 0.557, 223},
      {0.5, 0.514, 257}, {0.6, 0.491, 295}, {0.7, 0.475, 333},
      {0.8, 0.467, 374}, {0.9, 0.465, 419}, {1.0, 0.483, 483}};
  const std::vector<PartLoadPoint> table_500 = {
      {0.2, 0.822, 82},  {0.3, 0.686, 103}, {0.4, 0.612, 122},
      {0.5, 0.564, 141}, {0.6, 0.536, 161}, {0.7, 0.516, 181},
      {0.8, 0.500, 200}, {0.9, 0.495, 223}, {1.0, 0.498, 249}};

  PlantConfig p;
  for (int i = 1; i <= 3; ++i) {
    ChillerSpec c;
    c.id = "CH" + std::to_string(i);
    c.capacity_rt = 1000.0;
    c.table = table_1000;
    c.curve = fit_power_curve(c.table);
    p.chillers.push_back(std::move(c));
  }
  ChillerSpec c;
  c.id = "CH4";
  c.capacity_rt = 500.0;
  c.table = table_500;
  c.curve = fit_power_curve(c.table);
  p.chillers.push_back(std::move(c));
  for (const auto& ch : p.chillers) ch.validate();
  return p;
}

std::string save_plant(const PlantConfig& p, const std::string& header) {
  json j;
  j["header"] = header;
  j["chillers"] = json::array();
  for (const auto& c : p.chillers) {
    json jc;
    jc["id"] = c.id;
    jc["capacity_rt"] = c.capacity_rt;
    jc["min_plr"] = c.min_plr;
    jc["table"] = json::array();
    for (const auto& row : c.table)
      jc["table"].push_back({{"plr", row.plr},
                             {"eff_kw_rt", row.eff_kw_rt},
                             {"power_kw", row.power_kw}});
    j["chillers"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

PlantConfig load_plant_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("plant file is not valid JSON");
  PlantConfig p;
  for (const auto& jc : j.at("chillers")) {
    ChillerSpec c;
    c.id = jc.at("id").get<std::string>();
    c.capacity_rt = jc.at("capacity_rt").get<double>();
    if (jc.contains("min_plr")) c.min_plr = jc.at("min_plr").get<double>();
    for (const auto& row : jc.at("table"))
      c.table.push_back({row.at("plr").get<double>(),
                         row.at("eff_kw_rt").get<double>(),
                         row.at("power_kw").get<double>()});
    c.curve = fit_power_curve(c.table);
    c.validate();
    p.chillers.push_back(std::move(c));
  }
  if (p.chillers.empty()) throw InputError("plant has no chillers");
  return p;
}

PlantConfig load_plant_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open plant file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_plant_text(text);
}

double chiller_power(const ChillerSpec& spec, double plr, bool strict) {
  if (plr < 0) throw InputError("negative part load ratio");
  if (plr == 0.0) return 0.0;
  if (strict && (plr < spec.min_plr - 1e-12 || plr > 1.0 + 1e-12))
    throw InputError("part load ratio outside {0} U [min_plr, 1]");
  return spec.curve(plr);
}

bool solution_is_valid(const PlantConfig& plant, const DispatchSolution& s,
                       double load_rt) {
  if (s.plr.size() != plant.chillers.size()) return false;
  double supplied = 0.0;
  for (std::size_t i = 0; i < s.plr.size(); ++i) {
    const double p = s.plr[i];
    const auto& ch = plant.chillers[i];
    if (p != 0.0 && (p < ch.min_plr - 1e-12 || p > 1.0 + 1e-12)) return false;
    supplied += p * ch.capacity_rt;
  }
  return supplied + 1e-9 >= load_rt;
}

// ============================================================================
// Exhaustive oracle
// ============================================================================

namespace {

struct Grid {
  std::vector<double> plr;     // {0} U {min_plr .. 1.0}
  std::vector<double> power;   // kW at each grid loading
  std::vector<double> supply;  // RT at each grid loading
};

Grid make_grid(const ChillerSpec& c, double step) {
  Grid g;
  g.plr.push_back(0.0);
  const long n_on = std::lround((1.0 - c.min_plr) / step);
  for (long i = 0; i <= n_on; ++i) {
    double v = c.min_plr + static_cast<double>(i) * step;
    if (v > 1.0) v = 1.0;
    g.plr.push_back(v);
  }
  for (double v : g.plr) {
    g.power.push_back(v == 0.0 ? 0.0 : c.curve(v));
    g.supply.push_back(v * c.capacity_rt);
  }
  return g;
}

bool same_hardware(const ChillerSpec& a, const ChillerSpec& b) {
  return a.capacity_rt == b.capacity_rt && a.min_plr == b.min_plr &&
         a.curve.coeff == b.curve.coeff;
}

}  // namespace

DispatchSolution optimize_dispatch_bruteforce(const PlantConfig& plant,
                                              double load_rt, double grid_step) {
  if (load_rt < 0) throw InputError("negative load");
  const std::size_t n = plant.chillers.size();
  if (n == 0) throw InputError("plant has no chillers");

  DispatchSolution best;
  best.plr.assign(n, 0.0);
  if (load_rt > plant.total_capacity_rt() + 1e-9) {
    best.feasible = false;
    return best;
  }

  std::vector<Grid> grids;
  grids.reserve(n);
  for (const auto& c : plant.chillers) grids.push_back(make_grid(c, grid_step));

  // identical chillers may be constrained to non-decreasing grid indices
  std::vector<bool> tied(n, false);
  for (std::size_t i = 1; i < n; ++i)
    tied[i] = same_hardware(plant.chillers[i], plant.chillers[i - 1]);

  // pruning by early break needs grid power non-decreasing past the off slot
  std::vector<bool> monotone(n, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 2; k < grids[i].power.size(); ++k)
      if (grids[i].power[k] < grids[i].power[k - 1]) monotone[i] = false;

  // max supply available from chillers i..n-1
  std::vector<double> tail_capacity(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;)
    tail_capacity[i] = tail_capacity[i + 1] + plant.chillers[i].capacity_rt;

  std::vector<std::size_t> idx(n, 0);
  double best_power = std::numeric_limits<double>::infinity();
  bool found = false;

  auto rec = [&](auto&& self, std::size_t ci, double acc_power,
                 double acc_supply) -> void {
    const Grid& g = grids[ci];
    const std::size_t start = (tied[ci] ? idx[ci - 1] : 0);
    if (ci + 1 == n) {
      const kern::ScanResult r = kern::scan_min_feasible(
          g.power.data() + start, g.supply.data() + start, g.plr.size() - start,
          acc_power, acc_supply, load_rt - 1e-9);
      if (r.index >= 0 && (!found || r.value < best_power)) {
        idx[ci] = start + static_cast<std::size_t>(r.index);
        best_power = r.value;
        found = true;
        for (std::size_t i = 0; i < n; ++i) best.plr[i] = grids[i].plr[idx[i]];
      }
      return;
    }
    for (std::size_t k = start; k < g.plr.size(); ++k) {
      const double p = acc_power + g.power[k];
      if (found && p >= best_power) {
        if (monotone[ci] && g.power[k] > 0.0) break;
        continue;
      }
      const double s = acc_supply + g.supply[k];
      if (s + tail_capacity[ci + 1] + 1e-9 < load_rt) continue;
      idx[ci] = k;
      self(self, ci + 1, p, s);
    }
  };
  rec(rec, 0, 0.0, 0.0);

  if (!found) {
    best.feasible = false;
    return best;
  }
  best.feasible = true;
  best.total_power_kw = 0.0;
  best.supplied_rt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    best.total_power_kw += chiller_power(plant.chillers[i], best.plr[i]);
    best.supplied_rt += best.plr[i] * plant.chillers[i].capacity_rt;
  }
  return best;
}

// ============================================================================
// Genetic algorithm
// ============================================================================

void GaConfig::validate() const {
  if (population < 2) throw ConfigError("ga.population must be >= 2");
  if (generations < 1) throw ConfigError("ga.generations must be >= 1");
  for (double r : {crossover, mutation})
    if (r < 0 || r > 1) throw ConfigError("ga rates must be in [0,1]");
  if (elitism < 0 || elitism >= population)
    throw ConfigError("ga.elitism must be in [0, population)");
  if (stall_window < 1) throw ConfigError("ga.stall_window must be >= 1");
}

namespace {

constexpr double kPenaltyLambda = 1e9;

struct Genome {
  std::vector<std::uint8_t> on;
  std::vector<double> plr;
};

struct Scored {
  Genome g;
  double power = 0.0;
  double supplied = 0.0;
  double violation = 0.0;  // RT shortfall
  double fitness = 0.0;    // minimized
};

// Genomes decode to boundary solutions: the loading genes fix the ratio
// between running chillers and the decode rescales them onto the supply
// boundary. Fitness then orders candidates by structure and balance alone
// instead of rewarding whoever happens to oversupply least.
void score(const PlantConfig& plant, double load_rt, Scored& s) {
  DispatchSolution raw;
  raw.plr.assign(plant.chillers.size(), 0.0);
  bool any_on = false;
  for (std::size_t i = 0; i < plant.chillers.size(); ++i) {
    if (s.g.on[i]) {
      raw.plr[i] = s.g.plr[i];
      any_on = true;
    }
  }
  if (!any_on) {
    s.power = 0.0;
    s.supplied = 0.0;
    s.violation = std::max(0.0, load_rt);
    s.fitness = kPenaltyLambda * s.violation * s.violation;
    return;
  }
  const DispatchSolution d = retarget_solution(plant, raw, load_rt);
  s.power = d.total_power_kw;
  s.supplied = d.supplied_rt;
  s.violation = std::max(0.0, load_rt - d.supplied_rt);
  s.fitness = s.power + kPenaltyLambda * s.violation * s.violation;
}

}  // namespace

DispatchSolution retarget_solution(const PlantConfig& plant,
                                   const DispatchSolution& s, double target_rt) {
  DispatchSolution out = s;
  const std::size_t n = plant.chillers.size();
  bool any_on = false;
  for (double p : out.plr)
    if (p > 0.0) any_on = true;

  if (any_on && target_rt > 0.0) {
    for (int round = 0; round < 16; ++round) {
      double supplied = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        supplied += out.plr[i] * plant.chillers[i].capacity_rt;
      if (std::abs(supplied - target_rt) <= 1e-12 * std::max(1.0, target_rt))
        break;
      const bool shrinking = supplied > target_rt;
      double pinned_supply = 0.0, free_supply = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (out.plr[i] == 0.0) continue;
        const auto& ch = plant.chillers[i];
        const bool pinned = shrinking ? out.plr[i] <= ch.min_plr + 1e-15
                                      : out.plr[i] >= 1.0 - 1e-15;
        if (pinned)
          pinned_supply += out.plr[i] * ch.capacity_rt;
        else
          free_supply += out.plr[i] * ch.capacity_rt;
      }
      if (free_supply <= 0.0) break;
      const double factor = (target_rt - pinned_supply) / free_supply;
      for (std::size_t i = 0; i < n; ++i) {
        if (out.plr[i] == 0.0) continue;
        const auto& ch = plant.chillers[i];
        const bool pinned = shrinking ? out.plr[i] <= ch.min_plr + 1e-15
                                      : out.plr[i] >= 1.0 - 1e-15;
        if (!pinned)
          out.plr[i] = std::clamp(out.plr[i] * factor, ch.min_plr, 1.0);
      }
    }
    // nudge up to strict coverage if float dust left the supply a hair short
    double supplied = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      supplied += out.plr[i] * plant.chillers[i].capacity_rt;
    if (supplied < target_rt && supplied > 0.0) {
      const double f = target_rt / supplied * (1.0 + 1e-12);
      for (std::size_t i = 0; i < n; ++i)
        if (out.plr[i] > 0.0)
          out.plr[i] = std::clamp(out.plr[i] * f, plant.chillers[i].min_plr, 1.0);
    }
  }

  out.supplied_rt = 0.0;
  out.total_power_kw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.supplied_rt += out.plr[i] * plant.chillers[i].capacity_rt;
    out.total_power_kw += chiller_power(plant.chillers[i], out.plr[i]);
  }
  out.feasible = out.supplied_rt + 1e-9 >= target_rt;
  return out;
}

DispatchSolution optimize_dispatch_exact(const PlantConfig& plant,
                                         double load_rt, double grid_step) {
  DispatchSolution s = optimize_dispatch_bruteforce(plant, load_rt, grid_step);
  if (!s.feasible) return s;
  DispatchSolution trimmed = retarget_solution(plant, s, load_rt);
  if (trimmed.feasible && trimmed.total_power_kw <= s.total_power_kw)
    return trimmed;
  return s;
}

DispatchSolution optimize_dispatch_ga(const PlantConfig& plant, double load_rt,
                                      const GaConfig& cfg) {
  cfg.validate();
  if (load_rt < 0) throw InputError("negative load");
  const std::size_t n = plant.chillers.size();

  DispatchSolution result;
  result.plr.assign(n, 0.0);
  if (load_rt > plant.total_capacity_rt() + 1e-9) {
    result.feasible = false;
    return result;
  }
  if (load_rt == 0.0) {
    result.feasible = true;
    return result;
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_genome = [&]() {
    Genome g;
    g.on.resize(n);
    g.plr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      g.on[i] = unit(rng) < 0.5 ? 1 : 0;
      const double lo = plant.chillers[i].min_plr;
      g.plr[i] = lo + (1.0 - lo) * unit(rng);
    }
    return g;
  };

  std::vector<Scored> pop(cfg.population);
  for (auto& s : pop) {
    s.g = random_genome();
    score(plant, load_rt, s);
  }

  auto by_fitness = [](const Scored& a, const Scored& b) {
    return a.fitness < b.fitness;
  };

  std::vector<double> best_history;
  std::vector<Scored> next;
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::stable_sort(pop.begin(), pop.end(), by_fitness);
    best_history.push_back(pop.front().fitness);

    // stall detection: best fitness flat over the window and best candidate
    // within the constraint tolerance
    if (static_cast<int>(best_history.size()) > cfg.stall_window) {
      const double now = best_history.back();
      const double then =
          best_history[best_history.size() - 1 - cfg.stall_window];
      const double change = std::abs(then - now) / static_cast<double>(cfg.stall_window);
      if (change < cfg.func_tol * std::max(1.0, std::abs(now)) &&
          pop.front().violation < cfg.constraint_tol)
        break;
    }

    // fitness-proportional selection on negated-and-shifted power. The
    // shift spans the feasible candidates only; a raw penalty shift would
    // flatten the weights among them and stall the search. Infeasible
    // candidates keep a small floor weight.
    double worst_power = 0.0, best_power_gen = std::numeric_limits<double>::infinity();
    bool any_feasible = false;
    for (const auto& s : pop) {
      if (s.violation > 0.0) continue;
      any_feasible = true;
      worst_power = std::max(worst_power, s.power);
      best_power_gen = std::min(best_power_gen, s.power);
    }
    const double span = any_feasible ? worst_power - best_power_gen : 0.0;
    const double floor_w = 0.1 * (span > 0 ? span : 1.0);
    const double worst_fitness = pop.back().fitness;
    const double fitness_span = worst_fitness - pop.front().fitness;
    std::vector<double> cum(pop.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      double w;
      if (any_feasible) {
        w = pop[i].violation > 0.0 ? 0.05 * floor_w
                                   : (worst_power - pop[i].power) + floor_w;
      } else {
        w = (worst_fitness - pop[i].fitness) +
            1e-3 * (fitness_span > 0 ? fitness_span : 1.0);
      }
      acc += w;
      cum[i] = acc;
    }
    auto pick = [&]() -> const Scored& {
      const double r = unit(rng) * acc;
      const auto it = std::lower_bound(cum.begin(), cum.end(), r);
      return pop[std::min<std::size_t>(it - cum.begin(), pop.size() - 1)];
    };

    next.clear();
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[e]);
    while (static_cast<int>(next.size()) < cfg.population) {
      Genome child_a = pick().g;
      Genome child_b = pick().g;
      if (unit(rng) < cfg.crossover && n > 0) {
        // single-point crossover over the flattened (on, plr) gene string
        const std::size_t genes = 2 * n;
        const std::size_t cut =
            1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(genes - 1));
        for (std::size_t gi = cut; gi < genes; ++gi) {
          const std::size_t i = gi / 2;
          if (gi % 2 == 0)
            std::swap(child_a.on[i], child_b.on[i]);
          else
            std::swap(child_a.plr[i], child_b.plr[i]);
        }
      }
      // gaussian mutation with a linearly shrinking scale, so late
      // generations fine-tune the loading balance instead of jumping
      const double sigma =
          cfg.mutation_sigma *
          std::max(0.02, 1.0 - static_cast<double>(gen) / cfg.generations);
      for (Genome* child : {&child_a, &child_b}) {
        for (std::size_t i = 0; i < n; ++i) {
          if (unit(rng) < cfg.mutation) child->on[i] ^= 1;
          if (unit(rng) < cfg.mutation) {
            const double lo = plant.chillers[i].min_plr;
            child->plr[i] =
                std::clamp(child->plr[i] + sigma * gauss(rng), lo, 1.0);
          }
        }
        if (static_cast<int>(next.size()) < cfg.population) {
          Scored s;
          s.g = std::move(*child);
          score(plant, load_rt, s);
          next.push_back(std::move(s));
        }
      }
    }
    pop.swap(next);
  }

  std::stable_sort(pop.begin(), pop.end(), by_fitness);
  const Scored& best = pop.front();

  // decode the winning genome onto the supply boundary
  result.plr.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (best.g.on[i]) result.plr[i] = best.g.plr[i];
  result = retarget_solution(plant, result, load_rt);
  result.feasible = solution_is_valid(plant, result, load_rt);
  return result;
}

// ============================================================================
// Scheduling
// ============================================================================

DispatchPlan schedule_dispatch(const PlantConfig& plant, const LoadSeries& loads,
                               const GaConfig& cfg, bool use_oracle,
                               double grid_step) {
  if (loads.values.empty()) throw InputError("no loads to schedule");
  DispatchPlan plan;
  const double slot_hours = static_cast<double>(loads.step) / 3600.0;
  for (std::size_t i = 0; i < loads.values.size(); ++i) {
    DispatchSlot slot;
    slot.time = loads.time_at(i);
    slot.load_rt = std::max(0.0, loads.values[i]);
    if (use_oracle) {
      slot.solution = optimize_dispatch_bruteforce(plant, slot.load_rt, grid_step);
    } else {
      GaConfig per_slot = cfg;
      per_slot.seed = cfg.seed + static_cast<std::uint64_t>(i);
      slot.solution = optimize_dispatch_ga(plant, slot.load_rt, per_slot);
    }
    if (!slot.solution.feasible) {
      plan.partial = true;
      plan.infeasible_slots.push_back(i);
    } else {
      plan.energy_kwh += slot.solution.total_power_kw * slot_hours;
      plan.max_demand_kw = std::max(plan.max_demand_kw, slot.solution.total_power_kw);
    }
    plan.slots.push_back(std::move(slot));
  }
  return plan;
}

std::string save_dispatch_plan(const DispatchPlan& plan, const PlantConfig& plant,
                               const std::string& header) {
  csv::Writer w;
  if (!header.empty()) w.comment(header);
  w.comment("energy_kwh=" + csv::format_double(plan.energy_kwh) +
            " max_demand_kw=" + csv::format_double(plan.max_demand_kw) +
            (plan.partial ? " partial=1" : " partial=0"));
  std::vector<std::string> head = {"time", "load_rt"};
  for (const auto& c : plant.chillers) head.push_back("plr_" + c.id);
  head.push_back("total_power_kw");
  w.row(head);
  char buf[32];
  for (const auto& s : plan.slots) {
    std::vector<std::string> cells;
    cells.push_back(format_hhmm(minutes_of_day(s.time)));
    std::snprintf(buf, sizeof buf, "%.1f", s.load_rt);
    cells.push_back(buf);
    for (double p : s.solution.plr) {
      std::snprintf(buf, sizeof buf, "%.4f", p);
      cells.push_back(buf);
    }
    std::snprintf(buf, sizeof buf, "%.3f", s.solution.total_power_kw);
    cells.push_back(buf);
    w.row(cells);
  }
  return w.str();
}

double max_efficiency_plr(const ChillerSpec& spec) {
  double best_x = spec.min_plr;
  double best_e = std::numeric_limits<double>::infinity();
  const int steps = 7000;
  for (int i = 0; i <= steps; ++i) {
    const double x = spec.min_plr + (1.0 - spec.min_plr) * i / steps;
    const double e = spec.curve(x) / (x * spec.capacity_rt);
    if (e < best_e) {
      best_e = e;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace chillops::dispatch
