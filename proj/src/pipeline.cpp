#include "chillops/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"
#include "chillops/dispatch.hpp"
#include "chillops/features.hpp"
#include "chillops/ingest.hpp"
#include "chillops/kalman.hpp"
#include "chillops/nn.hpp"
#include "chillops/series.hpp"
#include "chillops/tes.hpp"

namespace chillops::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  const fs::path dir = cfg.get_string("paths.out_dir");
  fs::create_directories(dir);
  return (dir / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

ingest::ColumnMap column_map(const RunConfig& cfg) {
  ingest::ColumnMap m;
  m.timestamp = cfg.get_string("ingest.col.timestamp");
  m.chw_supply_temp = cfg.get_string("ingest.col.chw_supply_temp");
  m.chw_return_temp = cfg.get_string("ingest.col.chw_return_temp");
  m.chw_flow = cfg.get_string("ingest.col.chw_flow");
  m.cw_supply_temp = cfg.get_string("ingest.col.cw_supply_temp");
  m.cw_return_temp = cfg.get_string("ingest.col.cw_return_temp");
  m.cw_flow = cfg.get_string("ingest.col.cw_flow");
  m.aux_power = cfg.get_string("ingest.col.aux_power");
  m.dry_bulb = cfg.get_string("ingest.col.dry_bulb");
  m.rel_humidity = cfg.get_string("ingest.col.rel_humidity");
  m.wind_dir = cfg.get_string("ingest.col.wind_dir");
  m.wind_speed = cfg.get_string("ingest.col.wind_speed");
  m.pressure = cfg.get_string("ingest.col.pressure");
  const std::string delim = cfg.get_string("ingest.delimiter");
  if (delim.size() != 1) throw ConfigError("ingest.delimiter must be one character");
  m.delimiter = delim[0];
  m.flow_is_volumetric = cfg.get_string("ingest.flow_unit") == "m3_h";
  return m;
}

PhysConstants phys_constants(const RunConfig& cfg) {
  PhysConstants c;
  c.cp_water = cfg.get_double("phys.cp_water");
  c.kw_per_rt = cfg.get_double("phys.kw_per_rt");
  c.validate();
  return c;
}

ingest::SynthConfig synth_config(const RunConfig& cfg) {
  ingest::SynthConfig s;
  s.start = parse_iso8601(cfg.get_string("synth.start"));
  s.days = static_cast<int>(cfg.get_int("synth.days"));
  s.base_rt = cfg.get_double("synth.base_rt");
  s.peak_rt = cfg.get_double("synth.peak_rt");
  s.weekend_factor = cfg.get_double("synth.weekend_factor");
  s.noise_sigma = cfg.get_double("synth.noise_sigma");
  s.spike_rate = cfg.get_double("synth.spike_rate");
  s.temp_mean = cfg.get_double("synth.temp_mean");
  s.temp_amp = cfg.get_double("synth.temp_amp");
  s.rh_mean = cfg.get_double("synth.rh_mean");
  s.rh_amp = cfg.get_double("synth.rh_amp");
  s.wind_mean = cfg.get_double("synth.wind_mean");
  s.wind_sigma = cfg.get_double("synth.wind_sigma");
  return s;
}

kalman::KalmanConfig kalman_config(const RunConfig& cfg) {
  kalman::KalmanConfig k;
  k.a = cfg.get_double("kalman.a");
  k.h = cfg.get_double("kalman.h");
  k.q = cfg.get_double("kalman.q");
  k.r = cfg.get_double("kalman.r");
  k.x0 = cfg.get_optional_double("kalman.x0");
  k.p0 = cfg.get_double("kalman.p0");
  k.validate();
  return k;
}

nn::TrainConfig train_config(const RunConfig& cfg, nn::Family family) {
  nn::TrainConfig t;
  t.lr = cfg.get_double("nn.lr");
  t.epochs = static_cast<int>(cfg.get_int(
      family == nn::Family::Mlp ? "nn.epochs_mlp" : "nn.epochs_lstm"));
  t.batch = static_cast<int>(cfg.get_int("nn.batch"));
  t.runs = static_cast<int>(cfg.get_int("nn.runs"));
  t.split_train = cfg.get_double("nn.split_train");
  t.split_val = cfg.get_double("nn.split_val");
  t.split_test = cfg.get_double("nn.split_test");
  t.seed = cfg.seed();
  t.clip = cfg.get_double("nn.clip");
  const std::string opt = cfg.get_string("nn.optimizer");
  if (opt == "sgd") t.optimizer = nn::Optimizer::Sgd;
  else if (opt == "momentum") t.optimizer = nn::Optimizer::Momentum;
  else if (opt == "adam") t.optimizer = nn::Optimizer::Adam;
  else throw ConfigError("nn.optimizer must be sgd, momentum or adam");
  t.momentum = cfg.get_double("nn.momentum");
  const std::string mode = cfg.get_string("nn.split_mode");
  if (mode == "chronological") t.split_mode = nn::SplitMode::Chronological;
  else if (mode == "random") t.split_mode = nn::SplitMode::Random;
  else throw ConfigError("nn.split_mode must be chronological or random");
  t.hidden = static_cast<int>(cfg.get_int(
      family == nn::Family::Mlp ? "nn.hidden_mlp" : "nn.hidden_lstm"));
  t.validate();
  return t;
}

dispatch::GaConfig ga_config(const RunConfig& cfg) {
  dispatch::GaConfig g;
  g.population = static_cast<int>(cfg.get_int("ga.population"));
  g.generations = static_cast<int>(cfg.get_int("ga.generations"));
  g.crossover = cfg.get_double("ga.crossover");
  g.mutation = cfg.get_double("ga.mutation");
  g.mutation_sigma = cfg.get_double("ga.mutation_sigma");
  g.elitism = static_cast<int>(cfg.get_int("ga.elitism"));
  g.func_tol = cfg.get_double("ga.func_tol");
  g.stall_window = static_cast<int>(cfg.get_int("ga.stall_window"));
  g.constraint_tol = cfg.get_double("ga.constraint_tol");
  g.seed = cfg.seed();
  g.validate();
  return g;
}

tes::TariffSchedule tariff_schedule(const RunConfig& cfg) {
  tes::TariffSchedule t;
  t.peak_rate = cfg.get_double("tes.peak_rate");
  t.offpeak_rate = cfg.get_double("tes.offpeak_rate");
  t.capacity_rate = cfg.get_double("tes.capacity_rate");
  t.peak_start_min = parse_hhmm(cfg.get_string("tes.peak_start"));
  t.peak_end_min = parse_hhmm(cfg.get_string("tes.peak_end"));
  t.validate();
  return t;
}

tes::CapexRates capex_rates(const RunConfig& cfg) {
  tes::CapexRates c;
  c.chiller_per_kw = cfg.get_double("tes.capex_chiller");
  c.tes_per_kwh = cfg.get_double("tes.capex_tes");
  c.validate();
  return c;
}

dispatch::PlantConfig plant_config(const RunConfig& cfg) {
  const std::string path = cfg.get_string("paths.plant");
  if (path.empty()) return dispatch::default_plant();
  return dispatch::load_plant_file(path);
}

std::vector<TimePoint> holiday_list(const RunConfig& cfg) {
  std::vector<TimePoint> out;
  const std::string raw = cfg.get_string("features.holidays");
  for (const auto& tok : csv::split(raw, ',')) {
    if (tok.empty()) continue;
    out.push_back(parse_iso8601(tok + "T00:00:00"));
  }
  return out;
}

std::string telemetry_path(const RunConfig& cfg) {
  const std::string p = cfg.get_string("paths.telemetry");
  return p.empty() ? out_path(cfg, "telemetry.csv") : p;
}

std::string weather_path(const RunConfig& cfg) {
  const std::string p = cfg.get_string("paths.weather");
  return p.empty() ? out_path(cfg, "weather.csv") : p;
}

std::vector<WeatherSample> load_weather(const RunConfig& cfg) {
  ingest::ParseReport rep;
  return ingest::parse_weather(weather_path(cfg), column_map(cfg), rep);
}

/// Weather samples aligned 1:1 with the load grid.
std::vector<WeatherSample> align_weather(const std::vector<WeatherSample>& weather,
                                         const LoadSeries& load) {
  std::vector<WeatherSample> out;
  out.reserve(load.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < load.size(); ++i) {
    const TimePoint want = load.time_at(i);
    while (j < weather.size() && weather[j].timestamp < want) ++j;
    if (j >= weather.size() || weather[j].timestamp != want)
      throw InputError("no weather sample at " + format_iso8601(want));
    out.push_back(weather[j]);
  }
  return out;
}

std::size_t train_rows_for(const RunConfig& cfg, std::size_t n_rows) {
  return static_cast<std::size_t>(cfg.get_double("nn.split_train") *
                                  static_cast<double>(n_rows));
}

struct SetArtifacts {
  std::string features(const RunConfig& cfg, const std::string& set) const {
    return out_path(cfg, "features_" + set + ".csv");
  }
  std::string model(const RunConfig& cfg, const std::string& set,
                    const std::string& fam) const {
    return out_path(cfg, "model_" + set + "_" + fam + ".json");
  }
  std::string eval(const RunConfig& cfg, const std::string& set,
                   const std::string& fam) const {
    return out_path(cfg, "eval_" + set + "_" + fam + ".json");
  }
  std::string runs_table(const RunConfig& cfg, const std::string& set,
                         const std::string& fam) const {
    return out_path(cfg, "rmse_runs_" + set + "_" + fam + ".csv");
  }
  std::string predicted(const RunConfig& cfg, const std::string& set,
                        const std::string& fam) const {
    return out_path(cfg, "predicted_" + set + "_" + fam + ".csv");
  }
};

const SetArtifacts art;

}  // namespace

// ============================================================================
// Stages
// ============================================================================

int cmd_synth(const RunConfig& cfg) {
  const auto data = ingest::synth_generate(synth_config(cfg), cfg.seed(),
                                           phys_constants(cfg));
  const std::string header = artifact_header(cfg);
  write_text(out_path(cfg, "telemetry.csv"),
             ingest::serialize_telemetry(data.telemetry, header));
  write_text(out_path(cfg, "weather.csv"),
             ingest::serialize_weather(data.weather, header));
  std::cout << "synth: " << data.telemetry.size() << " telemetry minutes, "
            << data.weather.size() << " weather bins\n";
  return 0;
}

int cmd_filter(const RunConfig& cfg) {
  const PhysConstants phys = phys_constants(cfg);
  ingest::ParseReport report;
  const auto samples =
      ingest::parse_telemetry(telemetry_path(cfg), column_map(cfg), report);
  write_text(out_path(cfg, "parse_errors_telemetry.txt"), report.to_text());

  LoadSeries raw = ingest::resample_half_hour(samples, phys);
  const std::string header = artifact_header(cfg);
  write_text(out_path(cfg, "load_raw.csv"), save_load_series(raw, header));

  LoadSeries filtered = kalman::kf_filter_series(raw, kalman_config(cfg));
  // cut-in dips may leave small negative estimates early in the recursion;
  // clamp to the physical floor before anything downstream consumes them
  for (double& v : filtered.values) v = std::max(v, 0.0);
  filtered.validate();
  write_text(out_path(cfg, "load_filtered.csv"), save_load_series(filtered, header));
  std::cout << "filter: " << raw.size() << " bins, " << report.rejects.size()
            << " rejected rows, " << report.flags.size() << " flags\n";
  return 0;
}

int cmd_cluster(const RunConfig& cfg) {
  const auto weather = load_weather(cfg);
  const std::size_t train_points = static_cast<std::size_t>(
      cfg.get_double("nn.split_train") * static_cast<double>(weather.size()));
  const std::string header = artifact_header(cfg);
  for (int k : {2, 3, 4}) {
    feat::ClusterModel m = feat::fit_weather_clusters(
        weather, train_points, k, cfg.seed(),
        static_cast<int>(cfg.get_int("kmeans.max_iter")),
        cfg.get_double("kmeans.tol"),
        static_cast<int>(cfg.get_int("kmeans.restarts")));
    write_text(out_path(cfg, "cluster_k" + std::to_string(k) + ".json"),
               feat::save_cluster_model(m, header));
    std::cout << "cluster k=" << k << ": inertia " << m.inertia << "\n";
  }
  return 0;
}

int cmd_features(const RunConfig& cfg) {
  const LoadSeries raw = load_load_series_file(out_path(cfg, "load_raw.csv"));
  const LoadSeries filtered =
      load_load_series_file(out_path(cfg, "load_filtered.csv"));
  const auto weather_all = load_weather(cfg);
  const auto weather = align_weather(weather_all, raw);
  const auto holidays = holiday_list(cfg);
  const std::string header = artifact_header(cfg);

  for (const auto& spec : feat::FeatureSpec::all()) {
    const LoadSeries& load =
        spec.load_source == Provenance::Raw ? raw : filtered;
    feat::ClusterModel cluster;
    const feat::ClusterModel* cluster_ptr = nullptr;
    if (spec.weather_mode == feat::WeatherMode::Clustered) {
      cluster = feat::load_cluster_model_text(read_text(
          out_path(cfg, "cluster_k" + std::to_string(spec.k) + ".json")));
      cluster_ptr = &cluster;
    }
    const std::size_t n_rows = load.size() - (spec.lag_depth - 1) - 1;
    feat::FeatureMatrix m =
        feat::build_features(load, weather, spec, cluster_ptr,
                             train_rows_for(cfg, n_rows), holidays);
    write_text(art.features(cfg, spec.name), feat::save_feature_matrix(m, header));
  }
  std::cout << "features: 9 sets written\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& set_filter,
              const std::string& family_filter) {
  const std::string header = artifact_header(cfg);
  for (const auto& spec : feat::FeatureSpec::all()) {
    if (!set_filter.empty() && spec.name != set_filter) continue;
    const feat::FeatureMatrix data =
        feat::load_feature_matrix_file(art.features(cfg, spec.name));
    for (nn::Family family : {nn::Family::Mlp, nn::Family::Lstm}) {
      if (!family_filter.empty() && family_filter != nn::family_name(family))
        continue;
      nn::EvalReport report;
      nn::TrainedModel model = nn::train(family, data, train_config(cfg, family), report);
      const std::string fam = nn::family_name(family);
      write_text(art.model(cfg, spec.name, fam), nn::save_model(model, header));
      write_text(art.eval(cfg, spec.name, fam),
                 nn::save_eval_report(report, family, spec.name, header));
      csv::Writer runs;
      runs.comment(header);
      runs.row({"run", "val_rmse_rt", "failed"});
      for (std::size_t r = 0; r < report.run_val_rmse.size(); ++r)
        runs.row({std::to_string(r), csv::format_double(report.run_val_rmse[r]),
                  report.run_failed[r] ? "1" : "0"});
      write_text(art.runs_table(cfg, spec.name, fam), runs.str());
      std::cout << "train " << spec.name << " " << fam << ": test RMSE "
                << report.test_rmse << " RT (run " << report.selected_run
                << ", " << report.wall_seconds << " s)\n";
    }
  }
  return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& set,
                const std::string& family) {
  const feat::FeatureMatrix data =
      feat::load_feature_matrix_file(art.features(cfg, set));
  const nn::TrainedModel model =
      nn::load_model_text(read_text(art.model(cfg, set, family)));
  LoadSeries pred = nn::predict_series(model, data);
  for (double& v : pred.values) v = std::max(v, 0.0);
  write_text(art.predicted(cfg, set, family),
             save_load_series(pred, artifact_header(cfg)));
  std::cout << "predict " << set << " " << family << ": " << pred.size()
            << " steps\n";
  return 0;
}

namespace {

std::string dispatch_plan_text(const RunConfig& cfg,
                               const dispatch::PlantConfig& plant,
                               const LoadSeries& loads, bool with_oracle) {
  const dispatch::GaConfig ga = ga_config(cfg);
  const double grid = cfg.get_double("dispatch.grid_step");
  dispatch::DispatchPlan plan =
      dispatch::schedule_dispatch(plant, loads, ga, false, grid);
  std::string text = dispatch::save_dispatch_plan(plan, plant, artifact_header(cfg));
  if (!with_oracle) return text;

  // append the exhaustive-optimum column for side-by-side comparison
  csv::Table t = csv::read_string(text);
  csv::Writer w;
  for (const auto& c : t.comments) w.comment(c.substr(2));
  auto head = t.header;
  head.push_back("oracle_power_kw");
  head.push_back("ga_gap_pct");
  w.row(head);
  char buf[40];
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    auto row = t.rows[i];
    const auto oracle =
        dispatch::optimize_dispatch_bruteforce(plant, plan.slots[i].load_rt, grid);
    std::snprintf(buf, sizeof buf, "%.3f", oracle.total_power_kw);
    row.push_back(buf);
    const double gap =
        oracle.total_power_kw > 0
            ? (plan.slots[i].solution.total_power_kw - oracle.total_power_kw) /
                  oracle.total_power_kw * 100.0
            : 0.0;
    std::snprintf(buf, sizeof buf, "%.4f", gap);
    row.push_back(buf);
    w.row(row);
  }
  return w.str();
}

}  // namespace

int cmd_dispatch(const RunConfig& cfg, const std::string& loads_path,
                 bool with_oracle) {
  const std::string path =
      loads_path.empty() ? out_path(cfg, "load_filtered.csv") : loads_path;
  const LoadSeries loads = load_load_series_file(path);
  const dispatch::PlantConfig plant = plant_config(cfg);
  const bool oracle = with_oracle || cfg.get_bool("dispatch.oracle");
  write_text(out_path(cfg, "dispatch_plan.csv"),
             dispatch_plan_text(cfg, plant, loads, oracle));
  std::cout << "dispatch: " << loads.size() << " slots planned\n";
  return 0;
}

namespace {

tes::ProposalConfig proposal_from_json(const json& j,
                                       const dispatch::PlantConfig& plant) {
  tes::ProposalConfig p;
  p.name = j.at("name").get<std::string>();
  p.preset = j.at("preset").get<int>();
  if (j.contains("fleet")) {
    for (const auto& item : j.at("fleet")) {
      const double cap = item.at("capacity_rt").get<double>();
      const int count = item.at("count").get<int>();
      int taken = 0;
      for (const auto& ch : plant.chillers) {
        if (ch.capacity_rt == cap && taken < count) {
          p.fleet.chillers.push_back(ch);
          ++taken;
        }
      }
      if (taken < count)
        throw ConfigError("proposal " + p.name + " asks for " +
                          std::to_string(count) + " chillers of " +
                          csv::format_double(cap) + " RT, plant has fewer");
    }
  } else {
    p.fleet = plant;
  }
  if (j.contains("tes")) {
    const auto& jt = j.at("tes");
    if (jt.contains("capacity_kwh")) {
      if (jt.at("capacity_kwh").is_string()) {
        if (jt.at("capacity_kwh").get<std::string>() != "auto")
          throw ConfigError("tes capacity must be a number or \"auto\"");
        p.tes.auto_capacity = true;
      } else {
        p.tes.capacity_kwh = jt.at("capacity_kwh").get<double>();
      }
    }
    if (jt.contains("max_charge_kw"))
      p.tes.max_charge_kw = jt.at("max_charge_kw").get<double>();
    if (jt.contains("max_discharge_kw"))
      p.tes.max_discharge_kw = jt.at("max_discharge_kw").get<double>();
    if (jt.contains("eta")) p.tes.eta = jt.at("eta").get<double>();
    if (jt.contains("initial_soc_kwh"))
      p.tes.initial_soc_kwh = jt.at("initial_soc_kwh").get<double>();
  }
  p.validate();
  return p;
}

std::vector<tes::ProposalConfig> default_proposals(
    const dispatch::PlantConfig& plant) {
  auto fleet_of = [&](int n1000, int n500) {
    json j;
    j["fleet"] = json::array();
    if (n1000) j["fleet"].push_back({{"capacity_rt", 1000.0}, {"count", n1000}});
    if (n500) j["fleet"].push_back({{"capacity_rt", 500.0}, {"count", n500}});
    return j["fleet"];
  };
  std::vector<tes::ProposalConfig> out;
  json base;
  base["name"] = "baseline";
  base["preset"] = 0;
  out.push_back(proposal_from_json(base, plant));
  const int fleets[4][2] = {{2, 0}, {2, 1}, {3, 1}, {1, 1}};
  for (int i = 0; i < 4; ++i) {
    json j;
    j["name"] = "proposal" + std::to_string(i + 1);
    j["preset"] = i + 1;
    j["fleet"] = fleet_of(fleets[i][0], fleets[i][1]);
    j["tes"] = {{"capacity_kwh", "auto"}};
    out.push_back(proposal_from_json(j, plant));
  }
  return out;
}

int run_tes(const RunConfig& cfg, const LoadSeries& day,
            const std::vector<std::string>& proposal_files) {
  const dispatch::PlantConfig plant = plant_config(cfg);
  const tes::TariffSchedule tariff = tariff_schedule(cfg);
  const tes::CapexRates capex = capex_rates(cfg);
  const PhysConstants phys = phys_constants(cfg);
  const dispatch::GaConfig ga = ga_config(cfg);
  const std::string header = artifact_header(cfg);

  std::vector<tes::ProposalConfig> proposals;
  if (proposal_files.empty()) {
    proposals = default_proposals(plant);
  } else {
    for (const auto& f : proposal_files) {
      json j = json::parse(read_text(f), nullptr, false);
      if (j.is_discarded())
        throw InputError("proposal file is not valid JSON: " + f);
      proposals.push_back(proposal_from_json(j, plant));
    }
    if (proposals.empty() || proposals.front().preset != 0)
      throw ConfigError("first proposal must be the preset-0 baseline");
  }

  std::vector<tes::CostReport> costs;
  std::vector<std::string> skipped;
  for (const auto& p : proposals) {
    tes::EnergyReport energy;
    try {
      energy = tes::simulate_proposal(p, day, tariff, ga, phys);
    } catch (const InfeasibleError& e) {
      if (p.preset == 0) throw;  // a failing baseline voids the comparison
      std::cout << "tes " << p.name << ": skipped (" << e.what() << ")\n";
      skipped.push_back(p.name);
      continue;
    }
    write_text(out_path(cfg, "tes_" + p.name + "_ledger.csv"),
               tes::save_energy_ledger(energy, header));
    const double fleet_kw = p.fleet.total_capacity_kw(phys.kw_per_rt);
    tes::CostReport cost = tes::cost_analysis(
        energy, fleet_kw, p.tes, tariff, capex,
        costs.empty() ? nullptr : &costs.front());
    cost.name = p.name;
    costs.push_back(cost);
    std::cout << "tes " << p.name << ": total " << energy.total_kwh
              << " kWh, max demand " << energy.max_demand_kw << " kW\n";
  }
  if (costs.size() < 2)
    throw InfeasibleError("fewer than two feasible designs to compare");
  write_text(out_path(cfg, "tes_costs.csv"), tes::compare_proposals(costs, header));
  return 0;
}

/// The full day with the highest load among days fully covered by the series.
LoadSeries peak_day(const LoadSeries& s) {
  const std::int64_t per_day = kSecPerDay / s.step;
  LoadSeries best;
  double best_peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (minutes_of_day(s.time_at(i)) != 0) continue;
    if (i + per_day > s.size()) break;
    double peak = 0.0;
    for (std::int64_t k = 0; k < per_day; ++k)
      peak = std::max(peak, s.values[i + k]);
    if (peak > best_peak) {
      best_peak = peak;
      best.start = s.time_at(i);
      best.step = s.step;
      best.provenance = s.provenance;
      best.values.assign(s.values.begin() + i, s.values.begin() + i + per_day);
    }
  }
  if (best.values.empty())
    throw InputError("series does not cover a full calendar day");
  return best;
}

}  // namespace

int cmd_tes(const RunConfig& cfg, const std::string& loads_path,
            const std::vector<std::string>& proposal_files) {
  const std::string path =
      loads_path.empty() ? out_path(cfg, "load_filtered.csv") : loads_path;
  LoadSeries loads = load_load_series_file(path);
  if (static_cast<std::int64_t>(loads.size()) * loads.step != kSecPerDay)
    loads = peak_day(loads);
  return run_tes(cfg, loads, proposal_files);
}

int cmd_report(const RunConfig& cfg) {
  if (cfg.get_string("paths.telemetry").empty()) cmd_synth(cfg);
  cmd_filter(cfg);
  cmd_cluster(cfg);
  cmd_features(cfg);
  cmd_train(cfg);

  // summary table: one row per feature set, one column per family
  const std::string header = artifact_header(cfg);
  csv::Writer rmse_table;
  rmse_table.comment(header);
  rmse_table.row({"set", "mlp_test_rmse_rt", "lstm_test_rmse_rt"});
  std::string best_set;
  std::string best_family;
  double best_val = std::numeric_limits<double>::infinity();
  for (const auto& spec : feat::FeatureSpec::all()) {
    std::vector<std::string> cells = {spec.name};
    for (const char* fam : {"mlp", "lstm"}) {
      json j = json::parse(read_text(art.eval(cfg, spec.name, fam)));
      cells.push_back(csv::format_double(j.at("test_rmse_rt").get<double>()));
      const double val = j.at("val_rmse_rt").get<double>();
      if (val < best_val) {
        best_val = val;
        best_set = spec.name;
        best_family = fam;
      }
    }
    rmse_table.row(cells);
  }
  write_text(out_path(cfg, "report_rmse.csv"), rmse_table.str());
  std::cout << "report: best validation model " << best_set << " (" << best_family
            << ")\n";

  cmd_predict(cfg, best_set, best_family);
  const LoadSeries predicted =
      load_load_series_file(art.predicted(cfg, best_set, best_family));
  const LoadSeries day = peak_day(predicted);
  write_text(out_path(cfg, "dispatch_day.csv"), save_load_series(day, header));

  const dispatch::PlantConfig plant = plant_config(cfg);
  write_text(out_path(cfg, "dispatch_plan.csv"),
             dispatch_plan_text(cfg, plant, day, cfg.get_bool("dispatch.oracle")));

  run_tes(cfg, day, {});
  std::cout << "report: artifacts in " << cfg.get_string("paths.out_dir") << "\n";
  return 0;
}

}  // namespace chillops::cli
