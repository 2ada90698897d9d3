#include "chillops/config.hpp"

#include <fstream>

#include "chillops/common.hpp"

namespace chillops {

using json = nlohmann::ordered_json;

RunConfig::RunConfig() {
  auto& v = values_;
  v["seed"] = 42;

  v["paths.out_dir"] = "out";
  v["paths.telemetry"] = "";
  v["paths.weather"] = "";
  v["paths.loads"] = "";
  v["paths.plant"] = "";

  v["phys.cp_water"] = 4.19;
  v["phys.kw_per_rt"] = 3.517;

  v["ingest.delimiter"] = ",";
  v["ingest.flow_unit"] = "kg_s";  // or "m3_h" (converted with rho = 1000)
  v["ingest.col.timestamp"] = "timestamp";
  v["ingest.col.chw_supply_temp"] = "chw_supply_temp";
  v["ingest.col.chw_return_temp"] = "chw_return_temp";
  v["ingest.col.chw_flow"] = "chw_flow";
  v["ingest.col.cw_supply_temp"] = "cw_supply_temp";
  v["ingest.col.cw_return_temp"] = "cw_return_temp";
  v["ingest.col.cw_flow"] = "cw_flow";
  v["ingest.col.aux_power"] = "aux_power";
  v["ingest.col.dry_bulb"] = "dry_bulb";
  v["ingest.col.rel_humidity"] = "rel_humidity";
  v["ingest.col.wind_dir"] = "wind_dir";
  v["ingest.col.wind_speed"] = "wind_speed";
  v["ingest.col.pressure"] = "pressure";

  v["synth.start"] = "2023-08-01T00:00:00";
  v["synth.days"] = 31;
  v["synth.base_rt"] = 300.0;
  v["synth.peak_rt"] = 2100.0;
  v["synth.weekend_factor"] = 0.55;
  v["synth.noise_sigma"] = 18.0;
  v["synth.spike_rate"] = 4.0;  // cut-in transients per day
  v["synth.temp_mean"] = 29.0;
  v["synth.temp_amp"] = 3.5;
  v["synth.rh_mean"] = 75.0;
  v["synth.rh_amp"] = 12.0;
  v["synth.wind_mean"] = 2.5;
  v["synth.wind_sigma"] = 1.2;

  v["kalman.a"] = 1.0;
  v["kalman.h"] = 1.0;
  v["kalman.q"] = 1.0;
  v["kalman.r"] = 1.0;
  v["kalman.x0"] = "first";  // or a number
  v["kalman.p0"] = 1.0;

  v["features.holidays"] = "";  // comma-separated YYYY-MM-DD

  v["kmeans.restarts"] = 10;
  v["kmeans.max_iter"] = 100;
  v["kmeans.tol"] = 1e-9;

  v["nn.hidden_mlp"] = 16;
  v["nn.hidden_lstm"] = 16;
  v["nn.lr"] = 0.01;
  v["nn.epochs_mlp"] = 150;
  v["nn.epochs_lstm"] = 60;
  v["nn.batch"] = 32;
  v["nn.runs"] = 10;
  v["nn.optimizer"] = "adam";  // "sgd" | "momentum" | "adam"
  v["nn.momentum"] = 0.9;
  v["nn.clip"] = 5.0;
  v["nn.split_train"] = 0.70;
  v["nn.split_val"] = 0.15;
  v["nn.split_test"] = 0.15;
  v["nn.split_mode"] = "chronological";  // or "random"

  v["ga.population"] = 80;
  v["ga.generations"] = 200;
  v["ga.crossover"] = 0.8;
  v["ga.mutation"] = 0.1;
  v["ga.mutation_sigma"] = 0.05;
  v["ga.elitism"] = 2;
  v["ga.func_tol"] = 1e-6;
  v["ga.stall_window"] = 30;
  v["ga.constraint_tol"] = 1.0;  // RT

  v["dispatch.grid_step"] = 0.01;
  v["dispatch.oracle"] = false;

  v["tes.peak_rate"] = 0.2967;
  v["tes.offpeak_rate"] = 0.1843;
  v["tes.capacity_rate"] = 16.48;
  v["tes.capex_chiller"] = 654.00;
  v["tes.capex_tes"] = 71.09;
  v["tes.peak_start"] = "07:00";
  v["tes.peak_end"] = "23:00";
  v["tes.eta"] = 0.999;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) cfg.set(it.key(), it.value());
  return cfg;
}

void RunConfig::set(const std::string& key, const json& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  const json& cur = *it;
  const bool cur_num = cur.is_number();
  const bool new_num = value.is_number();
  // kalman.x0 accepts "first" or a number; everything else keeps its type.
  if (key == "kalman.x0") {
    if (!new_num && !(value.is_string() && value.get<std::string>() == "first"))
      throw ConfigError("kalman.x0 must be a number or \"first\"");
  } else if (cur_num != new_num || cur.is_string() != value.is_string() ||
             cur.is_boolean() != value.is_boolean()) {
    throw ConfigError("config key " + key + " has the wrong type");
  }
  *it = value;
}

const json& RunConfig::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  return *it;
}

long long RunConfig::get_int(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number_integer())
    throw ConfigError("config key " + key + " is not an integer");
  return v.get<long long>();
}

double RunConfig::get_double(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError("config key " + key + " is not a number");
  return v.get<double>();
}

std::string RunConfig::get_string(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError("config key " + key + " is not a string");
  return v.get<std::string>();
}

bool RunConfig::get_bool(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError("config key " + key + " is not a boolean");
  return v.get<bool>();
}

std::optional<double> RunConfig::get_optional_double(const std::string& key) const {
  const json& v = at(key);
  if (v.is_number()) return v.get<double>();
  return std::nullopt;
}

std::uint64_t RunConfig::hash() const {
  // paths are excluded so the hash identifies the computation: the same
  // seed and parameters produce the same artifacts wherever they land
  json filtered = json::object();
  for (auto it = values_.begin(); it != values_.end(); ++it)
    if (it.key().rfind("paths.", 0) != 0) filtered[it.key()] = it.value();
  const std::string dump = filtered.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash()));
  return buf;
}

std::string artifact_header(const RunConfig& cfg) {
  return std::string("chillops ") + kVersion + " config=" + cfg.hash_hex() +
         " seed=" + std::to_string(cfg.seed());
}

}  // namespace chillops
