#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chillops/series.hpp"

namespace chillops::ingest {

/// Canonical column name -> column name in the file.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string chw_supply_temp = "chw_supply_temp";
  std::string chw_return_temp = "chw_return_temp";
  std::string chw_flow = "chw_flow";
  std::string cw_supply_temp = "cw_supply_temp";
  std::string cw_return_temp = "cw_return_temp";
  std::string cw_flow = "cw_flow";
  std::string aux_power = "aux_power";
  std::string dry_bulb = "dry_bulb";
  std::string rel_humidity = "rel_humidity";
  std::string wind_dir = "wind_dir";
  std::string wind_speed = "wind_speed";
  std::string pressure = "pressure";
  char delimiter = ',';
  bool flow_is_volumetric = false;  // m3/h converted with rho = 1000 kg/m3
};

struct RejectRecord {
  std::size_t line;  // 1-based data row number
  std::string reason;
  std::string raw;
};

struct FlagRecord {
  std::size_t line;
  std::string field;
  std::string message;
};

/// Rows that fail numeric parsing are rejected; rows that violate range
/// invariants are kept but flagged. Nothing is silently dropped.
struct ParseReport {
  std::vector<RejectRecord> rejects;
  std::vector<FlagRecord> flags;

  std::string to_text() const;
};

std::vector<TelemetrySample> parse_telemetry(const std::string& path,
                                             const ColumnMap& schema,
                                             ParseReport& report);
std::vector<TelemetrySample> parse_telemetry_text(const std::string& text,
                                                  const ColumnMap& schema,
                                                  ParseReport& report);

std::vector<WeatherSample> parse_weather(const std::string& path,
                                         const ColumnMap& schema,
                                         ParseReport& report);
std::vector<WeatherSample> parse_weather_text(const std::string& text,
                                              const ColumnMap& schema,
                                              ParseReport& report);

std::string serialize_telemetry(const std::vector<TelemetrySample>& samples,
                                const std::string& header);
std::string serialize_weather(const std::vector<WeatherSample>& samples,
                              const std::string& header);

/// cp * m * (T_R - T_S) in kW, converted to RT. May be negative on raw
/// cut-in noise; callers decide what to do with that.
double cooling_load(const TelemetrySample& s, const PhysConstants& c);

/// Per-minute loads averaged onto the half-hour grid. Empty bins are
/// linearly interpolated when the gap spans at most two bins; longer gaps
/// raise an input error naming the interval.
LoadSeries resample_half_hour(const std::vector<TelemetrySample>& samples,
                              const PhysConstants& c);

/// Humidity ratio (kg water / kg dry air) from dry bulb (degC), relative
/// humidity (percent) and station pressure (hPa), using the Magnus
/// saturation formula.
double humidity_ratio(double dry_bulb, double rel_humidity, double pressure);

struct SynthConfig {
  TimePoint start = 0;  // midnight-aligned
  int days = 31;
  double base_rt = 300.0;
  double peak_rt = 2100.0;
  double weekend_factor = 0.55;
  double noise_sigma = 18.0;  // RT, on the per-minute load
  double spike_rate = 4.0;    // expected cut-in transients per day
  double temp_mean = 29.0;    // degC
  double temp_amp = 3.5;
  double rh_mean = 75.0;  // percent
  double rh_amp = 12.0;
  double wind_mean = 2.5;  // m/s
  double wind_sigma = 1.2;

  void validate() const;
};

struct SynthData {
  std::vector<TelemetrySample> telemetry;  // 1-minute cadence
  std::vector<WeatherSample> weather;      // 30-minute cadence
};

/// Deterministic synthetic month: daily seasonality, weekday/weekend
/// contrast, weather-coupled load, and cut-in transients injected as
/// supply-temperature excursions.
SynthData synth_generate(const SynthConfig& cfg, std::uint64_t seed,
                         const PhysConstants& phys);

}  // namespace chillops::ingest
