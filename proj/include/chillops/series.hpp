#pragma once

#include <string>
#include <vector>

#include "chillops/time_util.hpp"

namespace chillops {

/// Plant-side constants for the load formula and unit conversion.
struct PhysConstants {
  double cp_water = 4.19;    // kJ/(kg K)
  double kw_per_rt = 3.517;  // thermal kW per refrigeration ton

  void validate() const;
};

struct TelemetrySample {
  TimePoint timestamp = 0;
  double chw_supply_temp = 0;  // degC
  double chw_return_temp = 0;  // degC
  double chw_mass_flow = 0;    // kg/s
  double cw_supply_temp = 0;   // degC
  double cw_return_temp = 0;   // degC
  double cw_mass_flow = 0;     // kg/s
  double aux_power = 0;        // kW, pumps + towers summed
};

struct WeatherSample {
  TimePoint timestamp = 0;
  double dry_bulb = 0;      // degC
  double rel_humidity = 0;  // percent, 0..100
  double wind_dir = 0;      // degrees
  double wind_speed = 0;    // m/s
  double pressure = 0;      // hPa
};

enum class Provenance { Raw, KalmanFiltered, Predicted };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

/// A regular half-hourly load series in refrigeration tons.
struct LoadSeries {
  TimePoint start = 0;
  std::int64_t step = kSlotSeconds;
  std::vector<double> values;  // RT
  Provenance provenance = Provenance::Raw;

  std::size_t size() const { return values.size(); }
  TimePoint time_at(std::size_t i) const {
    return start + static_cast<std::int64_t>(i) * step;
  }

  /// Negative values carry cut-in noise; only raw series may hold them.
  void validate() const;
};

/// Serialization to/from the delimiter-separated artifact format
/// (comment header, then timestamp,load_rt rows).
std::string save_load_series(const LoadSeries& s, const std::string& header);
LoadSeries load_load_series_text(const std::string& text);
LoadSeries load_load_series_file(const std::string& path);

}  // namespace chillops
