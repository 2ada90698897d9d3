#include "chillops/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"

namespace chillops::ingest {

namespace {

int require_column(const csv::Table& t, const std::string& name) {
  int c = t.column(name);
  if (c < 0) throw InputError("missing required column: " + name);
  return c;
}

std::string join_row(const std::vector<std::string>& cells, char delim) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += delim;
    out += cells[i];
  }
  return out;
}

}  // namespace

std::string ParseReport::to_text() const {
  std::ostringstream os;
  os << "# rejected rows: " << rejects.size() << "\n";
  for (const auto& r : rejects)
    os << "reject line=" << r.line << " reason=" << r.reason << " raw=" << r.raw
       << "\n";
  os << "# flagged rows: " << flags.size() << "\n";
  for (const auto& f : flags)
    os << "flag line=" << f.line << " field=" << f.field << " " << f.message
       << "\n";
  return os.str();
}

std::vector<TelemetrySample> parse_telemetry_text(const std::string& text,
                                                  const ColumnMap& schema,
                                                  ParseReport& report) {
  csv::Table t = csv::read_string(text, schema.delimiter);
  const int c_ts = require_column(t, schema.timestamp);
  const int c_st = require_column(t, schema.chw_supply_temp);
  const int c_rt = require_column(t, schema.chw_return_temp);
  const int c_fl = require_column(t, schema.chw_flow);
  const int c_cst = require_column(t, schema.cw_supply_temp);
  const int c_crt = require_column(t, schema.cw_return_temp);
  const int c_cfl = require_column(t, schema.cw_flow);
  const int c_aux = require_column(t, schema.aux_power);

  std::vector<TelemetrySample> out;
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::size_t line = i + 1;
    if (row.size() < t.header.size()) {
      report.rejects.push_back({line, "short row", join_row(row, schema.delimiter)});
      continue;
    }
    TelemetrySample s;
    try {
      s.timestamp = parse_iso8601(row[c_ts]);
    } catch (const Error&) {
      report.rejects.push_back({line, "bad timestamp", join_row(row, schema.delimiter)});
      continue;
    }
    auto num = [&](int col, double& dst) {
      auto v = csv::parse_double(row[col]);
      if (!v) return false;
      dst = *v;
      return true;
    };
    if (!num(c_st, s.chw_supply_temp) || !num(c_rt, s.chw_return_temp) ||
        !num(c_fl, s.chw_mass_flow) || !num(c_cst, s.cw_supply_temp) ||
        !num(c_crt, s.cw_return_temp) || !num(c_cfl, s.cw_mass_flow) ||
        !num(c_aux, s.aux_power)) {
      report.rejects.push_back({line, "unparseable numeric", join_row(row, schema.delimiter)});
      continue;
    }
    if (schema.flow_is_volumetric) {
      // m3/h -> kg/s with rho = 1000 kg/m3
      s.chw_mass_flow = s.chw_mass_flow * 1000.0 / 3600.0;
      s.cw_mass_flow = s.cw_mass_flow * 1000.0 / 3600.0;
    }
    if (s.chw_mass_flow < 0)
      report.flags.push_back({line, "chw_flow", "negative flow"});
    for (auto [v, name] : {std::pair<double, const char*>{s.chw_supply_temp, "chw_supply_temp"},
                           {s.chw_return_temp, "chw_return_temp"},
                           {s.cw_supply_temp, "cw_supply_temp"},
                           {s.cw_return_temp, "cw_return_temp"}}) {
      if (v < 0.0 || v > 60.0)
        report.flags.push_back({line, name, "temperature outside [0,60] degC"});
    }
    out.push_back(s);
    lines.push_back(line);
  }
  if (out.empty()) throw InputError("no valid telemetry rows");

  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out[a].timestamp < out[b].timestamp;
  });
  std::vector<TelemetrySample> sorted;
  sorted.reserve(out.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const TelemetrySample& s = out[order[k]];
    if (!sorted.empty() && s.timestamp == sorted.back().timestamp) {
      report.rejects.push_back({lines[order[k]], "duplicate timestamp",
                                format_iso8601(s.timestamp)});
      continue;
    }
    sorted.push_back(s);
  }
  return sorted;
}

std::vector<TelemetrySample> parse_telemetry(const std::string& path,
                                             const ColumnMap& schema,
                                             ParseReport& report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open telemetry file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_telemetry_text(text, schema, report);
}

std::vector<WeatherSample> parse_weather_text(const std::string& text,
                                              const ColumnMap& schema,
                                              ParseReport& report) {
  csv::Table t = csv::read_string(text, schema.delimiter);
  const int c_ts = require_column(t, schema.timestamp);
  const int c_db = require_column(t, schema.dry_bulb);
  const int c_rh = require_column(t, schema.rel_humidity);
  const int c_wd = require_column(t, schema.wind_dir);
  const int c_ws = require_column(t, schema.wind_speed);
  const int c_p = require_column(t, schema.pressure);

  std::vector<WeatherSample> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::size_t line = i + 1;
    if (row.size() < t.header.size()) {
      report.rejects.push_back({line, "short row", join_row(row, schema.delimiter)});
      continue;
    }
    WeatherSample s;
    try {
      s.timestamp = parse_iso8601(row[c_ts]);
    } catch (const Error&) {
      report.rejects.push_back({line, "bad timestamp", join_row(row, schema.delimiter)});
      continue;
    }
    auto num = [&](int col, double& dst) {
      auto v = csv::parse_double(row[col]);
      if (!v) return false;
      dst = *v;
      return true;
    };
    if (!num(c_db, s.dry_bulb) || !num(c_rh, s.rel_humidity) ||
        !num(c_wd, s.wind_dir) || !num(c_ws, s.wind_speed) ||
        !num(c_p, s.pressure)) {
      report.rejects.push_back({line, "unparseable numeric", join_row(row, schema.delimiter)});
      continue;
    }
    if (s.rel_humidity < 0 || s.rel_humidity > 100)
      report.flags.push_back({line, "rel_humidity", "outside [0,100] percent"});
    if (s.wind_speed < 0)
      report.flags.push_back({line, "wind_speed", "negative wind speed"});
    if (s.pressure < 850 || s.pressure > 1100)
      report.flags.push_back({line, "pressure", "outside [850,1100] hPa"});
    out.push_back(s);
  }
  if (out.empty()) throw InputError("no valid weather rows");
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  return out;
}

std::vector<WeatherSample> parse_weather(const std::string& path,
                                         const ColumnMap& schema,
                                         ParseReport& report) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open weather file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_weather_text(text, schema, report);
}

std::string serialize_telemetry(const std::vector<TelemetrySample>& samples,
                                const std::string& header) {
  csv::Writer w;
  if (!header.empty()) w.comment(header);
  w.row({"timestamp", "chw_supply_temp", "chw_return_temp", "chw_flow",
         "cw_supply_temp", "cw_return_temp", "cw_flow", "aux_power"});
  for (const auto& s : samples) {
    w.row({format_iso8601(s.timestamp), csv::format_double(s.chw_supply_temp),
           csv::format_double(s.chw_return_temp), csv::format_double(s.chw_mass_flow),
           csv::format_double(s.cw_supply_temp), csv::format_double(s.cw_return_temp),
           csv::format_double(s.cw_mass_flow), csv::format_double(s.aux_power)});
  }
  return w.str();
}

std::string serialize_weather(const std::vector<WeatherSample>& samples,
                              const std::string& header) {
  csv::Writer w;
  if (!header.empty()) w.comment(header);
  w.row({"timestamp", "dry_bulb", "rel_humidity", "wind_dir", "wind_speed",
         "pressure"});
  for (const auto& s : samples) {
    w.row({format_iso8601(s.timestamp), csv::format_double(s.dry_bulb),
           csv::format_double(s.rel_humidity), csv::format_double(s.wind_dir),
           csv::format_double(s.wind_speed), csv::format_double(s.pressure)});
  }
  return w.str();
}

double cooling_load(const TelemetrySample& s, const PhysConstants& c) {
  c.validate();
  const double kw = c.cp_water * s.chw_mass_flow *
                    (s.chw_return_temp - s.chw_supply_temp);
  return kw / c.kw_per_rt;
}

LoadSeries resample_half_hour(const std::vector<TelemetrySample>& samples,
                              const PhysConstants& c) {
  if (samples.empty()) throw InputError("no telemetry to resample");
  const TimePoint start = (samples.front().timestamp / kSlotSeconds) * kSlotSeconds;
  const TimePoint last = samples.back().timestamp;
  const std::size_t bins =
      static_cast<std::size_t>((last - start) / kSlotSeconds) + 1;

  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (const auto& s : samples) {
    const std::size_t b = static_cast<std::size_t>((s.timestamp - start) / kSlotSeconds);
    sum[b] += cooling_load(s, c);
    count[b] += 1;
  }

  LoadSeries out;
  out.start = start;
  out.step = kSlotSeconds;
  out.provenance = Provenance::Raw;
  out.values.assign(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b)
    if (count[b]) out.values[b] = sum[b] / static_cast<double>(count[b]);

  // close gaps of at most two bins by linear interpolation
  std::size_t b = 0;
  while (b < bins) {
    if (count[b]) {
      ++b;
      continue;
    }
    std::size_t gap_start = b;
    while (b < bins && !count[b]) ++b;
    const std::size_t gap_len = b - gap_start;
    const bool bracketed = gap_start > 0 && b < bins;
    if (gap_len > 2 || !bracketed) {
      throw InputError("telemetry gap of " + std::to_string(gap_len) +
                       " bins starting at " +
                       format_iso8601(start + static_cast<std::int64_t>(gap_start) * kSlotSeconds));
    }
    const double lo = out.values[gap_start - 1];
    const double hi = out.values[b];
    for (std::size_t g = 0; g < gap_len; ++g) {
      const double f = static_cast<double>(g + 1) / static_cast<double>(gap_len + 1);
      out.values[gap_start + g] = lo + (hi - lo) * f;
    }
  }
  return out;
}

double humidity_ratio(double dry_bulb, double rel_humidity, double pressure) {
  if (rel_humidity < 0 || rel_humidity > 100)
    throw InputError("relative humidity outside [0,100]");
  const double p_sat = 6.112 * std::exp(17.62 * dry_bulb / (243.12 + dry_bulb));
  const double p_v = rel_humidity / 100.0 * p_sat;
  if (p_v >= pressure)
    throw InputError("saturation overflow: vapor pressure exceeds station pressure");
  return 0.621945 * p_v / (pressure - p_v);
}

void SynthConfig::validate() const {
  if (days < 1) throw ConfigError("synth.days must be >= 1");
  if (!(peak_rt >= base_rt && base_rt >= 0))
    throw ConfigError("synth profile requires peak >= base >= 0");
  if (noise_sigma < 0 || spike_rate < 0)
    throw ConfigError("synth noise and spike rate must be non-negative");
  if (weekend_factor < 0 || weekend_factor > 1)
    throw ConfigError("synth.weekend_factor must be in [0,1]");
}

namespace {

// Weekday occupancy shape; exceeds 1 around midday on purpose so the
// clamped curve tops out exactly at the configured peak.
double occupancy_shape(int minute_of_day) {
  struct Node {
    int m;
    double v;
  };
  static const Node nodes[] = {
      {0, 0.0},   {390, 0.0},  {540, 0.8},  {720, 1.1},  {900, 1.1},
      {1080, 0.85}, {1260, 0.45}, {1380, 0.1}, {1440, 0.0},
  };
  for (std::size_t i = 1; i < std::size(nodes); ++i) {
    if (minute_of_day <= nodes[i].m) {
      const auto& a = nodes[i - 1];
      const auto& b = nodes[i];
      const double f = static_cast<double>(minute_of_day - a.m) /
                       static_cast<double>(b.m - a.m);
      return a.v + (b.v - a.v) * f;
    }
  }
  return 0.0;
}

}  // namespace

SynthData synth_generate(const SynthConfig& cfg, std::uint64_t seed,
                         const PhysConstants& phys) {
  cfg.validate();
  phys.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int bins_per_day = 48;
  const int total_bins = cfg.days * bins_per_day;
  const int total_minutes = cfg.days * 1440;

  SynthData out;
  out.weather.reserve(total_bins);

  // --- weather, 30-minute cadence, AR(1) disturbances ---
  double temp_ar = 0.0, rh_ar = 0.0;
  std::vector<double> temp_by_bin(total_bins), rh_by_bin(total_bins);
  for (int b = 0; b < total_bins; ++b) {
    const int mod = (b % bins_per_day) * 30;
    const double phase = 2.0 * M_PI * (mod - 870) / 1440.0;  // warmest ~14:30
    temp_ar = 0.96 * temp_ar + 0.28 * unit_normal(rng);
    rh_ar = 0.96 * rh_ar + 0.9 * unit_normal(rng);
    WeatherSample w;
    w.timestamp = cfg.start + static_cast<std::int64_t>(b) * kSlotSeconds;
    w.dry_bulb = cfg.temp_mean + cfg.temp_amp * std::cos(phase) + temp_ar;
    w.rel_humidity =
        std::clamp(cfg.rh_mean - cfg.rh_amp * std::cos(phase) + rh_ar, 35.0, 100.0);
    w.wind_dir = 360.0 * unit(rng);
    w.wind_speed = std::abs(cfg.wind_mean + cfg.wind_sigma * unit_normal(rng));
    w.pressure = 1009.0 + 2.0 * std::sin(2.0 * M_PI * mod / 1440.0) +
                 0.5 * unit_normal(rng);
    temp_by_bin[b] = w.dry_bulb;
    rh_by_bin[b] = w.rel_humidity;
    out.weather.push_back(w);
  }

  // --- cut-in transients: supply-temperature excursions ---
  std::vector<double> spike_dt(total_minutes, 0.0);
  std::poisson_distribution<int> per_day(cfg.spike_rate);
  for (int d = 0; d < cfg.days; ++d) {
    const int n = cfg.spike_rate > 0 ? per_day(rng) : 0;
    for (int k = 0; k < n; ++k) {
      const int at = d * 1440 + static_cast<int>(unit(rng) * 1439.0);
      const int dur = 3 + static_cast<int>(unit(rng) * 9.0);
      const double mag = 1.5 + 4.5 * unit(rng);  // K, up to brief negatives
      for (int m = 0; m < dur && at + m < total_minutes; ++m) {
        const double envelope =
            m < dur / 2 ? (m + 1.0) / (dur / 2 + 1.0)
                        : (dur - m) / static_cast<double>(dur - dur / 2);
        spike_dt[at + m] = std::max(spike_dt[at + m], mag * envelope);
      }
    }
  }

  // --- per-minute telemetry ---
  out.telemetry.reserve(total_minutes);
  const double supply_temp = 6.5;
  const double design_dt = 5.0;
  for (int m = 0; m < total_minutes; ++m) {
    const TimePoint ts = cfg.start + static_cast<std::int64_t>(m) * kSecPerMin;
    const int mod = minutes_of_day(ts);
    const double day_factor = is_weekend(ts) ? cfg.weekend_factor : 1.0;

    const int b = std::min(m / 30, total_bins - 1);
    const double wx =
        1.0 + 0.035 * (temp_by_bin[b] - cfg.temp_mean) / std::max(cfg.temp_amp, 1e-9) +
        0.015 * (rh_by_bin[b] - cfg.rh_mean) / std::max(cfg.rh_amp, 1e-9);

    const double occ = std::clamp(occupancy_shape(mod) * day_factor * wx, 0.0, 1.0);
    double load_rt = cfg.base_rt + (cfg.peak_rt - cfg.base_rt) * occ;
    if (cfg.noise_sigma > 0) load_rt += cfg.noise_sigma * unit_normal(rng);
    load_rt = std::max(load_rt, 0.0);

    TelemetrySample s;
    s.timestamp = ts;
    s.chw_supply_temp = supply_temp + spike_dt[m];
    s.chw_return_temp = supply_temp + design_dt;
    s.chw_mass_flow = load_rt * phys.kw_per_rt / (phys.cp_water * design_dt);
    s.cw_supply_temp = 29.5;
    s.cw_return_temp = 29.5 + design_dt * (0.2 + 0.8 * occ);
    s.cw_mass_flow = s.chw_mass_flow * 1.2;
    s.aux_power = 80.0 + 0.05 * load_rt;
    out.telemetry.push_back(s);
  }
  return out;
}

}  // namespace chillops::ingest
