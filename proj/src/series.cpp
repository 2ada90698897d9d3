#include "chillops/series.hpp"

#include <fstream>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"

namespace chillops {

void PhysConstants::validate() const {
  if (!(cp_water > 0) || !(kw_per_rt > 0))
    throw ConfigError("physical constants must be strictly positive");
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Raw: return "raw";
    case Provenance::KalmanFiltered: return "kalman-filtered";
    case Provenance::Predicted: return "predicted";
  }
  return "raw";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "raw") return Provenance::Raw;
  if (name == "kalman-filtered") return Provenance::KalmanFiltered;
  if (name == "predicted") return Provenance::Predicted;
  throw InputError("unknown series provenance: " + name);
}

void LoadSeries::validate() const {
  if (provenance != Provenance::Raw) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0)
        throw InputError("negative load at " + format_iso8601(time_at(i)) +
                         " in a " + provenance_name(provenance) + " series");
    }
  }
}

std::string save_load_series(const LoadSeries& s, const std::string& header) {
  csv::Writer w;
  if (!header.empty()) w.comment(header);
  w.comment(std::string("provenance=") + provenance_name(s.provenance) +
            " step_s=" + std::to_string(s.step));
  w.row({"timestamp", "load_rt"});
  for (std::size_t i = 0; i < s.values.size(); ++i)
    w.row({format_iso8601(s.time_at(i)), csv::format_double(s.values[i])});
  return w.str();
}

LoadSeries load_load_series_text(const std::string& text) {
  csv::Table t = csv::read_string(text);
  LoadSeries s;
  for (const auto& c : t.comments) {
    auto pos = c.find("provenance=");
    if (pos != std::string::npos) {
      std::string rest = c.substr(pos + 11);
      s.provenance = provenance_from_name(rest.substr(0, rest.find(' ')));
    }
    pos = c.find("step_s=");
    if (pos != std::string::npos) s.step = std::stoll(c.substr(pos + 7));
  }
  int tcol = t.column("timestamp");
  int vcol = t.column("load_rt");
  if (tcol < 0 || vcol < 0)
    throw InputError("load series is missing timestamp/load_rt columns");
  TimePoint prev = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    TimePoint ts = parse_iso8601(r[tcol]);
    auto v = csv::parse_double(r[vcol]);
    if (!v) throw InputError("bad load value in row " + std::to_string(i + 1));
    if (i == 0) {
      s.start = ts;
    } else if (ts != prev + s.step) {
      throw InputError("load series is not on a regular grid at " + r[tcol]);
    }
    prev = ts;
    s.values.push_back(*v);
  }
  if (s.values.empty()) throw InputError("load series has no rows");
  return s;
}

LoadSeries load_load_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open load series: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_load_series_text(text);
}

}  // namespace chillops
