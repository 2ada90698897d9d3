#include "chillops/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "chillops/common.hpp"
#include "chillops/csv.hpp"
#include "chillops/ingest.hpp"
#include "chillops/kernels.hpp"

namespace chillops::feat {

using json = nlohmann::ordered_json;

Scaler zscore_fit(const std::vector<double>& values) {
  if (values.size() < 2)
    throw InputError("scaler fit needs at least two values");
  Scaler s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    ss += d * d;
  }
  s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  if (s.sd == 0.0) s.degenerate = true;
  return s;
}

double zscore_apply(const Scaler& s, double v) {
  if (s.degenerate) return 0.0;
  return (v - s.mean) / s.sd;
}

double zscore_invert(const Scaler& s, double z) {
  if (s.degenerate) return s.mean;
  return z * s.sd + s.mean;
}

// ============================================================================
// K-means
// ============================================================================

namespace {

int nearest_centroid(const std::vector<double>& centroids, int k, int dims,
                     const double* p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double d = kern::sumsq_diff(p, centroids.data() + j * dims,
                                      static_cast<std::size_t>(dims));
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

struct LloydResult {
  std::vector<double> centroids;
  double inertia = 0.0;
  std::vector<double> history;
};

LloydResult lloyd_once(const std::vector<double>& pts, std::size_t n, int dims,
                       int k, std::uint64_t seed, int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  // first k distinct points in shuffled order
  LloydResult res;
  res.centroids.reserve(static_cast<std::size_t>(k) * dims);
  for (std::size_t idx : order) {
    const double* p = pts.data() + idx * dims;
    bool dup = false;
    for (std::size_t j = 0; j * dims < res.centroids.size(); ++j) {
      if (kern::sumsq_diff(p, res.centroids.data() + j * dims, dims) == 0.0) {
        dup = true;
        break;
      }
    }
    if (!dup) res.centroids.insert(res.centroids.end(), p, p + dims);
    if (res.centroids.size() == static_cast<std::size_t>(k) * dims) break;
  }
  if (res.centroids.size() < static_cast<std::size_t>(k) * dims)
    throw InputError("k exceeds the number of distinct points");

  std::vector<int> assign(n, 0);
  std::vector<double> dist(n, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    // assignment
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* p = pts.data() + i * dims;
      assign[i] = nearest_centroid(res.centroids, k, dims, p);
      dist[i] = kern::sumsq_diff(p, res.centroids.data() + assign[i] * dims, dims);
      inertia += dist[i];
    }
    res.history.push_back(inertia);
    res.inertia = inertia;

    // update
    std::vector<double> next(static_cast<std::size_t>(k) * dims, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      kern::axpy(1.0, pts.data() + i * dims, next.data() + assign[i] * dims, dims);
      ++count[assign[i]];
    }
    for (int j = 0; j < k; ++j) {
      if (count[j] == 0) {
        // re-seed from the point farthest from its assigned centroid
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (dist[i] > dist[far]) far = i;
        std::copy_n(pts.data() + far * dims, dims, next.data() + j * dims);
        dist[far] = 0.0;  // don't hand the same point to two empty clusters
      } else {
        for (int d = 0; d < dims; ++d)
          next[static_cast<std::size_t>(j) * dims + d] /= static_cast<double>(count[j]);
      }
    }

    double movement = 0.0;
    for (int j = 0; j < k; ++j)
      movement = std::max(movement,
                          kern::sumsq_diff(next.data() + j * dims,
                                           res.centroids.data() + j * dims, dims));
    res.centroids = std::move(next);
    if (std::sqrt(movement) < tol) {
      // final assignment pass so the reported inertia matches the
      // converged centroids
      double inertia_final = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* p = pts.data() + i * dims;
        const int j = nearest_centroid(res.centroids, k, dims, p);
        inertia_final += kern::sumsq_diff(p, res.centroids.data() + j * dims, dims);
      }
      res.history.push_back(inertia_final);
      res.inertia = inertia_final;
      break;
    }
  }
  return res;
}

}  // namespace

ClusterModel kmeans_fit(const std::vector<double>& points, int dims, int k,
                        std::uint64_t seed, int max_iter, double tol,
                        int restarts) {
  if (dims < 1) throw InputError("kmeans: dims must be >= 1");
  if (points.size() % dims != 0)
    throw InputError("kmeans: point buffer is not a multiple of dims");
  const std::size_t n = points.size() / dims;
  if (k < 1) throw InputError("kmeans: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw InputError("kmeans: fewer points than clusters");
  if (restarts < 1) restarts = 1;

  std::optional<LloydResult> best;
  for (int r = 0; r < restarts; ++r) {
    LloydResult cand = lloyd_once(points, n, dims, k, seed + static_cast<std::uint64_t>(r),
                                  max_iter, tol);
    if (!best || cand.inertia < best->inertia) best = std::move(cand);
  }

  ClusterModel m;
  m.k = k;
  m.dims = dims;
  m.centroids = best->centroids;
  m.inertia = best->inertia;
  m.inertia_history = best->history;
  return m;
}

int kmeans_assign(const ClusterModel& model, const double* point, int dims) {
  if (dims != model.dims)
    throw InputError("kmeans_assign: point dimension mismatch");
  return nearest_centroid(model.centroids, model.k, model.dims, point);
}

int assign_weather(const ClusterModel& model, const WeatherSample& w) {
  if (model.scaler.size() != 3)
    throw InputError("cluster model lacks its weather scaler");
  const double triple[3] = {
      zscore_apply(model.scaler[0], w.dry_bulb),
      zscore_apply(model.scaler[1],
                   ingest::humidity_ratio(w.dry_bulb, w.rel_humidity, w.pressure)),
      zscore_apply(model.scaler[2], w.wind_speed)};
  return kmeans_assign(model, triple, 3);
}

ClusterModel fit_weather_clusters(const std::vector<WeatherSample>& weather,
                                  std::size_t train_points, int k,
                                  std::uint64_t seed, int max_iter, double tol,
                                  int restarts) {
  if (train_points > weather.size()) train_points = weather.size();
  if (train_points < static_cast<std::size_t>(k))
    throw InputError("not enough weather samples to fit clusters");

  std::vector<double> db(train_points), hr(train_points), ws(train_points);
  for (std::size_t i = 0; i < train_points; ++i) {
    db[i] = weather[i].dry_bulb;
    hr[i] = ingest::humidity_ratio(weather[i].dry_bulb, weather[i].rel_humidity,
                                   weather[i].pressure);
    ws[i] = weather[i].wind_speed;
  }
  std::vector<Scaler> scaler = {zscore_fit(db), zscore_fit(hr), zscore_fit(ws)};

  std::vector<double> pts(train_points * 3);
  for (std::size_t i = 0; i < train_points; ++i) {
    pts[i * 3 + 0] = zscore_apply(scaler[0], db[i]);
    pts[i * 3 + 1] = zscore_apply(scaler[1], hr[i]);
    pts[i * 3 + 2] = zscore_apply(scaler[2], ws[i]);
  }
  ClusterModel m = kmeans_fit(pts, 3, k, seed, max_iter, tol, restarts);
  m.scaler = std::move(scaler);
  return m;
}

static json scaler_to_json(const Scaler& s) {
  return json{{"mean", s.mean}, {"sd", s.sd}, {"degenerate", s.degenerate}};
}

static Scaler scaler_from_json(const json& j) {
  Scaler s;
  s.mean = j.at("mean").get<double>();
  s.sd = j.at("sd").get<double>();
  s.degenerate = j.at("degenerate").get<bool>();
  return s;
}

std::string save_cluster_model(const ClusterModel& m, const std::string& header) {
  json j;
  j["header"] = header;
  j["k"] = m.k;
  j["dims"] = m.dims;
  j["inertia"] = m.inertia;
  j["scaler"] = json::array();
  for (const auto& s : m.scaler) j["scaler"].push_back(scaler_to_json(s));
  j["centroids"] = json::array();
  for (int c = 0; c < m.k; ++c) {
    json row = json::array();
    for (int d = 0; d < m.dims; ++d) row.push_back(m.centroids[c * m.dims + d]);
    j["centroids"].push_back(row);
  }
  return j.dump(2) + "\n";
}

ClusterModel load_cluster_model_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("cluster model is not valid JSON");
  ClusterModel m;
  m.k = j.at("k").get<int>();
  m.dims = j.at("dims").get<int>();
  m.inertia = j.at("inertia").get<double>();
  for (const auto& s : j.at("scaler")) m.scaler.push_back(scaler_from_json(s));
  for (const auto& row : j.at("centroids"))
    for (const auto& v : row) m.centroids.push_back(v.get<double>());
  if (m.centroids.size() != static_cast<std::size_t>(m.k) * m.dims)
    throw InputError("cluster model centroid shape mismatch");
  return m;
}

// ============================================================================
// Feature sets
// ============================================================================

void FeatureSpec::validate() const {
  if (lag_depth != 1 && lag_depth != 5)
    throw ConfigError("feature set lag depth must be 1 or 5");
  if (weather_mode == WeatherMode::Clustered && (k < 2 || k > 4))
    throw ConfigError("clustered feature sets require k in {2,3,4}");
  if (name == "Benchmark") {
    if (weather_mode != WeatherMode::Raw || lag_depth != 1 ||
        load_source != Provenance::Raw)
      throw ConfigError("benchmark set must be raw weather, N=1, raw load");
  } else if (load_source != Provenance::KalmanFiltered) {
    throw ConfigError("engineered feature sets use the filtered load");
  }
}

FeatureSpec FeatureSpec::by_name(const std::string& name) {
  for (const auto& s : all())
    if (s.name == name) return s;
  throw ConfigError("unknown feature set: " + name);
}

std::vector<FeatureSpec> FeatureSpec::all() {
  std::vector<FeatureSpec> out;
  out.push_back({"Benchmark", WeatherMode::Raw, 0, 1, Provenance::Raw});
  for (int n : {1, 5})
    out.push_back({"Raw-N" + std::to_string(n), WeatherMode::Raw, 0, n,
                   Provenance::KalmanFiltered});
  for (int k : {2, 3, 4})
    for (int n : {1, 5})
      out.push_back({"K" + std::to_string(k) + "-N" + std::to_string(n),
                     WeatherMode::Clustered, k, n, Provenance::KalmanFiltered});
  return out;
}

FeatureMatrix build_features(const LoadSeries& load,
                             const std::vector<WeatherSample>& weather,
                             const FeatureSpec& spec,
                             const ClusterModel* cluster,
                             std::size_t train_count,
                             const std::vector<TimePoint>& holidays) {
  spec.validate();
  if (load.values.size() < 2) throw InputError("load series too short");
  if (weather.size() != load.values.size())
    throw InputError("weather and load series differ in length");
  for (std::size_t i = 0; i < weather.size(); ++i)
    if (weather[i].timestamp != load.time_at(i))
      throw InputError("weather/load span mismatch at " +
                       format_iso8601(load.time_at(i)));
  if ((spec.weather_mode == WeatherMode::Clustered) != (cluster != nullptr))
    throw InputError("cluster model must be supplied exactly for clustered sets");
  if (load.provenance != spec.load_source)
    throw InputError(std::string("feature set ") + spec.name + " expects a " +
                     provenance_name(spec.load_source) + " load series");

  const int N = spec.lag_depth;
  const std::size_t len = load.values.size();
  if (len < static_cast<std::size_t>(N) + 1)
    throw InputError("load series shorter than lag depth + horizon");
  const std::size_t n_rows = len - static_cast<std::size_t>(N - 1) - 1;
  if (train_count == 0 || train_count > n_rows) train_count = n_rows;

  auto day_floor = [](TimePoint t) {
    TimePoint d = t / kSecPerDay * kSecPerDay;
    if (t < 0 && t % kSecPerDay != 0) d -= kSecPerDay;
    return d;
  };
  std::set<TimePoint> holiday_days;
  for (TimePoint h : holidays) holiday_days.insert(day_floor(h));
  auto is_offday = [&](TimePoint t) {
    return is_weekend(t) || holiday_days.count(day_floor(t)) > 0;
  };

  FeatureMatrix m;
  m.spec = spec;
  m.train_count = train_count;
  m.step = load.step;

  m.columns.push_back({"workday", ColumnKind::DayType});
  m.columns.push_back({"offday", ColumnKind::DayType});
  m.columns.push_back({"time_of_day", ColumnKind::TimeOfDay});
  if (spec.weather_mode == WeatherMode::Raw) {
    m.columns.push_back({"dry_bulb_z", ColumnKind::Weather});
    m.columns.push_back({"humidity_ratio_z", ColumnKind::Weather});
    m.columns.push_back({"wind_speed_z", ColumnKind::Weather});
  } else {
    for (int c = 0; c < spec.k; ++c)
      m.columns.push_back({"cluster_" + std::to_string(c), ColumnKind::Cluster});
  }
  for (int l = 0; l < N; ++l)
    m.columns.push_back({"load_lag" + std::to_string(l), ColumnKind::LoadLag});
  m.width = m.columns.size();

  // scalers from training rows only
  const std::size_t first_row = static_cast<std::size_t>(N - 1);
  std::vector<double> train_load(train_count);
  for (std::size_t r = 0; r < train_count; ++r)
    train_load[r] = load.values[first_row + r];
  m.load_scaler = zscore_fit(train_load);

  if (spec.weather_mode == WeatherMode::Raw) {
    std::vector<double> db(train_count), hr(train_count), ws(train_count);
    for (std::size_t r = 0; r < train_count; ++r) {
      const auto& w = weather[first_row + r];
      db[r] = w.dry_bulb;
      hr[r] = ingest::humidity_ratio(w.dry_bulb, w.rel_humidity, w.pressure);
      ws[r] = w.wind_speed;
    }
    m.weather_scalers = {zscore_fit(db), zscore_fit(hr), zscore_fit(ws)};
  }

  m.x.reserve(n_rows * m.width);
  m.y_rt.reserve(n_rows);
  m.row_time.reserve(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::size_t t = first_row + r;
    const TimePoint ts = load.time_at(t);
    const bool off = is_offday(ts);
    m.x.push_back(off ? 0.0 : 1.0);
    m.x.push_back(off ? 1.0 : 0.0);
    m.x.push_back(static_cast<double>(minutes_of_day(ts)) / 1440.0);
    const auto& w = weather[t];
    if (spec.weather_mode == WeatherMode::Raw) {
      m.x.push_back(zscore_apply(m.weather_scalers[0], w.dry_bulb));
      m.x.push_back(zscore_apply(
          m.weather_scalers[1],
          ingest::humidity_ratio(w.dry_bulb, w.rel_humidity, w.pressure)));
      m.x.push_back(zscore_apply(m.weather_scalers[2], w.wind_speed));
    } else {
      const int label = assign_weather(*cluster, w);
      for (int c = 0; c < spec.k; ++c) m.x.push_back(c == label ? 1.0 : 0.0);
    }
    for (int l = 0; l < N; ++l)
      m.x.push_back(zscore_apply(m.load_scaler, load.values[t - l]));
    m.y_rt.push_back(load.values[t + 1]);
    m.row_time.push_back(ts);
  }

  for (double v : m.x)
    if (!std::isfinite(v)) throw InputError("non-finite feature value");
  for (double v : m.y_rt)
    if (!std::isfinite(v)) throw InputError("non-finite target value");
  return m;
}

// ============================================================================
// Serialization
// ============================================================================

std::string save_feature_matrix(const FeatureMatrix& m, const std::string& header) {
  json meta;
  meta["set"] = m.spec.name;
  meta["train_count"] = m.train_count;
  meta["step_s"] = m.step;
  meta["load_scaler"] = scaler_to_json(m.load_scaler);
  meta["weather_scalers"] = json::array();
  for (const auto& s : m.weather_scalers)
    meta["weather_scalers"].push_back(scaler_to_json(s));
  meta["kinds"] = json::array();
  for (const auto& c : m.columns) meta["kinds"].push_back(static_cast<int>(c.kind));

  csv::Writer w;
  if (!header.empty()) w.comment(header);
  w.comment("meta " + meta.dump());
  std::vector<std::string> head = {"timestamp"};
  for (const auto& c : m.columns) head.push_back(c.name);
  head.push_back("target_rt");
  w.row(head);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<std::string> cells = {format_iso8601(m.row_time[r])};
    for (std::size_t c = 0; c < m.width; ++c)
      cells.push_back(csv::format_double(m.x[r * m.width + c]));
    cells.push_back(csv::format_double(m.y_rt[r]));
    w.row(cells);
  }
  return w.str();
}

FeatureMatrix load_feature_matrix_text(const std::string& text) {
  csv::Table t = csv::read_string(text);
  json meta;
  for (const auto& c : t.comments) {
    auto pos = c.find("meta ");
    if (pos != std::string::npos) {
      meta = json::parse(c.substr(pos + 5), nullptr, false);
      break;
    }
  }
  if (meta.is_discarded() || meta.is_null())
    throw InputError("feature matrix lacks its meta comment");

  FeatureMatrix m;
  m.spec = FeatureSpec::by_name(meta.at("set").get<std::string>());
  m.train_count = meta.at("train_count").get<std::size_t>();
  m.step = meta.at("step_s").get<std::int64_t>();
  m.load_scaler = scaler_from_json(meta.at("load_scaler"));
  for (const auto& s : meta.at("weather_scalers"))
    m.weather_scalers.push_back(scaler_from_json(s));

  if (t.header.size() < 3) throw InputError("feature matrix header too short");
  const auto& kinds = meta.at("kinds");
  for (std::size_t c = 1; c + 1 < t.header.size(); ++c) {
    m.columns.push_back(
        {t.header[c], static_cast<ColumnKind>(kinds.at(c - 1).get<int>())});
  }
  m.width = m.columns.size();
  for (const auto& row : t.rows) {
    if (row.size() != m.width + 2) throw InputError("feature row width mismatch");
    m.row_time.push_back(parse_iso8601(row[0]));
    for (std::size_t c = 0; c < m.width; ++c) {
      auto v = csv::parse_double(row[c + 1]);
      if (!v) throw InputError("bad feature value");
      m.x.push_back(*v);
    }
    auto y = csv::parse_double(row.back());
    if (!y) throw InputError("bad target value");
    m.y_rt.push_back(*y);
  }
  return m;
}

FeatureMatrix load_feature_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open feature matrix: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_feature_matrix_text(text);
}

}  // namespace chillops::feat
