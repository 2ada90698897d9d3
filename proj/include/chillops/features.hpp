#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chillops/series.hpp"

namespace chillops::feat {

/// Per-column z-score parameters (sample standard deviation, n-1).
/// Zero-variance columns are marked degenerate and map every value to 0.
struct Scaler {
  double mean = 0.0;
  double sd = 0.0;
  bool degenerate = false;
};

Scaler zscore_fit(const std::vector<double>& values);
double zscore_apply(const Scaler& s, double v);
double zscore_invert(const Scaler& s, double z);

/// Converged Lloyd clustering over z-scored weather triples
/// (dry bulb, humidity ratio, wind speed).
struct ClusterModel {
  int k = 0;
  int dims = 0;
  std::vector<double> centroids;  // k * dims, row-major
  std::vector<Scaler> scaler;     // per input dimension
  double inertia = 0.0;
  std::vector<double> inertia_history;  // per Lloyd iteration of the winning restart

  const double* centroid(int j) const { return centroids.data() + j * dims; }
};

/// Lloyd iteration with deterministic restarts (seeds derived from `seed`,
/// best inertia wins, ties to the lowest restart index). Empty clusters are
/// re-seeded from the point farthest from its assigned centroid.
ClusterModel kmeans_fit(const std::vector<double>& points, int dims, int k,
                        std::uint64_t seed, int max_iter = 100,
                        double tol = 1e-9, int restarts = 10);

/// Nearest centroid by squared Euclidean distance; ties break to the lowest
/// label index.
int kmeans_assign(const ClusterModel& model, const double* point, int dims);

/// Scales a raw weather triple with the model's scaler and assigns it.
int assign_weather(const ClusterModel& model, const WeatherSample& w);

/// Fits scaler + clusters on the first `train_points` weather samples.
ClusterModel fit_weather_clusters(const std::vector<WeatherSample>& weather,
                                  std::size_t train_points, int k,
                                  std::uint64_t seed, int max_iter = 100,
                                  double tol = 1e-9, int restarts = 10);

std::string save_cluster_model(const ClusterModel& m, const std::string& header);
ClusterModel load_cluster_model_text(const std::string& text);

enum class WeatherMode { Raw, Clustered };

/// One of the nine supervised datasets. The benchmark predicts from the
/// unfiltered load; every other set uses the filtered series.
struct FeatureSpec {
  std::string name;
  WeatherMode weather_mode = WeatherMode::Raw;
  int k = 0;           // cluster count when clustered
  int lag_depth = 1;   // N, current step plus N-1 past steps
  Provenance load_source = Provenance::KalmanFiltered;

  static FeatureSpec by_name(const std::string& name);
  static std::vector<FeatureSpec> all();  // benchmark + eight engineered sets

  void validate() const;
};

enum class ColumnKind { DayType, TimeOfDay, Weather, Cluster, LoadLag };

struct ColumnDesc {
  std::string name;
  ColumnKind kind;
};

/// Supervised rows: features for step t, target = load at t+1. Scalers are
/// fitted on the first train_count rows only.
struct FeatureMatrix {
  FeatureSpec spec;
  std::vector<ColumnDesc> columns;
  std::size_t width = 0;
  std::size_t train_count = 0;
  std::vector<double> x;            // rows * width, row-major
  std::vector<double> y_rt;         // targets, RT
  std::vector<TimePoint> row_time;  // timestamp of the feature step t
  std::int64_t step = kSlotSeconds;
  Scaler load_scaler;               // shared by lags and target normalization
  std::vector<Scaler> weather_scalers;

  std::size_t rows() const { return y_rt.size(); }
  const double* row(std::size_t i) const { return x.data() + i * width; }
};

/// Assembles one feature set. `cluster` must be present exactly when the
/// spec clusters weather; `train_count` fixes the scaler-fitting boundary in
/// rows so extending the data never disturbs existing training rows.
FeatureMatrix build_features(const LoadSeries& load,
                             const std::vector<WeatherSample>& weather,
                             const FeatureSpec& spec,
                             const ClusterModel* cluster,
                             std::size_t train_count,
                             const std::vector<TimePoint>& holidays = {});

std::string save_feature_matrix(const FeatureMatrix& m, const std::string& header);
FeatureMatrix load_feature_matrix_text(const std::string& text);
FeatureMatrix load_feature_matrix_file(const std::string& path);

}  // namespace chillops::feat
