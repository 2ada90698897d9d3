#pragma once

#include <optional>

#include "chillops/series.hpp"

namespace chillops::kalman {

/// Scalar filter parameters. The load signal is directly measured, so the
/// state and measurement maps collapse to scalars.
struct KalmanConfig {
  double a = 1.0;   // state transition
  double h = 1.0;   // measurement map
  double q = 1.0;   // process-noise variance
  double r = 1.0;   // measurement-noise variance
  std::optional<double> x0;  // defaults to the first measurement
  double p0 = 1.0;

  void validate() const;
};

struct KalmanState {
  double x_hat = 0.0;  // current estimate, RT
  double p = 0.0;      // error variance
};

/// One predict/update cycle: prediction, gain, estimate, variance update.
KalmanState kf_step(const KalmanState& state, double z, const KalmanConfig& cfg);

/// Folds kf_step over a raw series; element i is the estimate after
/// consuming measurement i. Timestamps are preserved.
LoadSeries kf_filter_series(const LoadSeries& series, const KalmanConfig& cfg);

}  // namespace chillops::kalman
