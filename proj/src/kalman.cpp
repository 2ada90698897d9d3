#include "chillops/kalman.hpp"

#include "chillops/common.hpp"

namespace chillops::kalman {

void KalmanConfig::validate() const {
  if (q < 0) throw ConfigError("kalman.q must be >= 0");
  if (!(r > 0)) throw ConfigError("kalman.r must be > 0");
  if (p0 < 0) throw ConfigError("kalman.p0 must be >= 0");
}

KalmanState kf_step(const KalmanState& state, double z, const KalmanConfig& cfg) {
  const double x_pred = cfg.a * state.x_hat;
  const double p_pred = cfg.a * state.p * cfg.a + cfg.q;
  const double gain = p_pred * cfg.h / (cfg.h * p_pred * cfg.h + cfg.r);
  KalmanState next;
  next.x_hat = x_pred + gain * (z - cfg.h * x_pred);
  next.p = (1.0 - gain * cfg.h) * p_pred;
  return next;
}

LoadSeries kf_filter_series(const LoadSeries& series, const KalmanConfig& cfg) {
  cfg.validate();
  if (series.values.empty()) throw InputError("cannot filter an empty series");
  LoadSeries out;
  out.start = series.start;
  out.step = series.step;
  out.provenance = Provenance::KalmanFiltered;
  out.values.reserve(series.values.size());

  KalmanState st;
  st.x_hat = cfg.x0.value_or(series.values.front());
  st.p = cfg.p0;
  for (double z : series.values) {
    st = kf_step(st, z, cfg);
    out.values.push_back(st.x_hat);
  }
  return out;
}

}  // namespace chillops::kalman
