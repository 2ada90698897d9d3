#include <doctest.h>

#include <cmath>
#include <random>

#include "chillops/common.hpp"
#include "chillops/kalman.hpp"

using namespace chillops;
using namespace chillops::kalman;

TEST_CASE("zero innovation leaves the estimate unchanged") {
  KalmanConfig cfg;
  KalmanState st{42.0, 3.0};
  const double z = cfg.h * cfg.a * st.x_hat;
  KalmanState next = kf_step(st, z, cfg);
  CHECK(next.x_hat == doctest::Approx(cfg.a * st.x_hat).epsilon(1e-15));
}

TEST_CASE("one step with unit parameters matches hand arithmetic") {
  // x=0, P=1, z=10: predicted variance 2, gain 2/3, estimate 20/3
  KalmanConfig cfg;
  KalmanState st{0.0, 1.0};
  KalmanState next = kf_step(st, 10.0, cfg);
  CHECK(next.x_hat == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
  CHECK(next.p == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("huge measurement noise freezes the estimate") {
  KalmanConfig cfg;
  cfg.r = 1e12;
  cfg.q = 1.0;
  KalmanState st{0.0, 1.0};
  for (int i = 0; i < 100; ++i) st = kf_step(st, 50.0, cfg);
  CHECK(std::abs(st.x_hat) < 0.01);
}

TEST_CASE("variance shrinks on every informative update") {
  KalmanConfig cfg;
  cfg.q = 0.3;
  cfg.r = 2.0;
  KalmanState st{5.0, 4.0};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double p_pred = cfg.a * st.p * cfg.a + cfg.q;
    st = kf_step(st, 5.0 + noise(rng), cfg);
    CHECK(st.p < p_pred);  // gain is strictly positive here
    CHECK(st.p >= 0.0);
  }
}

TEST_CASE("variance and gain converge to the golden-ratio fixed point") {
  // fixed point of P <- (P+1)/(P+2), solved independently: (sqrt(5)-1)/2
  const double fixed = (std::sqrt(5.0) - 1.0) / 2.0;
  KalmanConfig cfg;
  KalmanState st{0.0, 1.0};
  double gain = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double p_pred = st.p + 1.0;
    gain = p_pred / (p_pred + 1.0);
    st = kf_step(st, 0.0, cfg);
  }
  CHECK(std::abs(st.p - fixed) < 1e-9);
  CHECK(std::abs(gain - fixed) < 1e-9);
}

TEST_CASE("filtering a constant series from its own start is a fixed point") {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-01T00:00:00");
  s.values.assign(30, 250.0);
  KalmanConfig cfg;  // x0 defaults to the first measurement
  LoadSeries out = kf_filter_series(s, cfg);
  REQUIRE(out.size() == s.size());
  CHECK(out.provenance == Provenance::KalmanFiltered);
  for (double v : out.values) CHECK(v == doctest::Approx(250.0).epsilon(1e-15));
}

TEST_CASE("step response is monotone and overshoot-free") {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-01T00:00:00");
  s.values.assign(20, 100.0);
  s.values.insert(s.values.end(), 20, 200.0);
  KalmanConfig cfg;
  LoadSeries out = kf_filter_series(s, cfg);

  // independent oracle: the same scalar recursion, written longhand
  double x = s.values.front(), p = cfg.p0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double p_pred = p + 1.0;
    const double k = p_pred / (p_pred + 1.0);
    x = x + k * (s.values[i] - x);
    p = (1.0 - k) * p_pred;
    CHECK(out.values[i] == doctest::Approx(x).epsilon(1e-15));
  }
  for (std::size_t i = 21; i < out.values.size(); ++i) {
    CHECK(out.values[i] >= out.values[i - 1] - 1e-12);  // monotone rise
    CHECK(out.values[i] <= 200.0 + 1e-12);              // no overshoot
  }
}

TEST_CASE("a one-bin dip is attenuated by the filter") {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-01T00:00:00");
  s.values.assign(40, 1000.0);
  s.values[20] = 600.0;  // cut-in style dip of -40 %
  KalmanConfig cfg;
  LoadSeries out = kf_filter_series(s, cfg);

  // oracle recursion gives the expected dip magnitude
  double x = 1000.0, p = 1.0, expect_at_dip = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double p_pred = p + 1.0;
    const double k = p_pred / (p_pred + 1.0);
    x = x + k * (s.values[i] - x);
    p = (1.0 - k) * p_pred;
    if (i == 20) expect_at_dip = x;
  }
  const double raw_dip = 1000.0 - 600.0;
  const double filtered_dip = 1000.0 - out.values[20];
  CHECK(out.values[20] == doctest::Approx(expect_at_dip).epsilon(1e-12));
  CHECK(filtered_dip < raw_dip);
  CHECK(filtered_dip > 0.0);
}

TEST_CASE("filter output is shift-equivariant") {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-01T00:00:00");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(500.0, 1500.0);
  for (int i = 0; i < 64; ++i) s.values.push_back(dist(rng));

  KalmanConfig cfg;
  cfg.x0 = s.values.front();
  LoadSeries base = kf_filter_series(s, cfg);

  const double c = 137.0;
  LoadSeries shifted = s;
  for (double& v : shifted.values) v += c;
  KalmanConfig cfg2 = cfg;
  cfg2.x0 = *cfg.x0 + c;
  LoadSeries out = kf_filter_series(shifted, cfg2);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    CHECK(out.values[i] == doctest::Approx(base.values[i] + c).epsilon(1e-12));
}

TEST_CASE("repeated runs are bit-identical") {
  LoadSeries s;
  s.start = parse_iso8601("2023-08-01T00:00:00");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 2000.0);
  for (int i = 0; i < 100; ++i) s.values.push_back(dist(rng));
  KalmanConfig cfg;
  LoadSeries a = kf_filter_series(s, cfg);
  LoadSeries b = kf_filter_series(s, cfg);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("config validation and empty series errors") {
  KalmanConfig cfg;
  cfg.r = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.r = 1.0;
  cfg.q = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  LoadSeries empty;
  CHECK_THROWS_AS(kf_filter_series(empty, KalmanConfig{}), InputError);
}
