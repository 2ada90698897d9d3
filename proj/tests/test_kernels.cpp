#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chillops/kernels.hpp"

using namespace chillops;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar dot matches a plain loop") {
  std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  CHECK(kern::scalar::dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
  CHECK(kern::scalar::dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("vector variants agree with the scalar reference") {
  std::mt19937_64 rng(123);
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 15u, 64u, 257u}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = random_vec(rng, n);
      auto b = random_vec(rng, n);

      const double ds = kern::scalar::dot(a.data(), b.data(), n);
      const double ss = kern::scalar::sumsq(a.data(), n);
      const double sd = kern::scalar::sumsq_diff(a.data(), b.data(), n);

      kern::force_backend(kern::Backend::Avx2);
      const double dv = kern::dot(a.data(), b.data(), n);
      const double sv = kern::sumsq(a.data(), n);
      const double sdv = kern::sumsq_diff(a.data(), b.data(), n);

      const double tol = 1e-12 * (1.0 + static_cast<double>(n));
      CHECK(std::abs(dv - ds) <= tol * (1.0 + std::abs(ds)));
      CHECK(std::abs(sv - ss) <= tol * (1.0 + std::abs(ss)));
      CHECK(std::abs(sdv - sd) <= tol * (1.0 + std::abs(sd)));

      auto y1 = random_vec(rng, n);
      auto y2 = y1;
      kern::scalar::axpy(0.37, a.data(), y1.data(), n);
      kern::axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("masked min scan is bit-identical across backends") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  for (std::size_t n : {1u, 2u, 5u, 8u, 71u, 72u, 100u}) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> cost(n), supply(n);
      for (std::size_t i = 0; i < n; ++i) {
        cost[i] = dist(rng);
        supply[i] = dist(rng);
      }
      // exact duplicates exercise the tie-break
      if (n > 3) {
        cost[n / 2] = cost[0];
        supply[n / 2] = supply[0];
      }
      const double need = dist(rng);
      const double base_c = dist(rng);
      const double base_s = dist(rng) * 0.3;

      const auto s = kern::scalar::scan_min_feasible(cost.data(), supply.data(),
                                                     n, base_c, base_s, need);
      kern::force_backend(kern::Backend::Avx2);
      const auto v = kern::scan_min_feasible(cost.data(), supply.data(), n,
                                             base_c, base_s, need);
      CHECK(v.index == s.index);
      if (s.index >= 0) CHECK(v.value == s.value);
    }
  }
}

TEST_CASE("scan honors feasibility and lowest-index ties") {
  const double cost[] = {5.0, 3.0, 3.0, 4.0};
  const double supply[] = {1.0, 2.0, 2.0, 3.0};
  auto r = kern::scalar::scan_min_feasible(cost, supply, 4, 0.0, 0.0, 2.0);
  CHECK(r.index == 1);  // first of the equal-cost feasible pair
  CHECK(r.value == 3.0);
  r = kern::scalar::scan_min_feasible(cost, supply, 4, 0.0, 0.0, 9.0);
  CHECK(r.index == -1);  // nothing feasible
}

TEST_CASE("a backend is selected and reported") {
  CHECK((kern::active_backend() == kern::Backend::Avx2 ||
         kern::active_backend() == kern::Backend::Scalar));
  CHECK(kern::backend_name() != nullptr);
}
