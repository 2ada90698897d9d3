#include "chillops/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace chillops::kern {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sumsq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sumsq_diff(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need) {
  ScanResult best{-1, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (base_supply + supply[i] < need) continue;
    const double c = base_cost + cost[i];
    if (best.index < 0 || c < best.value) {
      best.index = static_cast<long>(i);
      best.value = c;
    }
  }
  return best;
}

}  // namespace scalar

namespace {

bool avx2_available() {
#if defined(CHILLOPS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> g_backend{-1};  // -1 unresolved, else Backend

Backend resolve() {
  Backend b = avx2_available() ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("CHILLOPS_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) b = Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) b = Backend::Avx2;
  }
  return b;
}

inline Backend current() {
  int v = g_backend.load(std::memory_order_relaxed);
  if (v < 0) {
    Backend b = resolve();
    g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
    return b;
  }
  return static_cast<Backend>(v);
}

}  // namespace

Backend active_backend() { return current(); }

const char* backend_name() {
  return current() == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
#if !defined(CHILLOPS_HAVE_AVX2)
  b = Backend::Scalar;
#else
  if (b == Backend::Avx2 && !avx2_available()) b = Backend::Scalar;
#endif
  g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(CHILLOPS_HAVE_AVX2)
  if (current() == Backend::Avx2) return avx2::dot(a, b, n);
#endif
  return scalar::dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#if defined(CHILLOPS_HAVE_AVX2)
  if (current() == Backend::Avx2) return avx2::axpy(alpha, x, y, n);
#endif
  scalar::axpy(alpha, x, y, n);
}

double sumsq(const double* a, std::size_t n) {
#if defined(CHILLOPS_HAVE_AVX2)
  if (current() == Backend::Avx2) return avx2::sumsq(a, n);
#endif
  return scalar::sumsq(a, n);
}

double sumsq_diff(const double* a, const double* b, std::size_t n) {
#if defined(CHILLOPS_HAVE_AVX2)
  if (current() == Backend::Avx2) return avx2::sumsq_diff(a, b, n);
#endif
  return scalar::sumsq_diff(a, b, n);
}

ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need) {
#if defined(CHILLOPS_HAVE_AVX2)
  if (current() == Backend::Avx2)
    return avx2::scan_min_feasible(cost, supply, n, base_cost, base_supply, need);
#endif
  return scalar::scan_min_feasible(cost, supply, n, base_cost, base_supply, need);
}

}  // namespace chillops::kern
