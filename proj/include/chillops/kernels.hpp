#pragma once

#include <cstddef>
#include <string>

namespace chillops::kern {

// Data-parallel inner loops shared by the numeric modules. Every operation
// has a scalar reference implementation and, on x86-64 with AVX2, a vector
// variant selected once at startup. The active backend can be overridden
// through the CHILLOPS_SIMD environment variable ("scalar", "avx2", "auto")
// or force_backend(), which the equivalence tests use to compare variants.

enum class Backend { Scalar, Avx2 };

/// Result of a masked min-scan: best index, or -1 when no candidate passed.
struct ScanResult {
  long index;
  double value;
};

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sumsq)(const double* a, std::size_t n);
  double (*sumsq_diff)(const double* a, const double* b, std::size_t n);
  // argmin over i of base_cost + cost[i] subject to
  // base_supply + supply[i] >= need; ties resolve to the lowest index.
  ScanResult (*scan_min_feasible)(const double* cost, const double* supply,
                                  std::size_t n, double base_cost,
                                  double base_supply, double need);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need);
}  // namespace scalar

#if defined(CHILLOPS_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need);
}  // namespace avx2
#endif

/// Active backend, resolved on first use.
Backend active_backend();
const char* backend_name();

/// Pins the backend; used by tests and the CHILLOPS_SIMD override.
void force_backend(Backend b);

// Dispatching entry points.
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumsq_diff(const double* a, const double* b, std::size_t n);
ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need);

}  // namespace chillops::kern
