// AVX2 kernel variants. Compiled with -mavx2 and reached only through the
// runtime dispatch table, so plain builds never execute these paths on
// hardware without AVX2.

#if defined(CHILLOPS_HAVE_AVX2)

#include <immintrin.h>

#include "chillops/kernels.hpp"

namespace chillops::kern::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                             _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4),
                                             _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                             _mm256_loadu_pd(b + i)));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sumsq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sumsq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Bit-identical to the scalar scan: candidate cost is a single add in both
// variants, the comparison is strict, and winning blocks are resolved in
// lane order, so the lowest feasible index always wins ties.
ScanResult scan_min_feasible(const double* cost, const double* supply,
                             std::size_t n, double base_cost,
                             double base_supply, double need) {
  ScanResult best{-1, 0.0};
  const __m256d vbase_c = _mm256_set1_pd(base_cost);
  const __m256d vbase_s = _mm256_set1_pd(base_supply);
  const __m256d vneed = _mm256_set1_pd(need);
  const double inf = __builtin_huge_val();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_add_pd(vbase_c, _mm256_loadu_pd(cost + i));
    const __m256d s = _mm256_add_pd(vbase_s, _mm256_loadu_pd(supply + i));
    const __m256d feas = _mm256_cmp_pd(s, vneed, _CMP_GE_OQ);
    if (_mm256_movemask_pd(feas) == 0) continue;
    const __m256d masked = _mm256_blendv_pd(_mm256_set1_pd(inf), c, feas);
    // block minimum
    __m128d lo = _mm256_castpd256_pd128(masked);
    __m128d hi = _mm256_extractf128_pd(masked, 1);
    __m128d m2 = _mm_min_pd(lo, hi);
    double block_min = _mm_cvtsd_f64(_mm_min_sd(m2, _mm_unpackhi_pd(m2, m2)));
    if (best.index >= 0 && !(block_min < best.value)) continue;
    for (int lane = 0; lane < 4; ++lane) {
      const std::size_t j = i + lane;
      if (base_supply + supply[j] < need) continue;
      const double cj = base_cost + cost[j];
      if (best.index < 0 || cj < best.value) {
        best.index = static_cast<long>(j);
        best.value = cj;
      }
    }
  }
  for (; i < n; ++i) {
    if (base_supply + supply[i] < need) continue;
    const double c = base_cost + cost[i];
    if (best.index < 0 || c < best.value) {
      best.index = static_cast<long>(i);
      best.value = c;
    }
  }
  return best;
}

}  // namespace chillops::kern::avx2

#endif  // CHILLOPS_HAVE_AVX2
