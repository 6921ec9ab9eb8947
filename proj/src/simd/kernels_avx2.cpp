#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "carnot/simd/kernels.hpp"

namespace carnot::simd::detail {

// Same per-point operation order as the scalar kernel and no FMA, so results
// are bit-identical.
void translated_norms_avx2(const TranslatedNormArgs& a, double* out) {
  const std::size_t blocks = a.count / 4 * 4;
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d eps = _mm256_set1_pd(a.epsilon);
  for (std::size_t i = 0; i < blocks; i += 4) {
    __m256d sx = _mm256_setzero_pd();
    for (std::size_t k = 0; k < a.m; ++k) {
      const __m256d q = _mm256_loadu_pd(a.cloud + k * a.stride + i);
      const __m256d d = _mm256_sub_pd(q, _mm256_set1_pd(a.origin_x[k]));
      sx = _mm256_add_pd(sx, _mm256_mul_pd(d, d));
    }
    __m256d sy = _mm256_setzero_pd();
    for (std::size_t s = 0; s < a.n; ++s) {
      __m256d dot = _mm256_setzero_pd();
      for (std::size_t k = 0; k < a.m; ++k) {
        const __m256d q = _mm256_loadu_pd(a.cloud + k * a.stride + i);
        dot = _mm256_add_pd(dot, _mm256_mul_pd(_mm256_set1_pd(a.c[s * a.m + k]), q));
      }
      const __m256d qy = _mm256_loadu_pd(a.cloud + (a.m + s) * a.stride + i);
      const __m256d d = _mm256_sub_pd(_mm256_sub_pd(qy, _mm256_set1_pd(a.origin_y[s])),
                                      _mm256_mul_pd(half, dot));
      sy = _mm256_add_pd(sy, _mm256_mul_pd(d, d));
    }
    const __m256d horizontal = _mm256_sqrt_pd(sx);
    const __m256d vertical = _mm256_mul_pd(eps, _mm256_sqrt_pd(_mm256_sqrt_pd(sy)));
    // std::max(h, v) returns h unless h < v.
    const __m256d lt = _mm256_cmp_pd(horizontal, vertical, _CMP_LT_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(horizontal, vertical, lt));
  }
  if (blocks < a.count) {
    TranslatedNormArgs tail = a;
    tail.count = a.count - blocks;
    tail.cloud = a.cloud + blocks;
    translated_norms_scalar(tail, out + blocks);
  }
}

}  // namespace carnot::simd::detail
