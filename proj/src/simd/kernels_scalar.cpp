#include <algorithm>
#include <cmath>

#include "carnot/simd/kernels.hpp"

namespace carnot::simd::detail {

void translated_norms_scalar(const TranslatedNormArgs& a, double* out) {
  for (std::size_t i = 0; i < a.count; ++i) {
    double sx = 0.0;
    for (std::size_t k = 0; k < a.m; ++k) {
      const double d = a.cloud[k * a.stride + i] - a.origin_x[k];
      sx = sx + d * d;
    }
    double sy = 0.0;
    for (std::size_t s = 0; s < a.n; ++s) {
      double dot = 0.0;
      for (std::size_t k = 0; k < a.m; ++k) {
        dot = dot + a.c[s * a.m + k] * a.cloud[k * a.stride + i];
      }
      const double d = (a.cloud[(a.m + s) * a.stride + i] - a.origin_y[s]) - 0.5 * dot;
      sy = sy + d * d;
    }
    const double horizontal = std::sqrt(sx);
    const double vertical = a.epsilon * std::sqrt(std::sqrt(sy));
    out[i] = std::max(horizontal, vertical);
  }
}

}  // namespace carnot::simd::detail
