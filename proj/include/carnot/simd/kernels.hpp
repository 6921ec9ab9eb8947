#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "carnot/group.hpp"

namespace carnot::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

/// Structure-of-arrays copy of a point cloud: coordinate c of point i is at
/// data[c * stride + i]. Stride is padded to a multiple of 4.
class CloudSoA {
 public:
  CloudSoA() = default;
  CloudSoA(std::size_t m, std::size_t n, std::size_t count);
  explicit CloudSoA(const PointCloud& cloud);

  void set(std::size_t i, const Point& p);
  Point get(std::size_t i) const;

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return count_; }
  std::size_t stride() const { return stride_; }
  const double* coord(std::size_t c) const { return data_.data() + c * stride_; }

 private:
  std::size_t m_ = 0, n_ = 0, count_ = 0, stride_ = 0;
  std::vector<double> data_;
};

/// Raw inputs of the translated-norm kernel. For origin O and cloud points Q:
///   out_i = max{ |Q1 - O1|, eps sqrt(|Q2 - O2 - 1/2 <c, Q1>|) },
/// where c_s = B^(s) O1, i.e. out_i = ||O^{-1} Q_i||.
struct TranslatedNormArgs {
  std::size_t m, n, count, stride;
  const double* cloud;      // SoA block, (m + n) * stride
  const double* origin_x;   // m
  const double* origin_y;   // n
  const double* c;          // n * m, row s = B^(s) O1
  double epsilon;
};

namespace detail {
void translated_norms_scalar(const TranslatedNormArgs& args, double* out);
#if defined(CARNOT_HAVE_AVX2)
void translated_norms_avx2(const TranslatedNormArgs& args, double* out);
#endif
}  // namespace detail

/// Best ISA supported by this build and CPU.
Isa best_isa() noexcept;
/// ISA used by the dispatching entry points (CARNOT_SIMD=scalar|avx2|auto).
Isa active_isa() noexcept;
/// Test hook; throws if the ISA is unavailable.
void force_isa(Isa isa);

/// out[i] = ||origin^{-1} cloud_i||, dispatched.
void translated_norms(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud,
                      std::span<double> out);
void translated_norms(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud,
                      std::span<double> out, Isa isa);

/// min_i ||origin^{-1} cloud_i|| and its index; cloud must be nonempty.
struct Nearest {
  double distance;
  std::size_t index;
};
Nearest nearest(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud);

}  // namespace carnot::simd
