#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "carnot/error.hpp"
#include "carnot/simd/kernels.hpp"

namespace carnot::simd {

const char* to_string(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

CloudSoA::CloudSoA(std::size_t m, std::size_t n, std::size_t count)
    : m_(m), n_(n), count_(count), stride_((count + 3) / 4 * 4), data_((m + n) * stride_, 0.0) {}

CloudSoA::CloudSoA(const PointCloud& cloud)
    : CloudSoA(cloud.empty() ? 0 : cloud.front().x.size(),
               cloud.empty() ? 0 : cloud.front().y.size(), cloud.size()) {
  for (std::size_t i = 0; i < cloud.size(); ++i) set(i, cloud[i]);
}

void CloudSoA::set(std::size_t i, const Point& p) {
  if (p.x.size() != m_ || p.y.size() != n_)
    throw Error(Errc::dimension_mismatch, "CloudSoA: point dimension mismatch");
  for (std::size_t k = 0; k < m_; ++k) data_[k * stride_ + i] = p.x[k];
  for (std::size_t s = 0; s < n_; ++s) data_[(m_ + s) * stride_ + i] = p.y[s];
}

Point CloudSoA::get(std::size_t i) const {
  Point p = Point::zero(m_, n_);
  for (std::size_t k = 0; k < m_; ++k) p.x[k] = data_[k * stride_ + i];
  for (std::size_t s = 0; s < n_; ++s) p.y[s] = data_[(m_ + s) * stride_ + i];
  return p;
}

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CARNOT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa env_isa() noexcept {
  const char* v = std::getenv("CARNOT_SIMD");
  if (v != nullptr && std::strcmp(v, "scalar") == 0) return Isa::scalar;
  if (v != nullptr && std::strcmp(v, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
  return best_isa();
}

std::atomic<int> g_forced{-1};

}  // namespace

Isa best_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Isa>(f);
  static const Isa chosen = env_isa();
  return chosen;
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2())
    throw Error(Errc::invalid_argument, "force_isa: AVX2 not available");
  g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void translated_norms(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud,
                      std::span<double> out, Isa isa) {
  g.check_point(origin);
  if (cloud.m() != g.m() || cloud.n() != g.n())
    throw Error(Errc::dimension_mismatch, "translated_norms: cloud dimension mismatch");
  if (out.size() < cloud.size())
    throw Error(Errc::dimension_mismatch, "translated_norms: output too small");
  const std::size_t m = g.m(), n = g.n();
  Vec c(n * m, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += g.b(s, i, j) * origin.x[j];
      c[s * m + i] = acc;
    }
  const TranslatedNormArgs args{m,         n,           cloud.size(), cloud.stride(),
                                cloud.coord(0), origin.x.data(), origin.y.data(), c.data(),
                                g.epsilon2()};
#if defined(CARNOT_HAVE_AVX2)
  if (isa == Isa::avx2) {
    if (!cpu_has_avx2()) throw Error(Errc::invalid_argument, "translated_norms: AVX2 not available");
    detail::translated_norms_avx2(args, out.data());
    return;
  }
#else
  if (isa == Isa::avx2) throw Error(Errc::invalid_argument, "translated_norms: built without AVX2");
#endif
  detail::translated_norms_scalar(args, out.data());
}

void translated_norms(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud,
                      std::span<double> out) {
  translated_norms(g, origin, cloud, out, active_isa());
}

Nearest nearest(const GroupSpecB& g, const Point& origin, const CloudSoA& cloud) {
  if (cloud.size() == 0) throw Error(Errc::invalid_argument, "nearest: empty cloud");
  thread_local std::vector<double> buf;
  buf.resize(cloud.size());
  translated_norms(g, origin, cloud, buf);
  const auto it = std::min_element(buf.begin(), buf.end());
  return {*it, static_cast<std::size_t>(it - buf.begin())};
}

}  // namespace carnot::simd
