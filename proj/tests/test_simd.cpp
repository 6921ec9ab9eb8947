#include "doctest.h"

#include <cstdlib>
#include <cstring>

#include "carnot/group.hpp"
#include "carnot/norm_stats.hpp"
#include "carnot/random.hpp"
#include "carnot/simd/kernels.hpp"

using namespace carnot;

namespace {

PointCloud cloud_of(const GroupSpecB& g, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud c;
  for (std::size_t i = 0; i < count; ++i) c.push_back(random_point(g, rng, 2.0));
  return c;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("SoA layout round trip") {
  const GroupSpecB g = free_step2(3);
  const PointCloud c = cloud_of(g, 13, 1);
  const simd::CloudSoA soa(c);
  CHECK(soa.size() == 13);
  CHECK(soa.stride() % 4 == 0);
  CHECK(soa.stride() >= 13);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(soa.get(i) == c[i]);
}

TEST_CASE("scalar kernel matches the group distance") {
  for (const GroupSpecB& g : {heisenberg(1), heisenberg(2), free_step2(3)}) {
    const PointCloud c = cloud_of(g, 37, 2);
    const simd::CloudSoA soa(c);
    Rng rng(9);
    const Point o = random_point(g, rng);
    std::vector<double> out(c.size());
    simd::translated_norms(g, o, soa, out, simd::Isa::scalar);
    for (std::size_t i = 0; i < c.size(); ++i)
      CHECK(out[i] == doctest::Approx(distance(g, o, c[i])).epsilon(1e-14));
  }
}

TEST_CASE("avx2 kernel is bit-identical to scalar") {
  if (simd::best_isa() != simd::Isa::avx2) {
    MESSAGE("AVX2 unavailable; skipping equivalence");
    return;
  }
  for (const GroupSpecB& base : {heisenberg(1), heisenberg(2), free_step2(3)}) {
    const GroupSpecB g = base.with_epsilon2(0.83);
    // Sizes around the vector width exercise the scalar tail.
    for (std::size_t count : {1u, 3u, 4u, 5u, 8u, 31u, 257u}) {
      const PointCloud c = cloud_of(g, count, count);
      const simd::CloudSoA soa(c);
      Rng rng(count + 100);
      for (int rep = 0; rep < 5; ++rep) {
        const Point o = random_point(g, rng, 2.0);
        std::vector<double> a(count), b(count);
        simd::translated_norms(g, o, soa, a, simd::Isa::scalar);
        simd::translated_norms(g, o, soa, b, simd::Isa::avx2);
        CHECK(bitwise_equal(a, b));
      }
    }
  }
}

TEST_CASE("kernels agree on ties and zeros") {
  const GroupSpecB g = heisenberg(1);
  // |x| and eps sqrt|y| equal: both branches of the max give the same value.
  const PointCloud c{Point({1, 0}, {1}), Point::zero(2, 1), Point({0, 0}, {-4}), Point({0, 0}, {0})};
  const simd::CloudSoA soa(c);
  std::vector<double> a(c.size()), b(c.size());
  simd::translated_norms(g, Point::zero(2, 1), soa, a, simd::Isa::scalar);
  CHECK(a == std::vector<double>{1, 0, 2, 0});
  if (simd::best_isa() == simd::Isa::avx2) {
    simd::translated_norms(g, Point::zero(2, 1), soa, b, simd::Isa::avx2);
    CHECK(bitwise_equal(a, b));
  }
}

TEST_CASE("dispatch follows the environment and force hook") {
  const char* env = std::getenv("CARNOT_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) CHECK(simd::active_isa() == simd::Isa::scalar);
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  if (simd::best_isa() == simd::Isa::avx2) {
    simd::force_isa(simd::Isa::avx2);
    CHECK(simd::active_isa() == simd::Isa::avx2);
  } else {
    CHECK_THROWS(simd::force_isa(simd::Isa::avx2));
  }
  simd::force_isa(simd::best_isa());
}

TEST_CASE("nearest is identical under both ISAs") {
  const GroupSpecB g = free_step2(3);
  const PointCloud c = cloud_of(g, 500, 4);
  const simd::CloudSoA soa(c);
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const Point o = random_point(g, rng, 2.0);
    double best = 1e300;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double d = distance(g, o, c[i]);
      if (d < best) {
        best = d;
        idx = i;
      }
    }
    simd::force_isa(simd::Isa::scalar);
    const simd::Nearest s = simd::nearest(g, o, soa);
    CHECK(s.index == idx);
    CHECK(s.distance == doctest::Approx(best).epsilon(1e-14));
    if (simd::best_isa() == simd::Isa::avx2) {
      simd::force_isa(simd::Isa::avx2);
      const simd::Nearest v = simd::nearest(g, o, soa);
      CHECK(v.index == s.index);
      CHECK(v.distance == s.distance);
    }
  }
  simd::force_isa(simd::best_isa());
}
