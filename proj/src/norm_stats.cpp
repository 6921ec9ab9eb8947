#include "carnot/norm_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"
#include "carnot/random.hpp"

namespace carnot {

Point random_point(const GroupSpecB& g, Rng& rng, double scale) {
  Point p = Point::zero(g.m(), g.n());
  for (double& v : p.x) v = rng.uniform(-scale, scale);
  for (double& v : p.y) v = rng.uniform(-scale, scale);
  return p;
}

namespace {

struct Pair {
  Point p, q, pq;
};

std::vector<Pair> sample_pairs(const GroupSpecB& g, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p = random_point(g, rng);
    Point q = random_point(g, rng);
    Point pq = compose(g, p, q);
    out.push_back({std::move(p), std::move(q), std::move(pq)});
  }
  return out;
}

bool violates(const GroupSpecB& g, const Pair& s) {
  return hom_norm(g, s.pq) > hom_norm(g, s.p) + hom_norm(g, s.q);
}

std::size_t count_violations(const GroupSpecB& g, const std::vector<Pair>& pairs) {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [&](const Pair& s) { return violates(g, s); }));
}

}  // namespace

std::size_t triangle_violations(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed) {
  return count_violations(g, sample_pairs(g, sample_count, seed));
}

double calibrate_epsilon(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1000)
    throw Error(Errc::invalid_argument, "calibrate_epsilon: sample_count must be >= 1000");
  const auto pairs = sample_pairs(g, sample_count, seed);
  auto ok = [&](double eps) { return count_violations(g.with_epsilon2(eps), pairs) == 0; };
  if (ok(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo > 0.0 ? lo : std::ldexp(1.0, -20);
}

GroupSpecB calibrated(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed) {
  return g.with_epsilon2(calibrate_epsilon(g, sample_count, seed));
}

double norm_equivalence_c1(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed) {
  Rng rng(seed);
  double c1 = 1.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Point p = random_point(g, rng);
    double sx = 0.0, sy = 0.0;
    for (double v : p.x) sx += v * v;
    for (double v : p.y) sy += v * v;
    const double other = std::sqrt(sx) + std::sqrt(std::sqrt(sy));
    if (other == 0.0) continue;
    const double ratio = hom_norm(g, p) / other;
    c1 = std::max({c1, ratio, 1.0 / ratio});
  }
  return c1;
}

double conjugation_constant(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed) {
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Point p = random_point(g, rng);
    const Point q = random_point(g, rng);
    const double np = hom_norm(g, p), nq = hom_norm(g, q);
    const double den = 2.0 * std::sqrt(np) * std::sqrt(nq);
    if (den == 0.0) continue;
    const Point c = compose(g, compose(g, inverse(g, q), p), q);
    best = std::max(best, (hom_norm(g, c) - np) / den);
  }
  return best;
}

}  // namespace carnot
