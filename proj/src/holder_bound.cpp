#include "carnot/holder_bound.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

ConcaveMajorant::ConcaveMajorant(Vec scales, Vec values) {
  if (scales.size() != values.size())
    throw Error(Errc::dimension_mismatch, "ConcaveMajorant: size mismatch");
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !(values[i] >= 0.0))
      throw Error(Errc::invalid_argument, "ConcaveMajorant: need positive scales, nonnegative values");
    pts.emplace_back(scales[i], values[i]);
  }
  std::sort(pts.begin(), pts.end());
  // A nondecreasing majorant: running max first, then the upper hull.
  for (std::size_t i = 1; i < pts.size(); ++i) pts[i].second = std::max(pts[i].second, pts[i - 1].second);
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().first == p.first) {
      hull.back().second = std::max(hull.back().second, p.second);
      continue;
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.first - a.first) * (p.second - a.second) -
                           (b.second - a.second) * (p.first - a.first);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  for (const auto& p : hull) {
    xs_.push_back(p.first);
    ys_.push_back(p.second);
  }
}

double ConcaveMajorant::operator()(double r) const {
  if (xs_.empty() || r <= 0.0) return 0.0;
  if (r >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  const double t = (r - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

namespace {

double vnorm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

template <class F>
double pair_sup(const Box& box, double r, std::size_t per_axis, std::size_t offsets_per_axis, F f) {
  const std::size_t d = box.dim();
  const Box unit(Vec(d, -1.0), Vec(d, 1.0));
  std::vector<Vec> offs;
  for (const Vec& u : box_grid(unit, offsets_per_axis)) {
    const double len = vnorm(u);
    if (len > 0.0 && len <= 1.0 + 1e-12) offs.push_back(u);
  }
  // Also the unit coordinate directions at full length.
  for (std::size_t i = 0; i < d; ++i) {
    Vec e(d, 0.0);
    e[i] = 1.0;
    offs.push_back(e);
  }
  double best = 0.0;
  Vec b(d);
  for (const Vec& a : box_grid(box, per_axis)) {
    for (const Vec& u : offs) {
      for (std::size_t i = 0; i < d; ++i) b[i] = a[i] + r * u[i];
      if (!box.contains(b)) continue;
      best = std::max(best, f(a, b));
    }
  }
  return best;
}

}  // namespace

double empirical_half_modulus(const GraphFunction& psi, const Box& box, double r,
                              std::size_t per_axis, std::size_t offsets_per_axis) {
  return pair_sup(box, r, per_axis, offsets_per_axis, [&](const Vec& a, const Vec& b) {
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
    const double len = vnorm(d);
    if (len == 0.0) return 0.0;
    return std::abs(psi.scalar_at(b) - psi.scalar_at(a)) / std::sqrt(len);
  });
}

double continuity_modulus(const GraphFunction& f, const Box& box, double r, std::size_t per_axis,
                          std::size_t offsets_per_axis) {
  return pair_sup(box, r, per_axis, offsets_per_axis, [&](const Vec& a, const Vec& b) {
    const Vec fa = f(a), fb = f(b);
    Vec d(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i) d[i] = fb[i] - fa[i];
    return vnorm(d);
  });
}

HolderBoundParams assemble_holder_params(const CanonicalSplit& split, const GraphFunction& psi,
                                         const GraphFunction& w, const Box& box,
                                         std::size_t per_axis) {
  if (split.k() != 1) throw Error(Errc::invalid_argument, "holder bound requires k = 1");
  const GroupSpecB& g = split.group();
  const std::size_t hp = split.horizontal_params();
  HolderBoundParams p;
  p.n = g.n();
  for (std::size_t i = 0; i < hp; ++i) p.K += std::max(std::abs(box.lo[i]), std::abs(box.hi[i]));
  double dy = 0.0;
  for (std::size_t i = hp; i < box.dim(); ++i) dy = std::max(dy, box.hi[i] - box.lo[i]);
  for (const Vec& a : box_grid(box, per_axis)) {
    p.M = std::max(p.M, std::abs(psi.scalar_at(a)));
    p.N = std::max(p.N, vnorm(w(a)));
  }
  p.B_m = 0.0;
  for (std::size_t s = 0; s < g.n(); ++s)
    for (double v : g.matrix(s)) {
      p.B_M = std::max(p.B_M, std::abs(v));
      if (v != 0.0) p.B_m = p.B_m == 0.0 ? std::abs(v) : std::min(p.B_m, std::abs(v));
    }
  p.h = std::sqrt(static_cast<double>(g.n()) * p.B_M * (p.K + p.M));
  p.E = std::pow(dy, 0.75) + p.B_M * (p.K + 2.0 * p.M);
  double diam = 0.0;
  for (std::size_t i = 0; i < box.dim(); ++i) diam += (box.hi[i] - box.lo[i]) * (box.hi[i] - box.lo[i]);
  diam = std::sqrt(diam);
  Vec scales, values;
  for (int i = 0; i < 16; ++i) {
    const double s = diam * std::ldexp(1.0, -i);
    scales.push_back(s);
    values.push_back(continuity_modulus(w, box, s, per_axis > 9 ? 9 : per_axis));
  }
  p.beta = ConcaveMajorant(std::move(scales), std::move(values));
  return p;
}

double holder_bound_alpha(const HolderBoundParams& p, double r) {
  if (!(p.B_m > 0.0))
    throw Error(Errc::degenerate, "holder_bound_alpha: B_m = 0 (no vertical coupling), alpha undefined");
  if (!(r >= 0.0)) throw Error(Errc::invalid_argument, "holder_bound_alpha: r must be >= 0");
  auto delta = [&](double s) {
    const double q = std::pow(s, 0.25);
    return std::max(q, std::sqrt(p.B_M * p.beta(p.E * q)));
  };
  return 3.0 * (1.0 + p.h) / p.B_m * delta(std::max(1.0, p.h * p.h) * r) + p.N * std::sqrt(r);
}

}  // namespace carnot
