#include "carnot/mollifier.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/error.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

namespace {

double bump(double t) { return std::exp(-1.0 / (1.0 - t * t)); }

double bump_prime(double t) {
  const double q = 1.0 - t * t;
  return bump(t) * (-2.0 * t / (q * q));
}

double reflect(double v, double lo, double hi) {
  const double width = hi - lo;
  for (int it = 0; it < 64 && (v < lo || v > hi); ++it) {
    if (v < lo) v = lo + (lo - v);
    if (v > hi) v = hi - (v - hi);
  }
  if (v < lo || v > hi) v = lo + std::fmod(std::abs(v - lo), width);
  return v;
}

}  // namespace

Mollifier::Mollifier(std::size_t nodes) {
  if (nodes < 2) throw Error(Errc::invalid_argument, "Mollifier: need >= 2 nodes");
  const GaussRule rule = gauss_legendre(nodes);
  z_ = rule.nodes;
  value_.resize(nodes);
  deriv_.resize(nodes);
  double mass = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    value_[i] = rule.weights[i] * bump(z_[i]);
    deriv_[i] = rule.weights[i] * bump_prime(z_[i]);
    mass += value_[i];
    moment -= deriv_[i] * z_[i];
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    value_[i] /= mass;
    deriv_[i] /= moment;
  }
}

Mollifier::Sample Mollifier::smooth(const GraphFunction& psi, std::span<const double> a,
                                    double eps) const {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "Mollifier: eps must be > 0");
  const std::size_t d = a.size();
  const std::size_t q = z_.size();
  const Box& box = psi.domain();
  std::vector<std::size_t> idx(d, 0);
  Vec b(d);
  Sample out{0.0, Vec(d, 0.0)};
  Vec partial(d);
  while (true) {
    double prod = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      b[i] = reflect(a[i] - eps * z_[idx[i]], box.lo[i], box.hi[i]);
      prod *= value_[idx[i]];
    }
    const double f = psi.scalar_at(b);
    out.value += prod * f;
    for (std::size_t i = 0; i < d; ++i) {
      double p = deriv_[idx[i]];
      for (std::size_t l = 0; l < d; ++l)
        if (l != i) p *= value_[idx[l]];
      out.gradient[i] += p * f;
    }
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++idx[axis] < q) break;
      idx[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  for (double& g : out.gradient) g /= eps;
  return out;
}

SmoothingTable smooth_family_check(const CanonicalSplit& split, const GraphFunction& psi,
                                   const GraphFunction& w, const Box& region, const Vec& radii,
                                   std::size_t eval_per_axis, std::size_t nodes, double floor) {
  if (split.k() != 1) throw Error(Errc::invalid_argument, "smooth_family_check requires k = 1");
  if (radii.empty()) throw Error(Errc::invalid_argument, "smooth_family_check: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw Error(Errc::invalid_argument, "smooth_family_check: radii must be strictly decreasing");
  const GroupSpecB& g = split.group();
  const std::size_t m = g.m(), n = g.n();
  if (w.k() != m - 1) throw Error(Errc::dimension_mismatch, "smooth_family_check: w needs m - 1 components");
  const Box inner = region.shrunk(radii.front());
  double width = 0.0;
  for (std::size_t i = 0; i < inner.dim(); ++i) width = std::max(width, inner.hi[i] - inner.lo[i]);
  const Mollifier moll(nodes);
  SmoothingTable table;
  for (double eps : radii) {
    // Resolve the sup at the smoothing scale, within a fixed point budget.
    std::size_t per_axis = std::max<std::size_t>(
        eval_per_axis, static_cast<std::size_t>(std::ceil(width / eps)) + 1);
    auto total = [&](std::size_t c) {
      double t = 1.0;
      for (std::size_t i = 0; i < inner.dim(); ++i) t *= static_cast<double>(c);
      return t;
    };
    while (per_axis > eval_per_axis && total(per_axis) > 20000.0) --per_axis;
    if (per_axis % 2 == 0 && per_axis > eval_per_axis) --per_axis;
    const auto pts = box_grid(inner, per_axis);
    SmoothingRow row{eps, 0.0, 0.0};
    for (const Vec& a : pts) {
      const Mollifier::Sample s = moll.smooth(psi, a, eps);
      row.value_error = std::max(row.value_error, std::abs(s.value - psi.scalar_at(a)));
      const Vec wv = w(a);
      for (std::size_t j = 2; j <= m; ++j) {
        double v = s.gradient[j - 2];
        for (std::size_t sidx = 0; sidx < n; ++sidx) {
          double acc = 0.0;
          for (std::size_t l = 2; l <= m; ++l) acc += a[l - 2] * g.b(sidx, j - 1, l - 1);
          v += (s.value * g.b(sidx, j - 1, 0) + 0.5 * acc) * s.gradient[m - 1 + sidx];
        }
        row.deriv_error = std::max(row.deriv_error, std::abs(v - wv[j - 2]));
      }
    }
    table.rows.push_back(row);
  }
  auto column_ok = [&](auto get) {
    const std::size_t count = table.rows.size();
    const std::size_t transitions = std::min<std::size_t>(3, count - 1);
    if (count == 1) return get(table.rows[0]) <= floor;
    for (std::size_t t = 0; t < transitions; ++t) {
      const std::size_t i = count - 1 - t;
      const double cur = get(table.rows[i]), prev = get(table.rows[i - 1]);
      if (!(cur < prev || cur <= floor)) return false;
    }
    return true;
  };
  table.converged = column_ok([](const SmoothingRow& r) { return r.value_error; }) &&
                    column_ok([](const SmoothingRow& r) { return r.deriv_error; });
  return table;
}

}  // namespace carnot
