#include "carnot/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

GaussRule gauss_legendre(std::size_t n) {
  if (n < 1) throw Error(Errc::invalid_argument, "gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Final derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = nd * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double integrate_box(const std::function<double(std::span<const double>)>& f, const Box& box,
                     std::size_t order) {
  const GaussRule rule = gauss_legendre(order);
  const std::size_t d = box.dim();
  Vec half(d), mid(d);
  double jac = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    half[i] = 0.5 * (box.hi[i] - box.lo[i]);
    mid[i] = 0.5 * (box.hi[i] + box.lo[i]);
    jac *= half[i];
  }
  std::vector<std::size_t> idx(d, 0);
  Vec x(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = mid[i] + half[i] * rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    total += w * f(x);
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++idx[axis] < order) break;
      idx[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return jac * total;
}

}  // namespace carnot
