#include "carnot/splitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/error.hpp"
#include "carnot/norm_stats.hpp"
#include "carnot/random.hpp"
#include "carnot/tolerances.hpp"

namespace carnot {

CanonicalSplit::CanonicalSplit(GroupSpecB group, std::size_t k) : g_(std::move(group)), k_(k) {
  if (k_ < 1 || k_ >= g_.m())
    throw Error(Errc::invalid_argument, "CanonicalSplit: need 1 <= k < m");
  for (std::size_t s = 0; s < g_.n(); ++s)
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j)
        if (g_.b(s, i, j) != 0.0)
          throw Error(Errc::invalid_argument,
                      "CanonicalSplit: first k coordinates do not span an abelian subgroup");
}

Point CanonicalSplit::embed(std::span<const double> a) const {
  if (a.size() != param_dim())
    throw Error(Errc::dimension_mismatch, "embed: parameter dimension mismatch");
  Point p = Point::zero(g_.m(), g_.n());
  const std::size_t h = horizontal_params();
  for (std::size_t i = 0; i < h; ++i) p.x[k_ + i] = a[i];
  for (std::size_t s = 0; s < g_.n(); ++s) p.y[s] = a[h + s];
  return p;
}

Vec CanonicalSplit::params(const Point& w) const {
  g_.check_point(w);
  Vec a(w.x.begin() + static_cast<std::ptrdiff_t>(k_), w.x.end());
  a.insert(a.end(), w.y.begin(), w.y.end());
  return a;
}

Point CanonicalSplit::lift(std::span<const double> v) const {
  if (v.size() != k_) throw Error(Errc::dimension_mismatch, "lift: expected k values");
  Point p = Point::zero(g_.m(), g_.n());
  for (std::size_t i = 0; i < k_; ++i) p.x[i] = v[i];
  return p;
}

Projection project(const CanonicalSplit& split, const Point& p) {
  const GroupSpecB& g = split.group();
  g.check_point(p);
  Vec head(p.x.begin(), p.x.begin() + static_cast<std::ptrdiff_t>(split.k()));
  Point pv = split.lift(head);
  Point pw = compose(g, p, inverse(g, pv));
  // The first k coordinates cancel exactly in theory; remove round-off.
  for (std::size_t i = 0; i < split.k(); ++i) pw.x[i] = 0.0;
  return {std::move(pw), std::move(pv)};
}

Point graph_point(const CanonicalSplit& split, const GraphFunction& phi, std::span<const double> a) {
  const Vec v = phi(a);
  return compose(split.group(), split.embed(a), split.lift(v));
}

Point conjugated_increment(const CanonicalSplit& split, std::span<const double> phi_a,
                           std::span<const double> a, std::span<const double> b) {
  const GroupSpecB& g = split.group();
  const Point la = split.lift(phi_a);
  const Point inc = compose(g, inverse(g, split.embed(a)), split.embed(b));
  return compose(g, compose(g, inverse(g, la), inc), la);
}

double quasi_distance(const CanonicalSplit& split, const GraphFunction& phi,
                      std::span<const double> a, std::span<const double> b) {
  const Vec pa = phi(a);
  phi(b);  // domain check
  return hom_norm(split.group(), conjugated_increment(split, pa, a, b));
}

double w_distance(const CanonicalSplit& split, std::span<const double> a,
                  std::span<const double> b) {
  return distance(split.group(), split.embed(a), split.embed(b));
}

GraphFunction shift_graph(const CanonicalSplit& split, const GraphFunction& phi, const Point& q) {
  const GroupSpecB& g = split.group();
  g.check_point(q);
  if (phi.k() != split.k() || phi.dim() != split.param_dim())
    throw Error(Errc::dimension_mismatch, "shift_graph: phi does not match the split");
  const std::size_t k = split.k();
  const Point qinv = inverse(g, q);
  // E_Q is the image of E under b -> params(P_W(Q i(b))), an affine map, so the
  // corners give the bounding box.
  const Box& box = phi.domain();
  const std::size_t d = box.dim();
  Vec lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    Vec b(d);
    for (std::size_t i = 0; i < d; ++i) b[i] = ((corner >> i) & 1U) ? box.hi[i] : box.lo[i];
    const Vec a = split.params(project(split, compose(g, q, split.embed(b))).w);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], a[i]);
      hi[i] = std::max(hi[i], a[i]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    // Degenerate extents only arise from degenerate input boxes.
    if (!(lo[i] < hi[i])) hi[i] = lo[i] + 1e-12 * std::max(1.0, std::abs(lo[i]));
  }
  auto fn = [split, phi, qinv, k](std::span<const double> a) {
    const GroupSpecB& gg = split.group();
    const Point r = compose(gg, qinv, split.embed(a));
    const Projection pr = project(split, r);
    Vec v = phi(split.params(pr.w));
    for (std::size_t i = 0; i < k; ++i) v[i] -= r.x[i];
    return v;
  };
  return GraphFunction::closed_form(Box(std::move(lo), std::move(hi)), k, std::move(fn),
                                    phi.label() + "@shift");
}

GraphFunction dilate_graph(const CanonicalSplit& split, const GraphFunction& phi, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "dilate_graph: lambda must be > 0");
  if (phi.k() != split.k() || phi.dim() != split.param_dim())
    throw Error(Errc::dimension_mismatch, "dilate_graph: phi does not match the split");
  const std::size_t h = split.horizontal_params();
  auto scale_params = [h](std::span<const double> a, double s) {
    Vec out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= (i < h) ? s : s * s;
    return out;
  };
  Box dom(scale_params(phi.domain().lo, lambda), scale_params(phi.domain().hi, lambda));
  auto fn = [phi, lambda, scale_params](std::span<const double> a) {
    Vec v = phi(scale_params(a, 1.0 / lambda));
    for (double& x : v) x *= lambda;
    return v;
  };
  return GraphFunction::closed_form(std::move(dom), phi.k(), std::move(fn), phi.label() + "@dil");
}

IntrinsicLinearMap::IntrinsicLinearMap(std::size_t r, std::size_t c, Vec e)
    : rows(r), cols(c), entries(std::move(e)) {
  if (entries.size() != rows * cols)
    throw Error(Errc::dimension_mismatch, "IntrinsicLinearMap: entry count mismatch");
  for (double v : entries)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "IntrinsicLinearMap: nonfinite");
}

Vec IntrinsicLinearMap::apply(std::span<const double> u) const {
  if (u.size() < cols) throw Error(Errc::dimension_mismatch, "IntrinsicLinearMap: short input");
  Vec out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i] += entries[i * cols + j] * u[j];
  return out;
}

double IntrinsicLinearMap::op_norm() const {
  if (rows == 0 || cols == 0) return 0.0;
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entries[i * cols + j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

Vec apply_intrinsic_linear(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                           const Point& b) {
  split.group().check_point(b);
  if (L.rows != split.k() || L.cols != split.horizontal_params())
    throw Error(Errc::dimension_mismatch, "apply_intrinsic_linear: L must be k x (m-k)");
  return L.apply(std::span<const double>(b.x).subspan(split.k()));
}

GraphFunction intrinsic_linear_function(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                                        Box domain) {
  if (L.rows != split.k() || L.cols != split.horizontal_params())
    throw Error(Errc::dimension_mismatch, "intrinsic_linear_function: L must be k x (m-k)");
  return GraphFunction::closed_form(
      std::move(domain), split.k(), [L](std::span<const double> a) { return L.apply(a); },
      "intrinsic-linear");
}

namespace {

double vec_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double intrinsic_lipschitz_estimate(const CanonicalSplit& split, const GraphFunction& phi,
                                    const std::vector<Vec>& samples) {
  if (samples.size() < 2) throw Error(Errc::insufficient_samples, "need >= 2 sample parameters");
  std::vector<Vec> values;
  values.reserve(samples.size());
  for (const Vec& a : samples) values.push_back(phi(a));
  const double floor = tolerances().degenerate_pair;
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      const double q =
          hom_norm(split.group(), conjugated_increment(split, values[i], samples[i], samples[j]));
      if (q < floor) continue;
      any = true;
      best = std::max(best, vec_dist(values[j], values[i]) / q);
    }
  }
  if (!any) throw Error(Errc::degenerate, "intrinsic_lipschitz_estimate: all pairs degenerate");
  return best;
}

double holder_half_bound(const CanonicalSplit& split, const GraphFunction& phi,
                         const std::vector<Vec>& samples) {
  if (samples.size() < 2) throw Error(Errc::insufficient_samples, "need >= 2 sample parameters");
  std::vector<Vec> values;
  std::vector<Point> pts;
  for (const Vec& a : samples) {
    values.push_back(phi(a));
    pts.push_back(split.embed(a));
  }
  const double floor = tolerances().degenerate_pair;
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double d = distance(split.group(), pts[i], pts[j]);
      if (d < floor) continue;
      any = true;
      best = std::max(best, vec_dist(values[j], values[i]) / std::sqrt(d));
    }
  if (!any) throw Error(Errc::degenerate, "holder_half_bound: all pairs degenerate");
  return best;
}

double c0_estimate(const CanonicalSplit& split, std::size_t sample_count, std::uint64_t seed) {
  const GroupSpecB& g = split.group();
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Point p = random_point(g, rng);
    const Projection pr = project(split, p);
    const double den = hom_norm(g, pr.w) + hom_norm(g, pr.v);
    if (den == 0.0) continue;
    best = std::min(best, hom_norm(g, compose(g, pr.w, pr.v)) / den);
  }
  return best;
}

double intrinsic_linear_subgroup_defect(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                                        std::size_t sample_count, std::uint64_t seed) {
  const GroupSpecB& g = split.group();
  const std::size_t d = split.param_dim();
  Rng rng(seed);
  double worst = 0.0;
  auto graph_of = [&](const Vec& a) { return compose(g, split.embed(a), split.lift(L.apply(a))); };
  for (std::size_t i = 0; i < sample_count; ++i) {
    Vec a(d), b(d);
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    for (double& v : b) v = rng.uniform(-1.0, 1.0);
    const Point r = compose(g, graph_of(a), graph_of(b));
    const Projection pr = project(split, r);
    const Vec expect = L.apply(split.params(pr.w));
    for (std::size_t c = 0; c < split.k(); ++c)
      worst = std::max(worst, std::abs(pr.v.x[c] - expect[c]));
  }
  return worst;
}

double projection_roundtrip_error(const CanonicalSplit& split, std::size_t sample_count,
                                  std::uint64_t seed) {
  const GroupSpecB& g = split.group();
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Point p = random_point(g, rng);
    const Projection pr = project(split, p);
    const Point r = compose(g, pr.w, pr.v);
    for (std::size_t c = 0; c < g.m(); ++c) worst = std::max(worst, std::abs(r.x[c] - p.x[c]));
    for (std::size_t s = 0; s < g.n(); ++s) worst = std::max(worst, std::abs(r.y[s] - p.y[s]));
  }
  return worst;
}

std::vector<Vec> box_grid(const Box& box, std::size_t per_axis) {
  if (per_axis < 1) throw Error(Errc::invalid_argument, "box_grid: per_axis must be >= 1");
  const std::size_t d = box.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;
  std::vector<Vec> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec a(d);
    std::size_t rem = idx;
    for (std::size_t i = d; i-- > 0;) {
      const std::size_t c = rem % per_axis;
      rem /= per_axis;
      const double t = per_axis == 1 ? 0.5 : static_cast<double>(c) / static_cast<double>(per_axis - 1);
      a[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace carnot
