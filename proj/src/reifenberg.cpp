#include "carnot/reifenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carnot/differentiability.hpp"
#include "carnot/error.hpp"
#include "carnot/random.hpp"
#include "carnot/simd/kernels.hpp"

namespace carnot {

namespace {

/// A set in the normalised frame, parametrised over W. Returns false when the
/// parameter maps outside psi's domain.
class NormalisedGraph {
 public:
  NormalisedGraph(const CanonicalSplit& split, const GraphFunction* psi, std::span<const double> a0,
                  const IntrinsicLinearMap& L, double r)
      : split_(split), psi_(psi), L_(L), r_(r) {
    if (psi_ != nullptr) {
      const GroupSpecB& g = split.group();
      p0_ = (*psi_)(a0);
      ia0_ = split.embed(a0);
      l0_ = split.lift(p0_);
      l0inv_ = inverse(g, l0_);
    }
  }

  bool point(std::span<const double> u, Point& out) const {
    const GroupSpecB& g = split_.group();
    Vec v;
    if (psi_ == nullptr) {
      v = L_.apply(u);
    } else {
      const Point w = compose(
          g, compose(g, compose(g, ia0_, l0_), split_.embed(dilate_params(split_, u, r_))), l0inv_);
      const Vec b = split_.params(w);
      if (!psi_->domain().contains(b)) return false;
      v = (*psi_)(b);
      for (std::size_t c = 0; c < v.size(); ++c) v[c] = (v[c] - p0_[c]) / r_;
    }
    out = compose(g, split_.embed(u), split_.lift(v));
    return true;
  }

 private:
  const CanonicalSplit& split_;
  const GraphFunction* psi_;
  const IntrinsicLinearMap& L_;
  double r_;
  Vec p0_;
  Point ia0_, l0_, l0inv_;
};

Vec param_half_widths(const CanonicalSplit& split) {
  const GroupSpecB& g = split.group();
  const double ymax = 2.0 / (g.epsilon2() * g.epsilon2());
  Vec w(split.param_dim());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = i < split.horizontal_params() ? 1.0 : ymax;
  return w;
}

struct Sample {
  Vec u;
  Point p;
};

std::vector<Sample> sample_ball(const CanonicalSplit& split, const NormalisedGraph& set,
                                std::size_t count, std::uint64_t seed) {
  const GroupSpecB& g = split.group();
  const Vec half = param_half_widths(split);
  Rng rng(seed);
  std::vector<Sample> out;
  Point p;
  Vec u(half.size());
  const std::size_t max_attempts = 1000 * count;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(-half[i], half[i]);
    if (!set.point(u, p)) continue;
    if (hom_norm(g, p) < 1.0) out.push_back({u, p});
  }
  if (out.size() < count)
    throw Error(Errc::insufficient_samples, "reifenberg_beta: too few samples inside the ball");
  return out;
}

struct Coarse {
  std::vector<Vec> params;
  simd::CloudSoA cloud;
};

Coarse coarse_grid(const CanonicalSplit& split, const NormalisedGraph& set, std::size_t per_axis) {
  const GroupSpecB& g = split.group();
  const Vec half = param_half_widths(split);
  Vec lo(half.size()), hi(half);
  for (std::size_t i = 0; i < half.size(); ++i) lo[i] = -half[i];
  Coarse c;
  PointCloud pts;
  Point p;
  for (Vec& u : box_grid(Box(lo, hi), per_axis)) {
    if (!set.point(u, p) || hom_norm(g, p) > 1.0) continue;
    pts.push_back(p);
    c.params.push_back(std::move(u));
  }
  if (pts.empty())
    throw Error(Errc::insufficient_samples, "reifenberg_beta: empty coarse grid in the ball");
  c.cloud = simd::CloudSoA(pts);
  return c;
}

/// inf over the set's points in the closed unit ball of ||q^{-1} p||.
/// Starts from the coarse nearest, the W-projection of q and the parameter q was
/// sampled at, then runs a compass search that only shrinks when stuck.
double inf_distance(const CanonicalSplit& split, const NormalisedGraph& set, const Coarse& coarse,
                    const Sample& q, std::size_t per_axis, std::size_t iterations) {
  const GroupSpecB& g = split.group();
  const simd::Nearest nn = simd::nearest(g, q.p, coarse.cloud);
  double best = nn.distance;
  Vec center = coarse.params[nn.index];
  Point p;
  auto consider = [&](const Vec& u) {
    if (!set.point(u, p) || hom_norm(g, p) > 1.0) return false;
    const double dist = distance(g, q.p, p);
    if (dist < best) {
      best = dist;
      center = u;
      return true;
    }
    return false;
  };
  consider(split.params(project(split, q.p).w));
  consider(q.u);
  if (best == 0.0) return 0.0;

  Vec step = param_half_widths(split);
  for (double& s : step) s *= 2.0 / static_cast<double>(per_axis - 1);
  const std::size_t d = center.size();
  const int reach = d <= 3 ? 2 : 1;
  const std::size_t span = 2 * static_cast<std::size_t>(reach) + 1;
  std::size_t stencil = 1;
  for (std::size_t i = 0; i < d; ++i) stencil *= span;
  Vec u(d);
  std::size_t shrinks = 0;
  for (std::size_t it = 0; it < 8 * iterations && shrinks < iterations && best > 0.0; ++it) {
    const Vec base = center;
    bool improved = false;
    for (std::size_t idx = 0; idx < stencil; ++idx) {
      std::size_t rem = idx;
      for (std::size_t i = 0; i < d; ++i) {
        const int off = static_cast<int>(rem % span) - reach;
        rem /= span;
        u[i] = base[i] + off * step[i] / reach;
      }
      improved |= consider(u);
    }
    if (!improved) {
      for (double& s : step) s *= 0.5;
      ++shrinks;
    }
  }
  return best;
}

double directed(const CanonicalSplit& split, const std::vector<Sample>& from,
                const NormalisedGraph& to, const Coarse& coarse, const ReifenbergOptions& opt) {
  double worst = 0.0;
  for (const Sample& q : from)
    worst = std::max(worst, inf_distance(split, to, coarse, q, opt.coarse_per_axis,
                                         opt.refine_iterations));
  return worst;
}

}  // namespace

Vec reifenberg_beta(const CanonicalSplit& split, const GraphFunction& psi,
                    std::span<const double> a0, const IntrinsicLinearMap& L, const Vec& radii,
                    const ReifenbergOptions& opt) {
  if (L.rows != split.k() || L.cols != split.horizontal_params())
    throw Error(Errc::dimension_mismatch, "reifenberg_beta: L must be k x (m-k)");
  if (opt.coarse_per_axis < 3) throw Error(Errc::invalid_argument, "reifenberg_beta: coarse grid");
  Vec out;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(Errc::invalid_argument, "reifenberg_beta: radii must be > 0");
    const NormalisedGraph surface(split, &psi, a0, L, r);
    const NormalisedGraph plane(split, nullptr, a0, L, r);
    const auto s_pts = sample_ball(split, surface, opt.samples_per_ball, opt.seed);
    const auto p_pts = sample_ball(split, plane, opt.samples_per_ball, opt.seed + 1);
    const Coarse s_coarse = coarse_grid(split, surface, opt.coarse_per_axis);
    const Coarse p_coarse = coarse_grid(split, plane, opt.coarse_per_axis);
    out.push_back(std::max(directed(split, s_pts, plane, p_coarse, opt),
                           directed(split, p_pts, surface, s_coarse, opt)));
  }
  return out;
}

Vec reifenberg_beta(const CanonicalSplit& split, const PointCloud& surface, const Point& p,
                    const Vec& radii, std::size_t plane_per_axis, std::size_t min_points) {
  const GroupSpecB& g = split.group();
  g.check_point(p);
  const std::size_t h = split.horizontal_params();
  Vec out;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(Errc::invalid_argument, "reifenberg_beta: radii must be > 0");
    PointCloud near;
    for (const Point& q : surface)
      if (distance(g, p, q) < r) near.push_back(q);
    if (near.size() < min_points)
      throw Error(Errc::insufficient_samples,
                  "reifenberg_beta: " + std::to_string(near.size()) + " surface points in ball, need " +
                      std::to_string(min_points));
    PointCloud plane;
    for (const Vec& u : unit_ball_grid(split, plane_per_axis, false)) {
      Vec du(u);
      for (std::size_t i = 0; i < du.size(); ++i) du[i] *= i < h ? r : r * r;
      plane.push_back(compose(g, p, split.embed(du)));
    }
    out.push_back(set_distance(g, near, plane) / r);
  }
  return out;
}

}  // namespace carnot
