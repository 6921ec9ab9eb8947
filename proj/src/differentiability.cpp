#include "carnot/differentiability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/tolerances.hpp"

namespace carnot {

namespace {

double vec_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Point lift_of(const CanonicalSplit& split, const GraphFunction& phi, std::span<const double> a) {
  return split.lift(phi(a));
}

/// l p l^{-1}
Point conjugate(const GroupSpecB& g, const Point& l, const Point& p) {
  return compose(g, compose(g, l, p), inverse(g, l));
}

Vec checked(const CanonicalSplit& split, const GraphFunction& phi, const Point& w,
            const char* who) {
  Vec a = split.params(w);
  if (!phi.domain().contains(a)) {
    std::ostringstream os;
    os << who << ": domain too small for the requested radius";
    throw Error(Errc::out_of_domain, os.str());
  }
  return a;
}

// Pair budget per family and density. Above it the base grid is thinned with a
// fixed stride; in two parameters the budget is never reached.
constexpr std::size_t kMaxPairs = std::size_t{1} << 18;

std::vector<Vec> thinned(std::vector<Vec> base, std::size_t offsets) {
  if (offsets == 0 || base.size() * offsets <= kMaxPairs) return base;
  const std::size_t keep = std::max<std::size_t>(1, kMaxPairs / offsets);
  const std::size_t stride = (base.size() + keep - 1) / keep;
  std::vector<Vec> out;
  for (std::size_t i = 0; i < base.size(); i += stride) out.push_back(std::move(base[i]));
  return out;
}

struct PairSet {
  std::vector<Vec> a;
  std::vector<Vec> b;
};

void add_literal_pairs(const CanonicalSplit& split, const GraphFunction& phi,
                       std::span<const double> a0, double r, std::size_t density, PairSet& out) {
  const GroupSpecB& g = split.group();
  const Point ia0 = split.embed(a0);
  const auto offs = unit_ball_grid(split, density, true);
  const auto base = thinned(unit_ball_grid(split, density, false), offs.size());
  for (const Vec& u : base) {
    const Point ia = compose(g, ia0, split.embed(dilate_params(split, u, r)));
    const Vec a = checked(split, phi, ia, "uid_modulus");
    for (const Vec& v : offs) {
      const Point ib = compose(g, ia, split.embed(dilate_params(split, v, r)));
      out.a.push_back(a);
      out.b.push_back(checked(split, phi, ib, "uid_modulus"));
    }
  }
}

void add_conjugated_pairs(const CanonicalSplit& split, const GraphFunction& phi,
                          std::span<const double> a0, double r, std::size_t density,
                          PairSet& out) {
  const GroupSpecB& g = split.group();
  const Point ia0 = split.embed(a0);
  const Point l0 = lift_of(split, phi, a0);
  const auto offs = unit_ball_grid(split, density, true);
  const auto base = thinned(unit_ball_grid(split, density, false), offs.size());
  for (const Vec& u : base) {
    const Point ia =
        compose(g, ia0, conjugate(g, l0, split.embed(dilate_params(split, u, r))));
    const Vec a = checked(split, phi, ia, "uid_modulus");
    const Point la = lift_of(split, phi, a);
    for (const Vec& v : offs) {
      const Point ib = compose(g, ia, conjugate(g, la, split.embed(dilate_params(split, v, r))));
      out.a.push_back(a);
      out.b.push_back(checked(split, phi, ib, "uid_modulus"));
    }
  }
}

}  // namespace

std::vector<Vec> unit_ball_grid(const CanonicalSplit& split, std::size_t per_axis,
                                bool drop_origin) {
  if (per_axis < 2) throw Error(Errc::invalid_argument, "unit_ball_grid: need >= 2 nodes per axis");
  const GroupSpecB& g = split.group();
  const std::size_t h = split.horizontal_params();
  const std::size_t d = split.param_dim();
  const double ymax = 1.0 / (g.epsilon2() * g.epsilon2());
  Vec lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double e = i < h ? 1.0 : ymax;
    lo[i] = -e;
    hi[i] = e;
  }
  std::vector<Vec> out;
  for (Vec& u : box_grid(Box(lo, hi), per_axis)) {
    const bool origin = std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; });
    if (origin && drop_origin) continue;
    if (hom_norm(g, split.embed(u)) < 1.0) out.push_back(std::move(u));
  }
  return out;
}

Vec dilate_params(const CanonicalSplit& split, std::span<const double> u, double r) {
  const std::size_t h = split.horizontal_params();
  Vec out(u.begin(), u.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= i < h ? r : r * r;
  return out;
}

double uid_remainder(const CanonicalSplit& split, const GraphFunction& phi,
                     const IntrinsicLinearMap& L, std::span<const double> a,
                     std::span<const double> b) {
  const Vec pa = phi(a);
  const Vec pb = phi(b);
  const double q = hom_norm(split.group(), conjugated_increment(split, pa, a, b));
  if (q < tolerances().degenerate_pair)
    throw Error(Errc::degenerate, "uid_remainder: quasi-distance below the degenerate threshold");
  const std::size_t h = split.horizontal_params();
  Vec dx(h);
  for (std::size_t i = 0; i < h; ++i) dx[i] = b[i] - a[i];
  const Vec ld = L.apply(dx);
  Vec num(pa.size());
  for (std::size_t c = 0; c < pa.size(); ++c) num[c] = pb[c] - pa[c] - ld[c];
  return vec_norm(num) / q;
}

IntrinsicLinearMap fit_intrinsic_gradient(const CanonicalSplit& split, const GraphFunction& phi,
                                          std::span<const double> a0, double r,
                                          std::size_t grid_density) {
  if (!(r > 0.0)) throw Error(Errc::invalid_argument, "fit_intrinsic_gradient: r must be > 0");
  const GroupSpecB& g = split.group();
  const std::size_t h = split.horizontal_params();
  const std::size_t k = split.k();
  const Vec p0 = phi(a0);
  const Point ia0 = split.embed(a0);
  const Point l0 = split.lift(p0);
  const auto offs = unit_ball_grid(split, grid_density, true);
  Eigen::MatrixXd X(offs.size(), h);
  Eigen::MatrixXd Y(offs.size(), k);
  for (std::size_t row = 0; row < offs.size(); ++row) {
    const Vec d = dilate_params(split, offs[row], r);
    const Point ib = compose(g, ia0, conjugate(g, l0, split.embed(d)));
    const Vec b = checked(split, phi, ib, "fit_intrinsic_gradient");
    const Vec pb = phi(b);
    for (std::size_t i = 0; i < h; ++i) X(row, i) = b[i] - a0[i];
    for (std::size_t c = 0; c < k; ++c) Y(row, c) = pb[c] - p0[c];
  }
  const Eigen::MatrixXd XtX = X.transpose() * X;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(XtX);
  lu.setThreshold(1e-12);
  if (static_cast<std::size_t>(lu.rank()) < h)
    throw Error(Errc::rank_deficient, "fit_intrinsic_gradient: rank-deficient sample design");
  const Eigen::MatrixXd sol = lu.solve(X.transpose() * Y);  // h x k
  Vec entries(k * h);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < h; ++i) entries[c * h + i] = sol(i, c);
  return IntrinsicLinearMap(k, h, std::move(entries));
}

double uid_modulus(const CanonicalSplit& split, const GraphFunction& phi,
                   std::span<const double> a0, double r, std::size_t grid_density,
                   const IntrinsicLinearMap* L, PairFamily family) {
  if (!(r > 0.0)) throw Error(Errc::invalid_argument, "uid_modulus: r must be > 0");
  if (grid_density < 2) throw Error(Errc::invalid_argument, "uid_modulus: grid density >= 2");
  const IntrinsicLinearMap fitted =
      L ? *L : fit_intrinsic_gradient(split, phi, a0, r, grid_density);
  double best = 0.0;
  for (const std::size_t density : {grid_density, 2 * grid_density - 1}) {
    PairSet pairs;
    if (family != PairFamily::conjugated) add_literal_pairs(split, phi, a0, r, density, pairs);
    if (family != PairFamily::literal) add_conjugated_pairs(split, phi, a0, r, density, pairs);
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
      const Vec pa = phi(pairs.a[i]);
      const double q =
          hom_norm(split.group(), conjugated_increment(split, pa, pairs.a[i], pairs.b[i]));
      if (q < tolerances().degenerate_pair) continue;
      best = std::max(best, uid_remainder(split, phi, fitted, pairs.a[i], pairs.b[i]));
    }
  }
  return best;
}

UidReport uid_report(const CanonicalSplit& split, const GraphFunction& phi,
                     std::span<const double> a0, const Vec& radii, std::size_t grid_density,
                     PairFamily family) {
  if (radii.empty()) throw Error(Errc::invalid_argument, "uid_report: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw Error(Errc::invalid_argument, "uid_report: radii must be strictly decreasing");
  UidReport rep;
  rep.center.assign(a0.begin(), a0.end());
  rep.radii = radii;
  for (double r : radii) {
    const IntrinsicLinearMap L = fit_intrinsic_gradient(split, phi, a0, r, grid_density);
    rep.modulus.push_back(uid_modulus(split, phi, a0, r, grid_density, &L, family));
    rep.gradient = L;
  }
  return rep;
}

double little_holder_modulus(const CanonicalSplit& split, const GraphFunction& phi,
                             const Box& region, double r, std::size_t region_density,
                             std::size_t offset_density) {
  if (!(r > 0.0)) throw Error(Errc::invalid_argument, "little_holder_modulus: r must be > 0");
  if (!phi.domain().contains_box(region))
    throw Error(Errc::out_of_domain, "little_holder_modulus: region leaves the domain");
  const GroupSpecB& g = split.group();
  const auto offs = unit_ball_grid(split, offset_density, true);
  double best = 0.0;
  bool any = false;
  for (const Vec& a : box_grid(region, region_density)) {
    const Vec pa = phi(a);
    const Point ia = split.embed(a);
    for (const Vec& v : offs) {
      const Point dv = split.embed(dilate_params(split, v, r));
      const Vec b = split.params(compose(g, ia, dv));
      if (!phi.domain().contains(b)) continue;
      const double d = hom_norm(g, dv);
      if (d < tolerances().degenerate_pair) continue;
      any = true;
      const Vec pb = phi(b);
      Vec diff(pa.size());
      for (std::size_t c = 0; c < pa.size(); ++c) diff[c] = pb[c] - pa[c];
      best = std::max(best, vec_norm(diff) / std::sqrt(d));
    }
  }
  if (!any) throw Error(Errc::insufficient_samples, "little_holder_modulus: no admissible pairs");
  return best;
}

DecayVerdict decay_verdict(const Vec& values, double threshold, double floor, std::size_t levels) {
  DecayVerdict v;
  if (values.empty()) return v;
  v.final_value = values.back();
  for (std::size_t i = values.size() - 1; i > 0; --i) {
    if (values[i] < values[i - 1] || values[i] <= floor)
      ++v.decreasing_levels;
    else
      break;
  }
  v.pass = v.decreasing_levels >= levels && v.final_value < threshold;
  return v;
}

Vec gradient_from_levelset(const CanonicalSplit& split, const LevelSetField& f,
                           const GraphFunction& phi, std::span<const double> a, double h) {
  if (split.k() != 1)
    throw Error(Errc::invalid_argument, "gradient_from_levelset: scalar form requires k = 1");
  const IntrinsicLinearMap L = gradient_from_levelset(split, std::vector<LevelSetField>{f}, phi, a, h);
  return L.entries;
}

IntrinsicLinearMap gradient_from_levelset(const CanonicalSplit& split,
                                          const std::vector<LevelSetField>& f,
                                          const GraphFunction& phi, std::span<const double> a,
                                          double h) {
  const std::size_t k = split.k();
  const std::size_t m = split.group().m();
  if (f.size() != k) throw Error(Errc::dimension_mismatch, "gradient_from_levelset: need k fields");
  if (h <= 0.0) h = tolerances().fd_step;
  const Point p = graph_point(split, phi, a);
  Eigen::MatrixXd M1(k, k), M2(k, m - k);
  for (std::size_t i = 0; i < k; ++i) {
    const Vec xf = horizontal_derivatives(split.group(), f[i], p, h);
    for (std::size_t j = 0; j < k; ++j) M1(i, j) = xf[j];
    for (std::size_t j = k; j < m; ++j) M2(i, j - k) = xf[j];
  }
  const double tol = tolerances().x1f_tol;
  if (k == 1) {
    if (std::abs(M1(0, 0)) < tol) {
      std::ostringstream os;
      os.precision(17);
      os << "gradient_from_levelset: |X_1 f| = " << std::abs(M1(0, 0))
         << " below tolerance (characteristic point)";
      throw Error(Errc::degenerate, os.str());
    }
  } else if (std::abs(M1.determinant()) < tol) {
    throw Error(Errc::degenerate, "gradient_from_levelset: M1 is singular (characteristic point)");
  }
  const Eigen::MatrixXd G = -M1.inverse() * M2;
  Vec entries(k * (m - k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m - k; ++j) entries[i * (m - k) + j] = G(i, j);
  return IntrinsicLinearMap(k, m - k, std::move(entries));
}

LevelSetField canonical_lift(const CanonicalSplit& split, const GraphFunction& phi) {
  if (split.k() != 1) throw Error(Errc::invalid_argument, "canonical_lift requires k = 1");
  return [split, phi](const Point& p) {
    const Projection pr = project(split, p);
    return p.x[0] - phi.scalar_at(split.params(pr.w));
  };
}

}  // namespace carnot
