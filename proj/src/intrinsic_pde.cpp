#include "carnot/intrinsic_pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/tolerances.hpp"

namespace carnot {

namespace {

void require_codim_one(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j) {
  if (split.k() != 1) throw Error(Errc::invalid_argument, "intrinsic derivatives require k = 1");
  if (psi.k() != 1 || psi.dim() != split.param_dim())
    throw Error(Errc::dimension_mismatch, "psi does not match the split");
  if (j < 2 || j > split.group().m())
    throw Error(Errc::invalid_argument, "field index j must lie in 2..m");
}

/// y-slot drift of D^psi_j given psi's value; a holds (x_2..x_m, y).
void y_drift(const GroupSpecB& g, std::size_t j, double psi_value, std::span<const double> a,
             double* out) {
  const std::size_t m = g.m();
  for (std::size_t s = 0; s < g.n(); ++s) {
    double acc = 0.0;
    for (std::size_t l = 2; l <= m; ++l) acc += a[l - 2] * g.b(s, j - 1, l - 1);
    out[s] = psi_value * g.b(s, j - 1, 0) + 0.5 * acc;
  }
}

[[noreturn]] void escape(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "characteristic curve leaves the domain near t = " << t;
  throw Error(Errc::curve_escape, os.str());
}

/// psi at a, throwing curve_escape at time t when outside the domain.
double psi_on_curve(const GraphFunction& psi, std::span<const double> a, double t) {
  if (!psi.domain().contains(a)) escape(t);
  return psi.scalar_at(a);
}

/// One RK4 step from (t, a) of size h; x_j advances exactly.
// One step from time t to tn; the x_j slot is x0 + time, set analytically.
Vec rk4_step(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j, const Vec& a,
             double x0, double t, double tn) {
  const double h = tn - t;
  const GroupSpecB& g = split.group();
  const std::size_t m = g.m(), n = g.n();
  const std::size_t xj = j - 2;
  Vec k1(n), k2(n), k3(n), k4(n);
  Vec stage(a);
  auto eval = [&](const Vec& base, const Vec* k, double frac, Vec& out) {
    stage = base;
    stage[xj] = frac == 1.0 ? x0 + tn : x0 + (t + frac * h);
    if (k != nullptr)
      for (std::size_t s = 0; s < n; ++s) stage[m - 1 + s] = base[m - 1 + s] + frac * h * (*k)[s];
    y_drift(g, j, psi_on_curve(psi, stage, t + frac * h), stage, out.data());
  };
  eval(a, nullptr, 0.0, k1);
  eval(a, &k1, 0.5, k2);
  eval(a, &k2, 0.5, k3);
  eval(a, &k3, 1.0, k4);
  Vec next(a);
  next[xj] = x0 + tn;
  for (std::size_t s = 0; s < n; ++s)
    next[m - 1 + s] = a[m - 1 + s] + h / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
  return next;
}

}  // namespace

Vec intrinsic_vector_field(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j,
                           std::span<const double> a) {
  require_codim_one(split, psi, j);
  const GroupSpecB& g = split.group();
  Vec drift(split.param_dim(), 0.0);
  drift[j - 2] = 1.0;
  y_drift(g, j, psi.scalar_at(a), a, drift.data() + (g.m() - 1));
  return drift;
}

CharacteristicCurve exp_map(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j,
                            std::span<const double> a, double t, double h_step) {
  require_codim_one(split, psi, j);
  if (!(h_step > 0.0)) throw Error(Errc::invalid_argument, "exp_map: h_step must be > 0");
  if (!std::isfinite(t)) throw Error(Errc::invalid_argument, "exp_map: t must be finite");
  const std::size_t steps =
      t == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(std::abs(t) / h_step - 1e-9));
  const double h = steps == 0 ? 0.0 : t / static_cast<double>(steps);
  CharacteristicCurve c;
  c.j = j;
  c.h = h;
  Vec state(a.begin(), a.end());
  c.times.push_back(0.0);
  c.psi_values.push_back(psi_on_curve(psi, state, 0.0));
  c.states.push_back(state);
  const double x0 = state[j - 2];
  for (std::size_t i = 0; i < steps; ++i) {
    const double ti = static_cast<double>(i) * h;
    const double tn = static_cast<double>(i + 1) * h;
    state = rk4_step(split, psi, j, state, x0, ti, tn);
    c.times.push_back(tn);
    c.psi_values.push_back(psi_on_curve(psi, state, tn));
    c.states.push_back(state);
  }
  return c;
}

CharacteristicCurve exp_map_two_sided(const CanonicalSplit& split, const GraphFunction& psi,
                                      std::size_t j, std::span<const double> a, double T,
                                      double h_step) {
  if (!(T > 0.0)) throw Error(Errc::invalid_argument, "exp_map_two_sided: T must be > 0");
  const CharacteristicCurve fwd = exp_map(split, psi, j, a, T, h_step);
  const CharacteristicCurve bwd = exp_map(split, psi, j, a, -T, h_step);
  CharacteristicCurve c;
  c.j = j;
  c.h = fwd.h;
  for (std::size_t i = bwd.times.size(); i-- > 1;) {
    c.times.push_back(bwd.times[i]);
    c.states.push_back(bwd.states[i]);
    c.psi_values.push_back(bwd.psi_values[i]);
  }
  c.origin = c.times.size();
  c.times.insert(c.times.end(), fwd.times.begin(), fwd.times.end());
  c.states.insert(c.states.end(), fwd.states.begin(), fwd.states.end());
  c.psi_values.insert(c.psi_values.end(), fwd.psi_values.begin(), fwd.psi_values.end());
  return c;
}

Vec cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  Vec out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  Vec simpson(n, 0.0);  // valid at even indices
  for (std::size_t i = 2; i < n; i += 2)
    simpson[i] = simpson[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  for (std::size_t i = 2; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = simpson[i];
    } else {
      out[i] = simpson[i - 3] +
               3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
    }
  }
  return out;
}

namespace {

double curve_residual(const GraphFunction& w, std::size_t j, const CharacteristicCurve& c) {
  Vec wv(c.states.size());
  for (std::size_t i = 0; i < wv.size(); ++i) wv[i] = w(c.states[i])[j - 2];
  const Vec I = cumulative_integral(wv, c.h);
  double worst = 0.0;
  for (std::size_t i = 0; i < wv.size(); ++i)
    worst = std::max(worst, std::abs(c.psi_values[i] - c.psi_values[0] - I[i]));
  return worst;
}

}  // namespace

BroadStarResult broad_star_residual(const CanonicalSplit& split, const GraphFunction& psi,
                                    const GraphFunction& w, std::span<const double> a,
                                    double delta2, std::size_t grid, double h_step) {
  require_codim_one(split, psi, 2);
  const GroupSpecB& g = split.group();
  const std::size_t m = g.m();
  if (w.k() != m - 1 || w.dim() != split.param_dim())
    throw Error(Errc::dimension_mismatch, "broad_star_residual: w must have m - 1 components");
  if (grid < 1) throw Error(Errc::invalid_argument, "broad_star_residual: empty grid");
  if (!(delta2 > 0.0)) throw Error(Errc::invalid_argument, "broad_star_residual: delta2 > 0");
  BroadStarResult res;
  double d2 = delta2;
  for (std::size_t attempt = 0; attempt <= 10; ++attempt) {
    const double eps = g.epsilon2();
    const double ymax = (d2 / eps) * (d2 / eps);
    const std::size_t hp = split.horizontal_params();
    Vec lo(split.param_dim()), hi(split.param_dim());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const double e = i < hp ? d2 : ymax;
      lo[i] = -e;
      hi[i] = e;
    }
    const Point ia = split.embed(a);
    std::vector<Vec> bases;
    for (const Vec& dv : box_grid(Box(lo, hi), grid)) {
      const Point dp = split.embed(dv);
      if (hom_norm(g, dp) > d2 * (1.0 + 1e-12)) continue;
      bases.push_back(split.params(compose(g, ia, dp)));
    }
    if (bases.empty()) throw Error(Errc::invalid_argument, "broad_star_residual: empty grid");
    double worst = 0.0;
    bool escaped = false;
    try {
      for (const Vec& b : bases) {
        if (!psi.domain().contains(b)) escape(0.0);
        for (std::size_t j = 2; j <= m; ++j) {
          const CharacteristicCurve fwd = exp_map(split, psi, j, b, d2, h_step);
          const CharacteristicCurve bwd = exp_map(split, psi, j, b, -d2, h_step);
          worst = std::max({worst, curve_residual(w, j, fwd), curve_residual(w, j, bwd)});
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::curve_escape && e.code() != Errc::out_of_domain) throw;
      escaped = true;
    }
    if (!escaped) {
      res.residual = worst;
      res.delta2 = d2;
      res.base_points = bases.size();
      return res;
    }
    d2 *= 0.5;
    res.shrinks = attempt + 1;
  }
  throw Error(Errc::curve_escape,
              "broad_star_residual: curves leave the domain after 10 halvings of delta2");
}

double characteristic_derivative(const CanonicalSplit& split, const GraphFunction& psi,
                                 std::size_t j, std::span<const double> a, double h_step) {
  require_codim_one(split, psi, j);
  if (!(h_step > 0.0)) throw Error(Errc::invalid_argument, "characteristic_derivative: h > 0");
  const Vec start(a.begin(), a.end());
  const Vec up = rk4_step(split, psi, j, start, start[j - 2], 0.0, h_step);
  const Vec down = rk4_step(split, psi, j, start, start[j - 2], 0.0, -h_step);
  return (psi_on_curve(psi, up, h_step) - psi_on_curve(psi, down, -h_step)) / (2.0 * h_step);
}

Vec intrinsic_gradient_smooth(const CanonicalSplit& split, const GraphFunction& psi,
                              std::span<const double> a, double h) {
  require_codim_one(split, psi, 2);
  if (h <= 0.0) h = tolerances().fd_step;
  const GroupSpecB& g = split.group();
  const std::size_t m = g.m(), n = g.n();
  const std::size_t d = split.param_dim();
  Vec partial(d);
  Vec probe(a.begin(), a.end());
  auto at = [&](const Vec& p) {
    if (!psi.domain().contains(p))
      throw Error(Errc::out_of_domain, "intrinsic_gradient_smooth: stencil escapes the domain");
    return psi.scalar_at(p);
  };
  for (std::size_t i = 0; i < d; ++i) {
    const double keep = probe[i];
    probe[i] = keep + h;
    const double fp = at(probe);
    probe[i] = keep - h;
    const double fm = at(probe);
    probe[i] = keep;
    partial[i] = (fp - fm) / (2.0 * h);
  }
  const double pv = at(probe);
  Vec out(m - 1);
  Vec drift(n);
  for (std::size_t j = 2; j <= m; ++j) {
    y_drift(g, j, pv, a, drift.data());
    double v = partial[j - 2];
    for (std::size_t s = 0; s < n; ++s) v += drift[s] * partial[m - 1 + s];
    out[j - 2] = v;
  }
  return out;
}

GraphFunction derived_gradient(const CanonicalSplit& split, const GraphFunction& psi, Box domain,
                               double h) {
  return GraphFunction::closed_form(
      std::move(domain), split.group().m() - 1,
      [split, psi, h](std::span<const double> a) { return intrinsic_gradient_smooth(split, psi, a, h); },
      "D" + psi.label());
}

}  // namespace carnot
