#include "carnot/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "carnot/differentiability.hpp"
#include "carnot/error.hpp"
#include "carnot/function_registry.hpp"
#include "carnot/holder_bound.hpp"
#include "carnot/intrinsic_pde.hpp"
#include "carnot/mollifier.hpp"
#include "carnot/norm_stats.hpp"
#include "carnot/perimeter.hpp"
#include "carnot/random.hpp"
#include "carnot/reifenberg.hpp"
#include "carnot/splitting.hpp"
#include "carnot/tolerances.hpp"

namespace carnot {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw Error(Errc::parse_error, origin + ": " + e.what());
  }
}

Vec matrix_rows(const json& m, std::size_t dim, std::size_t index) {
  std::ostringstream where;
  where << "matrices[" << index << "]";
  Vec flat;
  if (!m.is_array() || m.size() != dim)
    throw Error(Errc::parse_error, where.str() + ": expected " + std::to_string(dim) + " rows");
  for (const json& row : m) {
    if (!row.is_array() || row.size() != dim)
      throw Error(Errc::parse_error, where.str() + ": rows must have " + std::to_string(dim) + " entries");
    for (const json& v : row) {
      if (!v.is_number()) throw Error(Errc::parse_error, where.str() + ": non-numeric entry");
      flat.push_back(v.get<double>());
    }
  }
  return flat;
}

template <class T>
T get_or(const json& p, const char* key, T fallback) {
  if (!p.is_object() || !p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("scenario field '") + key + "': " + e.what());
  }
}

const json& require(const json& p, const char* key) {
  if (!p.is_object() || !p.contains(key))
    throw Error(Errc::parse_error, std::string("scenario: missing field '") + key + "'");
  return p.at(key);
}

Vec vec_field(const json& p, const char* key) {
  const json& v = require(p, key);
  if (!v.is_array()) throw Error(Errc::parse_error, std::string("scenario field '") + key + "' must be an array");
  Vec out;
  for (const json& e : v) {
    if (!e.is_number()) throw Error(Errc::parse_error, std::string("scenario field '") + key + "': non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

Box box_field(const json& p, const char* key, std::size_t dim) {
  const json& b = require(p, key);
  Box box(vec_field(b, "lo"), vec_field(b, "hi"));
  if (box.dim() != dim)
    throw Error(Errc::parse_error, std::string("scenario field '") + key + "': wrong dimension");
  return box;
}

Vec point_field(const json& p, const char* key, std::size_t dim) {
  Vec v = vec_field(p, key);
  if (v.size() != dim)
    throw Error(Errc::parse_error, std::string("scenario field '") + key + "': wrong dimension");
  return v;
}

/// Either an explicit array or {"dyadic_from": a, "dyadic_to": b} = 2^-a .. 2^-b.
Vec radii_field(const json& p, const char* key, int from, int to) {
  if (!p.is_object() || !p.contains(key)) {
    Vec out;
    for (int i = from; i <= to; ++i) out.push_back(std::ldexp(1.0, -i));
    return out;
  }
  const json& r = p.at(key);
  if (r.is_object()) {
    return radii_field(json::object(), key, get_or<int>(r, "dyadic_from", from),
                       get_or<int>(r, "dyadic_to", to));
  }
  Vec out = vec_field(p, key);
  if (out.empty()) throw Error(Errc::parse_error, std::string("scenario field '") + key + "' is empty");
  return out;
}

GraphFunction psi_field(const json& p, const CanonicalSplit& split, const Box& box) {
  return make_function(require(p, "psi"), split, box);
}

GraphFunction w_field(const json& p, const CanonicalSplit& split, const GraphFunction& psi,
                      const Box& box) {
  if (!p.contains("w") || (p.at("w").is_string() && p.at("w").get<std::string>() == "derive"))
    return derived_gradient(split, psi, box);
  GraphFunction w = make_vector_function(p.at("w"), split, box);
  if (w.k() != split.group().m() - 1)
    throw Error(Errc::parse_error, "scenario field 'w': needs m - 1 components");
  return w;
}

CanonicalSplit split_field(const json& p, const GroupSpecB& g) {
  return CanonicalSplit(g, get_or<std::size_t>(p, "k", 1));
}

std::vector<std::string> names_with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

double sup_abs_diff(const Point& a, const Point& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) e = std::max(e, std::abs(a.x[i] - b.x[i]));
  for (std::size_t i = 0; i < a.y.size(); ++i) e = std::max(e, std::abs(a.y[i] - b.y[i]));
  return e;
}

double point_scale(const GroupSpecB& g, std::initializer_list<const Point*> pts) {
  double s = 0.0;
  for (const Point* p : pts) s += hom_norm(g, *p);
  return s;
}

// ---------------------------------------------------------------- operations

Report op_group_validate(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("group validate", seed);
  const std::size_t count = get_or<std::size_t>(p, "samples", 10000);
  Rng rng(seed);
  double assoc = 0.0, ident = 0.0, inv = 0.0, homog = 0.0, left = 0.0, dil = 0.0;
  bool symmetric = true;
  for (std::size_t i = 0; i < count; ++i) {
    const Point P = random_point(g, rng), Q = random_point(g, rng), R = random_point(g, rng);
    const double scale = 1.0 + point_scale(g, {&P, &Q, &R});
    assoc = std::max(assoc, sup_abs_diff(compose(g, compose(g, P, Q), R),
                                         compose(g, P, compose(g, Q, R))) / scale);
    const Point e = Point::zero(g.m(), g.n());
    ident = std::max({ident, sup_abs_diff(compose(g, P, e), P), sup_abs_diff(compose(g, e, P), P)});
    inv = std::max(inv, sup_abs_diff(compose(g, P, inverse(g, P)), e));
    const double lambda = rng.uniform(0.1, 10.0);
    const double np = hom_norm(g, P);
    if (np > 0.0) homog = std::max(homog, std::abs(hom_norm(g, dilate(g, lambda, P)) - lambda * np) / (lambda * np));
    if (hom_norm(g, inverse(g, P)) != np) symmetric = false;
    const double dpq = distance(g, P, Q);
    if (dpq > 0.0) {
      left = std::max(left, std::abs(distance(g, compose(g, R, P), compose(g, R, Q)) - dpq) / dpq);
      dil = std::max(dil, std::abs(distance(g, dilate(g, lambda, P), dilate(g, lambda, Q)) - lambda * dpq) /
                              (lambda * dpq));
    }
  }
  const std::size_t violations = triangle_violations(g, count, seed + 1);
  const double c1 = norm_equivalence_c1(g, count, seed + 2);
  const double conj = conjugation_constant(g, count, seed + 3);
  rep.set_columns({"metric", "value"});
  auto row = [&](const std::string& k, double v) { rep.add_row(std::vector<std::string>{k, format_double(v)}); };
  row("m", static_cast<double>(g.m()));
  row("n", static_cast<double>(g.n()));
  row("epsilon2", g.epsilon2());
  row("associativity_error", assoc);
  row("identity_error", ident);
  row("inverse_error", inv);
  row("homogeneity_error", homog);
  row("triangle_violations", static_cast<double>(violations));
  row("left_invariance_error", left);
  row("dilation_scaling_error", dil);
  row("c1", c1);
  row("conjugation_constant", conj);
  rep.add_invariant("associativity", assoc <= 1e-9, assoc, 1e-9);
  rep.add_invariant("identity", ident <= 1e-12, ident, 1e-12);
  rep.add_invariant("inverse", inv <= 1e-12, inv, 1e-12);
  rep.add_invariant("homogeneity", homog <= 1e-12, homog, 1e-12);
  rep.add_invariant("symmetry", symmetric, symmetric ? 0.0 : 1.0, 0.0);
  rep.add_invariant("triangle", violations == 0, static_cast<double>(violations), 0.0);
  rep.add_invariant("left_invariance", left <= 1e-9, left, 1e-9);
  rep.add_invariant("dilation_scaling", dil <= 1e-9, dil, 1e-9);
  rep.add_invariant("norm_equivalence_c1", std::isfinite(c1) && c1 >= 1.0, c1, 1.0);
  rep.add_invariant("conjugation_constant_finite", std::isfinite(conj), conj, 0.0);
  rep.set_info("group", g.name());
  rep.set_info("samples", count);
  return rep;
}

Report op_group_calibrate(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("group calibrate", seed);
  const std::size_t count = get_or<std::size_t>(p, "samples", 10000);
  const double eps = calibrate_epsilon(g, count, seed);
  const GroupSpecB cal = g.with_epsilon2(eps);
  const std::size_t fresh = triangle_violations(cal, count, seed + 1);
  rep.set_columns({"epsilon2", "fresh_violations", "samples"});
  rep.add_row(Vec{eps, static_cast<double>(fresh), static_cast<double>(count)});
  rep.add_invariant("fresh_triangle_violations", fresh == 0, static_cast<double>(fresh), 0.0);
  rep.set_info("group", group_to_json(cal));
  return rep;
}

Report op_graph_analyze(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("graph analyze", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const Vec base = point_field(p, "base", split.param_dim());
  const Vec radii = radii_field(p, "radii", 2, 8);
  const std::size_t density = get_or<std::size_t>(p, "density", 9);
  const Box region = p.contains("region") ? box_field(p, "region", split.param_dim()) : box;
  const double threshold = get_or<double>(p, "threshold", tolerances().decay_threshold);
  const UidReport uid = uid_report(split, psi, base, radii, density);
  Vec holder;
  for (double r : radii) holder.push_back(little_holder_modulus(split, psi, region, r, density, density));
  std::vector<std::string> cols{"r", "uid_modulus", "little_holder"};
  for (std::size_t i = 0; i < uid.gradient.entries.size(); ++i) cols.push_back("gradient_" + std::to_string(i + 1));
  rep.set_columns(cols);
  std::vector<Vec> series;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    Vec row{radii[i], uid.modulus[i], holder[i]};
    row.insert(row.end(), uid.gradient.entries.begin(), uid.gradient.entries.end());
    rep.add_row(row);
    series.push_back({radii[i], uid.modulus[i]});
  }
  rep.set_series({"r", "mu"}, series);
  const DecayVerdict dv = decay_verdict(uid.modulus, threshold);
  const DecayVerdict hv = decay_verdict(holder, threshold);
  const std::string expect = get_or<std::string>(p, "expect", "smooth");
  if (expect == "smooth") {
    rep.add_invariant("uid_decay", dv.pass, dv.final_value, threshold,
                      std::to_string(dv.decreasing_levels) + " decreasing levels");
    rep.add_invariant("little_holder_decay", hv.pass, hv.final_value, threshold,
                      std::to_string(hv.decreasing_levels) + " decreasing levels");
  } else if (expect == "cusp") {
    // Negative control: the little-Hoelder ratio must stay bounded away from 0.
    const double floor = get_or<double>(p, "floor", 0.5);
    const double mn = *std::min_element(holder.begin(), holder.end());
    rep.add_invariant("little_holder_floor", mn >= floor, mn, floor);
    rep.set_info("uid_decay_verdict", dv.pass);
  } else {
    throw Error(Errc::parse_error, "scenario field 'expect': use smooth or cusp");
  }
  if (p.contains("expect_gradient")) {
    const Vec want = vec_field(p, "expect_gradient");
    const double tol = get_or<double>(p, "gradient_tolerance", 1e-3);
    double err = want.size() == uid.gradient.entries.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < want.size() && i < uid.gradient.entries.size(); ++i)
      err = std::max(err, std::abs(want[i] - uid.gradient.entries[i]));
    rep.add_invariant("gradient", err <= tol, err, tol);
  }
  rep.set_info("threshold_is_engineering_choice", true);
  return rep;
}

Report op_pde_characteristics(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("pde characteristics", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const Vec base = point_field(p, "base", split.param_dim());
  const std::size_t j = get_or<std::size_t>(p, "j", 2);
  const double t = get_or<double>(p, "t", 1.0);
  const double h = get_or<double>(p, "h_step", 1e-3);
  const CharacteristicCurve c = exp_map(split, psi, j, base, t, h);
  rep.set_columns(names_with({"t"}, names_with(param_names(split), {"psi"})));
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    Vec row{c.times[i]};
    row.insert(row.end(), c.states[i].begin(), c.states[i].end());
    row.push_back(c.psi_values[i]);
    rep.add_row(row);
  }
  // x-slots: x_j(t) = x_j + t, others fixed.
  bool exact = true;
  const std::size_t hp = split.horizontal_params();
  for (std::size_t i = 0; i < c.times.size(); ++i)
    for (std::size_t l = 0; l < hp; ++l) {
      const double want = l == j - 2 ? base[l] + static_cast<double>(i) * c.h : base[l];
      if (c.states[i][l] != want) exact = false;
    }
  rep.add_invariant("x_slots_exact", exact, exact ? 0.0 : 1.0, 0.0);
  // y-slots vs y_s + 1/2 t sum_l x_l b_jl + b_j1 int psi.
  const Vec I = cumulative_integral(c.psi_values, c.h);
  double integral_err = 0.0;
  for (std::size_t i = 0; i < c.times.size(); ++i)
    for (std::size_t s = 0; s < g.n(); ++s) {
      double acc = 0.0;
      for (std::size_t l = 2; l <= g.m(); ++l)
        if (l != j) acc += base[l - 2] * g.b(s, j - 1, l - 1);
      const double want = base[hp + s] + 0.5 * c.times[i] * acc + g.b(s, j - 1, 0) * I[i];
      integral_err = std::max(integral_err, std::abs(c.states[i][hp + s] - want));
    }
  const double hb = 10.0 * std::pow(std::abs(c.h), 4);
  rep.add_invariant("integral_form", integral_err <= hb, integral_err, hb);
  const CharacteristicCurve back = exp_map(split, psi, j, c.states.back(), -t, h);
  double rev = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) rev = std::max(rev, std::abs(back.states.back()[i] - base[i]));
  rep.add_invariant("reversibility", rev <= hb, rev, hb);
  if (p.contains("expect_endpoint")) {
    const Vec want = point_field(p, "expect_endpoint", split.param_dim());
    const double tol = get_or<double>(p, "endpoint_tolerance", 1e-8);
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(c.states.back()[i] - want[i]));
    rep.add_invariant("endpoint", err <= tol, err, tol);
  }
  rep.set_info("step", c.h);
  return rep;
}

Report op_pde_broadstar(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("pde broadstar", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const GraphFunction w = w_field(p, split, psi, box);
  const Vec base = point_field(p, "base", split.param_dim());
  const BroadStarResult r =
      broad_star_residual(split, psi, w, base, get_or<double>(p, "delta2", 0.1),
                          get_or<std::size_t>(p, "grid", 10), get_or<double>(p, "h_step", 1e-3));
  rep.set_columns({"delta2", "residual", "shrinks", "base_points"});
  rep.add_row(Vec{r.delta2, r.residual, static_cast<double>(r.shrinks), static_cast<double>(r.base_points)});
  if (p.contains("expect_residual")) {
    const double want = get_or<double>(p, "expect_residual", 0.0);
    const double tol = get_or<double>(p, "tolerance", tolerances().residual_tol);
    const double err = std::abs(r.residual - want);
    rep.add_invariant("residual_matches", err <= tol, r.residual, want);
  } else {
    const double tol = get_or<double>(p, "tolerance", tolerances().residual_tol);
    rep.add_invariant("broad_star_residual", r.residual <= tol, r.residual, tol);
  }
  rep.set_info("delta2_shrunk", r.shrinks > 0);
  return rep;
}

Report op_pde_perimeter(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("pde perimeter", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const Box region = p.contains("region") ? box_field(p, "region", split.param_dim()) : box;
  const std::size_t order = get_or<std::size_t>(p, "quad_order", 16);
  const double v1 = perimeter(split, psi, region, order);
  const double v2 = perimeter(split, psi, region, 2 * order);
  rep.set_columns({"quad_order", "perimeter"});
  rep.add_row(Vec{static_cast<double>(order), v1});
  rep.add_row(Vec{static_cast<double>(2 * order), v2});
  if (is_polynomial_spec(p.at("psi")))
    rep.add_invariant("order_doubling", std::abs(v2 - v1) < 1e-10, std::abs(v2 - v1), 1e-10);
  if (p.contains("expect")) {
    const double want = get_or<double>(p, "expect", 0.0);
    const double tol = get_or<double>(p, "tolerance", 1e-10);
    rep.add_invariant("perimeter_value", std::abs(v2 - want) <= tol, v2, want);
  }
  return rep;
}

Report op_pde_holder_bound(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("pde holder-bound", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const GraphFunction w = w_field(p, split, psi, box);
  const Box region = p.contains("region") ? box_field(p, "region", split.param_dim()) : box.shrunk(1e-3);
  const Vec radii = radii_field(p, "radii", 2, 10);
  const HolderBoundParams hp = assemble_holder_params(split, psi, w, region);
  rep.set_columns({"r", "alpha", "empirical"});
  std::vector<Vec> series;
  bool bounded = true, monotone = true;
  double worst = 0.0;
  double prev_alpha = std::numeric_limits<double>::infinity();
  Vec sorted = radii;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (double r : sorted) {
    const double a = holder_bound_alpha(hp, r);
    const double e = empirical_half_modulus(psi, region, r);
    if (e > a) bounded = false;
    if (a > prev_alpha) monotone = false;
    prev_alpha = a;
    worst = std::max(worst, e / a);
    rep.add_row(Vec{r, a, e});
    series.push_back({r, a, e});
  }
  rep.set_series({"r", "alpha", "empirical"}, series);
  rep.add_invariant("empirical_below_alpha", bounded, worst, 1.0, "max empirical/alpha");
  rep.add_invariant("alpha_nonincreasing", monotone, 0.0, 0.0);
  ordered_json info;
  info["K"] = hp.K;
  info["M"] = hp.M;
  info["N"] = hp.N;
  info["B_M"] = hp.B_M;
  info["B_m"] = hp.B_m;
  info["h"] = hp.h;
  info["E"] = hp.E;
  rep.set_info("params", info);
  return rep;
}

Report op_surface_reifenberg(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("surface reifenberg", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const Vec base = point_field(p, "base", split.param_dim());
  IntrinsicLinearMap L = IntrinsicLinearMap::zero(split.k(), split.horizontal_params());
  if (p.contains("plane")) L = IntrinsicLinearMap(split.k(), split.horizontal_params(), vec_field(p, "plane"));
  const Vec radii = radii_field(p, "radii", 2, 6);
  ReifenbergOptions opt;
  opt.samples_per_ball = get_or<std::size_t>(p, "samples_per_ball", 200);
  opt.seed = seed;
  const Vec beta = reifenberg_beta(split, psi, base, L, radii, opt);
  rep.set_columns({"r", "beta"});
  std::vector<Vec> series;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    rep.add_row(Vec{radii[i], beta[i]});
    series.push_back({radii[i], beta[i]});
  }
  rep.set_series({"r", "beta"}, series);
  const std::string expect = get_or<std::string>(p, "expect", "decay");
  if (expect == "zero") {
    const double mx = *std::max_element(beta.begin(), beta.end());
    rep.add_invariant("beta_zero", mx <= 1e-12, mx, 1e-12);
  } else if (expect == "decay") {
    bool mono = true;
    for (std::size_t i = 1; i < beta.size(); ++i)
      if (!(beta[i] < beta[i - 1])) mono = false;
    rep.add_invariant("beta_monotone", mono, 0.0, 0.0);
    const double ratio = beta.back() / beta.front();
    rep.add_invariant("beta_quarter", ratio < 0.25, ratio, 0.25);
  } else if (expect == "floor") {
    const double floor = get_or<double>(p, "floor", 0.5);
    const double mn = *std::min_element(beta.begin(), beta.end());
    rep.add_invariant("beta_floor", mn >= floor, mn, floor);
  } else {
    throw Error(Errc::parse_error, "scenario field 'expect': use zero, decay or floor");
  }
  return rep;
}

Report op_pde_smoothing(const GroupSpecB& g, const json& p, std::uint64_t seed) {
  Report rep("pde smoothing", seed);
  const CanonicalSplit split = split_field(p, g);
  const Box box = box_field(p, "box", split.param_dim());
  const GraphFunction psi = psi_field(p, split, box);
  const GraphFunction w = w_field(p, split, psi, box);
  const Box region = p.contains("region") ? box_field(p, "region", split.param_dim()) : box;
  const Vec radii = radii_field(p, "radii", 3, 6);
  const SmoothingTable t = smooth_family_check(split, psi, w, region, radii,
                                               get_or<std::size_t>(p, "eval_per_axis", 11),
                                               get_or<std::size_t>(p, "nodes", 32));
  rep.set_columns({"eps", "value_error", "derivative_error"});
  std::vector<Vec> series;
  for (const SmoothingRow& r : t.rows) {
    rep.add_row(Vec{r.eps, r.value_error, r.deriv_error});
    series.push_back({r.eps, r.value_error, r.deriv_error});
  }
  rep.set_series({"eps", "value_error", "derivative_error"}, series);
  const bool want = get_or<bool>(p, "expect_converged", true);
  rep.add_invariant(want ? "smoothing_converges" : "smoothing_diverges", t.converged == want,
                    t.converged ? 1.0 : 0.0, want ? 1.0 : 0.0);
  return rep;
}

using OpFn = Report (*)(const GroupSpecB&, const json&, std::uint64_t);

struct OpEntry {
  const char* name;
  OpFn fn;
};

const OpEntry kOps[] = {
    {"group validate", op_group_validate},
    {"group calibrate", op_group_calibrate},
    {"graph analyze", op_graph_analyze},
    {"pde characteristics", op_pde_characteristics},
    {"pde broadstar", op_pde_broadstar},
    {"pde perimeter", op_pde_perimeter},
    {"pde holder-bound", op_pde_holder_bound},
    {"surface reifenberg", op_surface_reifenberg},
    {"pde smoothing", op_pde_smoothing},
};

}  // namespace

GroupSpecB group_from_json(const json& j, std::uint64_t seed, std::size_t calibration_samples) {
  if (!j.is_object()) throw Error(Errc::parse_error, "group spec: expected a JSON object");
  try {
    const std::string name = j.value("name", std::string("group"));
    const std::size_t m = require(j, "m").get<std::size_t>();
    const std::size_t n = require(j, "n").get<std::size_t>();
    const json& mats = require(j, "matrices");
    if (!mats.is_array()) throw Error(Errc::parse_error, "group spec: 'matrices' must be an array");
    std::vector<Vec> flat;
    for (std::size_t s = 0; s < mats.size(); ++s) flat.push_back(matrix_rows(mats[s], m, s));
    GroupSpecB g = GroupSpecB::build(name, m, n, std::move(flat));
    if (j.contains("epsilon2")) return g.with_epsilon2(j.at("epsilon2").get<double>());
    return calibrated(g, calibration_samples, seed);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("group spec: ") + e.what());
  }
}

GroupSpecB parse_group_spec(const std::string& path, std::uint64_t seed,
                            std::size_t calibration_samples) {
  const json j = parse_json_text(read_file(path), path);
  try {
    return group_from_json(j, seed, calibration_samples);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

ordered_json group_to_json(const GroupSpecB& g) {
  ordered_json j;
  j["name"] = g.name();
  j["m"] = g.m();
  j["n"] = g.n();
  ordered_json mats = ordered_json::array();
  for (std::size_t s = 0; s < g.n(); ++s) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < g.m(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t k = 0; k < g.m(); ++k) row.push_back(g.b(s, i, k));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  j["matrices"] = mats;
  j["epsilon2"] = g.epsilon2();
  return j;
}

void write_group_spec(const GroupSpecB& g, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot open '" + path + "' for writing");
  f << group_to_json(g).dump(2) << "\n";
}

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const OpEntry& e : kOps) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

json load_scenario_params(const std::string& path) {
  if (path.empty()) return json::object();
  json j = parse_json_text(read_file(path), path);
  if (!j.is_object()) throw Error(Errc::parse_error, path + ": scenario must be a JSON object");
  return j;
}

Report run_operation(const std::string& operation, const GroupSpecB& g, const json& params,
                     std::uint64_t seed) {
  for (const OpEntry& e : kOps) {
    if (operation == e.name) {
      try {
        return e.fn(g, params, seed);
      } catch (const json::exception& ex) {
        throw Error(Errc::parse_error, std::string("scenario: ") + ex.what());
      }
    }
  }
  throw Error(Errc::invalid_argument, "unknown operation '" + operation + "'");
}

int run_scenario(const Scenario& sc, std::ostream& err) {
  try {
    const GroupSpecB g = parse_group_spec(sc.spec_path, sc.seed);
    const Report rep = run_operation(sc.operation, g, sc.params, sc.seed);
    rep.write_csv(sc.out_prefix + ".csv");
    rep.write_summary(sc.out_prefix + ".summary.json");
    if (!rep.series().empty()) emit_plot_data(rep, sc.out_prefix + ".plot.dat");
    if (sc.operation == "group calibrate")
      write_group_spec(g.with_epsilon2(rep.summary()["info"]["group"]["epsilon2"].get<double>()),
                       sc.out_prefix + ".group.json");
    if (!rep.all_pass()) {
      err << sc.operation << ": invariant failure (see " << sc.out_prefix << ".summary.json)\n";
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace carnot
