#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

/// Which pair family the u.i.d. sup runs over.
///  literal:    A = i(A0) delta_r(u),  B = A delta_r(v)          (||i(A)^{-1} i(B)|| < r)
///  conjugated: i(A) = i(A0) l0 delta_r(u) l0^{-1},
///              i(B) = i(A) l(A) delta_r(v) l(A)^{-1}              (quasi-distance < r)
/// where l(A) = lift(phi(A)), l0 = l(A0); u, v range over a normalised grid of
/// the unit ball of W.
enum class PairFamily { literal, conjugated, both };

struct UidReport {
  Vec center;
  Vec radii;                 ///< strictly decreasing
  Vec modulus;               ///< mu(r_i) >= 0
  IntrinsicLinearMap gradient;  ///< fitted at the smallest radius
};

/// |phi(B) - phi(A) - L (i(A)^{-1} i(B))^1_{k+1..m}| / quasi_distance(A, B).
double uid_remainder(const CanonicalSplit& split, const GraphFunction& phi,
                     const IntrinsicLinearMap& L, std::span<const double> a,
                     std::span<const double> b);

/// Least-squares L over conjugated pairs at A0 (A = A0) of radius r.
IntrinsicLinearMap fit_intrinsic_gradient(const CanonicalSplit& split, const GraphFunction& phi,
                                          std::span<const double> a0, double r,
                                          std::size_t grid_density = 9);

/// Sup of uid_remainder over the selected pair family at densities g and 2g-1,
/// the larger value is returned. If `L` is null the fitted gradient at (A0, r) is used.
double uid_modulus(const CanonicalSplit& split, const GraphFunction& phi,
                   std::span<const double> a0, double r, std::size_t grid_density,
                   const IntrinsicLinearMap* L = nullptr, PairFamily family = PairFamily::both);

UidReport uid_report(const CanonicalSplit& split, const GraphFunction& phi,
                     std::span<const double> a0, const Vec& radii, std::size_t grid_density,
                     PairFamily family = PairFamily::both);

/// sup over literal pairs (A in a region grid, B = A delta_r(v)) of
/// |phi(B) - phi(A)| / ||i(A)^{-1} i(B)||^{1/2}. Pairs with B outside phi's domain
/// are skipped.
double little_holder_modulus(const CanonicalSplit& split, const GraphFunction& phi,
                             const Box& region, double r, std::size_t region_density = 9,
                             std::size_t offset_density = 9);

struct DecayVerdict {
  std::size_t decreasing_levels = 0;  ///< trailing levels with mu(r/2) < mu(r) or mu <= floor
  double final_value = 0.0;
  bool pass = false;
};

/// Operational "modulus -> 0": the last `levels` transitions decrease (or sit at
/// or below `floor`) and the final value is below `threshold`.
DecayVerdict decay_verdict(const Vec& values, double threshold, double floor = 1e-12,
                           std::size_t levels = 3);

using LevelSetField = std::function<double(const Point&)>;

/// -(X_2 f, ..., X_m f) / X_1 f at Phi(A), k = 1.
Vec gradient_from_levelset(const CanonicalSplit& split, const LevelSetField& f,
                           const GraphFunction& phi, std::span<const double> a, double h = 0);

/// -M1^{-1} M2 at Phi(A) with M1 = [X_j f_i]_{j<=k}, M2 = [X_j f_i]_{j>k}.
IntrinsicLinearMap gradient_from_levelset(const CanonicalSplit& split,
                                          const std::vector<LevelSetField>& f,
                                          const GraphFunction& phi, std::span<const double> a,
                                          double h = 0);

/// f(P) = x_1 - phi(params(P_W(P))), whose zero set is graph(phi) (k = 1).
LevelSetField canonical_lift(const CanonicalSplit& split, const GraphFunction& phi);

/// Normalised grid of the open unit ball of W: x-params in [-1, 1], y-params in
/// [-1/eps^2, 1/eps^2], `per_axis` nodes per axis, filtered by ||i(u)|| < 1.
std::vector<Vec> unit_ball_grid(const CanonicalSplit& split, std::size_t per_axis,
                                bool drop_origin = true);

/// delta_r applied to W parameters.
Vec dilate_params(const CanonicalSplit& split, std::span<const double> u, double r);

}  // namespace carnot
