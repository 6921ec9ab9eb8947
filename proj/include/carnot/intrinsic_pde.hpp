#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

// Codimension-one machinery (k = 1). Parameters are a = (x_2..x_m, y_1..y_n);
// field indices j are 1-based and range over 2..m.

/// Drift of D^psi_j at a: 1 in the x_j slot, y_s slot
///   psi(a) b^(s)_{j1} + 1/2 sum_{l=2..m} x_l b^(s)_{jl}, zero elsewhere.
Vec intrinsic_vector_field(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j,
                           std::span<const double> a);

/// Discretised integral curve of D^psi_j.
struct CharacteristicCurve {
  std::size_t j = 2;
  double h = 0.0;            ///< actual step
  Vec times;                 ///< uniform; t_i = i h with h signed like t
  std::vector<Vec> states;   ///< gamma(t_i)
  Vec psi_values;            ///< psi(gamma(t_i))
  std::size_t origin = 0;    ///< index with t = 0
};

/// RK4 on the y-slots; x-slots follow x_j(t) = x_j + t exactly. The step is
/// |t| / ceil(|t| / h_step). Throws curve_escape (with the exit time) if the
/// trajectory leaves psi's domain.
CharacteristicCurve exp_map(const CanonicalSplit& split, const GraphFunction& psi, std::size_t j,
                            std::span<const double> a, double t, double h_step);

/// Curve on [-T, T] through a (origin in the middle).
CharacteristicCurve exp_map_two_sided(const CanonicalSplit& split, const GraphFunction& psi,
                                      std::size_t j, std::span<const double> a, double T,
                                      double h_step);

/// Cumulative integrals I_i = int_{t_0}^{t_i} f on a uniform grid (Simpson,
/// with a 3/8 tail for odd i >= 3 and a third-order first step).
Vec cumulative_integral(std::span<const double> f, double h);

struct BroadStarResult {
  double residual = 0.0;
  double delta2 = 0.0;        ///< delta_2 actually used
  std::size_t shrinks = 0;    ///< number of halvings triggered by curve escape
  std::size_t base_points = 0;
};

/// max over j, base points B in I(A, delta_2) and stored t of
///   |psi(gamma(t)) - psi(B) - int_0^t w_j(gamma)|.
/// Base points: B = i(A) D with D on a grid of `grid` nodes per axis over
/// |dx| <= delta_2, |dy| <= (delta_2/eps_2)^2, ||D|| <= delta_2.
/// `w` has m - 1 components.
BroadStarResult broad_star_residual(const CanonicalSplit& split, const GraphFunction& psi,
                                    const GraphFunction& w, std::span<const double> a,
                                    double delta2, std::size_t grid, double h_step = 1e-3);

/// (psi(gamma(h)) - psi(gamma(-h))) / 2h with one RK4 step each way.
double characteristic_derivative(const CanonicalSplit& split, const GraphFunction& psi,
                                 std::size_t j, std::span<const double> a, double h_step = 1e-4);

/// D^psi_j psi = d_{x_j} psi + sum_s drift_s d_{y_s} psi, central differences.
Vec intrinsic_gradient_smooth(const CanonicalSplit& split, const GraphFunction& psi,
                              std::span<const double> a, double h = 0);

/// w := intrinsic_gradient_smooth(psi) as a GraphFunction (m - 1 components) on `domain`.
GraphFunction derived_gradient(const CanonicalSplit& split, const GraphFunction& psi, Box domain,
                               double h = 0);

}  // namespace carnot
