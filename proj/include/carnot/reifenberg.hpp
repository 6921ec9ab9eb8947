#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

struct ReifenbergOptions {
  std::size_t samples_per_ball = 200;  ///< sup-side samples per set and radius
  std::size_t coarse_per_axis = 21;    ///< coarse inf-side grid (normalised ball)
  std::size_t refine_iterations = 30;  ///< shrinking local search steps
  std::uint64_t seed = 1;
};

/// beta(r) = dist(S n U(P, r), (P * plane) n U(P, r)) / r for S = graph(psi) and
/// P = Phi(a0), where the plane is the graph of the intrinsic linear map L
/// (L = 0 gives P * W). Both sets are handled in the dilation-normalised
/// frame delta_{1/r}(P^{-1} .), where each is a graph over the unit ball of W:
///   surface: u -> i(u) lift((psi(b(u)) - psi(a0)) / r),
///            i(b(u)) = i(a0) l0 delta_r(u) l0^{-1};
///   plane:   u -> i(u) lift(L u).
/// Sup sides use samples_per_ball seeded points; inf sides a coarse grid
/// refined by a local search over the continuous parametrisation.
Vec reifenberg_beta(const CanonicalSplit& split, const GraphFunction& psi,
                    std::span<const double> a0, const IntrinsicLinearMap& L, const Vec& radii,
                    const ReifenbergOptions& options = {});

/// Discrete variant on a sampled surface: S n U(P, r) needs >= min_points
/// points; the plane P * W is sampled on a grid of `plane_per_axis` nodes per
/// axis of the normalised ball.
Vec reifenberg_beta(const CanonicalSplit& split, const PointCloud& surface, const Point& p,
                    const Vec& radii, std::size_t plane_per_axis = 41,
                    std::size_t min_points = 50);

}  // namespace carnot
