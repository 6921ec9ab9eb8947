#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

/// Tensor-product C-infinity bump rho(t) = exp(-1/(1 - t^2)) on (-1, 1),
/// discretised with `nodes` Gauss-Legendre points per axis. The value kernel
/// is normalised to unit sum; the derivative kernel differentiates linear
/// functions exactly.
class Mollifier {
 public:
  explicit Mollifier(std::size_t nodes = 32);

  /// psi_eps(a) and its parameter gradient. Samples outside psi's domain are
  /// reflected back across the box faces.
  struct Sample {
    double value;
    Vec gradient;
  };
  Sample smooth(const GraphFunction& psi, std::span<const double> a, double eps) const;

  std::size_t nodes() const { return z_.size(); }

 private:
  Vec z_;       ///< nodes on (-1, 1)
  Vec value_;   ///< normalised value weights
  Vec deriv_;   ///< derivative weights (before the 1/eps factor)
};

struct SmoothingRow {
  double eps;
  double value_error;  ///< sup |psi_eps - psi|
  double deriv_error;  ///< sup |D^{psi_eps} psi_eps - w|
};

struct SmoothingTable {
  std::vector<SmoothingRow> rows;
  bool converged = false;
};

/// For each eps (strictly decreasing) the sups above over a grid on `region`
/// shrunk by the largest eps, with max(eval_per_axis, width/eps + 1) nodes per
/// axis (capped at 20000 points in total). A column
/// converges when each of its last three transitions decreases or sits at or
/// below `floor`.
SmoothingTable smooth_family_check(const CanonicalSplit& split, const GraphFunction& psi,
                                   const GraphFunction& w, const Box& region, const Vec& radii,
                                   std::size_t eval_per_axis = 11, std::size_t nodes = 32,
                                   double floor = 1e-6);

}  // namespace carnot
