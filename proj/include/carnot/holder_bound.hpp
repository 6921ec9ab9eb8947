#pragma once

#include <cstddef>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

/// Concave majorant of sampled (scale, modulus) pairs through the origin,
/// evaluated by linear interpolation; constant beyond the largest scale.
class ConcaveMajorant {
 public:
  ConcaveMajorant() = default;
  ConcaveMajorant(Vec scales, Vec values);

  double operator()(double r) const;
  const Vec& knots() const { return xs_; }
  const Vec& knot_values() const { return ys_; }

 private:
  Vec xs_;  ///< hull abscissae, starting at 0
  Vec ys_;
};

struct HolderBoundParams {
  double K = 0.0;       ///< sup sum_{i>=2} |x_i| on the box
  double M = 0.0;       ///< sup |psi|
  double N = 0.0;       ///< sup |w|
  double B_M = 0.0;     ///< max |entry| over all B^(s)
  double B_m = 0.0;     ///< min nonzero |entry|
  double h = 0.0;       ///< (n B_M (K + M))^{1/2}
  double E = 0.0;       ///< enclosing constant
  std::size_t n = 1;
  ConcaveMajorant beta; ///< modulus of continuity of w
};

/// Sampled assembly on `box` (grid of `per_axis` nodes per axis). beta is the
/// concave majorant of the Euclidean modulus of w at 16 dyadic scales below
/// the box diameter; E = D_y^{3/4} + B_M (K + 2M) with D_y the vertical extent.
HolderBoundParams assemble_holder_params(const CanonicalSplit& split, const GraphFunction& psi,
                                         const GraphFunction& w, const Box& box,
                                         std::size_t per_axis = 17);

/// alpha(r) = 3(1+h)/B_m delta(max{1,h^2} r) + N r^{1/2},
/// delta(r) = max{ r^{1/4}, (B_M beta(E r^{1/4}))^{1/2} }.
double holder_bound_alpha(const HolderBoundParams& params, double r);

/// sup over sampled pairs in `box` with 0 < |A - A'| <= r of
/// |psi(A) - psi(A')| / |A - A'|^{1/2} (Euclidean).
double empirical_half_modulus(const GraphFunction& psi, const Box& box, double r,
                              std::size_t per_axis = 9, std::size_t offsets_per_axis = 5);

/// sup over sampled pairs with |A - A'| <= r of |f(A) - f(A')| (Euclidean norms).
double continuity_modulus(const GraphFunction& f, const Box& box, double r,
                          std::size_t per_axis = 9, std::size_t offsets_per_axis = 5);

}  // namespace carnot
