#include "carnot/perimeter.hpp"

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/intrinsic_pde.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

double perimeter(const CanonicalSplit& split, const GraphFunction& psi, const Box& region,
                 std::size_t quad_order) {
  if (region.dim() != split.param_dim())
    throw Error(Errc::dimension_mismatch, "perimeter: region dimension mismatch");
  auto integrand = [&](std::span<const double> a) {
    const Vec grad = intrinsic_gradient_smooth(split, psi, a);
    double s = 1.0;
    for (double v : grad) s += v * v;
    return std::sqrt(s);
  };
  return integrate_box(integrand, region, quad_order);
}

}  // namespace carnot
