#pragma once

#include <cstddef>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"

namespace carnot {

/// Integral over `region` of sqrt(1 + |D^psi psi|^2), tensor Gauss-Legendre with
/// quad_order nodes per axis; the integrand uses intrinsic_gradient_smooth.
double perimeter(const CanonicalSplit& split, const GraphFunction& psi, const Box& region,
                 std::size_t quad_order = 16);

}  // namespace carnot
