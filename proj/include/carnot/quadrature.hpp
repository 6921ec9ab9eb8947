#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "carnot/graph_function.hpp"

namespace carnot {

struct GaussRule {
  Vec nodes;    ///< on [-1, 1], increasing
  Vec weights;  ///< sum to 2
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(std::size_t n);

/// Tensor-product Gauss-Legendre integral of f over a box with `order` nodes per axis.
double integrate_box(const std::function<double(std::span<const double>)>& f, const Box& box,
                     std::size_t order);

}  // namespace carnot
