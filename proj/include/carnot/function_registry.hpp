#pragma once

#include <string>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/splitting.hpp"
#include "json.hpp"

namespace carnot {

/// Parameter names of the split, e.g. {"x2", "y1"} for H^1 with k = 1.
/// With n = 1 the vertical parameter may also be called "y".
std::vector<std::string> param_names(const CanonicalSplit& split);

/// Index of a named parameter; throws parse_error for unknown names.
std::size_t param_index(const CanonicalSplit& split, const std::string& name);

/// Builds a scalar function from a registry entry:
///   {"type":"constant","value":c}
///   {"type":"coordinate","name":"x2"}
///   {"type":"linear","coefficients":[...],"offset":c}
///   {"type":"poly","terms":[{"coef":c,"powers":[...]}, ...]}
///   {"type":"sqrt_abs","coordinate":"x2"}
///   {"type":"grid","axes":[[...],...],"values":[...]}   (row-major)
/// Closed forms live on `domain`; grids carry their own box.
GraphFunction make_function(const nlohmann::json& spec, const CanonicalSplit& split,
                            const Box& domain);

/// Vector-valued function from an array of scalar registry entries (one per
/// component). A single object is accepted for one component.
GraphFunction make_vector_function(const nlohmann::json& spec, const CanonicalSplit& split,
                                   const Box& domain);

/// True for registry kinds that are polynomial (constant, coordinate, linear, poly).
bool is_polynomial_spec(const nlohmann::json& spec);

/// Convenience constructors.
GraphFunction constant_function(const CanonicalSplit& split, const Box& domain, double c);
GraphFunction coordinate_function(const CanonicalSplit& split, const Box& domain,
                                  const std::string& name);

}  // namespace carnot
