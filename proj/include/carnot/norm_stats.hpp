#pragma once

#include <cstddef>
#include <cstdint>

#include "carnot/group.hpp"
#include "carnot/random.hpp"

namespace carnot {

/// Number of pairs (P, Q) from the seeded unit-box sample with
/// ||P*Q|| > ||P|| + ||Q||.
std::size_t triangle_violations(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed);

/// Largest epsilon2 in (0, 1] (20-step bisection) with no triangle violation on
/// `sample_count` seeded unit-box pairs. sample_count >= 1000.
double calibrate_epsilon(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed);

/// Copy of g carrying the calibrated epsilon2.
GroupSpecB calibrated(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed);

/// Empirical c1 >= 1 with ||P|| / (|P1| + |P2|^{1/2}) in [1/c1, c1] on samples.
double norm_equivalence_c1(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed);

/// Empirical sup of (||Q^{-1}PQ|| - ||P||) / (2 ||P||^{1/2} ||Q||^{1/2}).
double conjugation_constant(const GroupSpecB& g, std::size_t sample_count, std::uint64_t seed);

/// Uniform point in [-scale, scale]^{m+n}.
Point random_point(const GroupSpecB& g, Rng& rng, double scale = 1.0);

}  // namespace carnot
