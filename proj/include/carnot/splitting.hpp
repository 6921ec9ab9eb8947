#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "carnot/graph_function.hpp"
#include "carnot/group.hpp"

namespace carnot {

/// G = W * V with V = span of the first k horizontal coordinates and W the
/// normal subgroup {p_1 = ... = p_k = 0}. Parameters of W are
/// a = (x_{k+1}, ..., x_m, y_1, ..., y_n).
class CanonicalSplit {
 public:
  /// Requires 1 <= k < m and V abelian (B^(s) vanishes on the first k x k block).
  CanonicalSplit(GroupSpecB group, std::size_t k);

  const GroupSpecB& group() const { return g_; }
  std::size_t k() const { return k_; }
  std::size_t param_dim() const { return g_.m() + g_.n() - k_; }
  /// Number of horizontal parameters, m - k.
  std::size_t horizontal_params() const { return g_.m() - k_; }

  /// i(a): parameters into W.
  Point embed(std::span<const double> a) const;
  /// Parameters of a point of W (first k coordinates are dropped).
  Vec params(const Point& w) const;
  /// lift(v): R^k into V.
  Point lift(std::span<const double> v) const;

 private:
  GroupSpecB g_;
  std::size_t k_;
};

struct Projection {
  Point w;  ///< P_W
  Point v;  ///< P_V
};

/// P = P_W * P_V with P_V = (p_1..p_k, 0, ...).
Projection project(const CanonicalSplit& split, const Point& p);

/// Phi(a) = i(a) * lift(phi(a)).
Point graph_point(const CanonicalSplit& split, const GraphFunction& phi, std::span<const double> a);

/// Conjugated increment phi(A)^{-1} i(A)^{-1} i(B) phi(A).
Point conjugated_increment(const CanonicalSplit& split, std::span<const double> phi_a,
                           std::span<const double> a, std::span<const double> b);

/// ||phi(A)^{-1} i(A)^{-1} i(B) phi(A)||.
double quasi_distance(const CanonicalSplit& split, const GraphFunction& phi,
                      std::span<const double> a, std::span<const double> b);

/// ||i(A)^{-1} i(B)||.
double w_distance(const CanonicalSplit& split, std::span<const double> a,
                  std::span<const double> b);

/// phi_Q with Q * graph(phi) = graph(phi_Q):
///   phi_Q(a) = phi(P_W(Q^{-1} i(a))) - (Q^{-1} i(a))_{1..k}.
GraphFunction shift_graph(const CanonicalSplit& split, const GraphFunction& phi, const Point& q);

/// phi_lambda(a) = lambda phi(delta_{1/lambda} a), on delta_lambda(domain).
GraphFunction dilate_graph(const CanonicalSplit& split, const GraphFunction& phi, double lambda);

/// k x (m-k) matrix acting on first-layer parameters, row-major.
struct IntrinsicLinearMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec entries;

  IntrinsicLinearMap() = default;
  IntrinsicLinearMap(std::size_t r, std::size_t c, Vec e);
  static IntrinsicLinearMap zero(std::size_t r, std::size_t c) {
    return IntrinsicLinearMap(r, c, Vec(r * c, 0.0));
  }

  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  /// L * u for u in R^{m-k}.
  Vec apply(std::span<const double> u) const;
  /// Spectral norm.
  double op_norm() const;
};

/// L * (b_{k+1}, ..., b_m) for B in W.
Vec apply_intrinsic_linear(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                           const Point& b);

/// The intrinsic linear map as a GraphFunction on `domain`.
GraphFunction intrinsic_linear_function(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                                        Box domain);

/// sup over sample pairs of |phi(B) - phi(A)| / quasi_distance(A, B);
/// pairs below the degenerate threshold are skipped.
double intrinsic_lipschitz_estimate(const CanonicalSplit& split, const GraphFunction& phi,
                                    const std::vector<Vec>& samples);

/// sup over sample pairs of |phi(B) - phi(A)| / ||i(A)^{-1} i(B)||^{1/2}.
double holder_half_bound(const CanonicalSplit& split, const GraphFunction& phi,
                         const std::vector<Vec>& samples);

/// inf ||P_W P_V|| / (||P_W|| + ||P_V||) over seeded samples.
double c0_estimate(const CanonicalSplit& split, std::size_t sample_count, std::uint64_t seed);

/// max over sampled A, B in W of the distance of (A l(A)) (B l(B)) from graph(l),
/// measured as |v-part - L * w-part|.
double intrinsic_linear_subgroup_defect(const CanonicalSplit& split, const IntrinsicLinearMap& L,
                                        std::size_t sample_count, std::uint64_t seed);

/// Max |P_W * P_V - P|_inf over seeded samples.
double projection_roundtrip_error(const CanonicalSplit& split, std::size_t sample_count,
                                  std::uint64_t seed);

/// Regular grid with `per_axis` nodes per axis over a box (row-major, last axis fastest).
std::vector<Vec> box_grid(const Box& box, std::size_t per_axis);

}  // namespace carnot
