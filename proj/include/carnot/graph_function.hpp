#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "carnot/group.hpp"

namespace carnot {

/// Axis-aligned box [lo, hi] in a parameter space.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_);

  static Box cube(std::span<const double> center, double half_width);

  std::size_t dim() const { return lo.size(); }
  Vec center() const;
  /// Containment with a relative round-off slack of 1e-12.
  bool contains(std::span<const double> a) const;
  /// Box shrunk by `margin` on every side (throws if it becomes empty).
  Box shrunk(double margin) const;
  bool contains_box(const Box& other) const;
};

/// phi: E subset R^d -> R^k on a box domain. Closed-form callables or sampled
/// grids with multilinear interpolation. Evaluation outside the domain throws.
class GraphFunction {
 public:
  enum class Kind { closed_form, grid };
  using Fn = std::function<Vec(std::span<const double>)>;
  using ScalarFn = std::function<double(std::span<const double>)>;

  GraphFunction() = default;

  static GraphFunction closed_form(Box domain, std::size_t k, Fn fn, std::string label = {});
  static GraphFunction scalar(Box domain, ScalarFn fn, std::string label = {});
  /// `values` is row-major over the axes (last axis fastest) with the k
  /// components innermost. Each axis strictly increasing, >= 2 nodes.
  static GraphFunction grid(std::vector<Vec> axes, Vec values, std::size_t k = 1,
                            std::string label = {});

  Vec operator()(std::span<const double> a) const;
  /// First component; convenience for k = 1.
  double scalar_at(std::span<const double> a) const;

  const Box& domain() const { return domain_; }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return domain_.dim(); }
  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  /// Same evaluator on another box. For grid kind the box must lie inside the grid.
  GraphFunction restricted(Box domain) const;

 private:
  Box domain_;
  std::size_t k_ = 1;
  Kind kind_ = Kind::closed_form;
  std::string label_;
  std::shared_ptr<const Fn> fn_;
};

}  // namespace carnot
