#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace carnot {

using Vec = std::vector<double>;

/// Element of G = R^m x R^n: horizontal layer x, vertical layer y.
struct Point {
  Vec x;
  Vec y;

  Point() = default;
  Point(Vec x_, Vec y_) : x(std::move(x_)), y(std::move(y_)) {}

  static Point zero(std::size_t m, std::size_t n) { return Point(Vec(m, 0.0), Vec(n, 0.0)); }

  /// Builds a point from flat coordinates (x_1..x_m, y_1..y_n).
  static Point from_coords(std::span<const double> coords, std::size_t m);

  Vec coords() const;
  std::size_t dim() const { return x.size() + y.size(); }
  bool operator==(const Point&) const = default;
};

using PointCloud = std::vector<Point>;

/// Step-2 Carnot group of class B on R^{m+n}:
///   P*Q = (P1+Q1, P2+Q2 + 1/2 <B P1, Q1>),  <B P1,Q1>_s = <B^(s) P1, Q1>.
/// Immutable once built; epsilon2 is the vertical weight of the homogeneous norm.
class GroupSpecB {
 public:
  /// Validating factory (skew-symmetry, linear independence, n <= m(m-1)/2).
  /// `matrices` holds n row-major m x m arrays. epsilon2 starts at 1.
  static GroupSpecB build(std::string name, std::size_t m, std::size_t n,
                          std::vector<Vec> matrices);

  const std::string& name() const { return name_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  double epsilon2() const { return epsilon2_; }

  /// Entry b^(s)_{ij} (0-based s, i, j).
  double b(std::size_t s, std::size_t i, std::size_t j) const { return b_[(s * m_ + i) * m_ + j]; }
  std::span<const double> matrix(std::size_t s) const {
    return {b_.data() + s * m_ * m_, m_ * m_};
  }

  GroupSpecB with_epsilon2(double eps) const;

  /// Linear change of horizontal coordinates P1 -> M P1: the new family is
  /// M^{-T} B^(s) M^{-1}. `M` is row-major m x m and must be invertible.
  GroupSpecB change_horizontal_basis(std::span<const double> M) const;

  void check_point(const Point& p) const;

 private:
  GroupSpecB() = default;

  std::string name_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  Vec b_;
  double epsilon2_ = 1.0;
};

// Built-in examples.
GroupSpecB heisenberg(std::size_t k);      ///< H^k, m = 2k, n = 1
GroupSpecB free_step2(std::size_t m);      ///< F_{m,2}, n = m(m-1)/2

Point compose(const GroupSpecB& g, const Point& p, const Point& q);
Point inverse(const GroupSpecB& g, const Point& p);
Point dilate(const GroupSpecB& g, double lambda, const Point& p);

/// max{ |x|, epsilon2 |y|^{1/2} } with Euclidean layer norms.
double hom_norm(const GroupSpecB& g, const Point& p);

/// d(P,Q) = ||P^{-1} Q||.
double distance(const GroupSpecB& g, const Point& p, const Point& q);

/// Symmetrised Hausdorff distance between two nonempty clouds.
double set_distance(const GroupSpecB& g, const PointCloud& a, const PointCloud& b);

/// <B P1, Q1> for all s.
Vec bracket(const GroupSpecB& g, std::span<const double> p1, std::span<const double> q1);

using GroupField = std::function<double(const Point&)>;

/// (X_1 f, ..., X_m f, Y_1 f, ..., Y_n f)(P) by central differences of step h.
///   X_j = d/dx_j + 1/2 sum_s sum_i b^(s)_{ji} x_i d/dy_s,  Y_s = d/dy_s.
Vec horizontal_derivatives(const GroupSpecB& g, const GroupField& f, const Point& p, double h);

}  // namespace carnot
