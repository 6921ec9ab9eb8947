#include "carnot/group.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/simd/kernels.hpp"

namespace carnot {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::not_skew_symmetric: return "not_skew_symmetric";
    case Errc::linearly_dependent: return "linearly_dependent";
    case Errc::too_many_vertical: return "too_many_vertical";
    case Errc::out_of_domain: return "out_of_domain";
    case Errc::curve_escape: return "curve_escape";
    case Errc::degenerate: return "degenerate";
    case Errc::rank_deficient: return "rank_deficient";
    case Errc::insufficient_samples: return "insufficient_samples";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

Point Point::from_coords(std::span<const double> coords, std::size_t m) {
  if (coords.size() < m) throw Error(Errc::dimension_mismatch, "from_coords: too few coordinates");
  return Point(Vec(coords.begin(), coords.begin() + m), Vec(coords.begin() + m, coords.end()));
}

Vec Point::coords() const {
  Vec c(x);
  c.insert(c.end(), y.begin(), y.end());
  return c;
}

GroupSpecB GroupSpecB::build(std::string name, std::size_t m, std::size_t n,
                             std::vector<Vec> matrices) {
  if (m < 2) throw Error(Errc::invalid_argument, "build_group: m must be >= 2");
  if (n < 1) throw Error(Errc::invalid_argument, "build_group: n must be >= 1");
  if (matrices.size() != n) {
    std::ostringstream os;
    os << "build_group: expected " << n << " matrices, got " << matrices.size();
    throw Error(Errc::dimension_mismatch, os.str());
  }
  if (n > m * (m - 1) / 2) {
    std::ostringstream os;
    os << "build_group: n = " << n << " exceeds m(m-1)/2 = " << m * (m - 1) / 2;
    throw Error(Errc::too_many_vertical, os.str());
  }
  GroupSpecB g;
  g.name_ = std::move(name);
  g.m_ = m;
  g.n_ = n;
  g.b_.reserve(n * m * m);
  for (std::size_t s = 0; s < n; ++s) {
    if (matrices[s].size() != m * m) {
      std::ostringstream os;
      os << "build_group: matrix " << s + 1 << " has " << matrices[s].size()
         << " entries, expected " << m * m;
      throw Error(Errc::dimension_mismatch, os.str());
    }
    for (double v : matrices[s]) {
      if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "build_group: nonfinite entry");
    }
    double worst = 0.0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const double a = std::abs(matrices[s][i * m + j] + matrices[s][j * m + i]);
        if (a > worst) {
          worst = a;
          wi = i;
          wj = j;
        }
      }
    }
    if (worst != 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "build_group: matrix " << s + 1 << " is not skew-symmetric; max asymmetry " << worst
         << " at entry (" << wi + 1 << "," << wj + 1 << ")";
      throw Error(Errc::not_skew_symmetric, os.str());
    }
    g.b_.insert(g.b_.end(), matrices[s].begin(), matrices[s].end());
  }
  Eigen::MatrixXd stack(n, m * m);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t e = 0; e < m * m; ++e) stack(s, e) = g.b_[s * m * m + e];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stack);
  lu.setThreshold(1e-12);
  if (static_cast<std::size_t>(lu.rank()) < n) {
    std::ostringstream os;
    os << "build_group: matrices are linearly dependent (rank " << lu.rank() << " < " << n << ")";
    throw Error(Errc::linearly_dependent, os.str());
  }
  return g;
}

GroupSpecB GroupSpecB::with_epsilon2(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0))
    throw Error(Errc::invalid_argument, "epsilon2 must lie in (0, 1]");
  GroupSpecB g(*this);
  g.epsilon2_ = eps;
  return g;
}

GroupSpecB GroupSpecB::change_horizontal_basis(std::span<const double> M) const {
  if (M.size() != m_ * m_) throw Error(Errc::dimension_mismatch, "basis change: M must be m x m");
  Eigen::MatrixXd mm(m_, m_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) mm(i, j) = M[i * m_ + j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mm);
  if (!lu.isInvertible()) throw Error(Errc::degenerate, "basis change: M is singular");
  const Eigen::MatrixXd inv = lu.inverse();
  std::vector<Vec> mats;
  for (std::size_t s = 0; s < n_; ++s) {
    Eigen::MatrixXd bs(m_, m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) bs(i, j) = b(s, i, j);
    Eigen::MatrixXd t = inv.transpose() * bs * inv;
    // Restore exact skew-symmetry lost to rounding.
    t = 0.5 * (t - t.transpose()).eval();
    Vec flat(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) flat[i * m_ + j] = t(i, j);
    mats.push_back(std::move(flat));
  }
  GroupSpecB g = build(name_ + "~", m_, n_, std::move(mats));
  g.epsilon2_ = epsilon2_;
  return g;
}

void GroupSpecB::check_point(const Point& p) const {
  if (p.x.size() != m_ || p.y.size() != n_) {
    std::ostringstream os;
    os << "point has dimensions (" << p.x.size() << "," << p.y.size() << "), group " << name_
       << " expects (" << m_ << "," << n_ << ")";
    throw Error(Errc::dimension_mismatch, os.str());
  }
}

GroupSpecB heisenberg(std::size_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "heisenberg: k must be >= 1");
  const std::size_t m = 2 * k;
  Vec b(m * m, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    b[i * m + (k + i)] = 1.0;
    b[(k + i) * m + i] = -1.0;
  }
  return GroupSpecB::build("H" + std::to_string(k), m, 1, {b});
}

GroupSpecB free_step2(std::size_t m) {
  if (m < 2) throw Error(Errc::invalid_argument, "free_step2: m must be >= 2");
  std::vector<Vec> mats;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Vec b(m * m, 0.0);
      b[i * m + j] = -1.0;
      b[j * m + i] = 1.0;
      mats.push_back(std::move(b));
    }
  }
  const std::size_t n = mats.size();
  return GroupSpecB::build("F" + std::to_string(m) + "2", m, n, std::move(mats));
}

Vec bracket(const GroupSpecB& g, std::span<const double> p1, std::span<const double> q1) {
  const std::size_t m = g.m();
  Vec out(g.n(), 0.0);
  for (std::size_t s = 0; s < g.n(); ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += g.b(s, i, j) * p1[j];
      acc += row * q1[i];
    }
    out[s] = acc;
  }
  return out;
}

Point compose(const GroupSpecB& g, const Point& p, const Point& q) {
  g.check_point(p);
  g.check_point(q);
  Point r(p.x, p.y);
  for (std::size_t i = 0; i < g.m(); ++i) r.x[i] += q.x[i];
  const Vec br = bracket(g, p.x, q.x);
  for (std::size_t s = 0; s < g.n(); ++s) r.y[s] = p.y[s] + q.y[s] + 0.5 * br[s];
  return r;
}

Point inverse(const GroupSpecB& g, const Point& p) {
  g.check_point(p);
  Point r(p.x, p.y);
  for (double& v : r.x) v = -v;
  for (double& v : r.y) v = -v;
  return r;
}

Point dilate(const GroupSpecB& g, double lambda, const Point& p) {
  g.check_point(p);
  if (!(lambda > 0.0)) throw Error(Errc::invalid_argument, "dilate: lambda must be > 0");
  Point r(p.x, p.y);
  for (double& v : r.x) v *= lambda;
  for (double& v : r.y) v *= lambda * lambda;
  return r;
}

double hom_norm(const GroupSpecB& g, const Point& p) {
  g.check_point(p);
  double sx = 0.0;
  for (double v : p.x) sx = sx + v * v;
  double sy = 0.0;
  for (double v : p.y) sy = sy + v * v;
  return std::max(std::sqrt(sx), g.epsilon2() * std::sqrt(std::sqrt(sy)));
}

double distance(const GroupSpecB& g, const Point& p, const Point& q) {
  return hom_norm(g, compose(g, inverse(g, p), q));
}

namespace {
double directed_hausdorff(const GroupSpecB& g, const PointCloud& from, const simd::CloudSoA& to) {
  double worst = 0.0;
  for (const Point& q : from) {
    // inf_{Q in to} d(Q, q) = inf ||q^{-1} Q|| by symmetry of the norm.
    worst = std::max(worst, simd::nearest(g, q, to).distance);
  }
  return worst;
}
}  // namespace

double set_distance(const GroupSpecB& g, const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw Error(Errc::invalid_argument, "set_distance: empty cloud");
  for (const Point& p : a) g.check_point(p);
  for (const Point& p : b) g.check_point(p);
  const simd::CloudSoA sa(a), sb(b);
  return std::max(directed_hausdorff(g, b, sa), directed_hausdorff(g, a, sb));
}

Vec horizontal_derivatives(const GroupSpecB& g, const GroupField& f, const Point& p, double h) {
  g.check_point(p);
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "horizontal_derivatives: h must be > 0");
  const std::size_t m = g.m(), n = g.n();
  auto eval = [&](const Point& q) {
    const double v = f(q);
    if (!std::isfinite(v))
      throw Error(Errc::out_of_domain, "horizontal_derivatives: f not evaluable at stencil point");
    return v;
  };
  Vec dx(m), dy(n);
  for (std::size_t i = 0; i < m; ++i) {
    Point a = p, b = p;
    a.x[i] += h;
    b.x[i] -= h;
    dx[i] = (eval(a) - eval(b)) / (2.0 * h);
  }
  for (std::size_t s = 0; s < n; ++s) {
    Point a = p, b = p;
    a.y[s] += h;
    b.y[s] -= h;
    dy[s] = (eval(a) - eval(b)) / (2.0 * h);
  }
  Vec out(m + n);
  for (std::size_t j = 0; j < m; ++j) {
    double v = dx[j];
    for (std::size_t s = 0; s < n; ++s) {
      double c = 0.0;
      for (std::size_t i = 0; i < m; ++i) c += g.b(s, j, i) * p.x[i];
      v += 0.5 * c * dy[s];
    }
    out[j] = v;
  }
  for (std::size_t s = 0; s < n; ++s) out[m + s] = dy[s];
  return out;
}

}  // namespace carnot
