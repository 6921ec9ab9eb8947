#include "carnot/graph_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) throw Error(Errc::dimension_mismatch, "Box: lo/hi size mismatch");
  if (lo.empty()) throw Error(Errc::invalid_argument, "Box: empty dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw Error(Errc::invalid_argument, "Box: need finite lo < hi on every axis");
  }
}

Box Box::cube(std::span<const double> center, double half_width) {
  Vec lo(center.begin(), center.end()), hi(center.begin(), center.end());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= half_width;
    hi[i] += half_width;
  }
  return Box(std::move(lo), std::move(hi));
}

Vec Box::center() const {
  Vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

bool Box::contains(std::span<const double> a) const {
  if (a.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double slack = 1e-12 * std::max({1.0, std::abs(lo[i]), std::abs(hi[i])});
    if (!(a[i] >= lo[i] - slack && a[i] <= hi[i] + slack)) return false;
  }
  return true;
}

Box Box::shrunk(double margin) const {
  Vec l(lo), h(hi);
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] += margin;
    h[i] -= margin;
    if (!(l[i] < h[i])) throw Error(Errc::invalid_argument, "Box: region too small for margin");
  }
  return Box(std::move(l), std::move(h));
}

bool Box::contains_box(const Box& other) const {
  return contains(other.lo) && contains(other.hi);
}

namespace {

std::string describe(std::span<const double> a) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

}  // namespace

GraphFunction GraphFunction::closed_form(Box domain, std::size_t k, Fn fn, std::string label) {
  if (k == 0) throw Error(Errc::invalid_argument, "GraphFunction: k must be >= 1");
  GraphFunction f;
  f.domain_ = std::move(domain);
  f.k_ = k;
  f.kind_ = Kind::closed_form;
  f.label_ = std::move(label);
  f.fn_ = std::make_shared<const Fn>(std::move(fn));
  return f;
}

GraphFunction GraphFunction::scalar(Box domain, ScalarFn fn, std::string label) {
  return closed_form(
      std::move(domain), 1, [fn = std::move(fn)](std::span<const double> a) { return Vec{fn(a)}; },
      std::move(label));
}

GraphFunction GraphFunction::grid(std::vector<Vec> axes, Vec values, std::size_t k,
                                  std::string label) {
  if (axes.empty()) throw Error(Errc::invalid_argument, "grid: no axes");
  std::size_t total = k;
  Vec lo, hi;
  for (const Vec& ax : axes) {
    if (ax.size() < 2) throw Error(Errc::invalid_argument, "grid: each axis needs >= 2 nodes");
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (!(ax[i] > ax[i - 1])) throw Error(Errc::invalid_argument, "grid: axes must increase");
    total *= ax.size();
    lo.push_back(ax.front());
    hi.push_back(ax.back());
  }
  if (values.size() != total) {
    std::ostringstream os;
    os << "grid: expected " << total << " values, got " << values.size();
    throw Error(Errc::dimension_mismatch, os.str());
  }
  for (double v : values)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "grid: nonfinite value");
  auto ax = std::make_shared<const std::vector<Vec>>(std::move(axes));
  auto vals = std::make_shared<const Vec>(std::move(values));
  Fn fn = [ax, vals, k](std::span<const double> a) {
    const std::size_t d = ax->size();
    std::vector<std::size_t> cell(d);
    Vec frac(d);
    for (std::size_t i = 0; i < d; ++i) {
      const Vec& nodes = (*ax)[i];
      const double t = std::clamp(a[i], nodes.front(), nodes.back());
      std::size_t c = static_cast<std::size_t>(
          std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
      c = std::clamp<std::size_t>(c, 1, nodes.size() - 1) - 1;
      cell[i] = c;
      frac[i] = (t - nodes[c]) / (nodes[c + 1] - nodes[c]);
    }
    Vec out(k, 0.0);
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const bool up = (corner >> i) & 1U;
        w *= up ? frac[i] : 1.0 - frac[i];
        flat = flat * (*ax)[i].size() + cell[i] + (up ? 1 : 0);
      }
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < k; ++c) out[c] += w * (*vals)[flat * k + c];
    }
    return out;
  };
  GraphFunction f = closed_form(Box(std::move(lo), std::move(hi)), k, std::move(fn), std::move(label));
  f.kind_ = Kind::grid;
  return f;
}

Vec GraphFunction::operator()(std::span<const double> a) const {
  if (!fn_) throw Error(Errc::invalid_argument, "GraphFunction: empty function");
  if (a.size() != domain_.dim()) {
    std::ostringstream os;
    os << "GraphFunction " << label_ << ": argument has " << a.size() << " entries, expected "
       << domain_.dim();
    throw Error(Errc::dimension_mismatch, os.str());
  }
  if (!domain_.contains(a))
    throw Error(Errc::out_of_domain, "GraphFunction " + label_ + ": argument " + describe(a) +
                                         " outside domain");
  Vec v = (*fn_)(a);
  if (v.size() != k_) throw Error(Errc::dimension_mismatch, "GraphFunction: wrong value size");
  for (double x : v)
    if (!std::isfinite(x))
      throw Error(Errc::out_of_domain,
                  "GraphFunction " + label_ + ": nonfinite value at " + describe(a));
  return v;
}

double GraphFunction::scalar_at(std::span<const double> a) const { return (*this)(a)[0]; }

GraphFunction GraphFunction::restricted(Box domain) const {
  if (domain.dim() != domain_.dim())
    throw Error(Errc::dimension_mismatch, "restricted: dimension mismatch");
  if (kind_ == Kind::grid && !domain_.contains_box(domain))
    throw Error(Errc::out_of_domain, "restricted: box leaves the grid");
  GraphFunction f(*this);
  f.domain_ = std::move(domain);
  return f;
}

}  // namespace carnot
