#include "doctest.h"

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/function_registry.hpp"
#include "carnot/intrinsic_pde.hpp"
#include "carnot/random.hpp"
#include "carnot/splitting.hpp"

using namespace carnot;
using nlohmann::json;

namespace {

Box cube(std::size_t d, double h) { return Box(Vec(d, -h), Vec(d, h)); }

const char* kSmooth[] = {
    R"({"type":"constant","value":0.7})",
    R"({"type":"coordinate","name":"x2"})",
    R"({"type":"coordinate","name":"y"})",
    R"({"type":"linear","coefficients":[1,1]})",
    R"({"type":"poly","terms":[{"coef":1,"powers":[2,0]}]})",
    R"({"type":"poly","terms":[{"coef":0.5,"powers":[1,1]},{"coef":-0.3,"powers":[0,2]}]})",
};

GraphFunction registry(const CanonicalSplit& s, const char* spec, const Box& box) {
  return make_function(json::parse(spec), s, box);
}

}  // namespace

TEST_CASE("vector fields by hand") {
  const CanonicalSplit h(heisenberg(1), 1);
  const GraphFunction x2 = coordinate_function(h, cube(2, 2), "x2");
  CHECK(intrinsic_vector_field(h, x2, 2, Vec{0.3, 0.9}) == Vec{1.0, -0.3});
  CHECK(intrinsic_vector_field(h, constant_function(h, cube(2, 2), 0.0), 2, Vec{0.0, 0.4}) ==
        Vec{1.0, 0.0});

  const CanonicalSplit f(free_step2(3), 1);
  const GraphFunction psi = GraphFunction::scalar(cube(5, 2), [](std::span<const double> a) {
    return 0.5 + a[0] - a[3];
  });
  const Vec b{0.3, -0.6, 0.1, 0.2, -0.4};
  const double p = 0.5 + 0.3 - 0.2;
  // Brackets of F32: y1 ~ [x1,x2], y2 ~ [x1,x3], y3 ~ [x2,x3].
  const Vec d2 = intrinsic_vector_field(f, psi, 2, b);
  CHECK(d2 == Vec{1.0, 0.0, -p, 0.0, 0.5 * -0.6});
  const Vec d3 = intrinsic_vector_field(f, psi, 3, b);
  CHECK(d3 == Vec{0.0, 1.0, 0.0, -p, -0.5 * 0.3});
  CHECK_THROWS_AS(intrinsic_vector_field(f, psi, 1, b), Error);
  CHECK_THROWS_AS(intrinsic_vector_field(f, psi, 4, b), Error);
  CHECK_THROWS_AS(intrinsic_vector_field(f, psi, 2, Vec{3, 0, 0, 0, 0}), Error);
}

TEST_CASE("characteristic of psi = x2 has a closed form") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction x2 = coordinate_function(s, cube(2, 2), "x2");
  const CharacteristicCurve c = exp_map(s, x2, 2, Vec{0, 0}, 1.0, 1e-3);
  CHECK(c.times.size() == 1001);
  CHECK(c.states.back()[0] == 1.0);
  CHECK(std::abs(c.states.back()[1] + 0.5) <= 1e-8);
  for (std::size_t i = 0; i < c.times.size(); i += 97) {
    const double t = c.times[i];
    CHECK(std::abs(c.states[i][1] + 0.5 * t * t) <= 1e-12);
    CHECK(c.psi_values[i] == c.states[i][0]);
  }
  const CharacteristicCurve back = exp_map(s, x2, 2, Vec{0, 0}, -1.0, 1e-3);
  CHECK(back.h < 0.0);
  CHECK(std::abs(back.states.back()[1] + 0.5) <= 1e-8);
}

TEST_CASE("fourth order on psi = y") {
  // y' = -y along x2 = t: y(t) = y0 exp(-t).
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction y = coordinate_function(s, cube(2, 3), "y");
  double prev = 0.0;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    const CharacteristicCurve c = exp_map(s, y, 2, Vec{0, 1}, 1.0, h);
    const double err = std::abs(c.states.back()[1] - std::exp(-1.0));
    if (prev > 0.0) {
      const double order = std::log2(prev / err);
      CHECK(order >= 3.8);
      CHECK(order <= 4.2);
      CHECK(prev / err >= 12.0);
      CHECK(prev / err <= 20.0);
    }
    prev = err;
  }
}

TEST_CASE("constant psi gives straight lines") {
  const CanonicalSplit s(free_step2(3), 1);
  const GroupSpecB& g = s.group();
  const double c = 0.8;
  const GraphFunction psi = constant_function(s, cube(5, 3), c);
  const Vec b{0.2, -0.5, 0.1, 0.3, -0.2};
  for (std::size_t j : {2u, 3u}) {
    const CharacteristicCurve cv = exp_map(s, psi, j, b, 0.7, 0.05);
    for (std::size_t i = 0; i < cv.times.size(); ++i) {
      const double t = cv.times[i];
      for (std::size_t sl = 0; sl < g.n(); ++sl) {
        double rate = c * g.b(sl, j - 1, 0);
        for (std::size_t l = 2; l <= 3; ++l)
          if (l != j) rate += 0.5 * b[l - 2] * g.b(sl, j - 1, l - 1);
        CHECK(cv.states[i][2 + sl] == doctest::Approx(b[2 + sl] + t * rate).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("structure of characteristics") {
  const CanonicalSplit s(free_step2(3), 1);
  const GroupSpecB& g = s.group();
  const GraphFunction psi = GraphFunction::scalar(cube(5, 3), [](std::span<const double> a) {
    return std::sin(a[0]) + 0.5 * a[2] - a[4] * a[1];
  });
  const Vec b{0.1, 0.2, -0.3, 0.4, 0.05};
  const double h = 1e-2;
  for (std::size_t j : {2u, 3u}) {
    const CharacteristicCurve c = exp_map(s, psi, j, b, 0.8, h);
    const Vec I = cumulative_integral(c.psi_values, c.h);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      for (std::size_t l = 0; l < 2; ++l) {
        const double want = l == j - 2 ? b[l] + static_cast<double>(i) * c.h : b[l];
        CHECK(c.states[i][l] == want);
      }
      for (std::size_t sl = 0; sl < g.n(); ++sl) {
        double acc = 0.0;
        for (std::size_t l = 2; l <= 3; ++l)
          if (l != j) acc += b[l - 2] * g.b(sl, j - 1, l - 1);
        const double want = b[2 + sl] + 0.5 * c.times[i] * acc + g.b(sl, j - 1, 0) * I[i];
        worst = std::max(worst, std::abs(c.states[i][2 + sl] - want));
      }
    }
    CHECK(worst <= 10 * std::pow(h, 4));
  }
}

TEST_CASE("reversibility") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction psi = registry(s, kSmooth[5], cube(2, 3));
  const Vec b{0.2, -0.4};
  for (double h : {1e-2, 1e-3}) {
    const CharacteristicCurve fwd = exp_map(s, psi, 2, b, 0.9, h);
    const CharacteristicCurve bwd = exp_map(s, psi, 2, fwd.states.back(), -0.9, h);
    CHECK(std::abs(bwd.states.back()[0] - b[0]) <= 1e-14);
    CHECK(std::abs(bwd.states.back()[1] - b[1]) <= 10 * std::pow(h, 4));
  }
}

TEST_CASE("curve escape reports the exit time") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction x2 = coordinate_function(s, cube(2, 1), "x2");
  try {
    exp_map(s, x2, 2, Vec{0.5, 0.0}, 1.0, 1e-2);
    FAIL("expected escape");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::curve_escape);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("two sided curve") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction x2 = coordinate_function(s, cube(2, 2), "x2");
  const CharacteristicCurve c = exp_map_two_sided(s, x2, 2, Vec{0.1, 0.2}, 0.5, 0.01);
  CHECK(c.times.size() == 101);
  CHECK(c.times[c.origin] == 0.0);
  CHECK(c.states[c.origin] == Vec{0.1, 0.2});
  CHECK(c.times.front() == doctest::Approx(-0.5));
  CHECK(c.times.back() == doctest::Approx(0.5));
}

TEST_CASE("cumulative integral") {
  // Exact for quadratics at every index.
  const double h = 0.1;
  Vec f;
  for (int i = 0; i <= 12; ++i) {
    const double t = i * h;
    f.push_back(3 * t * t - t + 2);
  }
  const Vec I = cumulative_integral(f, h);
  CHECK(I[0] == 0.0);
  for (int i = 1; i <= 12; ++i) {
    const double t = i * h;
    CHECK(I[i] == doctest::Approx(t * t * t - 0.5 * t * t + 2 * t).epsilon(1e-13));
  }
  // Smooth data converges with the step.
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const double hh = 1.0 / n;
    Vec g;
    for (int i = 0; i <= n; ++i) g.push_back(std::cos(i * hh));
    const Vec J = cumulative_integral(g, hh);
    double err = 0.0;
    for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(J[i] - std::sin(i * hh)));
    if (prev > 0.0) CHECK(err < prev / 6);
    prev = err;
  }
  CHECK(cumulative_integral(Vec{1.0}, 0.1) == Vec{0.0});
}

TEST_CASE("broad* residuals") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Box box = cube(2, 2);
  const GraphFunction x2 = coordinate_function(s, box, "x2");
  const GraphFunction one = constant_function(s, box, 1.0);
  const GraphFunction zero = constant_function(s, box, 0.0);
  CHECK(broad_star_residual(s, x2, one, Vec{0, 0}, 0.1, 10).residual <= 1e-8);
  CHECK(broad_star_residual(s, constant_function(s, box, 0.3), zero, Vec{0, 0}, 0.1, 5).residual <=
        1e-15);
  const BroadStarResult miss = broad_star_residual(s, x2, zero, Vec{0, 0}, 0.1, 10);
  CHECK(std::abs(miss.residual - 0.1) <= 1e-6);
  CHECK(miss.delta2 == 0.1);
  CHECK(miss.shrinks == 0);
  CHECK(miss.base_points > 0);

  for (const char* spec : kSmooth) {
    CAPTURE(spec);
    const GraphFunction psi = registry(s, spec, box);
    const GraphFunction w = derived_gradient(s, psi, box);
    CHECK(broad_star_residual(s, psi, w, Vec{0.2, -0.1}, 0.1, 10).residual <= 1e-6);
  }
}

TEST_CASE("broad* shrinks delta2 near the boundary") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Box box = cube(2, 1);
  const GraphFunction x2 = coordinate_function(s, box, "x2");
  const BroadStarResult r =
      broad_star_residual(s, x2, constant_function(s, box, 1.0), Vec{0.7, 0}, 0.4, 5);
  CHECK(r.shrinks >= 1);
  CHECK(r.delta2 < 0.4);
  CHECK(r.residual <= 1e-8);
  CHECK_THROWS_AS(broad_star_residual(s, x2, constant_function(s, box, 1.0), Vec{0.7, 0}, 0.4, 0),
                  Error);
}

TEST_CASE("characteristic derivative") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Box box = cube(2, 2);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Vec b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(characteristic_derivative(s, coordinate_function(s, box, "x2"), 2, b) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(characteristic_derivative(s, constant_function(s, box, 2.0), 2, b)) <= 1e-12);
    CHECK(std::abs(characteristic_derivative(s, coordinate_function(s, box, "y"), 2, b) + b[1]) <=
          1e-6);
  }
}

TEST_CASE("smooth intrinsic gradient") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Box box = cube(2, 2);
  CHECK(intrinsic_gradient_smooth(s, registry(s, kSmooth[3], box), Vec{1, 1})[0] ==
        doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(intrinsic_gradient_smooth(s, constant_function(s, box, 5.0), Vec{0.1, 0.2})[0]) <=
        1e-12);
  CHECK_THROWS_AS(intrinsic_gradient_smooth(s, constant_function(s, box, 5.0), Vec{2.0, 0.0}),
                  Error);

  for (const char* spec : kSmooth) {
    CAPTURE(spec);
    const GraphFunction psi = registry(s, spec, box);
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
      const Vec b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const double grad = intrinsic_gradient_smooth(s, psi, b)[0];
      CHECK(std::abs(grad - characteristic_derivative(s, psi, 2, b)) <= 1e-6);
      // Same number through the drift and the Euclidean gradient.
      const Vec drift = intrinsic_vector_field(s, psi, 2, b);
      const double e = 1e-5;
      double dd = 0.0;
      for (std::size_t c = 0; c < 2; ++c) {
        Vec p(b), m(b);
        p[c] += e;
        m[c] -= e;
        dd += drift[c] * (psi.scalar_at(p) - psi.scalar_at(m)) / (2 * e);
      }
      CHECK(std::abs(grad - dd) <= 1e-10);
    }
  }
}

TEST_CASE("derived gradient on F32") {
  const CanonicalSplit s(free_step2(3), 1);
  const Box box = cube(5, 2);
  const GraphFunction psi = registry(s, R"({"type":"coordinate","name":"y1"})", box);
  const GraphFunction w = derived_gradient(s, psi, box);
  CHECK(w.k() == 2);
  const Vec b{0.3, -0.2, 0.5, 0.1, 0.0};
  // D_2 y1 = -psi, D_3 y1 = 0.
  const Vec got = w(b);
  CHECK(got[0] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(std::abs(got[1]) <= 1e-9);
  CHECK(broad_star_residual(s, psi, w, b, 0.1, 3).residual <= 1e-6);
}
