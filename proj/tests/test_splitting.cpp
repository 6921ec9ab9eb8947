#include "doctest.h"

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/function_registry.hpp"
#include "carnot/graph_function.hpp"
#include "carnot/norm_stats.hpp"
#include "carnot/random.hpp"
#include "carnot/splitting.hpp"

using namespace carnot;
using nlohmann::json;

namespace {

double max_abs_diff(const Point& a, const Point& b) {
  double d = 0.0;
  const Vec ca = a.coords(), cb = b.coords();
  for (std::size_t i = 0; i < ca.size(); ++i) d = std::max(d, std::abs(ca[i] - cb[i]));
  return d;
}

Box unit_box(std::size_t d) { return Box(Vec(d, -1.0), Vec(d, 1.0)); }

}  // namespace

TEST_CASE("canonical split requires abelian V") {
  CHECK_NOTHROW(CanonicalSplit(heisenberg(1), 1));
  CHECK_NOTHROW(CanonicalSplit(free_step2(3), 1));
  CHECK_THROWS_AS(CanonicalSplit(free_step2(3), 2), Error);
  CHECK_THROWS_AS(CanonicalSplit(heisenberg(1), 2), Error);
  CHECK_THROWS_AS(CanonicalSplit(heisenberg(1), 0), Error);
  // In H^2 the pair (x1, x2) commutes.
  const CanonicalSplit s(heisenberg(2), 2);
  CHECK(s.param_dim() == 3);
}

TEST_CASE("projection by hand") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Projection pr = project(s, Point({2, 3}, {1}));
  CHECK(pr.w == Point({0, 3}, {-2}));
  CHECK(pr.v == Point({2, 0}, {0}));

  const Point w({0, 0.4}, {-1.5});
  const Projection pw = project(s, w);
  CHECK(pw.w == w);
  CHECK(pw.v == Point::zero(2, 1));
}

TEST_CASE("projection round trip") {
  for (const GroupSpecB& g : {heisenberg(1), heisenberg(2), free_step2(3)}) {
    const CanonicalSplit s(g, 1);
    CHECK(projection_roundtrip_error(s, 1000, 5) <= 1e-12);
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
      const Point p = random_point(g, rng, 2.0);
      const Projection pr = project(s, p);
      CHECK(max_abs_diff(compose(g, pr.w, pr.v), p) <= 1e-12);
      CHECK(pr.w.x[0] == 0.0);
    }
  }
}

TEST_CASE("graph point by hand") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction two = constant_function(s, unit_box(2), 2.0);
  CHECK(graph_point(s, two, Vec{1, 0}) == Point({2, 1}, {1}));
  const GraphFunction zero = constant_function(s, unit_box(2), 0.0);
  CHECK(graph_point(s, zero, Vec{0.3, 0.2}) == s.embed(Vec{0.3, 0.2}));

  const GraphFunction x2 = coordinate_function(s, unit_box(2), "x2");
  const Vec a{0.5, -0.25};
  const Projection pr = project(s, graph_point(s, x2, a));
  CHECK(pr.v == s.lift(x2(a)));
}

TEST_CASE("quasi distance") {
  const CanonicalSplit s(heisenberg(1).with_epsilon2(0.8), 1);
  const GraphFunction three = constant_function(s, unit_box(2), 3.0);
  const Vec a{0, 0}, b{1, 0};
  CHECK(quasi_distance(s, three, a, b) == doctest::Approx(std::max(1.0, 0.8 * std::sqrt(3.0))));
  CHECK(quasi_distance(s, three, a, a) == 0.0);
  const GraphFunction zero = constant_function(s, unit_box(2), 0.0);
  const Vec c{0.3, -0.2}, d{-0.1, 0.6};
  CHECK(quasi_distance(s, zero, c, d) == doctest::Approx(w_distance(s, c, d)).epsilon(1e-15));
}

TEST_CASE("shift graph") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GroupSpecB& g = s.group();
  const GraphFunction zero = constant_function(s, unit_box(2), 0.0);

  const GraphFunction same = shift_graph(s, zero, Point::zero(2, 1));
  CHECK(same(Vec{0.2, 0.3})[0] == 0.0);

  const GraphFunction one = shift_graph(s, zero, Point({1, 0}, {0}));
  for (double x : {-0.5, 0.0, 0.5})
    for (double y : {-0.3, 0.4}) CHECK(one(Vec{x, y})[0] == doctest::Approx(1.0).epsilon(1e-15));

  const GraphFunction psi = make_function(
      json::parse(R"({"type":"poly","terms":[{"coef":0.5,"powers":[2,0]},{"coef":0.3,"powers":[1,1]}]})"),
      s, unit_box(2));
  Rng rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const Point q = random_point(g, rng, 0.3);
    const GraphFunction shifted = shift_graph(s, psi, q);
    for (int i = 0; i < 40; ++i) {
      const Vec b{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
      const Point target = compose(g, q, graph_point(s, psi, b));
      const Vec a = s.params(project(s, target).w);
      CHECK(max_abs_diff(graph_point(s, shifted, a), target) <= 1e-9);
    }
  }
}

TEST_CASE("dilate graph") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GroupSpecB& g = s.group();
  const GraphFunction c = constant_function(s, unit_box(2), 0.7);
  const GraphFunction c3 = dilate_graph(s, c, 3.0);
  CHECK(c3(Vec{2.5, 8.0})[0] == doctest::Approx(2.1));
  const GraphFunction c1 = dilate_graph(s, c, 1.0);
  CHECK(c1(Vec{0.1, 0.2})[0] == 0.7);
  CHECK_THROWS_AS(dilate_graph(s, c, 0.0), Error);

  const GraphFunction psi = make_function(
      json::parse(R"({"type":"linear","coefficients":[0.4,-0.3],"offset":0.1})"), s, unit_box(2));
  Rng rng(2);
  for (double lam : {0.5, 2.0}) {
    const GraphFunction pl = dilate_graph(s, psi, lam);
    for (int i = 0; i < 30; ++i) {
      const Vec b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Point target = dilate(g, lam, graph_point(s, psi, b));
      const Vec a = s.params(project(s, target).w);
      CHECK(max_abs_diff(graph_point(s, pl, a), target) <= 1e-12);
    }
  }
}

TEST_CASE("intrinsic linear maps") {
  const CanonicalSplit s(heisenberg(1), 1);
  const IntrinsicLinearMap L(1, 1, {2.0});
  CHECK(apply_intrinsic_linear(s, L, Point({0, 3}, {7}))[0] == 6.0);
  CHECK(apply_intrinsic_linear(s, L, Point({0, 0}, {7}))[0] == 0.0);

  const CanonicalSplit f(free_step2(3), 1);
  const IntrinsicLinearMap M(1, 2, {1.5, -2.0});
  CHECK(M.op_norm() == doctest::Approx(2.5));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Point b = f.embed(Vec{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const double horiz = std::hypot(b.x[1], b.x[2]);
    CHECK(std::abs(apply_intrinsic_linear(f, M, b)[0]) <= M.op_norm() * horiz * (1 + 1e-14));
  }
  CHECK(intrinsic_linear_subgroup_defect(f, M, 1000, 1) <= 1e-9);
  CHECK(intrinsic_linear_subgroup_defect(s, L, 1000, 1) <= 1e-9);
}

TEST_CASE("c0 estimate is positive") {
  for (const GroupSpecB& g : {heisenberg(1), heisenberg(2), free_step2(3)}) {
    const double c0 = c0_estimate(CanonicalSplit(g, 1), 10000, 7);
    CHECK(c0 > 0.0);
    CHECK(c0 <= 1.0);
  }
}

TEST_CASE("intrinsic Lipschitz estimates") {
  const CanonicalSplit s(heisenberg(1), 1);
  const Box box = unit_box(2);
  const std::vector<Vec> grid = box_grid(box, 9);
  CHECK(intrinsic_lipschitz_estimate(s, constant_function(s, box, 0.0), grid) == 0.0);
  const double lx = intrinsic_lipschitz_estimate(s, coordinate_function(s, box, "x2"), grid);
  CHECK(lx > 0.0);
  CHECK(lx <= 1.0 + 1e-12);

  const GraphFunction root = make_function(json::parse(R"({"type":"sqrt_abs","coordinate":"x2"})"),
                                           s, box);
  double prev = 0.0;
  for (std::size_t n : {5u, 9u, 17u, 33u}) {
    const double est = intrinsic_lipschitz_estimate(s, root, box_grid(box, n));
    CHECK(est > prev);
    prev = est;
  }
  CHECK_THROWS_AS(intrinsic_lipschitz_estimate(s, root, {Vec{0, 0}, Vec{0, 0}}), Error);

  const double hb = holder_half_bound(s, coordinate_function(s, box, "x2"), grid);
  CHECK(std::isfinite(hb));
  CHECK(hb <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("grid functions interpolate multilinearly") {
  const Vec ax{0.0, 0.5, 1.0}, ay{-1.0, 1.0};
  // f = 2 + x - 3 y + x y sampled on the grid; bilinear data is reproduced exactly.
  Vec values;
  for (double x : ax)
    for (double y : ay) values.push_back(2 + x - 3 * y + x * y);
  const GraphFunction f = GraphFunction::grid({ax, ay}, values);
  CHECK(f.kind() == GraphFunction::Kind::grid);
  for (double x : {0.0, 0.2, 0.77, 1.0})
    for (double y : {-1.0, 0.1, 0.9})
      CHECK(f.scalar_at(Vec{x, y}) == doctest::Approx(2 + x - 3 * y + x * y).epsilon(1e-14));
  CHECK_THROWS_AS(f(Vec{1.1, 0.0}), Error);
  CHECK_THROWS_AS(GraphFunction::grid({Vec{0.0, 0.0}, ay}, Vec(4, 0.0)), Error);
  CHECK_THROWS_AS(f.restricted(Box({-0.5, 0.0}, {0.5, 0.5})), Error);
  CHECK_NOTHROW(f.restricted(Box({0.1, 0.0}, {0.5, 0.5})));
}

TEST_CASE("closed forms reject non-finite values and outside points") {
  const CanonicalSplit s(heisenberg(1), 1);
  const GraphFunction bad = GraphFunction::scalar(unit_box(2), [](std::span<const double> a) {
    return 1.0 / a[0];
  });
  CHECK_THROWS_AS(bad(Vec{0.0, 0.0}), Error);
  CHECK_THROWS_AS(constant_function(s, unit_box(2), 1.0)(Vec{2.0, 0.0}), Error);
}

TEST_CASE("registry") {
  const CanonicalSplit s(free_step2(3), 1);
  CHECK(param_names(s) == std::vector<std::string>{"x2", "x3", "y1", "y2", "y3"});
  CHECK(param_index(s, "y2") == 3);
  CHECK_THROWS_AS(param_index(s, "y"), Error);
  const CanonicalSplit h(heisenberg(1), 1);
  CHECK(param_index(h, "y") == 1);

  const Box box = unit_box(2);
  const Vec a{0.3, -0.6};
  CHECK(make_function(json::parse(R"({"type":"constant","value":4})"), h, box)(a)[0] == 4.0);
  CHECK(make_function(json::parse(R"({"type":"coordinate","name":"y"})"), h, box)(a)[0] == -0.6);
  CHECK(make_function(json::parse(R"({"type":"linear","coefficients":[2,1],"offset":1})"), h, box)(
            a)[0] == doctest::Approx(1.0));
  CHECK(make_function(json::parse(R"({"type":"poly","terms":[{"coef":2,"powers":[2,1]}]})"), h,
                      box)(a)[0] == doctest::Approx(2 * 0.09 * -0.6));
  CHECK(make_function(json::parse(R"({"type":"sqrt_abs","coordinate":"y"})"), h, box)(a)[0] ==
        doctest::Approx(std::sqrt(0.6)));
  const GraphFunction gr = make_function(
      json::parse(R"({"type":"grid","axes":[[0,1],[0,1]],"values":[0,1,2,3]})"), h, box);
  CHECK(gr(Vec{0.5, 0.5})[0] == doctest::Approx(1.5));
  CHECK(is_polynomial_spec(json::parse(R"({"type":"poly","terms":[]})")));
  CHECK_FALSE(is_polynomial_spec(json::parse(R"({"type":"sqrt_abs","coordinate":"x2"})")));
  CHECK_THROWS_AS(make_function(json::parse(R"({"type":"spline"})"), h, box), Error);
  CHECK_THROWS_AS(make_function(json::parse(R"({"type":"linear","coefficients":[1]})"), h, box),
                  Error);

  const GraphFunction v = make_vector_function(
      json::parse(R"([{"type":"constant","value":1},{"type":"coordinate","name":"x2"}])"), h, box);
  CHECK(v.k() == 2);
  CHECK(v(a) == Vec{1.0, 0.3});
}

TEST_CASE("box grid ordering") {
  const std::vector<Vec> g = box_grid(Box({0, 10}, {1, 11}), 3);
  REQUIRE(g.size() == 9);
  CHECK(g[0] == Vec{0, 10});
  CHECK(g[1] == Vec{0, 10.5});
  CHECK(g[3] == Vec{0.5, 10});
  CHECK(g[8] == Vec{1, 11});
}
