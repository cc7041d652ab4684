#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "ktess/angles.hpp"
#include "ktess/counterexample.hpp"
#include "ktess/errors.hpp"
#include "ktess/events.hpp"

using namespace ktess;

namespace {

constexpr double kPi = std::numbers::pi;

// Sites strictly inside the circle through a, b, c, by a direct in-circle sign.
int enclosed(const WindowedSet& set, const ExactPoint& a, const ExactPoint& b,
             const ExactPoint& c) {
  auto lift = [](const ExactPoint& p, const ExactPoint& q) -> Rational {
    return (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  };
  const Rational orient = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  int count = 0;
  for (const auto& d : set.points) {
    const Rational ax = a.x - d.x, ay = a.y - d.y, bx = b.x - d.x, by = b.y - d.y;
    const Rational cx = c.x - d.x, cy = c.y - d.y;
    const Rational det = ax * (by * lift(c, d) - lift(b, d) * cy) -
                         ay * (bx * lift(c, d) - lift(b, d) * cx) +
                         lift(a, d) * (bx * cy - by * cx);
    if (sgn(det) * sgn(orient) > 0) ++count;
  }
  return count;
}

const WindowedSet& built() {
  static const WindowedSet set = build_counterexample(CounterexampleParams{});
  return set;
}

}  // namespace

TEST_CASE("bound values for the default parameters") {
  Bounds b = bound_values(CounterexampleParams{});
  CHECK(b.bound_13 == doctest::Approx(2.9186).epsilon(1e-4));
  CHECK(b.bound_14 == doctest::Approx(3.1125).epsilon(1e-4));
  CHECK(b.bound_14 > b.bound_15);
  CHECK(b.bound_15 > b.bound_13);
}

TEST_CASE("parameter validation") {
  CounterexampleParams p;
  p.k = 5;
  CHECK_THROWS_AS(validate(p), InvalidParams);
  p = {};
  p.tau = Rational(1, 4);
  CHECK_THROWS_AS(validate(p), InvalidParams);
  p = {};
  p.eps = 0;
  CHECK_THROWS_AS(validate(p), InvalidParams);
  p = {};
  p.eps = Rational(1, 2);
  CHECK_THROWS_AS(validate(p), InvalidParams);
}

TEST_CASE("satellites sit close to a site on a circle of depth k - 2") {
  const CounterexampleParams p;
  const WindowedSet& set = built();
  const std::size_t n = set.size() - 2;
  const ExactPoint& a1 = set.points[n];
  const ExactPoint& a2 = set.points[n + 1];
  std::size_t near = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (norm2(set.points[i] - a1) < norm2(set.points[near] - a1)) near = i;
  const ExactPoint& a = set.points[near];
  CHECK(norm2(a1 - a) <= p.eps * p.eps);
  CHECK(norm2(a2 - a) <= p.eps * p.eps);
  CHECK(enclosed(set, a1, a, a2) == p.k - 2);
  const double radius = std::sqrt(circumcircle(a1, a, a2).r2.get_d());
  const double angle = angle_at(a1, a, a2);
  CHECK(angle > kPi - 2.0 * p.eps.get_d() / radius);
  CHECK(angle > bound_values(p).bound_14);
}

TEST_CASE("the satellite set breaks monotonicity of the largest Delaunay angle") {
  const CounterexampleParams p;
  const WindowedSet& set = built();
  CounterexampleReport r = verify_counterexample(set, p);
  CHECK(r.satellite_circle_depth == p.k - 2);
  CHECK(r.omega_del_k > r.omega_del_k1);
  CHECK(r.omega_del_k > r.bounds.bound_14);
  CHECK(r.omega_del_k1 < r.bounds.bound_15);
  CHECK(r.pass);
  auto j = nlohmann::json::parse(counterexample_report_json(r, p));
  CHECK(j["pass"] == true);
  CHECK(j["k"] == p.k);
}

TEST_CASE("without satellites the largest angle stays below the lattice bound") {
  const CounterexampleParams p;
  const WindowedSet& set = built();
  WindowedSet base = set;
  base.points.resize(set.size() - 2);
  EventSet ev = enumerate_events(base, p.k);
  DepthTables t = depth_tables(ev, p.k);
  const double omega = extreme_angles(t, ev, Structure::Del, p.k).omega_max;
  CHECK(omega < bound_values(p).bound_13);
}

TEST_CASE("monotonicity report records the Voronoi increase as an observation") {
  const CounterexampleParams p;
  EventSet ev = enumerate_events(built(), p.k);
  MonotonicityReport rep = monotonicity_report(ev, 1, p.k + 1);
  CHECK(rep.generic);
  CHECK(rep.passed());
  CHECK(rep.find(Structure::Vor, p.k)->alpha_min < rep.find(Structure::Vor, p.k + 1)->alpha_min);
  bool seen = false;
  for (const auto& c : rep.checks) {
    if (c.name != "alpha vor non-increasing") continue;
    seen = true;
    CHECK(c.observation);
    CHECK(std::find(c.violations_at.begin(), c.violations_at.end(), p.k) != c.violations_at.end());
  }
  CHECK(seen);
}
