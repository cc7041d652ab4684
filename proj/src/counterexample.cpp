#include "ktess/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "ktess/angles.hpp"
#include "ktess/errors.hpp"
#include "ktess/events.hpp"

namespace ktess {

namespace {

constexpr double kPi = std::numbers::pi;

Bounds raw_bounds(int k, double tau, double eps) {
  const double h = std::sqrt(2.0) / 2.0;
  Bounds b;
  b.bound_13 = kPi - (1.0 - 2.0 * tau) / (std::sqrt(k / kPi) + h + tau);
  b.bound_14 = kPi - 2.0 * eps / (std::sqrt((k - 2) / kPi) - h - tau);
  b.bound_15 = kPi - ((1.0 - 2.0 * tau - eps) / 2.0) / (std::sqrt(k / kPi) + h + tau);
  return b;
}

// Directions with rational unit length, tried in order.
const int kDirections[][3] = {{3, 4, 5},   {4, 3, 5},   {5, 12, 13}, {12, 5, 13},
                              {8, 15, 17}, {15, 8, 17}, {-3, 4, 5},  {-4, 3, 5}};

std::size_t nearest_site(const std::vector<ExactPoint>& pts, std::size_t count,
                         const ExactPoint& q) {
  std::size_t best = 0;
  Rational best_d = norm2(pts[0] - q);
  for (std::size_t i = 1; i < count; ++i) {
    Rational d = norm2(pts[i] - q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Nearest point of the 2^-32 grid, which keeps the scaled kernel in range.
Rational snap(const Rational& v) {
  const mpz_class scale = mpz_class(1) << kGridBits;
  mpz_class q;
  Rational shifted = v * scale + Rational(1, 2);
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r(q, scale);
  r.canonicalize();
  return r;
}

}  // namespace

void validate(const CounterexampleParams& p) {
  if (p.k < 6) throw InvalidParams("counterexample needs k >= 6");
  if (sgn(p.tau) <= 0 || p.tau >= Rational(1, 4))
    throw InvalidParams("counterexample needs 0 < tau < 1/4");
  if (sgn(p.eps) <= 0) throw InvalidParams("counterexample needs eps > 0");
  Bounds b = raw_bounds(p.k, p.tau.get_d(), p.eps.get_d());
  if (!(b.bound_14 > b.bound_15)) throw InvalidParams("eps too large to separate the bounds");
}

Bounds bound_values(const CounterexampleParams& p) {
  validate(p);
  return raw_bounds(p.k, p.tau.get_d(), p.eps.get_d());
}

WindowedSet build_counterexample(const CounterexampleParams& p) {
  validate(p);
  const int k = p.k;
  // Block size: the satellite circle has radius about sqrt(k / pi), and
  // circles up to depth k around it must fit.
  int copies = 2 * static_cast<int>(std::ceil(2.0 * std::sqrt((k + 1) / kPi) + 4.0)) + 1;
  std::string last_failure = "no attempt";
  for (int grow = 0; grow < 4; ++grow, copies += 4) {
    WindowedSet lattice = perturbed_lattice(copies, p.tau, p.seed, 1);
    const std::size_t n = lattice.size();
    const ExactPoint mid(Rational(1, 2), Rational(1, 2));
    const std::size_t ai = nearest_site(lattice.points, n, mid);
    const ExactPoint a = lattice.points[ai];
    for (const auto& dir : kDirections) {
      const ExactPoint v(Rational(dir[0], dir[2]), Rational(dir[1], dir[2]));
      // The circle through a centered at a + s v encloses x iff s exceeds hit(x).
      std::vector<Rational> hits;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == ai) continue;
        const ExactPoint d = lattice.points[i] - a;
        const Rational vd = dot(v, d);
        if (sgn(vd) > 0) hits.push_back(norm2(d) / (2 * vd));
      }
      std::sort(hits.begin(), hits.end());
      if (static_cast<int>(hits.size()) < k - 1) continue;
      const Rational& lo = hits[static_cast<std::size_t>(k - 3)];
      const Rational& hi = hits[static_cast<std::size_t>(k - 2)];
      if (lo == hi) {
        last_failure = "tied enclosure radii along the search direction";
        continue;
      }
      const Rational s = (lo + hi) / 2;
      const ExactPoint c = a + s * v;
      const ExactPoint w = a - c;
      for (int jitter = 0; jitter < kGenericityRetries; ++jitter) {
        // Rotation by 2 atan(t) about c, snapped to the grid; the chord to a is
        // about 2 s t <= eps and is rechecked exactly.
        const Rational t = p.eps / (2 * s) * Rational(97 - jitter, 97);
        const Rational den = 1 + t * t;
        const Rational cs = (1 - t * t) / den, sn = 2 * t / den;
        WindowedSet set = lattice;
        set.points.emplace_back(snap(c.x + cs * w.x - sn * w.y), snap(c.y + sn * w.x + cs * w.y));
        set.points.emplace_back(snap(c.x + cs * w.x + sn * w.y), snap(c.y - sn * w.x + cs * w.y));
        const Rational margin = s + Rational(1, 2);
        set.inner_window = Rect{c.x - margin, c.y - margin, c.x + margin, c.y + margin};
        if (!set.outer_window.contains(set.inner_window) || usable_order(set, k) < k + 1) {
          last_failure = "window too small for the satellite circle";
          break;
        }
        const ExactPoint& a1 = set.points[n];
        const ExactPoint& a2 = set.points[n + 1];
        if (norm2(a1 - a) > p.eps * p.eps || norm2(a2 - a) > p.eps * p.eps) {
          last_failure = "satellite farther than eps";
          continue;
        }
        if (depth(set, circumcircle(a1, a, a2)).p != k - 2) {
          last_failure = "satellite circle has the wrong depth";
          continue;
        }
        if (!genericity_report(set, k).is_generic) {
          last_failure = "cocircular sites after adding satellites";
          continue;
        }
        set.tag = "counterexample k=" + std::to_string(k) + " tau=" + to_string(p.tau) +
                  " eps=" + to_string(p.eps) + " satellites=" + std::to_string(n) + "," +
                  std::to_string(n + 1);
        set.seed = p.seed;
        return set;
      }
      if (last_failure == "window too small for the satellite circle") break;
    }
  }
  throw ConstructionFailure("counterexample construction failed: " + last_failure);
}

CounterexampleReport verify_counterexample(const WindowedSet& set,
                                           const CounterexampleParams& p) {
  validate(p);
  if (set.size() < 3) throw InvalidParams("counterexample set too small");
  CounterexampleReport r;
  r.bounds = bound_values(p);
  const std::size_t n = set.size() - 2;
  const ExactPoint& a1 = set.points[n];
  const ExactPoint& a2 = set.points[n + 1];
  const ExactPoint& a = set.points[nearest_site(set.points, n, a1)];
  const ExactCircle sat = circumcircle(a1, a, a2);
  r.satellite_circle_depth = depth(set, sat).p;
  r.satellite_angle = angle_at(a1, a, a2);
  r.satellite_radius = std::sqrt(sat.r2.get_d());

  EventSet events = enumerate_events(set, p.k);
  DepthTables tables = depth_tables(events, p.k);
  r.omega_del_k = extreme_angles(tables, events, Structure::Del, p.k).omega_max;
  r.omega_del_k1 = extreme_angles(tables, events, Structure::Del, p.k + 1).omega_max;
  r.pass = r.omega_del_k > r.omega_del_k1 && r.omega_del_k > r.bounds.bound_14 &&
           r.omega_del_k1 < r.bounds.bound_15;
  return r;
}

std::string counterexample_report_json(const CounterexampleReport& r,
                                       const CounterexampleParams& p) {
  nlohmann::json j;
  j["k"] = p.k;
  j["tau"] = to_string(p.tau);
  j["eps"] = to_string(p.eps);
  j["seed"] = p.seed;
  j["omega_del_k"] = r.omega_del_k;
  j["omega_del_k1"] = r.omega_del_k1;
  j["bound_13"] = r.bounds.bound_13;
  j["bound_14"] = r.bounds.bound_14;
  j["bound_15"] = r.bounds.bound_15;
  j["satellite_circle_depth"] = r.satellite_circle_depth;
  j["satellite_angle"] = r.satellite_angle;
  j["satellite_radius"] = r.satellite_radius;
  j["pass"] = r.pass;
  return j.dump();
}

}  // namespace ktess
