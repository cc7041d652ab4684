// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "ktess/angles.hpp"
#include "ktess/checks.hpp"
#include "ktess/counterexample.hpp"
#include "ktess/distributions.hpp"
#include "ktess/errors.hpp"
#include "ktess/events.hpp"
#include "ktess/pointsets.hpp"
#include "ktess/tilings.hpp"

using namespace ktess;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kSlack = 1e-12;          // monotonicity and depth-table inequalities
constexpr double kFiniteTol = 1e-6;       // equilateral-plus-barycenter angles
constexpr double kTurnTol = 1e-9;         // Brillouin vertex sums
constexpr double kMassTol = 1e-9;         // density normalization
constexpr double kConcaveTol = 1e-12;     // h'' upper bound
constexpr double kFiniteDiffTol = 1e-5;   // h'' against central differences
constexpr double kStandardErrors = 3.0;   // vertex densities
constexpr int kBins = 64;
constexpr int kThresholdReplicates = 20;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail << std::setprecision(10);
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  std::cout << "criterion " << std::setw(2) << id << ": " << (o.passed ? "PASS" : "FAIL") << "  "
            << title << " (" << std::fixed << std::setprecision(1) << seconds_since(t0) << " s)"
            << std::defaultfloat << "\n   " << o.detail.str() << std::endl;
  return o.passed;
}

// Smallest odd block size whose window supports enumeration up to depth_cap.
template <class Make>
WindowedSet fitted(Make make, int depth_cap, int copies = 3) {
  for (;; copies += 2) {
    WindowedSet s = make(copies);
    if (usable_order(s, depth_cap) >= depth_cap + 1) return s;
    if (copies > 101) throw WindowTooSmall(depth_cap + 1, usable_order(s, depth_cap));
  }
}

void monotonicity_generic(Outcome& o, const std::string& label, const WindowedSet& set) {
  EventSet ev = enumerate_events(set, 29);
  MonotonicityReport rep = monotonicity_report(ev, 2, 30);
  o.require(rep.generic, label + " generic");
  std::size_t families = 0;
  for (const auto& c : rep.checks) {
    if (c.observation) continue;
    ++families;
    o.require(c.passed, label + " " + c.name);
  }
  o.require(families == 6, label + " six families checked");
  o.detail << label << ": " << set.size() << " sites, " << ev.size() << " events, " << families
           << " families; ";
}

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  monotonicity_generic(o, "non-cocircular lattice", non_cocircular_lattice(41, 1));
  WindowedSet rp = fitted([](int c) { return random_periodic(50, c, 1); }, 29);
  monotonicity_generic(o, "random periodic n0=50", rp);
  o.require(seconds_since(t0) < 300.0, "runtime under 5 min");
}

void criterion_2(Outcome& o) {
  EventSet z = enumerate_events(integer_lattice(41), 29);
  MonotonicityReport rep = monotonicity_report(z, 2, 30);
  o.require(!rep.generic, "integer lattice reported non-generic");
  std::set<std::string> checked;
  for (const auto& c : rep.checks) {
    if (c.observation) continue;
    checked.insert(c.name);
    o.require(c.passed, c.name);
  }
  o.require(checked == std::set<std::string>{"alpha bri non-increasing", "omega igl non-decreasing"},
            "exactly the non-generic families checked");
  auto d5 = degenerate_delaunay_angles(z, 5);
  auto d6 = degenerate_delaunay_angles(z, 6);
  const double m5 = *std::min_element(d5.begin(), d5.end());
  const double m6 = *std::min_element(d6.begin(), d6.end());
  o.require(m5 < m6, "min angle Del_5 < Del_6");
  o.detail << z.size() << " events; min angle Del_5 " << m5 << ", Del_6 " << m6;
}

void criterion_3(Outcome& o) {
  EventSet z = enumerate_events(integer_lattice(15), 10);
  const ExactPoint center(Rational(1, 2), Rational(1, 2));
  const Rational r2(5, 2);
  auto at_center = [&](const Tiling& t, int& degree) {
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
      const CircleEvent& e = z.events[t.vertex_event[i]];
      if (e.circle.center == center && e.circle.r2 == r2) {
        degree = t.degree[i];
        return true;
      }
    }
    return false;
  };
  for (int k = 1; k <= 11; ++k) {
    int degree = 0;
    const bool found = at_center(voronoi_tessellation(z, k), degree);
    o.require(found == (k >= 5), "Vor_" + std::to_string(k) + " vertex presence");
    if (found) o.require(degree == 8, "Vor_" + std::to_string(k) + " degree 8");
  }
  int degree = 0;
  o.require(at_center(brillouin_tessellation(z, 6), degree) && degree == 16, "Bri_6 degree 16");
  o.detail << "Vor_5..Vor_11 degree 8 at (1/2,1/2); Bri_6 degree " << degree;
}

void criterion_4(Outcome& o) {
  EventSet ev = enumerate_events(finite_example_triangle_barycenter(), 1);
  DepthTables t = depth_tables(ev, 1);
  o.require(t.alpha[0] < t.alpha[1], "alpha_0 < alpha_1");
  o.require(std::fabs(t.alpha[0] - kPi / 6) <= kFiniteTol, "alpha_0 = pi/6");
  o.require(std::fabs(t.alpha[1] - kPi / 3) <= kFiniteTol, "alpha_1 = pi/3");
  o.detail << "alpha_0 " << t.alpha[0] << ", alpha_1 " << t.alpha[1];
}

void criterion_5(Outcome& o) {
  constexpr int kDepth = 10;
  std::size_t comparisons = 0;
  // beta_l >= alpha_l on `small`, and alpha_l on `small` >= alpha_{l+1} on `wide`.
  auto compare = [&](const std::string& label, const DepthTables& small, const DepthTables& wide) {
    for (int l = 0; l <= kDepth; ++l) {
      if (!small.populated(l)) continue;
      o.require(small.beta[l] >= small.alpha[l] - kSlack,
                label + " beta >= alpha at " + std::to_string(l));
      ++comparisons;
      if (l < kDepth && wide.populated(l + 1)) {
        o.require(small.alpha[l] >= wide.alpha[l + 1] - kSlack,
                  label + " alpha non-increasing at " + std::to_string(l));
        ++comparisons;
      }
    }
  };
  int inputs = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    // Periodic samples: the unit cell sees every circle up to translation.
    std::pair<std::string, std::function<WindowedSet(int)>> periodic[] = {
        {"random periodic " + std::to_string(s), [s](int c) { return random_periodic(50, c, s); }},
        {"poisson " + std::to_string(s), [s](int c) { return poisson_torus(400.0, c, s); }},
        {"non-cocircular " + std::to_string(s),
         [s](int c) { return non_cocircular_lattice(c, s, kDepth); }}};
    for (auto& [label, make] : periodic) {
      EventSet ev = enumerate_events(fitted(make, kDepth, label[0] == 'n' ? 9 : 3), kDepth);
      DepthTables t = depth_tables(ev, kDepth);
      compare(label, t, t);
      ++inputs;
    }
    // The perturbed lattice is not periodic: a smaller angle one level deeper
    // may sit on a circle centered outside the unit cell, so the deeper level
    // is read from a wider window of the same sample.
    const Rect wide{Rational(-3), Rational(-3), Rational(4), Rational(4)};
    WindowedSet pl = fitted(
        [&](int c) {
          return with_inner_window(perturbed_lattice(c, Rational(1, 5), s, kDepth), wide);
        },
        kDepth, 15);
    WindowedSet cell = with_inner_window(pl, Rect{Rational(0), Rational(0), Rational(1), Rational(1)});
    EventSet ev_cell = enumerate_events(cell, kDepth);
    EventSet ev_wide = enumerate_events(pl, kDepth);
    compare("perturbed " + std::to_string(s), depth_tables(ev_cell, kDepth),
            depth_tables(ev_wide, kDepth));
    ++inputs;
  }
  o.detail << inputs << " inputs, depths 0.." << kDepth << ", " << comparisons << " inequalities";
}

void criterion_6(Outcome& o) {
  std::size_t edges = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    WindowedSet set = random_periodic(12, 5, s);
    EventSet ev = enumerate_events(set, 3);
    for (int k = 1; k <= 3; ++k) {
      DualReport a = check_orthogonal_dual(delaunay_mosaic(ev, k), voronoi_tessellation(ev, k));
      DualReport b = check_orthogonal_dual(iglesias_mosaic(ev, k), brillouin_tessellation(ev, k));
      const std::string tag = "seed " + std::to_string(s) + " k " + std::to_string(k);
      o.require(a.ok() && a.checked > 0, tag + " Del/Vor");
      o.require(b.ok() && b.checked > 0, tag + " Igl/Bri");
      edges += a.checked + b.checked;
    }
  }
  o.detail << edges << " interior edges checked exactly, no violations";
}

void criterion_7(Outcome& o) {
  const auto t0 = Clock::now();
  std::size_t tiles = 0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    WindowedSet set = random_finite(30, s, 10);
    EventSet ev = enumerate_events(set, 3);
    for (int k = 1; k <= 3; ++k) {
      const std::string tag = "seed " + std::to_string(s) + " k " + std::to_string(k);
      Tiling del = delaunay_mosaic(ev, k);
      Tiling igl = iglesias_mosaic(ev, k);
      o.require(same_tiles(del, lifted_hull_oracle(subset_sites(set.points, k, false),
                                                   set.outer_window)),
                tag + " Del");
      o.require(same_tiles(igl, lifted_hull_oracle(subset_sites(set.points, k, true),
                                                   set.outer_window)),
                tag + " Igl");
      tiles += del.tiles.size() + igl.tiles.size();
    }
  }
  o.require(seconds_since(t0) < 60.0, "runtime under 1 min");
  o.detail << "3 sets of 30 sites, " << tiles << " tiles identical to the lifted hull";
}

void criterion_8(Outcome& o) {
  // Every mid tile is centrally symmetric on generic periodic samples.
  std::size_t mids = 0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    EventSet ev = enumerate_events(random_periodic(12, 5, s), 5);
    for (int k = 2; k <= 5; ++k) {
      Tiling g = iglesias_mosaic(ev, k);
      for (const auto& tile : g.tiles) {
        if (tile.age != Age::Mid) continue;
        ++mids;
        bool symmetric = tile.cycle.size() == 6;
        for (int i = 0; symmetric && i < 3; ++i)
          symmetric = g.vertices[tile.cycle[i]] + g.vertices[tile.cycle[i + 3]] ==
                      g.vertices[tile.cycle[0]] + g.vertices[tile.cycle[3]];
        o.require(symmetric, "mid tile symmetry");
      }
    }
  }
  // Single triangle: Igl_1 is the triangle, Igl_2 the hexagon through the edge
  // trisection points, Igl_3 the triangle scaled by -1/5 about the centroid.
  const ExactPoint a(0, 0), b(Rational(7, 2), Rational(1, 3)), c(Rational(1, 5), Rational(3));
  WindowedSet tri;
  tri.points = {a, b, c};
  tri.finite = true;
  tri.inner_window = tri.outer_window = Rect{Rational(0), Rational(0), Rational(7, 2), Rational(3)};
  EventSet ev = enumerate_events(tri, 2);
  using PSet = std::set<ExactPoint, PointLess>;
  auto verts = [](const Tiling& t) {
    PSet out;
    for (const auto& tile : t.tiles)
      for (std::size_t v : tile.cycle) out.insert(t.vertices[v]);
    return out;
  };
  Tiling i1 = iglesias_mosaic(ev, 1), i2 = iglesias_mosaic(ev, 2), i3 = iglesias_mosaic(ev, 3);
  o.require(i1.tiles.size() == 1 && verts(i1) == PSet{a, b, c}, "Igl_1 triangle");
  PSet trisect;
  for (auto [p, q] : {std::pair{a, b}, {b, c}, {c, a}}) {
    trisect.insert((Rational(2) * p + q) / Rational(3));
    trisect.insert((p + Rational(2) * q) / Rational(3));
  }
  o.require(i2.tiles.size() == 1 && i2.tiles[0].age == Age::Mid && verts(i2) == trisect,
            "Igl_2 trisection hexagon");
  const ExactPoint g = (a + b + c) / Rational(3);
  PSet scaled;
  for (const ExactPoint& p : {a, b, c}) scaled.insert(g - Rational(1, 5) * (p - g));
  o.require(i3.tiles.size() == 1 && i3.tiles[0].age == Age::Old && verts(i3) == scaled,
            "Igl_3 triangle scaled by -1/5");
  o.detail << mids << " mid tiles symmetric; triangle, trisection hexagon and -1/5 triangle exact";
}

void turn_sums(Outcome& o, const EventSet& ev, const std::string& label, int k_max,
               std::size_t& vertices, double& worst) {
  for (const auto& e : ev.events)
    for (int k = e.depth_p + 1; k <= e.depth_p + e.n() + 1 && k <= k_max; ++k) {
      double sum = 0;
      for (const auto& va : brillouin_vertex_angles(ev, e, k)) sum += va.value;
      worst = std::max(worst, std::fabs(sum - 2 * kPi));
      ++vertices;
      if (std::fabs(sum - 2 * kPi) > kTurnTol) o.require(false, label + " vertex sum");
    }
}

void criterion_9(Outcome& o) {
  std::size_t vertices = 0;
  double worst = 0;
  EventSet p = enumerate_events(perturbed_lattice(11, Rational(1, 5), 3, 8), 8);
  turn_sums(o, p, "perturbed", p.k_max_usable, vertices, worst);
  EventSet z = enumerate_events(integer_lattice(15), 8);
  turn_sums(o, z, "integer lattice", z.k_max_usable, vertices, worst);
  o.detail << vertices << " interior vertices (generic and integer lattice), largest error "
           << worst;
}

void criterion_10(Outcome& o) {
  const auto t0 = Clock::now();
  for (MilesKind kind : {MilesKind::F, MilesKind::G, MilesKind::H}) {
    const double mass = miles_integral(kind, 0.0, kPi);
    o.require(std::fabs(mass - 1.0) <= kMassTol, "unit mass of " + miles_name(kind));
  }
  double worst_h2 = -1e300, worst_fd = 0;
  const double step = 1e-4;
  for (int i = 0; i <= 2000; ++i) {
    const double t = kPi * i / 2000.0;
    worst_h2 = std::max(worst_h2, h_second_derivative(t));
    if (t - step < 0 || t + step > kPi) continue;
    const double fd = (miles_density(MilesKind::H, t + step) - 2 * miles_density(MilesKind::H, t) +
                       miles_density(MilesKind::H, t - step)) /
                      (step * step);
    worst_fd = std::max(worst_fd, std::fabs(fd - h_second_derivative(t)));
  }
  o.require(worst_h2 <= kConcaveTol, "h concave");
  o.require(worst_fd <= kFiniteDiffTol, "h'' matches finite differences");
  o.detail << "max h'' " << worst_h2 << ", finite-difference gap " << worst_fd << "; ";

  WindowedSet set = fitted([](int c) { return poisson_torus(400.0, c, 1); }, 29);
  EventSet ev = enumerate_events(set, 29);
  const std::pair<Structure, MilesKind> pairs[] = {
      {Structure::Del, MilesKind::F}, {Structure::Vor, MilesKind::G}, {Structure::Bri, MilesKind::H}};
  for (int k : {2, 6, 15, 30}) {
    for (auto [m, kind] : pairs) {
      std::vector<double> values;
      for (const auto& s : structure_angles(ev, m, k)) values.push_back(s.value);
      FitReport fit = fit_report(empirical_density(values, kBins), kind);
      const double threshold =
          self_consistency_threshold(kind, values.size(), kBins, kThresholdReplicates,
                                     static_cast<std::uint64_t>(1000 * k + static_cast<int>(kind)));
      const std::string tag = structure_name(m) + "_" + std::to_string(k);
      o.require(fit.l1 < threshold, tag + " L1 below threshold");
      o.detail << tag << " L1 " << std::setprecision(4) << fit.l1 << "/" << threshold << " ";
    }
  }
  o.require(seconds_since(t0) < 600.0, "runtime under 10 min");
}

void criterion_11(Outcome& o) {
  constexpr double rho = 400.0;
  constexpr int k = 3;
  constexpr int seeds = 50;
  std::vector<double> fresh, old, deg3, deg6;
  for (int s = 1; s <= seeds; ++s) {
    WindowedSet set = fitted([s](int c) { return poisson_torus(rho, c, static_cast<std::uint64_t>(s)); },
                             k - 1);
    VertexDensityReport r = vertex_density_report(enumerate_events(set, k - 1), k, rho);
    fresh.push_back(r.new_observed);
    old.push_back(*r.old_observed);
    deg3.push_back(r.bri_degree3_angles);
    deg6.push_back(r.bri_degree6_angles);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto std_error = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  };
  const double new_mean = mean(fresh), new_se = std_error(fresh);
  const double old_mean = mean(old), old_se = std_error(old);
  o.require(std::fabs(new_mean - 2.0 * k * rho) <= kStandardErrors * new_se, "new vertices near 6 rho");
  o.require(std::fabs(old_mean - (2.0 * k - 1.0) * rho) <= kStandardErrors * old_se,
            "old vertices near 5 rho");
  o.detail << "new " << new_mean << " (expected " << 2 * k * rho << ", SE " << new_se << "); old "
           << old_mean << " (expected " << (2 * k - 1) * rho << ", SE " << old_se
           << "); Bri angles at degree-3 " << mean(deg3) << ", degree-6 " << mean(deg6);
}

void criterion_12(Outcome& o) {
  for (int k : {6, 10, 20}) {
    const auto t0 = Clock::now();
    int passed = 0;
    double margin = 1e300;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      CounterexampleParams p{k, Rational(1, 5), Rational(1, 100), s};
      CounterexampleReport r = verify_counterexample(build_counterexample(p), p);
      const std::string tag = "k " + std::to_string(k) + " seed " + std::to_string(s);
      o.require(r.pass, tag + " pass");
      o.require(r.omega_del_k > r.omega_del_k1, tag + " strict drop");
      o.require(r.bounds.bound_14 > r.bounds.bound_15 && r.bounds.bound_15 > r.bounds.bound_13,
                tag + " bound ordering");
      passed += r.pass ? 1 : 0;
      margin = std::min(margin, r.omega_del_k - r.omega_del_k1);
    }
    const double took = seconds_since(t0);
    o.require(took < 300.0, "k " + std::to_string(k) + " runtime under 5 min");
    o.detail << "k=" << k << ": " << passed << "/10 pass, smallest drop " << margin << "; ";
  }
}

}  // namespace

int main() {
  int failures = 0;
  auto tally = [&](bool ok) { failures += ok ? 0 : 1; };
  tally(run(1, "monotonicity on generic inputs, k = 2..30", criterion_1));
  tally(run(2, "monotonicity on the integer lattice, k = 2..30", criterion_2));
  tally(run(3, "vertex degrees on the integer lattice", criterion_3));
  tally(run(4, "finite set: equilateral triangle with barycenter", criterion_4));
  tally(run(5, "depth tables: beta >= alpha >= next alpha", criterion_5));
  tally(run(6, "orthogonal duality of Del/Vor and Igl/Bri", criterion_6));
  tally(run(7, "closed forms match the lifted-hull oracle", criterion_7));
  tally(run(8, "Iglesias tile geometry", criterion_8));
  tally(run(9, "Brillouin vertex angles sum to 2 pi", criterion_9));
  tally(run(10, "angle distributions on a Poisson sample", criterion_10));
  tally(run(11, "old and new vertex densities, k = 3", criterion_11));
  tally(run(12, "counterexample to Delaunay max-angle monotonicity", criterion_12));
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + (failures == 1 ? " criterion failed" : " criteria failed"))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
