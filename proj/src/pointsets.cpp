#include "ktess/pointsets.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_rational.hpp"
#include "ktess/errors.hpp"
#include "ktess/events.hpp"
#include "ktess/rng.hpp"

namespace ktess {

namespace {

const mpz_class& grid_denominator() {
  static const mpz_class den = mpz_class(1) << kGridBits;
  return den;
}

Rational grid_coordinate(std::uint32_t bits) {
  Rational q(mpz_class(bits), grid_denominator());
  q.canonicalize();
  return q;
}

// Half-integer offset c such that the block [-c, copies - c] has [0, 1] as its
// central cell.
int block_offset(int copies) { return (copies - 1) / 2; }

Rect square(const Rational& lo, const Rational& hi) { return Rect{lo, lo, hi, hi}; }

Rect bounding_box(const std::vector<ExactPoint>& pts) {
  Rect r{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const auto& p : pts) {
    if (p.x < r.x0) r.x0 = p.x;
    if (p.x > r.x1) r.x1 = p.x;
    if (p.y < r.y0) r.y0 = p.y;
    if (p.y > r.y1) r.y1 = p.y;
  }
  return r;
}

std::vector<ExactPoint> draw_unit_square(int count, CounterRng& rng) {
  std::vector<ExactPoint> base;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  while (static_cast<int>(base.size()) < count) {
    std::uint32_t u = rng.next_u32();
    std::uint32_t v = rng.next_u32();
    if (!seen.insert({u, v}).second) continue;
    base.emplace_back(grid_coordinate(u), grid_coordinate(v));
  }
  return base;
}

WindowedSet replicate_unit_square(const std::vector<ExactPoint>& base, int copies) {
  if (copies < 3 || copies % 2 == 0)
    throw InvalidParams("periodic generators need an odd copies >= 3");
  const int c = block_offset(copies);
  WindowedSet set;
  set.points.reserve(base.size() * static_cast<std::size_t>(copies * copies));
  for (int i = -c; i <= c; ++i)
    for (int j = -c; j <= c; ++j)
      for (const auto& p : base) set.points.emplace_back(p.x + i, p.y + j);
  set.outer_window = square(Rational(-c), Rational(c + 1));
  set.inner_window = square(Rational(0), Rational(1));
  return set;
}

}  // namespace

WindowedSet integer_lattice(int copies) {
  if (copies < 3) throw InvalidParams("integer_lattice: copies must be >= 3");
  const int c = block_offset(copies);
  WindowedSet set;
  for (int i = -c; i <= copies - c; ++i)
    for (int j = -c; j <= copies - c; ++j) set.points.emplace_back(i, j);
  set.outer_window = square(Rational(-c), Rational(copies - c));
  set.inner_window = square(Rational(0), Rational(1));
  set.tag = "zsquare";
  return set;
}

WindowedSet perturbed_lattice(int copies, const Rational& tau, std::uint64_t seed,
                              int scan_depth) {
  if (sgn(tau) < 0 || tau >= Rational(1, 4))
    throw InvalidParams("perturbed_lattice: tau must satisfy 0 <= tau < 1/4");
  WindowedSet lattice = integer_lattice(copies);
  if (sgn(tau) == 0) {
    lattice.tag = "perturbed tau=0";
    lattice.seed = seed;
    return lattice;
  }
  CounterRng rng(seed);
  const std::int64_t half = std::int64_t{1} << 31;
  const Rational unit(1, mpz_class(half));
  for (int attempt = 0; attempt < kGenericityRetries; ++attempt) {
    WindowedSet set;
    set.outer_window = lattice.outer_window;
    set.outer_window.x0 += tau;
    set.outer_window.y0 += tau;
    set.outer_window.x1 -= tau;
    set.outer_window.y1 -= tau;
    set.inner_window = lattice.inner_window;
    for (const auto& p : lattice.points) {
      // Uniform in the closed unit disk by rejection on the 2^-31 grid.
      std::int64_t u, v;
      do {
        u = static_cast<std::int64_t>(rng.next_u32()) - half;
        v = static_cast<std::int64_t>(rng.next_u32()) - half;
      } while (u * u + v * v > half * half);
      ExactPoint q(p.x + tau * unit * Rational(u), p.y + tau * unit * Rational(v));
      if (set.outer_window.contains(q)) set.points.push_back(std::move(q));
    }
    set.tag = "perturbed tau=" + to_string(tau);
    set.seed = seed;
    if (genericity_report(set, scan_depth).is_generic) return set;
  }
  throw GenericityFailure("perturbed_lattice: no generic sample within the retry budget");
}

WindowedSet random_periodic(int n0, int copies, std::uint64_t seed) {
  if (n0 < 1) throw InvalidParams("random_periodic: n0 must be positive");
  CounterRng rng(seed);
  WindowedSet set = replicate_unit_square(draw_unit_square(n0, rng), copies);
  set.tag = "periodic n0=" + std::to_string(n0);
  set.seed = seed;
  return set;
}

WindowedSet poisson_torus(double rho, int copies, std::uint64_t seed) {
  if (!(rho > 0.0)) throw InvalidParams("poisson_torus: rho must be positive");
  CounterRng rng(seed);
  // Count arrivals of a unit-rate process on [0, rho].
  int count = 0;
  double clock = -std::log1p(-rng.next_unit());
  while (clock <= rho) {
    ++count;
    clock += -std::log1p(-rng.next_unit());
  }
  WindowedSet set = replicate_unit_square(draw_unit_square(count, rng), copies);
  std::ostringstream tag;
  tag << "poisson rho=" << rho;
  set.tag = tag.str();
  set.seed = seed;
  return set;
}

WindowedSet non_cocircular_lattice_with(int copies, const Rational& q1, const Rational& q2,
                                        int scan_depth) {
  if (copies < 3) throw InvalidParams("non_cocircular_lattice: copies must be >= 3");
  const int c = block_offset(copies);
  const Rational height = 1 + q2;
  if (sgn(height) <= 0) throw InvalidParams("non_cocircular_lattice: 1 + q2 must be positive");
  WindowedSet set;
  Rational shift_max = -c * q1, shift_min = -c * q1;
  for (int j = -c; j <= copies - c; ++j) {
    Rational s = j * q1;
    if (s > shift_max) shift_max = s;
    if (s < shift_min) shift_min = s;
  }
  set.outer_window = Rect{-c + shift_max, -c * height, (copies - c) + shift_min,
                          (copies - c) * height};
  set.inner_window = Rect{Rational(0), Rational(0), Rational(1), height};
  if (!set.outer_window.contains(set.inner_window))
    throw InvalidParams("non_cocircular_lattice: shear too large for the block");
  for (int i = -c; i <= copies - c; ++i) {
    for (int j = -c; j <= copies - c; ++j) {
      ExactPoint p(i + j * q1, j * height);
      if (set.outer_window.contains(p)) set.points.push_back(std::move(p));
    }
  }
  set.tag = "noncocircular q1=" + to_string(q1) + " q2=" + to_string(q2);
  if (!genericity_report(set, scan_depth).is_generic)
    throw GenericityFailure("non_cocircular_lattice: lattice has cocircular sites");
  return set;
}

WindowedSet non_cocircular_lattice(int copies, std::uint64_t seed, int scan_depth) {
  CounterRng rng(seed);
  const mpz_class den = mpz_class(1) << 20;
  for (int attempt = 0; attempt < kGenericityRetries; ++attempt) {
    // q in [1/32, 1/8) on a 2^-20 grid.
    auto draw = [&]() -> Rational {
      Rational u(mpz_class(static_cast<unsigned long>(rng.next_u32() >> 12)), den);
      u.canonicalize();
      return Rational(1, 32) + Rational(3, 32) * u;
    };
    Rational q1 = draw();
    Rational q2 = draw();
    q1.canonicalize();
    q2.canonicalize();
    try {
      WindowedSet set = non_cocircular_lattice_with(copies, q1, q2, scan_depth);
      set.seed = seed;
      return set;
    } catch (const GenericityFailure&) {
    }
  }
  throw GenericityFailure("non_cocircular_lattice: retry budget exhausted");
}

WindowedSet finite_example_triangle_barycenter() {
  // Apex height sqrt(3)/2 rounded to the 2^-32 grid.
  const long double h = std::sqrt(3.0L) / 2.0L * 4294967296.0L;
  Rational height(mpz_class(std::to_string(std::llround(h))), grid_denominator());
  height.canonicalize();
  WindowedSet set;
  ExactPoint a(0, 0), b(1, 0), c(Rational(1, 2), height);
  ExactPoint d = (a + b + c) / Rational(3);
  set.points = {a, b, c, d};
  set.finite = true;
  set.inner_window = set.outer_window = bounding_box(set.points);
  set.tag = "triangle-barycenter";
  return set;
}

WindowedSet random_finite(int n, std::uint64_t seed, int bits) {
  if (n < 1 || bits < 4 || bits > 40) throw InvalidParams("random_finite: bad parameters");
  CounterRng rng(seed);
  const mpz_class den = mpz_class(1) << bits;
  for (int attempt = 0; attempt < kGenericityRetries; ++attempt) {
    WindowedSet set;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    while (static_cast<int>(set.points.size()) < n) {
      std::uint64_t u = rng.next_u64() >> (64 - bits);
      std::uint64_t v = rng.next_u64() >> (64 - bits);
      if (!seen.insert({u, v}).second) continue;
      Rational x(mpz_class(static_cast<unsigned long>(u)), den);
      Rational y(mpz_class(static_cast<unsigned long>(v)), den);
      x.canonicalize();
      y.canonicalize();
      set.points.emplace_back(x, y);
    }
    set.finite = true;
    set.inner_window = set.outer_window = bounding_box(set.points);
    set.tag = "finite n=" + std::to_string(n);
    set.seed = seed;
    if (genericity_report(set, n).is_generic) return set;
  }
  throw GenericityFailure("random_finite: retry budget exhausted");
}

GenericityReport genericity_report(const WindowedSet& set, int depth_cap) {
  GenericityReport report;
  if (set.points.size() < 4) return report;
  int cap = depth_cap;
  if (!set.finite) cap = std::min(depth_cap, usable_order(set, depth_cap) - 1);
  if (cap < 0) return report;
  EventSet events = enumerate_events(set, cap);
  for (const auto& ev : events.events) {
    if (ev.on.size() >= 4)
      report.violations.push_back({ev.circle, ev.on.size(), ev.depth_p});
  }
  report.is_generic = report.violations.empty();
  return report;
}

WindowedSet with_inner_window(const WindowedSet& set, const Rect& inner) {
  if (!set.outer_window.contains(inner))
    throw InvalidParams("inner window must lie inside the outer window");
  WindowedSet out = set;
  out.inner_window = inner;
  return out;
}

namespace {

nlohmann::json rect_json(const Rect& r) {
  nlohmann::json a = nlohmann::json::array();
  for (const Rational* q : {&r.x0, &r.y0, &r.x1, &r.y1}) {
    a.push_back(detail::integer_json(q->get_num()));
    a.push_back(detail::integer_json(q->get_den()));
  }
  return a;
}

Rect rect_from(const nlohmann::json& a) {
  if (!a.is_array() || a.size() != 8) throw std::invalid_argument("window must have 8 integers");
  return Rect{detail::rational_from(a[0], a[1]), detail::rational_from(a[2], a[3]),
              detail::rational_from(a[4], a[5]), detail::rational_from(a[6], a[7])};
}

}  // namespace

std::string pointset_to_json(const WindowedSet& set) {
  nlohmann::json doc;
  doc["tag"] = set.tag;
  doc["seed"] = set.seed ? nlohmann::json(*set.seed) : nlohmann::json(nullptr);
  doc["inner_window"] = rect_json(set.inner_window);
  doc["outer_window"] = rect_json(set.outer_window);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : set.points) {
    pts.push_back({detail::integer_json(p.x.get_num()), detail::integer_json(p.x.get_den()),
                   detail::integer_json(p.y.get_num()), detail::integer_json(p.y.get_den())});
  }
  doc["points"] = std::move(pts);
  if (set.finite) doc["finite"] = true;
  return doc.dump();
}

WindowedSet pointset_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  WindowedSet set;
  set.tag = doc.value("tag", std::string{});
  if (doc.contains("seed") && !doc["seed"].is_null()) set.seed = doc["seed"].get<std::uint64_t>();
  set.inner_window = rect_from(doc.at("inner_window"));
  set.outer_window = rect_from(doc.at("outer_window"));
  set.finite = doc.value("finite", false);
  for (const auto& p : doc.at("points")) {
    if (!p.is_array() || p.size() != 4) throw std::invalid_argument("point must have 4 integers");
    set.points.emplace_back(detail::rational_from(p[0], p[1]), detail::rational_from(p[2], p[3]));
  }
  return set;
}

void write_pointset(const WindowedSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << pointset_to_json(set) << '\n';
}

WindowedSet read_pointset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return pointset_from_json(buf.str());
}

}  // namespace ktess
