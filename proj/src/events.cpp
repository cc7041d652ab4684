#include "ktess/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "json_rational.hpp"
#include "ktess/errors.hpp"
#include "spatial_grid.hpp"
#include "wide_int.hpp"

namespace ktess {

namespace {

constexpr std::int64_t kCoordLimit = std::int64_t{1} << 61;

bool disk_in_rect(const ExactCircle& c, const Rect& r) {
  Rational dx0 = c.center.x - r.x0;
  Rational dx1 = r.x1 - c.center.x;
  Rational dy0 = c.center.y - r.y0;
  Rational dy1 = r.y1 - c.center.y;
  if (sgn(dx0) < 0 || sgn(dx1) < 0 || sgn(dy0) < 0 || sgn(dy1) < 0) return false;
  return dx0 * dx0 >= c.r2 && dx1 * dx1 >= c.r2 && dy0 * dy0 >= c.r2 && dy1 * dy1 >= c.r2;
}

// Counterclockwise order around `center`, starting at polar angle 0.
void sort_ccw(std::vector<SiteIndex>& on, const std::vector<ExactPoint>& pts,
              const ExactPoint& center) {
  struct Keyed {
    SiteIndex idx;
    ExactPoint v;
    int half;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(on.size());
  for (SiteIndex i : on) {
    ExactPoint v = pts[i] - center;
    int half = (sgn(v.y) > 0 || (sgn(v.y) == 0 && sgn(v.x) > 0)) ? 0 : 1;
    keyed.push_back({i, std::move(v), half});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& p, const Keyed& q) {
    if (p.half != q.half) return p.half < q.half;
    return sgn(cross(p.v, q.v)) > 0;
  });
  for (std::size_t i = 0; i < on.size(); ++i) on[i] = keyed[i].idx;
}

struct WindowD {
  double x0, y0, x1, y1;
  static WindowD from(const Rect& r) {
    return {r.x0.get_d(), r.y0.get_d(), r.x1.get_d(), r.y1.get_d()};
  }
};

// Upper bounds R_l on the radius of any circle of depth l centered in the
// inner window: such a circle's radius is the distance from its center to the
// (l+1)-th nearest site, which changes by at most |x - c| between points.
std::vector<double> compute_radius_bounds(const WindowedSet& set, const std::vector<double>& xs,
                                          const std::vector<double>& ys, int max_depth) {
  const WindowD in = WindowD::from(set.inner_window);
  const WindowD out = WindowD::from(set.outer_window);
  const std::size_t n = xs.size();
  const int want = max_depth + 1;
  std::vector<double> bounds(static_cast<std::size_t>(want),
                             std::numeric_limits<double>::infinity());
  if (n == 0) return bounds;

  double area = std::max((out.x1 - out.x0) * (out.y1 - out.y0), 1e-300);
  double cell = std::sqrt(area * std::max(want, 4) / static_cast<double>(n));
  detail::SpatialGrid grid(xs, ys, cell);

  double w = in.x1 - in.x0;
  double h = in.y1 - in.y0;
  double step = std::max(std::max(w, h) / 48.0, 1e-12);
  int nx = static_cast<int>(std::ceil(w / step)) + 1;
  int ny = static_cast<int>(std::ceil(h / step)) + 1;
  double sx = nx > 1 ? w / (nx - 1) : 0.0;
  double sy = ny > 1 ? h / (ny - 1) : 0.0;
  double slack = 0.5 * std::hypot(sx, sy) * 1.0001;

  std::vector<double> worst(static_cast<std::size_t>(want), 0.0);
  std::vector<double> dist;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double qx = in.x0 + i * sx;
      double qy = in.y0 + j * sy;
      grid.nearest_distances(qx, qy, static_cast<std::size_t>(want), dist);
      for (int l = 0; l < want; ++l) {
        double d = l < static_cast<int>(dist.size()) ? dist[static_cast<std::size_t>(l)]
                                                      : std::numeric_limits<double>::infinity();
        worst[static_cast<std::size_t>(l)] = std::max(worst[static_cast<std::size_t>(l)], d);
      }
    }
  }
  double scale = std::max({std::fabs(out.x0), std::fabs(out.x1), std::fabs(out.y0),
                           std::fabs(out.y1), 1.0});
  for (int l = 0; l < want; ++l) {
    double r = worst[static_cast<std::size_t>(l)];
    bounds[static_cast<std::size_t>(l)] = (r + slack) * (1.0 + 1e-9) + 1e-12 * scale;
  }
  // Bounds are monotone in depth.
  for (int l = 1; l < want; ++l)
    bounds[static_cast<std::size_t>(l)] =
        std::max(bounds[static_cast<std::size_t>(l)], bounds[static_cast<std::size_t>(l - 1)]);
  return bounds;
}

bool dilation_fits(const WindowedSet& set, double r) {
  if (!std::isfinite(r)) return false;
  const WindowD in = WindowD::from(set.inner_window);
  const WindowD out = WindowD::from(set.outer_window);
  return in.x0 - r >= out.x0 && in.x1 + r <= out.x1 && in.y0 - r >= out.y0 &&
         in.y1 + r <= out.y1;
}

int k_max_from_bounds(const WindowedSet& set, const std::vector<double>& bounds) {
  int k = 0;
  for (double r : bounds) {
    if (!dilation_fits(set, r)) break;
    ++k;
  }
  return k;
}

// One entry of the pencil of circles through the current pair (a, b): the
// circle through a, b and `idx` has its center at b/2 + t perp(b) relative to
// a, t = num / (2 den), den > 0. side is +1 (left of a->b) or -1.
struct PencilEntry {
  detail::Fraction t;
  SiteIndex idx;
  int side;
};

bool entry_less(const PencilEntry& p, const PencilEntry& q) {
  int c = detail::compare(p.t, q.t);
  if (c != 0) return c < 0;
  return p.idx < q.idx;
}

struct SweepContext {
  const WindowedSet& set;
  const ScaledSites& sites;
  const std::vector<double>& xs;
  const std::vector<double>& ys;
  int cap;
  bool finite;
  double radius_cap;  // infinite for finite sets
  double reach;       // neighbor radius for candidate sites
  WindowD inner;
  double margin;
};

void sweep_site(const SweepContext& ctx, SiteIndex a, const std::vector<SiteIndex>& nbrs,
                const std::vector<char>& active, std::vector<CircleEvent>& out) {
  const auto& X = ctx.sites.X;
  const auto& Y = ctx.sites.Y;
  const auto& pts = ctx.set.points;
  const double inv = ctx.sites.inv_scale;
  const double reach2 = ctx.reach * ctx.reach;

  std::vector<PencilEntry> left, right, cands;
  std::vector<SiteIndex> between;
  for (SiteIndex b : nbrs) {
    if (b <= a || !active[b]) continue;
    const std::int64_t bx = X[b] - X[a];
    const std::int64_t by = Y[b] - Y[a];
    const detail::i128 bb = detail::i128(bx) * bx + detail::i128(by) * by;
    left.clear();
    right.clear();
    cands.clear();
    between.clear();
    for (SiteIndex d : nbrs) {
      if (d == b) continue;
      if (!ctx.finite) {
        double ex = ctx.xs[d] - ctx.xs[b];
        double ey = ctx.ys[d] - ctx.ys[b];
        if (ex * ex + ey * ey > reach2) continue;
      }
      const std::int64_t dx = X[d] - X[a];
      const std::int64_t dy = Y[d] - Y[a];
      const detail::i128 q = detail::i128(bx) * dy - detail::i128(by) * dx;
      const detail::i128 bd = detail::i128(bx) * dx + detail::i128(by) * dy;
      if (q == 0) {
        if (bd > 0 && bd < bb) between.push_back(d);
        continue;
      }
      const detail::i128 num = detail::i128(dx) * dx + detail::i128(dy) * dy - bd;
      PencilEntry e = q > 0 ? PencilEntry{{num, q}, d, 1} : PencilEntry{{-num, -q}, d, -1};
      (e.side > 0 ? left : right).push_back(e);
      if (d > b) cands.push_back(e);
    }
    std::sort(left.begin(), left.end(), entry_less);
    std::sort(right.begin(), right.end(), entry_less);
    const auto t_less = [](const PencilEntry& p, const PencilEntry& q) {
      return detail::compare(p.t, q.t) < 0;
    };

    for (const PencilEntry& c : cands) {
      const long double tc =
          static_cast<long double>(c.t.num) / static_cast<long double>(c.t.den) / 2.0L;
      const long double rel_x = bx / 2.0L - tc * by;
      const long double rel_y = by / 2.0L + tc * bx;
      if (!ctx.finite) {
        double r = static_cast<double>(std::sqrt(rel_x * rel_x + rel_y * rel_y)) * inv;
        if (r > ctx.radius_cap * (1.0 + 1e-6)) continue;
        double cx = ctx.xs[a] + static_cast<double>(rel_x) * inv;
        double cy = ctx.ys[a] + static_cast<double>(rel_y) * inv;
        if (cx < ctx.inner.x0 - ctx.margin || cx > ctx.inner.x1 + ctx.margin ||
            cy < ctx.inner.y0 - ctx.margin || cy > ctx.inner.y1 + ctx.margin)
          continue;
      }
      auto [l_lo, l_hi] = std::equal_range(left.begin(), left.end(), c, t_less);
      auto [r_lo, r_hi] = std::equal_range(right.begin(), right.end(), c, t_less);
      const std::size_t depth_count = between.size() +
                                      static_cast<std::size_t>(l_lo - left.begin()) +
                                      static_cast<std::size_t>(right.end() - r_hi);
      if (depth_count > static_cast<std::size_t>(ctx.cap)) continue;

      // Emit each circle once: from the pair of its two smallest on-sites and
      // from the smallest remaining on-site.
      SiteIndex group_min = std::numeric_limits<SiteIndex>::max();
      for (auto it = l_lo; it != l_hi; ++it) group_min = std::min(group_min, it->idx);
      for (auto it = r_lo; it != r_hi; ++it) group_min = std::min(group_min, it->idx);
      if (group_min != c.idx) continue;

      ExactCircle circle = circumcircle(pts[a], pts[b], pts[c.idx]);
      if (!ctx.finite) {
        if (!ctx.set.inner_window.contains(circle.center)) continue;
        if (!disk_in_rect(circle, ctx.set.outer_window)) continue;
      }
      CircleEvent ev;
      ev.on = {a, b};
      for (auto it = l_lo; it != l_hi; ++it) ev.on.push_back(it->idx);
      for (auto it = r_lo; it != r_hi; ++it) ev.on.push_back(it->idx);
      ev.inside = between;
      for (auto it = left.begin(); it != l_lo; ++it) ev.inside.push_back(it->idx);
      for (auto it = r_hi; it != right.end(); ++it) ev.inside.push_back(it->idx);
      std::sort(ev.inside.begin(), ev.inside.end());
      ev.depth_p = static_cast<int>(ev.inside.size());
      sort_ccw(ev.on, pts, circle.center);
      ev.circle = std::move(circle);
      out.push_back(std::move(ev));
    }
  }
}

bool event_key_less(const CircleEvent& p, const CircleEvent& q) {
  int c = cmp(p.circle.center.x, q.circle.center.x);
  if (c != 0) return c < 0;
  c = cmp(p.circle.center.y, q.circle.center.y);
  if (c != 0) return c < 0;
  return cmp(p.circle.r2, q.circle.r2) < 0;
}

}  // namespace

ScaledSites ScaledSites::from(const std::vector<ExactPoint>& points) {
  ScaledSites s;
  mpz_class den = 1;
  for (const auto& p : points) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.x.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.y.get_den_mpz_t());
  }
  s.denominator = den;
  s.X.reserve(points.size());
  s.Y.reserve(points.size());
  auto scaled = [&](const Rational& v) {
    mpz_class z = v.get_num() * (den / v.get_den());
    if (!z.fits_slong_p() || z >= kCoordLimit || z <= -kCoordLimit)
      throw Error("site coordinates exceed the exact kernel range (2^61 after scaling)");
    return static_cast<std::int64_t>(z.get_si());
  };
  for (const auto& p : points) {
    s.X.push_back(scaled(p.x));
    s.Y.push_back(scaled(p.y));
  }
  s.inv_scale = 1.0 / den.get_d();
  return s;
}

int usable_order(const WindowedSet& set, int depth_cap) {
  if (set.finite) {
    // Every depth up to the cap is enumerated in full; orders beyond n are empty.
    int n = static_cast<int>(set.size());
    return std::max(1, std::min(depth_cap + 1, n));
  }
  std::vector<double> xs, ys;
  for (const auto& p : set.points) {
    xs.push_back(p.xd());
    ys.push_back(p.yd());
  }
  return k_max_from_bounds(set, compute_radius_bounds(set, xs, ys, depth_cap));
}

EventSet enumerate_events(const WindowedSet& set, int depth_cap, const EnumerateOptions& options) {
  if (set.points.empty()) throw Error("enumerate_events: empty point set");
  if (depth_cap < 0) throw Error("enumerate_events: negative depth cap");

  EventSet es;
  es.source = std::make_shared<const WindowedSet>(set);
  es.sites = ScaledSites::from(set.points);
  es.depth_cap = depth_cap;
  const std::size_t n = set.size();

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = set.points[i].xd();
    ys[i] = set.points[i].yd();
  }

  int cap = depth_cap;
  double radius_cap = std::numeric_limits<double>::infinity();
  if (set.finite) {
    es.k_max_usable = usable_order(set, depth_cap);
    cap = std::min(depth_cap, std::max(0, static_cast<int>(n) - 3));
  } else {
    es.radius_bound = compute_radius_bounds(set, xs, ys, depth_cap);
    es.k_max_usable = k_max_from_bounds(set, es.radius_bound);
    if (depth_cap > es.k_max_usable - 1) throw WindowTooSmall(depth_cap, es.k_max_usable);
    radius_cap = es.radius_bound.back();
  }
  if (n < 3) return es;

  const WindowD inner = WindowD::from(set.inner_window);
  const WindowD outer = WindowD::from(set.outer_window);
  const double extent = std::max({std::fabs(outer.x0), std::fabs(outer.x1), std::fabs(outer.y0),
                                  std::fabs(outer.y1), 1.0});
  SweepContext ctx{set,
                   es.sites,
                   xs,
                   ys,
                   cap,
                   set.finite,
                   radius_cap,
                   set.finite ? std::numeric_limits<double>::infinity()
                              : 2.0 * radius_cap * (1.0 + 1e-3),
                   inner,
                   1e-9 * extent};

  // Sites that can lie on a circle centered in the inner window.
  std::vector<char> active(n, 1);
  if (!set.finite) {
    double r = radius_cap * (1.0 + 1e-3);
    for (std::size_t i = 0; i < n; ++i) {
      active[i] = xs[i] >= inner.x0 - r && xs[i] <= inner.x1 + r && ys[i] >= inner.y0 - r &&
                  ys[i] <= inner.y1 + r;
    }
  }
  std::vector<SiteIndex> order;
  for (std::size_t i = 0; i < n; ++i)
    if (active[i]) order.push_back(static_cast<SiteIndex>(i));

  std::unique_ptr<detail::SpatialGrid> grid;
  if (!set.finite) grid = std::make_unique<detail::SpatialGrid>(xs, ys, ctx.reach);

  auto work = [&](std::size_t shard, std::size_t shards, std::vector<CircleEvent>& out) {
    std::vector<SiteIndex> nbrs;
    for (std::size_t pos = shard; pos < order.size(); pos += shards) {
      SiteIndex a = order[pos];
      nbrs.clear();
      if (set.finite) {
        for (std::size_t j = 0; j < n; ++j)
          if (j != a) nbrs.push_back(static_cast<SiteIndex>(j));
      } else {
        grid->within(xs[a], ys[a], ctx.reach, [&](std::size_t j) {
          if (j != a) nbrs.push_back(static_cast<SiteIndex>(j));
        });
        std::sort(nbrs.begin(), nbrs.end());
      }
      sweep_site(ctx, a, nbrs, active, out);
    }
  };

  std::size_t threads = static_cast<std::size_t>(std::max(1, options.threads));
  if (threads == 1) {
    work(0, 1, es.events);
  } else {
    std::vector<std::vector<CircleEvent>> parts(threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(work, t, threads, std::ref(parts[t]));
    for (auto& th : pool) th.join();
    for (auto& part : parts)
      for (auto& ev : part) es.events.push_back(std::move(ev));
  }
  std::sort(es.events.begin(), es.events.end(), event_key_less);
  return es;
}

DepthResult depth(const WindowedSet& set, const ExactCircle& circle) {
  if (!set.finite && !disk_in_rect(circle, set.outer_window)) throw DiskOutsideWindow();
  DepthResult r;
  for (std::size_t i = 0; i < set.size(); ++i) {
    switch (side_of(circle, set.points[i])) {
      case Side::Inside:
        r.inside.push_back(static_cast<SiteIndex>(i));
        break;
      case Side::On:
        r.on.push_back(static_cast<SiteIndex>(i));
        break;
      case Side::Outside:
        break;
    }
  }
  r.p = static_cast<int>(r.inside.size());
  sort_ccw(r.on, set.points, circle.center);
  return r;
}

double site_angle(const EventSet& events, SiteIndex a, SiteIndex apex, SiteIndex b) {
  const auto& X = events.sites.X;
  const auto& Y = events.sites.Y;
  const std::int64_t ux = X[a] - X[apex], uy = Y[a] - Y[apex];
  const std::int64_t vx = X[b] - X[apex], vy = Y[b] - Y[apex];
  const detail::i128 c = detail::i128(ux) * vy - detail::i128(uy) * vx;
  if (c == 0) throw DegenerateAngleError();
  const detail::i128 d = detail::i128(ux) * vx + detail::i128(uy) * vy;
  return angle_from_products(static_cast<double>(c), static_cast<double>(d));
}

ExactPoint inside_sum(const EventSet& events, const CircleEvent& event) {
  ExactPoint u(0, 0);
  for (SiteIndex i : event.inside) u += events.site(i);
  return u;
}

std::string events_to_json(const EventSet& events) {
  using nlohmann::json;
  auto rat = [](const Rational& q) { return detail::rational_json(q); };
  json arr = json::array();
  for (const auto& ev : events.events) {
    json e;
    e["center"] = json::array({rat(ev.circle.center.x), rat(ev.circle.center.y)});
    e["r2"] = rat(ev.circle.r2);
    e["on"] = ev.on;
    e["depth_p"] = ev.depth_p;
    arr.push_back(std::move(e));
  }
  json doc;
  doc["k_max_usable"] = events.k_max_usable;
  doc["depth_cap"] = events.depth_cap;
  doc["events"] = std::move(arr);
  return doc.dump();
}

}  // namespace ktess
