#include "ktess/angles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ktess/errors.hpp"
#include "wide_int.hpp"

namespace ktess {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int on_count(const CircleEvent& ev) { return static_cast<int>(ev.on.size()); }

// Inscribed angles of a generic event at on[0], on[1], on[2].
std::array<double, 3> triangle_angles(const EventSet& events, const CircleEvent& ev) {
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i)
    a[i] = site_angle(events, ev.on[(i + 1) % 3], ev.on[i], ev.on[(i + 2) % 3]);
  return a;
}

// Orders k of M_k whose tiles or vertices can come from an event.
bool event_touches(const CircleEvent& ev, Structure m, int k) {
  const int p = ev.depth_p, n = ev.n();
  switch (m) {
    case Structure::Del:
    case Structure::Vor:
      return p + 1 <= k && k <= p + n;
    case Structure::Igl:
      return p + 1 <= k && k <= p + 2 * n - 1;
    case Structure::Bri:
      return p + 1 <= k && k <= p + n + 1;
  }
  return false;
}

bool generic_for(const EventSet& events, Structure m, int k) {
  for (const auto& ev : events.events)
    if (!ev.generic() && event_touches(ev, m, k)) return false;
  return true;
}

void check_order(const EventSet& events, int k) {
  if (k < 1 || k > events.k_max_usable)
    throw OrderOutOfRange("order " + std::to_string(k) + " outside the usable range 1.." +
                          std::to_string(events.k_max_usable));
}

// Angles at the event center in Bri_k owned by the on-site at position s.
void vertex_angles_at(const EventSet& events, const CircleEvent& ev, int k, int s,
                      std::vector<VertexAngle>& out) {
  const int p = ev.depth_p, n = ev.n(), N = n + 1;
  auto at = [&](int t) { return ev.on[static_cast<std::size_t>((s + t) % N)]; };
  const SiteIndex a = at(0);
  if (k == p + 1 || k == p + n + 1) {
    out.push_back({kPi - site_angle(events, at(n), a, at(1)), a});
    return;
  }
  const int i = k - p - 1, j = p + n + 1 - k;
  out.push_back({site_angle(events, at(i), a, at(i + 1)), a});
  out.push_back({site_angle(events, at(j), a, at(j + 1)), a});
}

// min over table entries at the given depths, dropping negative depths.
double table_min(const DepthTables& t, const std::vector<double>& tab,
                 std::initializer_list<int> depths) {
  double best = kInf;
  for (int l : depths) {
    if (l < 0) continue;
    if (!t.populated(l)) throw DepthUnpopulated(l);
    best = std::min(best, tab[static_cast<std::size_t>(l)]);
  }
  return best;
}

}  // namespace

std::string structure_name(Structure s) {
  switch (s) {
    case Structure::Del: return "del";
    case Structure::Vor: return "vor";
    case Structure::Bri: return "bri";
    case Structure::Igl: return "igl";
  }
  return "?";
}

Structure parse_structure(const std::string& name) {
  for (Structure s : {Structure::Del, Structure::Vor, Structure::Bri, Structure::Igl})
    if (structure_name(s) == name) return s;
  throw std::invalid_argument("unknown structure '" + name + "'");
}

std::string kind_name(AngleKind k) { return k == AngleKind::Direct ? "direct" : "supplementary"; }

DepthTables depth_tables(const EventSet& events, int l_max) {
  if (l_max < 0 || l_max > events.k_max_usable - 1)
    throw OrderOutOfRange("depth table bound " + std::to_string(l_max) +
                          " exceeds the usable depth " + std::to_string(events.k_max_usable - 1));
  DepthTables t;
  t.l_max = l_max;
  const auto size = static_cast<std::size_t>(l_max + 1);
  t.alpha.assign(size, kInf);
  t.beta.assign(size, kInf);
  t.counts.assign(size, 0);
  for (const auto& ev : events.events) {
    const int p = ev.depth_p;
    if (p > l_max) continue;
    const int last = std::min(p + std::max(ev.n() - 2, 0), l_max);
    double lo = kInf, hi = -kInf;
    std::size_t count = 0;
    const int N = on_count(ev);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i)
        for (int m = i + 1; m < N; ++m) {
          if (i == j || m == j) continue;
          double v = site_angle(events, ev.on[i], ev.on[j], ev.on[m]);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          ++count;
        }
    for (int l = p; l <= last; ++l) {
      auto ul = static_cast<std::size_t>(l);
      t.alpha[ul] = std::min(t.alpha[ul], lo);
      t.beta[ul] = std::min(t.beta[ul], kPi - hi);
      t.counts[ul] += count;
    }
  }
  for (int l = 0; l <= l_max; ++l)
    if (t.counts[static_cast<std::size_t>(l)] == 0) throw DepthUnpopulated(l);
  return t;
}

std::vector<AngleSample> structure_angles(const EventSet& events, Structure m, int k) {
  check_order(events, k);
  if (m != Structure::Bri && !generic_for(events, m, k))
    throw NonGenericUnsupported("no angle placement for " + structure_name(m) +
                                " at cocircular events");
  std::vector<AngleSample> out;
  std::vector<VertexAngle> vertex;
  for (std::size_t e = 0; e < events.events.size(); ++e) {
    const CircleEvent& ev = events.events[e];
    const int l = ev.depth_p;
    if (l > k - 1) continue;
    auto emit = [&](double v, AngleKind kind, int times) {
      for (int t = 0; t < times; ++t) out.push_back({v, l, kind, m, k, e});
    };
    if (!ev.generic()) {
      // Only Brillouin reaches here.
      if (!event_touches(ev, m, k)) continue;
      const AngleKind kind = (k == l + 1 || k == l + ev.n() + 1) ? AngleKind::Supplementary
                                                                 : AngleKind::Direct;
      vertex.clear();
      for (int s = 0; s < on_count(ev); ++s) vertex_angles_at(events, ev, k, s, vertex);
      for (const auto& va : vertex) emit(va.value, kind, 1);
      continue;
    }
    if (l < k - 3) continue;
    const auto A = triangle_angles(events, ev);
    for (double a : A) {
      switch (m) {
        case Structure::Del:
          if (k == l + 1 || k == l + 2) emit(a, AngleKind::Direct, 1);
          break;
        case Structure::Vor:
          if (k == l + 1 || k == l + 2) emit(kPi - a, AngleKind::Supplementary, 1);
          break;
        case Structure::Igl:
          if (k == l + 1 || k == l + 3) emit(a, AngleKind::Direct, 1);
          if (k == l + 2) emit(kPi - a, AngleKind::Supplementary, 2);
          break;
        case Structure::Bri:
          if (k == l + 2) emit(a, AngleKind::Direct, 2);
          if (k == l + 1 || k == l + 3) emit(kPi - a, AngleKind::Supplementary, 1);
          break;
      }
    }
  }
  return out;
}

std::vector<VertexAngle> brillouin_vertex_angles(const EventSet& events,
                                                 const CircleEvent& event, int k) {
  const int p = event.depth_p, n = event.n();
  if (k < p + 1 || k > p + n + 1)
    throw OrderOutOfRange("event of depth " + std::to_string(p) + " has no vertex in order " +
                          std::to_string(k));
  std::vector<VertexAngle> out;
  for (int s = 0; s <= n; ++s) vertex_angles_at(events, event, k, s, out);
  return out;
}

std::vector<double> zone_angles(const EventSet& events, SiteIndex site, int k) {
  check_order(events, k);
  const WindowedSet& set = *events.source;
  if (!set.finite) {
    const double r = events.radius_bound[static_cast<std::size_t>(k - 1)];
    const ExactPoint& a = events.site(site);
    const Rect& in = set.inner_window;
    if (a.xd() - r < in.x0.get_d() || a.xd() + r > in.x1.get_d() || a.yd() - r < in.y0.get_d() ||
        a.yd() + r > in.y1.get_d())
      throw DiskOutsideWindow("zone " + std::to_string(k) +
                              " of the site is not covered by the inner window");
  }
  std::vector<double> out;
  std::vector<VertexAngle> tmp;
  for (const auto& ev : events.events) {
    if (!event_touches(ev, Structure::Bri, k)) continue;
    auto it = std::find(ev.on.begin(), ev.on.end(), site);
    if (it == ev.on.end()) continue;
    tmp.clear();
    vertex_angles_at(events, ev, k, static_cast<int>(it - ev.on.begin()), tmp);
    for (const auto& va : tmp) out.push_back(va.value);
  }
  return out;
}

Extremes extreme_angles(const DepthTables& t, const EventSet& events, Structure m, int k) {
  check_order(events, k);
  if (k - 1 > t.l_max) throw DepthUnpopulated(k - 1);
  auto alpha = [&](std::initializer_list<int> d) { return table_min(t, t.alpha, d); };
  auto beta = [&](std::initializer_list<int> d) { return table_min(t, t.beta, d); };
  Extremes x;
  if (m == Structure::Del || m == Structure::Vor) {
    if (!generic_for(events, m, k))
      throw NonGenericUnsupported("no extreme-angle formula for " + structure_name(m) +
                                  " at cocircular events");
    const double a_del = alpha({k - 2, k - 1});
    const double b_del = beta({k - 2, k - 1});
    x.alpha_min = m == Structure::Del ? a_del : b_del;
    x.omega_max = m == Structure::Del ? kPi - b_del : kPi - a_del;
    return x;
  }
  if (generic_for(events, Structure::Igl, k)) {
    const double a_igl = std::min({alpha({k - 3}), beta({k - 2}), alpha({k - 1})});
    const double a_bri = std::min({beta({k - 3}), alpha({k - 2}), beta({k - 1})});
    x.alpha_min = m == Structure::Igl ? a_igl : a_bri;
    x.omega_max = m == Structure::Igl ? kPi - a_bri : kPi - a_igl;
    return x;
  }
  // Cocircular events: read the Brillouin vertex angles directly.
  x.generic_path = false;
  double lo = kInf, hi = -kInf;
  std::vector<VertexAngle> tmp;
  for (const auto& ev : events.events) {
    if (!event_touches(ev, Structure::Bri, k)) continue;
    tmp.clear();
    for (int s = 0; s < on_count(ev); ++s) vertex_angles_at(events, ev, k, s, tmp);
    for (const auto& va : tmp) {
      lo = std::min(lo, va.value);
      hi = std::max(hi, va.value);
    }
  }
  if (lo == kInf) throw DepthUnpopulated(k - 1);
  if (m == Structure::Bri) {
    x.alpha_min = lo;
    x.omega_max = hi;
  } else {
    x.alpha_min = kNaN;
    x.omega_max = kPi - lo;
  }
  return x;
}

std::vector<double> degenerate_delaunay_angles(const EventSet& events, int k) {
  check_order(events, k);
  std::vector<double> out;
  for (const auto& ev : events.events) {
    const int p = ev.depth_p, N = on_count(ev);
    const int m = k - p;
    if (m < 1 || m > N - 1) continue;
    auto at = [&](int t) { return ev.on[static_cast<std::size_t>(((t % N) + N) % N)]; };
    for (int i = 0; i < N; ++i) {
      const SiteIndex u0 = at(i - 1), u1 = at(i + m - 1), v0 = at(i), v1 = at(i + m);
      const detail::i128 dx1 = static_cast<detail::i128>(events.sites.X[u0]) - events.sites.X[u1];
      const detail::i128 dy1 = static_cast<detail::i128>(events.sites.Y[u0]) - events.sites.Y[u1];
      const detail::i128 dx2 = static_cast<detail::i128>(events.sites.X[v1]) - events.sites.X[v0];
      const detail::i128 dy2 = static_cast<detail::i128>(events.sites.Y[v1]) - events.sites.Y[v0];
      const detail::i128 cr = dx1 * dy2 - dy1 * dx2;
      if (cr == 0) continue;
      const detail::i128 dt = dx1 * dx2 + dy1 * dy2;
      out.push_back(angle_from_products(static_cast<double>(cr), static_cast<double>(dt)));
    }
  }
  return out;
}

bool MonotonicityReport::passed() const {
  for (const auto& c : checks)
    if (!c.observation && !c.passed) return false;
  return true;
}

const ExtremeRow* MonotonicityReport::find(Structure m, int k) const {
  for (const auto& r : rows)
    if (r.structure == m && r.k == k) return &r;
  return nullptr;
}

MonotonicityReport monotonicity_report(const EventSet& events, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw InvalidParams("bad order range");
  check_order(events, k_max);
  MonotonicityReport rep;
  for (const auto& ev : events.events)
    if (!ev.generic() && ev.depth_p <= k_max - 1) rep.generic = false;
  const DepthTables tables = depth_tables(events, k_max - 1);
  for (Structure m : {Structure::Del, Structure::Vor, Structure::Bri, Structure::Igl}) {
    for (int k = k_min; k <= k_max; ++k) {
      ExtremeRow row{m, k, kNaN, kNaN, "ok"};
      try {
        Extremes x = extreme_angles(tables, events, m, k);
        row.alpha_min = x.alpha_min;
        row.omega_max = x.omega_max;
        if (!x.generic_path) row.status = "nongeneric";
      } catch (const NonGenericUnsupported&) {
        row.status = "unsupported";
      } catch (const DepthUnpopulated&) {
        row.status = "unpopulated";
      }
      rep.rows.push_back(row);
    }
  }
  auto family = [&](Structure m, bool alpha, bool observation) {
    MonotonicityCheck c;
    c.name = std::string(alpha ? "alpha " : "omega ") + structure_name(m) +
             (alpha ? " non-increasing" : " non-decreasing");
    c.observation = observation;
    for (int k = k_min; k < k_max; ++k) {
      const ExtremeRow* a = rep.find(m, k);
      const ExtremeRow* b = rep.find(m, k + 1);
      const double va = alpha ? a->alpha_min : a->omega_max;
      const double vb = alpha ? b->alpha_min : b->omega_max;
      if (std::isnan(va) || std::isnan(vb)) {
        if (!observation) {
          c.passed = false;
          c.violations_at.push_back(k);
        }
        continue;
      }
      const bool ok = alpha ? vb <= va + kAngleSlack : vb >= va - kAngleSlack;
      if (!ok) {
        c.passed = false;
        c.violations_at.push_back(k);
      }
    }
    rep.checks.push_back(std::move(c));
  };
  if (rep.generic) {
    for (Structure m : {Structure::Del, Structure::Igl, Structure::Bri}) family(m, true, false);
    for (Structure m : {Structure::Vor, Structure::Bri, Structure::Igl}) family(m, false, false);
  } else {
    family(Structure::Bri, true, false);
    family(Structure::Igl, false, false);
  }
  family(Structure::Vor, true, true);
  family(Structure::Del, false, true);
  return rep;
}

void write_extremes_csv(std::ostream& out, const std::vector<ExtremeRow>& rows) {
  out << "structure,k,alpha_min,omega_max,status\n";
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << structure_name(r.structure) << ',' << r.k << ',' << r.alpha_min << ','
        << r.omega_max << ',' << r.status << '\n';
}

void write_samples_csv(std::ostream& out, const std::vector<AngleSample>& samples) {
  out << "structure,k,depth,kind,value\n";
  out << std::setprecision(17);
  for (const auto& s : samples)
    out << structure_name(s.structure) << ',' << s.order << ',' << s.depth << ','
        << kind_name(s.kind) << ',' << s.value << '\n';
}

}  // namespace ktess
