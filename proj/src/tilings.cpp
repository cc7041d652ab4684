#include "ktess/tilings.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json_rational.hpp"
#include "ktess/errors.hpp"
#include "wide_int.hpp"

namespace ktess {

namespace {

class VertexPool {
 public:
  explicit VertexPool(Tiling& t) : t_(t) {}
  std::size_t get(const ExactPoint& p) {
    auto [it, inserted] = index_.try_emplace(p, t_.vertices.size());
    if (inserted) t_.vertices.push_back(p);
    return it->second;
  }

 private:
  Tiling& t_;
  std::map<ExactPoint, std::size_t, PointLess> index_;
};

bool strictly_inside(const ExactCircle& c, const Rect& r) {
  auto clear = [&](const Rational& d) { return sgn(d) > 0 && d * d > c.r2; };
  return clear(c.center.x - r.x0) && clear(r.x1 - c.center.x) && clear(c.center.y - r.y0) &&
         clear(r.y1 - c.center.y);
}

void edges_from_tiles(Tiling& t) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& tile : t.tiles) {
    const std::size_t m = tile.cycle.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t a = tile.cycle[i], b = tile.cycle[(i + 1) % m];
      seen.insert({std::min(a, b), std::max(a, b)});
    }
  }
  t.edges.assign(seen.begin(), seen.end());
}

void require_generic(const EventSet& events, Structure m, int k) {
  for (const auto& ev : events.events) {
    if (ev.generic()) continue;
    const int p = ev.depth_p, n = ev.n();
    const int last = m == Structure::Del ? p + n : p + 2 * n - 1;
    if (p + 1 <= k && k <= last)
      throw NonGenericUnsupported(structure_name(m) +
                                  " tiles are not realized at cocircular events");
  }
}

void check_order(const EventSet& events, int k) {
  if (k < 1 || k > events.k_max_usable)
    throw OrderOutOfRange("order " + std::to_string(k) + " outside the usable range");
}

// Vertex per event for the Voronoi-type structures.
struct EventVertices {
  std::map<std::size_t, std::size_t> of_event;
};

void add_event_vertex(Tiling& t, EventVertices& ev_index, const CircleEvent& ev, std::size_t e,
                      int degree) {
  ev_index.of_event[e] = t.vertices.size();
  t.vertices.push_back(ev.circle.center);
  t.vertex_event.push_back(e);
  t.degree.push_back(degree);
}

// Voronoi edges dual to the interior edges of Del_k, as event index pairs.
std::vector<std::pair<std::size_t, std::size_t>> voronoi_event_edges(const EventSet& events,
                                                                     int k) {
  Tiling del = delaunay_mosaic(events, k);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> left_of;
  for (const auto& tile : del.tiles) {
    const std::size_t m = tile.cycle.size();
    for (std::size_t i = 0; i < m; ++i) left_of[{tile.cycle[i], tile.cycle[(i + 1) % m]}] = tile.event;
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [edge, e1] : left_of) {
    if (edge.first > edge.second) continue;
    auto it = left_of.find({edge.second, edge.first});
    if (it != left_of.end()) out.push_back({e1, it->second});
  }
  return out;
}

}  // namespace

std::string age_name(Age a) {
  switch (a) {
    case Age::Old: return "old";
    case Age::Mid: return "mid";
    case Age::New: return "new";
  }
  return "?";
}

AurenhammerSite aurenhammer_site(const std::vector<ExactPoint>& subset) {
  if (subset.empty()) throw InvalidParams("aurenhammer_site: empty subset");
  AurenhammerSite s;
  ExactPoint sum(0, 0);
  Rational h = 0;
  for (const auto& a : subset) {
    sum += a;
    h += norm2(a);
  }
  const Rational k(static_cast<long>(subset.size()));
  s.position = sum / k;
  s.height = h / k;
  s.weight = norm2(s.position) - s.height;
  s.generator = subset;
  return s;
}

AurenhammerSite iglesias_site(const std::vector<ExactPoint>& subset, std::size_t distinguished) {
  if (distinguished >= subset.size()) throw InvalidParams("iglesias_site: bad distinguished site");
  AurenhammerSite s;
  ExactPoint sum(0, 0);
  Rational h = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Rational c = i == distinguished ? 1 : 2;
    sum += c * subset[i];
    h += c * norm2(subset[i]);
  }
  const Rational den(2 * static_cast<long>(subset.size()) - 1);
  s.position = sum / den;
  s.height = h / den;
  s.height.canonicalize();
  s.weight = norm2(s.position) - s.height;
  s.generator = subset;
  s.distinguished = distinguished;
  return s;
}

Tiling delaunay_mosaic(const EventSet& events, int k) {
  check_order(events, k);
  require_generic(events, Structure::Del, k);
  Tiling t;
  t.structure = Structure::Del;
  t.order = k;
  VertexPool pool(t);
  const Rect& outer = events.source->outer_window;
  for (std::size_t e = 0; e < events.events.size(); ++e) {
    const CircleEvent& ev = events.events[e];
    const int l = ev.depth_p;
    if (l != k - 1 && l != k - 2) continue;
    const ExactPoint u = inside_sum(events, ev);
    Tile tile;
    tile.event = e;
    tile.trusted = events.source->finite || strictly_inside(ev.circle, outer);
    if (l == k - 1) {
      tile.age = Age::New;
      const Rational den(l + 1);
      for (SiteIndex x : ev.on) tile.cycle.push_back(pool.get((u + events.site(x)) / den));
    } else {
      tile.age = Age::Old;
      const Rational den(l + 2);
      ExactPoint s = events.site(ev.on[0]) + events.site(ev.on[1]) + events.site(ev.on[2]);
      for (SiteIndex z : ev.on) tile.cycle.push_back(pool.get((u + s - events.site(z)) / den));
    }
    t.tiles.push_back(std::move(tile));
  }
  edges_from_tiles(t);
  return t;
}

Tiling iglesias_mosaic(const EventSet& events, int k) {
  check_order(events, k);
  require_generic(events, Structure::Igl, k);
  Tiling t;
  t.structure = Structure::Igl;
  t.order = k;
  VertexPool pool(t);
  const Rect& outer = events.source->outer_window;
  for (std::size_t e = 0; e < events.events.size(); ++e) {
    const CircleEvent& ev = events.events[e];
    const int l = ev.depth_p;
    if (l < k - 3 || l > k - 1) continue;
    const ExactPoint u2 = Rational(2) * inside_sum(events, ev);
    const ExactPoint& a = events.site(ev.on[0]);
    const ExactPoint& b = events.site(ev.on[1]);
    const ExactPoint& c = events.site(ev.on[2]);
    Tile tile;
    tile.event = e;
    tile.trusted = events.source->finite || strictly_inside(ev.circle, outer);
    if (l == k - 1) {
      tile.age = Age::New;
      const Rational den(2 * l + 1);
      for (const ExactPoint* x : {&a, &b, &c}) tile.cycle.push_back(pool.get((u2 + *x) / den));
    } else if (l == k - 2) {
      tile.age = Age::Mid;
      const Rational den(2 * l + 3);
      const std::pair<const ExactPoint*, const ExactPoint*> order[] = {
          {&a, &b}, {&b, &a}, {&b, &c}, {&c, &b}, {&c, &a}, {&a, &c}};
      for (const auto& [x, y] : order)
        tile.cycle.push_back(pool.get((u2 + Rational(2) * *x + *y) / den));
    } else {
      tile.age = Age::Old;
      const Rational den(2 * l + 5);
      const ExactPoint s2 = Rational(2) * (a + b + c);
      for (const ExactPoint* z : {&a, &b, &c}) tile.cycle.push_back(pool.get((u2 + s2 - *z) / den));
    }
    t.tiles.push_back(std::move(tile));
  }
  edges_from_tiles(t);
  return t;
}

Tiling voronoi_tessellation(const EventSet& events, int k) {
  check_order(events, k);
  Tiling t;
  t.structure = Structure::Vor;
  t.order = k;
  EventVertices index;
  bool generic = true;
  for (std::size_t e = 0; e < events.events.size(); ++e) {
    const CircleEvent& ev = events.events[e];
    if (k < ev.depth_p + 1 || k > ev.depth_p + ev.n()) continue;
    if (!ev.generic()) generic = false;
    add_event_vertex(t, index, ev, e, static_cast<int>(ev.on.size()));
  }
  if (!generic) {
    t.vertices_only = true;
    return t;
  }
  for (const auto& [e1, e2] : voronoi_event_edges(events, k)) {
    std::size_t a = index.of_event.at(e1), b = index.of_event.at(e2);
    t.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

Tiling brillouin_tessellation(const EventSet& events, int k) {
  check_order(events, k);
  Tiling t;
  t.structure = Structure::Bri;
  t.order = k;
  EventVertices index;
  bool generic = true;
  for (std::size_t e = 0; e < events.events.size(); ++e) {
    const CircleEvent& ev = events.events[e];
    const int p = ev.depth_p, n = ev.n();
    if (k < p + 1 || k > p + n + 1) continue;
    if (!ev.generic()) generic = false;
    const int on = static_cast<int>(ev.on.size());
    add_event_vertex(t, index, ev, e, (k == p + 1 || k == p + n + 1) ? on : 2 * on);
  }
  if (!generic) {
    t.vertices_only = true;
    return t;
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (int j : {k - 1, k}) {
    if (j < 1) continue;
    for (const auto& [e1, e2] : voronoi_event_edges(events, j)) {
      std::size_t a = index.of_event.at(e1), b = index.of_event.at(e2);
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  t.edges.assign(edges.begin(), edges.end());
  return t;
}

DualReport check_orthogonal_dual(const Tiling& t, const Tiling& d) {
  DualReport rep;
  std::map<std::size_t, std::size_t> dual_vertex;
  for (std::size_t i = 0; i < d.vertex_event.size(); ++i)
    if (d.vertex_event[i] != kNoEvent) dual_vertex[d.vertex_event[i]] = i;
  std::set<std::pair<std::size_t, std::size_t>> d_edges(d.edges.begin(), d.edges.end());
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> left_tile;
  for (std::size_t ti = 0; ti < t.tiles.size(); ++ti) {
    const auto& cyc = t.tiles[ti].cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i) left_tile[{cyc[i], cyc[(i + 1) % cyc.size()]}] = ti;
  }
  for (const auto& [edge, t1] : left_tile) {
    auto it = left_tile.find({edge.second, edge.first});
    if (it == left_tile.end()) {
      ++rep.boundary_edges;
      continue;
    }
    if (edge.first > edge.second) continue;
    const std::size_t t2 = it->second;
    auto d1 = dual_vertex.find(t.tiles[t1].event);
    auto d2 = dual_vertex.find(t.tiles[t2].event);
    if (d1 == dual_vertex.end() || d2 == dual_vertex.end() ||
        !d_edges.count({std::min(d1->second, d2->second), std::max(d1->second, d2->second)})) {
      ++rep.missing_duals;
      continue;
    }
    ++rep.checked;
    const ExactPoint e = t.vertices[edge.second] - t.vertices[edge.first];
    const ExactPoint f = d.vertices[d2->second] - d.vertices[d1->second];
    bool bad = false;
    if (sgn(dot(e, f)) != 0) {
      ++rep.orthogonality_violations;
      bad = true;
    }
    if (sgn(cross(e, f)) >= 0) {
      ++rep.orientation_violations;
      bad = true;
    }
    if (bad) rep.violating_edges.push_back(edge);
  }
  return rep;
}

namespace {

// Lower convex hull of lifted points with integer coordinates of type T.
template <class T>
class LowerHull {
 public:
  LowerHull(std::vector<T> x, std::vector<T> y, std::vector<T> z)
      : X(std::move(x)), Y(std::move(y)), Z(std::move(z)) {}

  std::vector<std::vector<std::size_t>> faces() {
    std::vector<std::size_t> hull = hull2d(all_indices());
    std::vector<std::vector<std::size_t>> out;
    if (hull.size() < 3) return out;
    std::set<std::pair<std::size_t, std::size_t>> done;
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{hull[1], hull[0]}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      if (!done.insert({a, b}).second) continue;
      // Face on the right of a->b: lowest plane through the lifted edge.
      std::size_t best = kNone;
      for (std::size_t m = 0; m < X.size() && best == kNone; ++m)
        if (m != a && m != b && orient2(a, b, m) < 0) best = m;
      if (best == kNone) continue;
      for (std::size_t d = 0; d < X.size(); ++d)
        if (d != a && d != b && d != best && orient3(b, a, best, d) < 0) best = d;
      std::vector<std::size_t> plane;
      for (std::size_t d = 0; d < X.size(); ++d)
        if (d == a || d == b || d == best || orient3(b, a, best, d) == 0) plane.push_back(d);
      std::vector<std::size_t> face = hull2d(plane);
      std::vector<std::size_t> key = face;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      for (std::size_t i = 0; i < face.size(); ++i) {
        std::size_t u = face[i], v = face[(i + 1) % face.size()];
        done.insert({v, u});
        stack.push_back({u, v});
      }
      out.push_back(std::move(face));
    }
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<std::size_t> all_indices() const {
    std::vector<std::size_t> v(X.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }

  static int sign(const T& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

  int orient2(std::size_t i, std::size_t j, std::size_t m) const {
    T v = (X[j] - X[i]) * (Y[m] - Y[i]) - (Y[j] - Y[i]) * (X[m] - X[i]);
    return sign(v);
  }

  int orient3(std::size_t p, std::size_t q, std::size_t r, std::size_t d) const {
    T ax = X[q] - X[p], ay = Y[q] - Y[p], az = Z[q] - Z[p];
    T bx = X[r] - X[p], by = Y[r] - Y[p], bz = Z[r] - Z[p];
    T cx = X[d] - X[p], cy = Y[d] - Y[p], cz = Z[d] - Z[p];
    T v = ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx);
    return sign(v);
  }

  // Strict counterclockwise convex hull of the projections (monotone chain).
  std::vector<std::size_t> hull2d(std::vector<std::size_t> idx) const {
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      if (X[i] != X[j]) return X[i] < X[j];
      return Y[i] < Y[j];
    });
    if (idx.size() < 3) return idx;
    std::vector<std::size_t> h(2 * idx.size());
    std::size_t n = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      while (n >= 2 && orient2(h[n - 2], h[n - 1], idx[i]) <= 0) --n;
      h[n++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, lower = n + 1; i-- > 0;) {
      while (n >= lower && orient2(h[n - 2], h[n - 1], idx[i]) <= 0) --n;
      h[n++] = idx[i];
    }
    h.resize(n - 1);
    return h;
  }

  std::vector<T> X, Y, Z;
};

mpz_class common_denominator(const std::vector<const Rational*>& values) {
  mpz_class den = 1;
  for (const Rational* q : values) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q->get_den_mpz_t());
  return den;
}

}  // namespace

Tiling lifted_hull_oracle(const std::vector<AurenhammerSite>& sites, const Rect& window) {
  // Lowest lifted point per projected position.
  std::map<ExactPoint, Rational, PointLess> lowest;
  for (const auto& s : sites) {
    auto [it, inserted] = lowest.try_emplace(s.position, s.height);
    if (!inserted && s.height < it->second) it->second = s.height;
  }
  std::vector<ExactPoint> pos;
  std::vector<Rational> hgt;
  for (const auto& [p, h] : lowest) {
    pos.push_back(p);
    hgt.push_back(h);
  }
  std::vector<const Rational*> xy, zz;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    xy.push_back(&pos[i].x);
    xy.push_back(&pos[i].y);
    zz.push_back(&hgt[i]);
  }
  const mpz_class dxy = common_denominator(xy), dz = common_denominator(zz);
  std::vector<mpz_class> X, Y, Z;
  mpz_class max_xy = 0, max_z = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    X.push_back(mpz_class(pos[i].x * dxy));
    Y.push_back(mpz_class(pos[i].y * dxy));
    Z.push_back(mpz_class(hgt[i] * dz));
    max_xy = std::max({max_xy, mpz_class(abs(X.back())), mpz_class(abs(Y.back()))});
    max_z = std::max(max_z, mpz_class(abs(Z.back())));
  }
  std::vector<std::vector<std::size_t>> faces;
  if (max_xy < (mpz_class(1) << 28) && max_z < (mpz_class(1) << 58)) {
    std::vector<detail::i128> x, y, z;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      x.push_back(X[i].get_si());
      y.push_back(Y[i].get_si());
      z.push_back(Z[i].get_si());
    }
    faces = LowerHull<detail::i128>(std::move(x), std::move(y), std::move(z)).faces();
  } else {
    faces = LowerHull<mpz_class>(std::move(X), std::move(Y), std::move(Z)).faces();
  }
  Tiling t;
  VertexPool pool(t);
  for (const auto& f : faces) {
    bool inside = true;
    for (std::size_t v : f) inside = inside && window.contains(pos[v]);
    if (!inside) continue;
    Tile tile;
    tile.event = kNoEvent;
    for (std::size_t v : f) tile.cycle.push_back(pool.get(pos[v]));
    t.tiles.push_back(std::move(tile));
  }
  edges_from_tiles(t);
  return t;
}

std::string tiling_to_json(const Tiling& t) {
  nlohmann::json doc;
  doc["structure"] = structure_name(t.structure);
  doc["k"] = t.order;
  doc["vertices_only"] = t.vertices_only;
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& p : t.vertices)
    verts.push_back({detail::rational_json(p.x), detail::rational_json(p.y)});
  doc["vertices"] = std::move(verts);
  if (!t.degree.empty()) doc["degrees"] = t.degree;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : t.edges) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  nlohmann::json tiles = nlohmann::json::array();
  for (const auto& tile : t.tiles)
    tiles.push_back({{"cycle", tile.cycle}, {"age", age_name(tile.age)}, {"trusted", tile.trusted}});
  doc["tiles"] = std::move(tiles);
  return doc.dump();
}

std::string tiling_to_svg(const Tiling& t, const Rect& view) {
  const double x0 = view.x0.get_d(), y0 = view.y0.get_d();
  const double w = view.x1.get_d() - x0, h = view.y1.get_d() - y0;
  const double size = 800.0;
  const double scale = size / std::max(w, h);
  auto px = [&](const ExactPoint& p) { return (p.xd() - x0) * scale; };
  auto py = [&](const ExactPoint& p) { return (y0 + h - p.yd()) * scale; };
  const char* stroke = "#000000";
  switch (t.structure) {
    case Structure::Del: stroke = "#1f4e79"; break;
    case Structure::Vor: stroke = "#7f1f1f"; break;
    case Structure::Bri: stroke = "#6a1f7f"; break;
    case Structure::Igl: stroke = "#1f6f3f"; break;
  }
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                w * scale, h * scale, w * scale, h * scale);
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const auto& tile : t.tiles) {
    const char* fill = tile.age == Age::Old ? "#cfe2f3" : tile.age == Age::Mid ? "#fce5cd" : "#d9ead3";
    out << "<polygon fill=\"" << fill << "\" stroke=\"none\" points=\"";
    for (std::size_t v : tile.cycle) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(t.vertices[v]), py(t.vertices[v]));
      out << buf;
    }
    out << "\"/>\n";
  }
  for (const auto& [a, b] : t.edges) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" "
                  "stroke-width=\"1\"/>\n",
                  px(t.vertices[a]), py(t.vertices[a]), px(t.vertices[b]), py(t.vertices[b]), stroke);
    out << buf;
  }
  if (t.edges.empty()) {
    for (const auto& v : t.vertices) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2\" fill=\"%s\"/>\n", px(v),
                    py(v), stroke);
      out << buf;
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ktess
