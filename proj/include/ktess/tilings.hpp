#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ktess/angles.hpp"
#include "ktess/events.hpp"

namespace ktess {

enum class Age { Old, Mid, New };
std::string age_name(Age a);

struct Tile {
  std::vector<std::size_t> cycle;  // counterclockwise vertex indices
  Age age = Age::New;
  std::size_t event = 0;  // defining circle event (index into EventSet::events)
  bool trusted = true;    // disk strictly inside the outer window
};

inline constexpr std::size_t kNoEvent = static_cast<std::size_t>(-1);

struct Tiling {
  Structure structure = Structure::Del;
  int order = 0;
  std::vector<ExactPoint> vertices;
  std::vector<std::size_t> vertex_event;  // event at each vertex (Vor/Bri), else kNoEvent
  std::vector<int> degree;                // vertex degree (Vor/Bri)
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Tile> tiles;
  bool vertices_only = false;  // cocircular input: no edge structure produced
};

/// Weighted point of an order-k Voronoi diagram written as a power diagram.
struct AurenhammerSite {
  ExactPoint position;
  Rational height;
  Rational weight;  // |position|^2 - height
  std::vector<ExactPoint> generator;
  std::optional<std::size_t> distinguished;  // index into generator (Iglesias sites)
};

AurenhammerSite aurenhammer_site(const std::vector<ExactPoint>& subset);
AurenhammerSite iglesias_site(const std::vector<ExactPoint>& subset, std::size_t distinguished);

Tiling delaunay_mosaic(const EventSet& events, int k);
Tiling iglesias_mosaic(const EventSet& events, int k);
Tiling voronoi_tessellation(const EventSet& events, int k);
Tiling brillouin_tessellation(const EventSet& events, int k);

struct DualReport {
  std::size_t checked = 0;          // interior edges of T with both duals present
  std::size_t boundary_edges = 0;   // edges of T with a single adjacent tile
  std::size_t missing_duals = 0;    // adjacent tiles whose dual vertex is absent in D
  std::size_t orthogonality_violations = 0;
  std::size_t orientation_violations = 0;
  std::vector<std::pair<std::size_t, std::size_t>> violating_edges;  // vertex pairs of T

  bool ok() const { return orthogonality_violations == 0 && orientation_violations == 0; }
};

/// Checks that each interior edge p->q of T, with tile t1 on its left and t2
/// on its right, is orthogonal to the D-edge joining the vertices of t1's and
/// t2's events and that the latter runs from left to right.
DualReport check_orthogonal_dual(const Tiling& t, const Tiling& d);

/// Weighted Delaunay tiling of the sites from the lower convex hull of the
/// lifted points (position, height), restricted to tiles inside `window`.
Tiling lifted_hull_oracle(const std::vector<AurenhammerSite>& sites, const Rect& window);

std::string tiling_to_json(const Tiling& t);
std::string tiling_to_svg(const Tiling& t, const Rect& view);

}  // namespace ktess
