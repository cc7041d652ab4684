#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ktess/events.hpp"

namespace ktess {

enum class Structure { Del, Vor, Bri, Igl };
enum class AngleKind { Direct, Supplementary };

std::string structure_name(Structure s);
Structure parse_structure(const std::string& name);  // "del", "vor", "bri", "igl"
std::string kind_name(AngleKind k);

inline constexpr double kAngleSlack = 1e-12;

/// Minimum inscribed angle (alpha) and minimum supplementary angle (beta) over
/// all circle events of each depth.
struct DepthTables {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<std::size_t> counts;  // zero marks an absent depth
  int l_max = -1;

  bool populated(int l) const {
    return l >= 0 && l <= l_max && counts[static_cast<std::size_t>(l)] > 0;
  }
};

struct AngleSample {
  double value = 0.0;
  int depth = 0;
  AngleKind kind = AngleKind::Direct;
  Structure structure = Structure::Del;
  int order = 0;
  std::size_t event = 0;  // index into EventSet::events
};

DepthTables depth_tables(const EventSet& events, int l_max);

/// All angles of M_k contributed by events centered in the inner window.
std::vector<AngleSample> structure_angles(const EventSet& events, Structure m, int k);

struct VertexAngle {
  double value = 0.0;
  SiteIndex owner = 0;
};

/// Angles of the Brillouin zones meeting at the center of `event` in Bri_k.
std::vector<VertexAngle> brillouin_vertex_angles(const EventSet& events,
                                                 const CircleEvent& event, int k);

/// Angles of the k-th Brillouin zone of `site`. The box around the site of
/// half-width radius_bound[k-1] must lie in the inner window.
std::vector<double> zone_angles(const EventSet& events, SiteIndex site, int k);

struct Extremes {
  double alpha_min = 0.0;
  double omega_max = 0.0;
  bool generic_path = true;
};

Extremes extreme_angles(const DepthTables& tables, const EventSet& events, Structure m, int k);

/// Interior angles of the order-k Delaunay tiles of a possibly degenerate set,
/// treating each cocircular event as a convex polygon. Straight corners are
/// skipped.
std::vector<double> degenerate_delaunay_angles(const EventSet& events, int k);

struct ExtremeRow {
  Structure structure = Structure::Del;
  int k = 0;
  double alpha_min = 0.0;
  double omega_max = 0.0;
  std::string status;  // "ok", "nongeneric" or an error description
};

struct MonotonicityCheck {
  std::string name;
  bool passed = true;
  bool observation = false;  // reported only, never a failure
  std::vector<int> violations_at;  // k such that the inequality fails between k and k+1
};

struct MonotonicityReport {
  bool generic = true;
  std::vector<ExtremeRow> rows;
  std::vector<MonotonicityCheck> checks;

  bool passed() const;
  const ExtremeRow* find(Structure m, int k) const;
};

MonotonicityReport monotonicity_report(const EventSet& events, int k_min, int k_max);

void write_extremes_csv(std::ostream& out, const std::vector<ExtremeRow>& rows);
void write_samples_csv(std::ostream& out, const std::vector<AngleSample>& samples);

}  // namespace ktess
