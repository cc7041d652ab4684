#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ktess/exactgeom.hpp"
#include "ktess/pointsets.hpp"

namespace ktess {

using SiteIndex = std::uint32_t;

/// A circle through three or more sites.
///
/// `on` lists the sites on the circle counterclockwise around the center,
/// starting from the smallest polar angle in [0, 2pi). `inside` lists the
/// sites in the open disk; depth_p is its size.
struct CircleEvent {
  ExactCircle circle;
  std::vector<SiteIndex> on;
  std::vector<SiteIndex> inside;
  int depth_p = 0;

  bool generic() const { return on.size() == 3; }
  /// n in the notation where n + 1 sites lie on the circle.
  int n() const { return static_cast<int>(on.size()) - 1; }
};

/// Sites scaled to a common denominator: site i is (X[i], Y[i]) / D.
struct ScaledSites {
  mpz_class denominator;
  std::vector<std::int64_t> X, Y;
  double inv_scale = 1.0;  // 1 / D as a double

  static ScaledSites from(const std::vector<ExactPoint>& points);
};

struct EventSet {
  std::vector<CircleEvent> events;
  std::shared_ptr<const WindowedSet> source;
  ScaledSites sites;
  int depth_cap = 0;
  /// Largest order k whose depths 0..k-1 are completely represented.
  int k_max_usable = 0;
  /// radius_bound[l]: upper bound on the radius of any depth-l circle centered
  /// in the inner window (infinite sets only; empty for finite sets).
  std::vector<double> radius_bound;

  std::size_t size() const { return events.size(); }
  const ExactPoint& site(SiteIndex i) const { return source->points[i]; }
};

struct EnumerateOptions {
  int threads = 1;
};

/// Enumerates all distinct circles through at least three sites whose center
/// lies in the inner window, whose closed disk lies in the outer window and
/// whose depth is at most depth_cap. Throws WindowTooSmall if the window cannot
/// hold every such circle.
EventSet enumerate_events(const WindowedSet& set, int depth_cap,
                          const EnumerateOptions& options = {});

/// Largest usable order for `set` when enumerating up to depth_cap; does not
/// enumerate.
int usable_order(const WindowedSet& set, int depth_cap);

struct DepthResult {
  int p = 0;
  std::vector<SiteIndex> on;
  std::vector<SiteIndex> inside;
};

/// Exact enclosure counts of `circle` over all sites.
DepthResult depth(const WindowedSet& set, const ExactCircle& circle);

/// Inscribed angle at on-site `apex` subtended by on-sites `a` and `b`, from
/// the scaled integer coordinates.
double site_angle(const EventSet& events, SiteIndex a, SiteIndex apex, SiteIndex b);

/// Sum of the inside sites of an event.
ExactPoint inside_sum(const EventSet& events, const CircleEvent& event);

/// Event-dump JSON (center, r2, on, depth_p per event).
std::string events_to_json(const EventSet& events);

}  // namespace ktess
