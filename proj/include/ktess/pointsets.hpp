#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ktess/exactgeom.hpp"

namespace ktess {

/// Closed axis-aligned rectangle with rational corners.
struct Rect {
  Rational x0, y0, x1, y1;

  bool contains(const ExactPoint& p) const {
    return x0 <= p.x && p.x <= x1 && y0 <= p.y && p.y <= y1;
  }
  bool contains(const Rect& r) const {
    return x0 <= r.x0 && r.x1 <= x1 && y0 <= r.y0 && r.y1 <= y1;
  }
  bool operator==(const Rect& o) const {
    return x0 == o.x0 && y0 == o.y0 && x1 == o.x1 && y1 == o.y1;
  }
};

/// A finite sample of a (possibly infinite) point set.
///
/// `outer_window` is the region in which the sample agrees with the infinite
/// set; `inner_window` is where results are trusted, which holds for a circle
/// whose center is in the inner window and whose closed disk fits the outer
/// one. Finite sets carry bounding boxes and no window semantics.
struct WindowedSet {
  std::vector<ExactPoint> points;
  Rect inner_window;
  Rect outer_window;
  std::string tag;
  std::optional<std::uint64_t> seed;
  bool finite = false;

  std::size_t size() const { return points.size(); }
};

/// Identifies a cocircular configuration found by a genericity scan.
struct CocircularCircle {
  ExactCircle circle;
  std::size_t on_count = 0;
  int depth_p = 0;
};

struct GenericityReport {
  bool is_generic = true;
  std::vector<CocircularCircle> violations;
};

/// Default depth cap for the genericity scans run inside generators.
inline constexpr int kDefaultScanDepth = 30;
/// Regeneration attempts before a generator gives up.
inline constexpr int kGenericityRetries = 16;
/// Random coordinates are multiples of 2^-32.
inline constexpr int kGridBits = 32;

/// All integer points of a copies x copies block containing [0,1]^2 as its
/// central cell; inner window [0,1]^2.
WindowedSet integer_lattice(int copies);

/// Integer lattice with each point moved by an independent uniform offset in
/// the closed disk of radius tau. Points leaving the shrunken outer window are
/// clipped. Regenerates (bounded) until the scan finds no cocircular circle.
WindowedSet perturbed_lattice(int copies, const Rational& tau, std::uint64_t seed,
                              int scan_depth = kDefaultScanDepth);

/// n0 uniform points in [0,1)^2 replicated into a copies x copies block.
WindowedSet random_periodic(int n0, int copies, std::uint64_t seed);

/// Poisson(rho) many uniform points in [0,1)^2, replicated like random_periodic.
WindowedSet poisson_torus(double rho, int copies, std::uint64_t seed);

/// Lattice with basis (1,0), (q1, 1+q2) for small random q1, q2, regenerated
/// until no cocircular circle up to `scan_depth` is centered in the inner cell.
WindowedSet non_cocircular_lattice(int copies, std::uint64_t seed,
                                   int scan_depth = kDefaultScanDepth);

/// Same lattice with explicit shear parameters; throws GenericityFailure if the
/// scan finds a cocircular circle.
WindowedSet non_cocircular_lattice_with(int copies, const Rational& q1, const Rational& q2,
                                        int scan_depth = kDefaultScanDepth);

/// Rational near-equilateral triangle plus its exact barycenter (finite set).
WindowedSet finite_example_triangle_barycenter();

/// Finite set of n uniform points on a 2^-bits grid in [0,1)^2, regenerated
/// until generic.
WindowedSet random_finite(int n, std::uint64_t seed, int bits = 16);

/// Scans every circle event centered in the inner window with depth at most
/// depth_cap (clamped to what the window supports) for four or more
/// cocircular sites.
GenericityReport genericity_report(const WindowedSet& set, int depth_cap);

/// Copy of `set` with a different inner window (must lie in the outer window).
WindowedSet with_inner_window(const WindowedSet& set, const Rect& inner);

/// Point-set JSON interchange format.
std::string pointset_to_json(const WindowedSet& set);
WindowedSet pointset_from_json(const std::string& text);
void write_pointset(const WindowedSet& set, const std::string& path);
WindowedSet read_pointset(const std::string& path);

}  // namespace ktess
