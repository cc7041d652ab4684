#pragma once

#include <cstdint>
#include <string>

#include "ktess/pointsets.hpp"

namespace ktess {

struct CounterexampleParams {
  int k = 10;
  Rational tau{1, 5};
  Rational eps{1, 100};
  std::uint64_t seed = 5;
};

struct Bounds {
  double bound_13 = 0.0;  // upper bound on the largest Delaunay angle of the perturbed lattice
  double bound_14 = 0.0;  // lower bound on the satellite angle
  double bound_15 = 0.0;  // upper bound on the largest angle at order k + 1
};

/// Throws InvalidParams unless k >= 6, 0 < tau < 1/4, eps > 0 and the
/// satellite bound exceeds the order-(k+1) bound.
void validate(const CounterexampleParams& params);
Bounds bound_values(const CounterexampleParams& params);

/// Perturbed lattice plus two satellites a', a'' within eps of a lattice site
/// a, such that the circle through a', a, a'' encloses k - 2 sites and a lies
/// between the satellites on the shorter arc. The satellites are the last two
/// points; the inner window is a box around that circle.
WindowedSet build_counterexample(const CounterexampleParams& params);

struct CounterexampleReport {
  double omega_del_k = 0.0;
  double omega_del_k1 = 0.0;
  Bounds bounds;
  int satellite_circle_depth = -1;
  double satellite_angle = 0.0;
  double satellite_radius = 0.0;
  bool pass = false;
};

CounterexampleReport verify_counterexample(const WindowedSet& set,
                                           const CounterexampleParams& params);

std::string counterexample_report_json(const CounterexampleReport& report,
                                       const CounterexampleParams& params);

}  // namespace ktess
