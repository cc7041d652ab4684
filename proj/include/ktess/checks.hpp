#pragma once

#include <vector>

#include "ktess/tilings.hpp"

namespace ktess {

/// Aurenhammer sites of every k-subset of `points`, or the k Iglesias sites of
/// every k-subset when `iglesias` is set. Subsets are listed in lexicographic
/// index order.
std::vector<AurenhammerSite> subset_sites(const std::vector<ExactPoint>& points, int k,
                                          bool iglesias);

/// True when both tilings have the same tiles as sets of exact vertex cycles.
bool same_tiles(const Tiling& a, const Tiling& b);

}  // namespace ktess
