#include "ktess/checks.hpp"

#include <algorithm>
#include <set>

namespace ktess {

namespace {

using Cycle = std::vector<ExactPoint>;

struct CycleLess {
  bool operator()(const Cycle& a, const Cycle& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), PointLess{});
  }
};

std::set<Cycle, CycleLess> cycles(const Tiling& t) {
  std::set<Cycle, CycleLess> out;
  for (const auto& tile : t.tiles) {
    Cycle c;
    for (std::size_t v : tile.cycle) c.push_back(t.vertices[v]);
    std::rotate(c.begin(), std::min_element(c.begin(), c.end(), PointLess{}), c.end());
    out.insert(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<AurenhammerSite> subset_sites(const std::vector<ExactPoint>& points, int k,
                                          bool iglesias) {
  std::vector<AurenhammerSite> out;
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<ExactPoint> b;
    for (int i : idx) b.push_back(points[i]);
    if (iglesias) {
      for (int d = 0; d < k; ++d) out.push_back(iglesias_site(b, static_cast<std::size_t>(d)));
    } else {
      out.push_back(aurenhammer_site(b));
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

bool same_tiles(const Tiling& a, const Tiling& b) { return cycles(a) == cycles(b); }

}  // namespace ktess
