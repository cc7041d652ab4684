#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ktess::detail {

/// Uniform bucket grid over floating-point copies of the sites. Used only to
/// prune candidate sets; every geometric decision is made exactly elsewhere.
class SpatialGrid {
 public:
  SpatialGrid(const std::vector<double>& xs, const std::vector<double>& ys, double cell)
      : xs_(xs), ys_(ys) {
    x0_ = *std::min_element(xs.begin(), xs.end());
    y0_ = *std::min_element(ys.begin(), ys.end());
    double x1 = *std::max_element(xs.begin(), xs.end());
    double y1 = *std::max_element(ys.begin(), ys.end());
    double span = std::max({x1 - x0_, y1 - y0_, 1e-12});
    // Keep the bucket count bounded.
    cell_ = std::max(cell, span / 1024.0);
    nx_ = static_cast<long>(std::floor((x1 - x0_) / cell_)) + 1;
    ny_ = static_cast<long>(std::floor((y1 - y0_) / cell_)) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i < xs.size(); ++i)
      buckets_[static_cast<std::size_t>(index(cx(xs[i]), cy(ys[i])))].push_back(i);
  }

  template <class F>
  void within(double x, double y, double r, F&& visit) const {
    long i0 = std::max(0L, cx(x - r)), i1 = std::min(nx_ - 1, cx(x + r));
    long j0 = std::max(0L, cy(y - r)), j1 = std::min(ny_ - 1, cy(y + r));
    double r2 = r * r;
    for (long i = i0; i <= i1; ++i)
      for (long j = j0; j <= j1; ++j)
        for (std::size_t p : buckets_[static_cast<std::size_t>(index(i, j))]) {
          double dx = xs_[p] - x, dy = ys_[p] - y;
          if (dx * dx + dy * dy <= r2) visit(p);
        }
  }

  /// Sorted distances from (x, y) to its `k` nearest sites (fewer if the set
  /// is smaller).
  void nearest_distances(double x, double y, std::size_t k, std::vector<double>& out) const {
    out.clear();
    long ci = std::clamp(cx(x), 0L, nx_ - 1);
    long cj = std::clamp(cy(y), 0L, ny_ - 1);
    // Distance from the query to the border of its own (clamped) cell block.
    for (long ring = 0;; ++ring) {
      bool any = false;
      for (long i = ci - ring; i <= ci + ring; ++i) {
        for (long j = cj - ring; j <= cj + ring; ++j) {
          if (std::max(std::labs(i - ci), std::labs(j - cj)) != ring) continue;
          if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
          any = true;
          for (std::size_t p : buckets_[static_cast<std::size_t>(index(i, j))])
            out.push_back(std::hypot(xs_[p] - x, ys_[p] - y));
        }
      }
      bool exhausted = !any && ring > std::max(nx_, ny_) + 1;
      if (out.size() >= k) {
        std::nth_element(out.begin(), out.begin() + static_cast<long>(k - 1), out.end());
        double kth = out[k - 1];
        // Sites in later rings are at least ring * cell away from any query
        // inside the clamped block, minus the query's offset outside it.
        double outside = std::max({x0_ + ci * cell_ - x, x - (x0_ + (ci + 1) * cell_),
                                   y0_ + cj * cell_ - y, y - (y0_ + (cj + 1) * cell_), 0.0});
        if (kth <= ring * cell_ - outside || exhausted) {
          out.resize(k);
          std::sort(out.begin(), out.end());
          return;
        }
      } else if (exhausted) {
        std::sort(out.begin(), out.end());
        return;
      }
    }
  }

 private:
  long cx(double x) const { return static_cast<long>(std::floor((x - x0_) / cell_)); }
  long cy(double y) const { return static_cast<long>(std::floor((y - y0_) / cell_)); }
  long index(long i, long j) const { return i * ny_ + j; }

  const std::vector<double>& xs_;
  const std::vector<double>& ys_;
  double x0_, y0_, cell_;
  long nx_, ny_;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace ktess::detail
