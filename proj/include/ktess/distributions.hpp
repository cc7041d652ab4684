#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ktess/events.hpp"

namespace ktess {

/// Angle densities of the Poisson-Delaunay triangle (F), of its supplements
/// (G) and of their average (H).
enum class MilesKind { F, G, H };

std::string miles_name(MilesKind k);

/// Density at t in [0, pi]; DomainError outside.
double miles_density(MilesKind kind, double t);
double h_second_derivative(double t);

inline constexpr int kQuadraturePanels = 10000;

/// Composite Simpson integral of the density over [a, b].
double miles_integral(MilesKind kind, double a, double b, int panels = kQuadraturePanels);

/// Cumulative distribution tabulated on a fixed grid, with inverse sampling.
class MilesTable {
 public:
  explicit MilesTable(MilesKind kind, int panels = kQuadraturePanels);
  double cdf(double t) const;
  double quantile(double u) const;
  MilesKind kind() const { return kind_; }

 private:
  MilesKind kind_;
  std::vector<double> grid_, cum_;
};

struct Histogram {
  int bins = 64;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double width() const;
  double left(int i) const;
  double density(int i) const;
};

Histogram empirical_density(const std::vector<double>& samples, int bins = 64);

struct FitReport {
  double l1 = 0.0;
  double ks = 0.0;
  std::uint64_t n = 0;
};

/// L1 distance between the histogram density and the bin-averaged closed form,
/// and the largest CDF gap at the bin edges.
FitReport fit_report(const Histogram& hist, MilesKind kind);

/// n independent draws from the closed-form density.
std::vector<double> sample_miles(MilesKind kind, std::size_t n, std::uint64_t seed);

/// Goodness-of-fit threshold: 1.5 times the mean L1 distance of histograms of
/// n direct draws from the closed form, over `replicates` runs.
double self_consistency_threshold(MilesKind kind, std::size_t n, int bins, int replicates,
                                  std::uint64_t seed);

struct VertexDensityReport {
  int k = 0;
  double area = 0.0;
  std::size_t new_count = 0;
  std::optional<std::size_t> old_count;  // absent at k = 1
  double new_observed = 0.0;
  std::optional<double> old_observed;
  double new_expected = 0.0;
  std::optional<double> old_expected;
  // Angles at degree-3 and degree-6 vertices of Bri_k per unit area.
  double bri_degree3_angles = 0.0;
  double bri_degree6_angles = 0.0;
  double bri_angles_expected = 0.0;
};

VertexDensityReport vertex_density_report(const EventSet& events, int k, double rho);

void write_histogram_csv(std::ostream& out, const Histogram& hist, MilesKind kind);
std::string fit_report_json(const FitReport& fit, MilesKind kind, const std::string& label);

}  // namespace ktess
