#include "ktess/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "ktess/errors.hpp"
#include "ktess/rng.hpp"

namespace ktess {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-mass normalization (the bracket integrates to 3 pi / 4).
double f_value(double t) {
  return 4.0 / (3.0 * kPi) * ((kPi - t) * std::cos(t) + std::sin(t)) * std::sin(t);
}

void check_domain(double t) {
  if (!(t >= 0.0 && t <= kPi)) throw DomainError("angle outside [0, pi]");
}

}  // namespace

std::string miles_name(MilesKind k) {
  switch (k) {
    case MilesKind::F: return "f";
    case MilesKind::G: return "g";
    case MilesKind::H: return "h";
  }
  return "?";
}

double miles_density(MilesKind kind, double t) {
  check_domain(t);
  switch (kind) {
    case MilesKind::F: return f_value(t);
    case MilesKind::G: return f_value(kPi - t);
    case MilesKind::H:
      return 2.0 / (3.0 * kPi) * ((kPi - 2.0 * t) * std::cos(t) + 2.0 * std::sin(t)) * std::sin(t);
  }
  return 0.0;
}

double h_second_derivative(double t) {
  check_domain(t);
  return -8.0 / (3.0 * kPi) * (kPi - 2.0 * t) * std::sin(t) * std::cos(t);
}

double miles_integral(MilesKind kind, double a, double b, int panels) {
  if (panels < 1) throw InvalidParams("quadrature needs at least one panel");
  const double h = (b - a) / (2.0 * panels);
  double s = miles_density(kind, a) + miles_density(kind, b);
  for (int i = 1; i < 2 * panels; ++i) s += (i % 2 ? 4.0 : 2.0) * miles_density(kind, a + i * h);
  return s * h / 3.0;
}

MilesTable::MilesTable(MilesKind kind, int panels) : kind_(kind) {
  const double h = kPi / panels;
  grid_.resize(static_cast<std::size_t>(panels) + 1);
  cum_.resize(grid_.size());
  cum_[0] = 0.0;
  for (int i = 0; i <= panels; ++i) grid_[i] = i * h;
  grid_[panels] = kPi;
  for (int i = 0; i < panels; ++i) {
    // Simpson on each panel.
    const double a = grid_[i], b = grid_[i + 1];
    const double mid = miles_density(kind, 0.5 * (a + b));
    cum_[i + 1] = cum_[i] + (b - a) / 6.0 * (miles_density(kind, a) + 4.0 * mid + miles_density(kind, b));
  }
}

double MilesTable::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= kPi) return cum_.back();
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return cum_[i] + w * (cum_[i + 1] - cum_[i]);
}

double MilesTable::quantile(double u) const {
  const double target = u * cum_.back();
  auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
  if (it == cum_.begin()) return 0.0;
  if (it == cum_.end()) return kPi;
  const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  const double span = cum_[i] - cum_[i - 1];
  const double w = span > 0 ? (target - cum_[i - 1]) / span : 0.0;
  return grid_[i - 1] + w * (grid_[i] - grid_[i - 1]);
}

double Histogram::width() const { return kPi / bins; }
double Histogram::left(int i) const { return i * width(); }
double Histogram::density(int i) const {
  return total == 0 ? 0.0 : static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                                (static_cast<double>(total) * width());
}

Histogram empirical_density(const std::vector<double>& samples, int bins) {
  if (samples.empty()) throw EmptySample();
  if (bins < 1) throw InvalidParams("histogram needs at least one bin");
  Histogram h;
  h.bins = bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : samples) {
    if (!(v > 0.0 && v < kPi)) throw DomainError("angle sample outside (0, pi)");
    int b = static_cast<int>(v / kPi * bins);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  h.total = samples.size();
  return h;
}

FitReport fit_report(const Histogram& hist, MilesKind kind) {
  static const MilesTable tables[] = {MilesTable(MilesKind::F), MilesTable(MilesKind::G),
                                      MilesTable(MilesKind::H)};
  const MilesTable& table = tables[static_cast<int>(kind)];
  FitReport r;
  r.n = hist.total;
  const double w = hist.width();
  double emp_cum = 0.0;
  for (int i = 0; i < hist.bins; ++i) {
    const double a = hist.left(i), b = i + 1 == hist.bins ? kPi : hist.left(i + 1);
    const double mass = table.cdf(b) - table.cdf(a);
    r.l1 += std::fabs(hist.density(i) * w - mass);
    emp_cum += hist.total ? static_cast<double>(hist.counts[static_cast<std::size_t>(i)]) /
                                static_cast<double>(hist.total)
                          : 0.0;
    r.ks = std::max(r.ks, std::fabs(emp_cum - table.cdf(b)));
  }
  return r;
}

std::vector<double> sample_miles(MilesKind kind, std::size_t n, std::uint64_t seed) {
  MilesTable table(kind);
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    double t;
    do {
      t = table.quantile(rng.next_unit());
    } while (!(t > 0.0 && t < kPi));
    v = t;
  }
  return out;
}

double self_consistency_threshold(MilesKind kind, std::size_t n, int bins, int replicates,
                                  std::uint64_t seed) {
  if (n == 0 || replicates < 1) throw InvalidParams("self-consistency run needs samples");
  double sum = 0.0;
  for (int r = 0; r < replicates; ++r) {
    auto s = sample_miles(kind, n, CounterRng::mix64(seed + static_cast<std::uint64_t>(r)));
    sum += fit_report(empirical_density(s, bins), kind).l1;
  }
  return 1.5 * sum / replicates;
}

VertexDensityReport vertex_density_report(const EventSet& events, int k, double rho) {
  if (k < 1 || k > events.k_max_usable) throw OrderOutOfRange("order outside the usable range");
  const Rect& in = events.source->inner_window;
  VertexDensityReport r;
  r.k = k;
  r.area = Rational((in.x1 - in.x0) * (in.y1 - in.y0)).get_d();
  std::vector<std::size_t> by_depth(static_cast<std::size_t>(k), 0);
  for (const auto& ev : events.events)
    if (ev.depth_p < k) ++by_depth[static_cast<std::size_t>(ev.depth_p)];
  auto at = [&](int l) { return l >= 0 ? by_depth[static_cast<std::size_t>(l)] : std::size_t{0}; };
  r.new_count = at(k - 1);
  r.new_observed = static_cast<double>(r.new_count) / r.area;
  r.new_expected = 2.0 * k * rho;
  if (k >= 2) {
    r.old_count = at(k - 2);
    r.old_observed = static_cast<double>(*r.old_count) / r.area;
    r.old_expected = (2.0 * k - 1.0) * rho;
  }
  r.bri_degree3_angles = 3.0 * static_cast<double>(at(k - 1) + at(k - 3)) / r.area;
  r.bri_degree6_angles = 6.0 * static_cast<double>(at(k - 2)) / r.area;
  r.bri_angles_expected = (12.0 * k - 6.0) * rho;
  return r;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist, MilesKind kind) {
  out << "bin_left,bin_right,count,density,closed_form_density\n";
  out << std::setprecision(17);
  for (int i = 0; i < hist.bins; ++i) {
    const double a = hist.left(i), b = i + 1 == hist.bins ? kPi : hist.left(i + 1);
    const double closed = miles_integral(kind, a, b, 64) / (b - a);
    out << a << ',' << b << ',' << hist.counts[static_cast<std::size_t>(i)] << ','
        << hist.density(i) << ',' << closed << '\n';
  }
}

std::string fit_report_json(const FitReport& fit, MilesKind kind, const std::string& label) {
  nlohmann::json j;
  j["label"] = label;
  j["density"] = miles_name(kind);
  j["l1"] = fit.l1;
  j["ks"] = fit.ks;
  j["n"] = fit.n;
  return j.dump();
}

}  // namespace ktess
