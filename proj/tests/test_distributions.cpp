#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ktess/distributions.hpp"
#include "ktess/errors.hpp"
#include "ktess/rng.hpp"

using namespace ktess;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed-form values") {
  CHECK(miles_density(MilesKind::F, 0.0) == doctest::Approx(0.0));
  CHECK(std::fabs(miles_density(MilesKind::F, kPi)) < 1e-15);
  CHECK(miles_density(MilesKind::F, kPi / 2) == doctest::Approx(4.0 / (3.0 * kPi)));
  for (int i = 0; i <= 100; ++i) {
    double t = kPi * i / 100;
    double f = miles_density(MilesKind::F, t), g = miles_density(MilesKind::G, t);
    CHECK(g == doctest::Approx(miles_density(MilesKind::F, kPi - t)).epsilon(1e-14));
    CHECK(miles_density(MilesKind::H, t) == doctest::Approx(0.5 * (f + g)).epsilon(1e-12));
    CHECK(miles_density(MilesKind::H, t) ==
          doctest::Approx(miles_density(MilesKind::H, kPi - t)).epsilon(1e-12));
    CHECK(f >= -1e-15);
  }
  CHECK_THROWS_AS(miles_density(MilesKind::F, -0.1), DomainError);
  CHECK_THROWS_AS(h_second_derivative(4.0), DomainError);
}

TEST_CASE("normalization") {
  for (MilesKind k : {MilesKind::F, MilesKind::G, MilesKind::H})
    CHECK(std::fabs(miles_integral(k, 0.0, kPi) - 1.0) < 1e-9);
}

TEST_CASE("second derivative of h") {
  CHECK(std::fabs(h_second_derivative(kPi / 2)) < 1e-15);
  CHECK(std::fabs(h_second_derivative(0.0)) < 1e-15);
  CHECK(h_second_derivative(kPi / 4) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  const double step = 1e-4;
  for (int i = 1; i < 1000; ++i) {
    double t = kPi * i / 1000;
    CHECK(h_second_derivative(t) <= 1e-12);
    if (t - step < 0 || t + step > kPi) continue;
    double fd = (miles_density(MilesKind::H, t + step) - 2 * miles_density(MilesKind::H, t) +
                 miles_density(MilesKind::H, t - step)) /
                (step * step);
    CHECK(std::fabs(fd - h_second_derivative(t)) < 1e-5);
  }
}

TEST_CASE("histograms") {
  Histogram h = empirical_density({kPi / 2, kPi / 2, kPi / 2}, 2);
  CHECK(h.density(0) == 0.0);
  CHECK(h.density(1) == doctest::Approx(2.0 / kPi));
  CHECK_THROWS_AS(empirical_density({}, 8), EmptySample);

  auto s = sample_miles(MilesKind::F, 2000, 4);
  std::vector<double> pooled = s;
  for (double v : s) pooled.push_back(kPi - v);
  Histogram p = empirical_density(pooled, 64);
  for (int i = 0; i < 64; ++i) CHECK(p.counts[i] == p.counts[63 - i]);
}

TEST_CASE("goodness of fit") {
  auto s = sample_miles(MilesKind::F, 100000, 1);
  FitReport ff = fit_report(empirical_density(s, 64), MilesKind::F);
  CHECK(ff.l1 < 0.03);
  CHECK(ff.n == 100000);
  std::vector<double> sup;
  for (double v : s) sup.push_back(kPi - v);
  FitReport gg = fit_report(empirical_density(sup, 64), MilesKind::G);
  CHECK(gg.l1 == doctest::Approx(ff.l1).epsilon(1e-6));
  CounterRng rng(2);
  std::vector<double> uni(100000);
  for (auto& v : uni) v = kPi * (0.5 + rng.next_u32()) / 4294967296.0;
  CHECK(fit_report(empirical_density(uni, 64), MilesKind::F).l1 > 0.2);
  double thr = self_consistency_threshold(MilesKind::F, 100000, 64, 5, 9);
  CHECK(ff.l1 < thr);
}

TEST_CASE("vertex densities on a Poisson torus") {
  WindowedSet set = poisson_torus(60.0, 3, 12);
  EventSet ev = enumerate_events(set, 3);
  VertexDensityReport r1 = vertex_density_report(ev, 1, 60.0);
  CHECK_FALSE(r1.old_count.has_value());
  CHECK(r1.new_expected == doctest::Approx(120.0));
  VertexDensityReport r3 = vertex_density_report(ev, 3, 60.0);
  REQUIRE(r3.old_expected.has_value());
  CHECK(*r3.old_expected == doctest::Approx(300.0));
  // Degree-3 and degree-6 Brillouin vertices carry equally many angles.
  CHECK(r3.bri_degree3_angles == doctest::Approx(r3.bri_degree6_angles));
}
