// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "devissage/error.hpp"
#include "devissage/random.hpp"
#include "devissage/stats.hpp"
#include "doctest.h"

using namespace devissage;

namespace {

Path line_path(double slope, double horizon, double dt) {
  Path p;
  p.dimension = 1;
  const auto n = static_cast<std::size_t>(std::lround(horizon / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    p.times.push_back(static_cast<double>(k) * dt);
    p.states.push_back(slope * static_cast<double>(k) * dt);
  }
  return p;
}

}  // namespace

TEST_CASE("mean of a constant sample is exact") {
  const std::vector<double> v(1000, 0.7);
  const MeanEstimate m = mean_estimate(v);
  CHECK(m.mean == 0.7);
  CHECK(m.std_error == 0.0);
}

TEST_CASE("median of odd and even samples") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("drift_rate of deterministic lines") {
  PathEnsemble e;
  for (int i = 0; i < 5; ++i) e.paths.push_back(line_path(2.0, 10.0, 0.01));
  const DriftEstimate d = drift_rate(e, 0, 5.0, 10.0);
  CHECK(d.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.std_error < 1e-12);

  PathEnsemble scaled = e;
  for (Path& p : scaled.paths)
    for (double& x : p.states) x *= -3.0;
  CHECK(drift_rate(scaled, 0, 5.0, 10.0).slope == doctest::Approx(-6.0).epsilon(1e-12));
}

TEST_CASE("drift_rate of Brownian motion is zero within 3 SE") {
  PathEnsemble e;
  RandomStream s(8);
  for (int i = 0; i < 1000; ++i) {
    Path p;
    p.dimension = 1;
    double x = 0;
    for (int k = 0; k <= 1000; ++k) {
      p.times.push_back(0.1 * k);
      p.states.push_back(x);
      x += std::sqrt(0.1) * s.normal();
    }
    e.paths.push_back(std::move(p));
  }
  const DriftEstimate d = drift_rate(e, 0, 50.0, 100.0);
  CHECK(std::abs(d.slope) < 3 * d.std_error);
}

TEST_CASE("drift_rate rejects windows with fewer than 10 points") {
  PathEnsemble e;
  e.paths.push_back(line_path(1.0, 1.0, 0.25));
  CHECK_THROWS_AS(drift_rate(e, 0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(drift_rate(e, 0, 1.0, 0.0), DomainError);
}

TEST_CASE("tail certificates") {
  Path flat = line_path(0.0, 10.0, 0.1);
  for (double& x : flat.states) x = 1.0;
  ConvergenceCertificate c = tail_certificate(flat, 0, 1e-2);
  CHECK(c.sup_increment == 0.0);
  CHECK(c.passed);
  CHECK(c.t0 == 5.0);

  c = tail_certificate(line_path(1.0, 10.0, 0.1), 0, 1e-2);
  CHECK(c.sup_increment == doctest::Approx(5.0));
  CHECK_FALSE(c.passed);
}

TEST_CASE("Kolmogorov survival function against tabulated values") {
  // Classical critical values: Q(1.2238) = 0.10, Q(1.3581) = 0.05, Q(1.6276) = 0.01.
  CHECK(kolmogorov_survival(1.2238) == doctest::Approx(0.10).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  // Both series agree where they meet.
  CHECK(kolmogorov_survival(1.18 - 1e-12) == doctest::Approx(kolmogorov_survival(1.18)).epsilon(1e-10));
}

TEST_CASE("two-sample KS") {
  RandomStream s(3);
  std::vector<double> a(2000), b(2000), shifted(2000);
  for (double& v : a) v = s.uniform();
  for (double& v : b) v = s.uniform();
  for (double& v : shifted) v = s.uniform() + 0.5;

  const KsResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(ks_two_sample(a, shifted).p_value < 1e-6);

  std::vector<double> ea(a), eb(b);
  for (double& v : ea) v = std::exp(v);
  for (double& v : eb) v = std::exp(v);
  CHECK(ks_two_sample(ea, eb).statistic == ks_two_sample(a, b).statistic);
}

TEST_CASE("two-sample KS is calibrated at the 0.001 level") {
  // Rejection rate under the null must not exceed the level beyond sampling noise.
  RandomStream s(17);
  int rejections = 0;
  const int reruns = 5000;
  std::vector<double> a(1000), b(1000);
  for (int r = 0; r < reruns; ++r) {
    for (double& v : a) v = s.uniform();
    for (double& v : b) v = s.uniform();
    if (ks_two_sample(a, b).p_value <= 1e-3) ++rejections;
  }
  CAPTURE(rejections);
  CHECK(static_cast<double>(rejections) / reruns <= 1e-3 + 3 * std::sqrt(1e-3 / reruns));
}

TEST_CASE("one-sample KS against the uniform CDF") {
  RandomStream s(5);
  std::vector<double> a(5000);
  for (double& v : a) v = s.uniform();
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_one_sample(a, uniform).p_value > 1e-3);
  for (double& v : a) v = v * v;
  CHECK(ks_one_sample(a, uniform).p_value < 1e-6);
}

TEST_CASE("improper integrals") {
  const ImproperIntegral e = improper_integral([](double r) { return std::exp(-r); }, 1.0);
  CHECK(e.verdict == IntegralVerdict::convergent);
  CHECK(e.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

  const ImproperIntegral inv = improper_integral([](double r) { return 1.0 / r; }, 1.0);
  CHECK(inv.verdict == IntegralVerdict::divergent);
  CHECK(std::isinf(inv.value));

  const ImproperIntegral sh = improper_integral([](double r) { return std::pow(std::sinh(r), -2.0); }, 1.0);
  CHECK(sh.verdict == IntegralVerdict::convergent);
  CHECK(std::abs(sh.value - (1.0 / std::tanh(1.0) - 1.0)) < 1e-5);

  for (std::size_t k = 1; k < inv.partial_values.size(); ++k)
    CHECK(inv.partial_values[k] >= inv.partial_values[k - 1]);

  CHECK_THROWS_AS(improper_integral([](double) { return NAN; }, 1.0), DomainError);
  CHECK_THROWS_AS(improper_integral([](double r) { return r; }, 0.0), DomainError);
}
