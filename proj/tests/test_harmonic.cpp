// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "devissage/error.hpp"
#include "devissage/harmonic.hpp"
#include "doctest.h"

using namespace devissage;

namespace {

std::vector<double> dudley_start() {
  return DudleyState::from_coordinates(0.0, 1.0, {0.0, 0.0}, {0.0, 0.0}, 1.0).pack();
}

}  // namespace

TEST_CASE("constant functional is exact") {
  const auto model = toy_boundary_model(1, 1e-2);
  const std::vector<double> start{0.0, 1.0};
  const HarmonicEstimate h = mc_harmonic(*model, start, BoundaryFunctional::constant(0.7), 200, 20.0, 1e-2, 1, 1);
  CHECK(h.value == 0.7);
  CHECK(h.std_error == 0.0);
}

TEST_CASE("half-space functional from a symmetric Dudley start") {
  const auto model = dudley_boundary_model({3, 1.0}, 1e-2);
  const auto start = dudley_start();
  const HarmonicEstimate h =
      mc_harmonic(*model, start, BoundaryFunctional::half_space(0, 0.0), 1000, 20.0, 1e-2, 4, 1);
  CHECK(std::abs(h.value - 0.5) <= 3 * h.std_error);
  CHECK(h.value <= 1.0);
  CHECK(h.value >= 0.0);
}

TEST_CASE("functionals are bounded and linear on a fixed ensemble") {
  const auto model = toy_boundary_model(1, 1e-2);
  const std::vector<double> start{0.0, 0.2};
  const auto samples = sample_boundary(*model, start, 300, 20.0, 1e-2, 5, 1);
  const BoundaryFunctional f = BoundaryFunctional::half_space(0, 1.0);
  const BoundaryFunctional g = BoundaryFunctional::bump({1.0}, 0.5);
  const BoundaryFunctional fg = BoundaryFunctional::combine(2.0, f, -3.0, g);
  const double lhs = harmonic_from_samples(samples, fg).value;
  const double rhs = 2.0 * harmonic_from_samples(samples, f).value - 3.0 * harmonic_from_samples(samples, g).value;
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK(fg.bound == 5.0);
  const HarmonicEstimate box = harmonic_from_samples(samples, BoundaryFunctional::box({-10.0}, {10.0}));
  CHECK(box.value <= 1.0);
}

TEST_CASE("tower property on toy system 1") {
  const auto model = toy_boundary_model(1, 1e-2);
  const std::vector<double> start{0.0, 0.0};
  const TowerCheck t =
      tower_check(*model, start, BoundaryFunctional::half_space(0, 1.0), 2000, 40, 100, 2.0, 20.0, 1e-2, 6, 1);
  CHECK(t.passed);
  CHECK(std::abs(t.difference) <= 3 * t.combined_std_error);
}

TEST_CASE("boundary law: shared streams and the identity give KS statistic 0") {
  const auto model = toy_boundary_model(1, 1e-2);
  const std::vector<double> start{0.0, 0.0};
  const std::vector<double> zero{0.0};
  const EquivarianceReport r = boundary_law_equivariance(*model, start, zero, 200, 20.0, 1e-2, 7, true, 1);
  REQUIRE(r.per_coordinate.size() == 1);
  CHECK(r.per_coordinate[0].statistic == 0.0);
  CHECK(r.min_p_value == 1.0);
}

TEST_CASE("boundary law of toy system 2 is not translation equivariant") {
  // g_∞ = 0 from every start, so shifting the start does not shift the limit.
  const auto model = toy_boundary_model(2, 1e-2);
  const std::vector<double> start{0.0, 1.0};
  const std::vector<double> shift{0.5};
  const EquivarianceReport r = boundary_law_equivariance(*model, start, shift, 300, 20.0, 1e-2, 8, false, 1);
  CHECK(r.min_p_value < 1e-6);
}

TEST_CASE("rotsym model has no translation action") {
  const auto model = rotsym_boundary_model(WarpModel::builtin("sinh", 3), 1e-2);
  CHECK(model->group_dimension() == 0);
  const std::vector<double> start{0.0, 1.0, 0.0, 0.0};
  const std::vector<double> g{1.0};
  CHECK_THROWS_AS(boundary_law_equivariance(*model, start, g, 10, 1.0, 1e-2, 1, false, 1), DomainError);
}

TEST_CASE("unconverged paths raise the warning") {
  const auto model = toy_boundary_model(1, 1e-12);
  const std::vector<double> start{0.0, 0.0};
  const HarmonicEstimate h = mc_harmonic(*model, start, BoundaryFunctional::constant(1.0), 50, 10.0, 1e-2, 9, 1);
  CHECK(h.unconverged > 10);
  CHECK(h.warning);
}

TEST_CASE("sub-diffusion tail events do not depend on the start") {
  // P(γ¹_T > 0) for large T is the same from γ_0 = 0 and γ_0 = 1.
  const auto model = dudley_boundary_model({3, 1.0}, 1e-2);
  const DudleyLayout L{3};
  auto fraction = [&](double gamma0, std::uint64_t seed) {
    const auto start = DudleyState::from_coordinates(0.0, 1.0, {gamma0, 0.0}, {0.0, 0.0}, 1.0).pack();
    std::vector<double> v;
    for (std::uint64_t i = 0; i < 1000; ++i)
      v.push_back(model->advance(start, 20.0, 1e-2, derive_seed(seed, i))[L.gamma(0)] > 0 ? 1.0 : 0.0);
    return mean_estimate(v);
  };
  const MeanEstimate a = fraction(0.0, 10), b = fraction(1.0, 11);
  CHECK(std::abs(a.mean - b.mean) <= 3 * std::hypot(a.std_error, b.std_error));
}
