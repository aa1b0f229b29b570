// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "devissage/dudley.hpp"
#include "devissage/error.hpp"
#include "doctest.h"

using namespace devissage;

namespace {

std::vector<double> start_state(int d) {
  return DudleyState::from_coordinates(0.0, 1.0, std::vector<double>(d - 1, 0.0), std::vector<double>(d - 1, 0.0),
                                       1.0)
      .pack();
}

double norm2(const MinkowskiVector& v) {
  double s = 0;
  for (double x : v.components()) s += x * x;
  return s;
}

}  // namespace

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS((DudleyParams{1, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((DudleyParams{3, 0.0}.validate()), DomainError);
  CHECK_NOTHROW((DudleyParams{2, 0.5}.validate()));
  CHECK(DudleyParams{3, 1.0}.alpha_rate() == 1.0);
  CHECK(DudleyParams{3, 0.5}.alpha_rate() == 0.25);
}

TEST_CASE("reconstruction of the reference state") {
  const DudleyParams p{3, 1.0};
  const DudleyState s = DudleyState::from_coordinates(0, 1, {0, 0}, {0, 0}, 1);
  const PhasePoint x = reconstruct_phase(s, p);
  CHECK(x.velocity.vector()[0] == doctest::Approx(1.0));
  CHECK(x.position[0] == doctest::Approx(1.0));
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK(std::abs(x.velocity.vector()[i]) < 1e-15);
    CHECK(std::abs(x.position[i]) < 1e-15);
  }
  DudleyState far = s;
  far.log_beta = 701;
  CHECK_THROWS_AS(reconstruct_phase(far, p), DomainError);
}

TEST_CASE("phase_to_state inverts reconstruct_phase") {
  const DudleyParams p{3, 1.0};
  const DudleyState s = DudleyState::from_coordinates(0.4, 2.5, {0.3, -1.2}, {0.7, 0.1}, -0.6);
  const PhasePoint x = reconstruct_phase(s, p);
  const DudleyState back = phase_to_state(x.velocity, x.position);
  CHECK(back.alpha == doctest::Approx(s.alpha).epsilon(1e-12));
  CHECK(back.beta() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(back.delta == doctest::Approx(-0.6).epsilon(1e-12));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.h[i] == doctest::Approx(s.h[i]).epsilon(1e-12));
    CHECK(back.gamma[i] == doctest::Approx(s.gamma[i]).epsilon(1e-12));
  }
}

TEST_CASE("vanishing noise: h frozen, β integrates e^α") {
  const DudleyParams p{3, 1e-12};
  const auto x0 = start_state(3);
  const Path path = integrate_path(dudley_fields(p), x0, 1.0, 1e-3, 4, 100);
  const DudleyLayout L{3};
  const std::size_t last = path.size() - 1;
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(path.value(last, L.h(i))) < 1e-6);
  CHECK(std::exp(path.value(last, L.log_beta)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(path.value(last, L.delta()) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("simulated states stay consistent") {
  const DudleyParams p{3, 1.0};
  const DudleyLayout L{3};
  const auto x0 = start_state(3);
  const Path path = integrate_path(dudley_fields(p), x0, 10.0, 1e-4, 21, 100);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const DudleyState s = DudleyState::unpack(path.state(k), 3);
    const double u = std::exp(s.log_beta - s.alpha);
    CHECK(std::abs(path.value(k, L.u()) - u) <= 1e-6 * std::max(1.0, u));
    const PhasePoint x = reconstruct_phase(s, p);
    CHECK(std::abs(lorentz_form(x.velocity.vector()) - 1.0) < 1e-9 * norm2(x.velocity.vector()));
  }
}

TEST_CASE("fields are invariant under translations of (h, δ)") {
  const DudleyParams p{4, 0.8};
  const SdeSpec spec = dudley_fields(p);
  const DudleyLayout L{4};
  const std::vector<double> a =
      DudleyState::from_coordinates(0.3, 1.7, {0.1, -0.4, 0.2}, {0.5, 0.6, -0.7}, 0.9).pack();
  std::vector<double> b = a;
  for (std::size_t i = 0; i < 3; ++i) b[L.h(i)] += 2.5 * static_cast<double>(i + 1);
  b[L.delta()] -= 4.0;
  std::vector<double> fa(a.size()), fb(a.size()), ga(a.size() * spec.noise_dim), gb(ga.size());
  spec.drift(a, 0.0, fa);
  spec.drift(b, 0.0, fb);
  spec.diffusion(a, 0.0, ga);
  spec.diffusion(b, 0.0, gb);
  CHECK(fa == fb);
  CHECK(ga == gb);
}

TEST_CASE("position increments integrate the velocity") {
  // |ξ_T - ξ_0 - Σ ξ̇_k dt| over a fixed horizon shrinks like √dt.
  const DudleyParams p{3, 1.0};
  const auto x0 = start_state(3);
  auto mean_defect = [&](double dt) {
    double total = 0;
    const int paths = 50;
    for (int i = 0; i < paths; ++i) {
      const Path path = integrate_path(dudley_fields(p), x0, 1.0, dt, 300 + i, 1);
      MinkowskiVector sum = MinkowskiVector::zero(3);
      for (std::size_t k = 0; k + 1 < path.size(); ++k)
        sum += dt * reconstruct_phase(DudleyState::unpack(path.state(k), 3), p).velocity.vector();
      const MinkowskiVector first = reconstruct_phase(DudleyState::unpack(path.state(0), 3), p).position;
      const MinkowskiVector last = reconstruct_phase(DudleyState::unpack(path.state(path.size() - 1), 3), p).position;
      total += std::sqrt(norm2(last - first - sum));
    }
    return total / paths;
  };
  const double coarse = mean_defect(1e-2), fine = mean_defect(1e-4);
  CHECK(fine < coarse / 4);
  CHECK(fine < 0.05);
}

TEST_CASE("remark link at a frozen far-out state") {
  const DudleyParams p{3, 1.0};
  const std::vector<double> h{0.3, -0.2};
  const DudleyState s = DudleyState::from_coordinates(10.0, 5.0, {0.4, 0.1}, h, 2.0);
  const RemarkResidual r = check_remark_link(s, p);
  CHECK(r.angular < 1e-4);
  const auto direct = polar_direction(iwasawa_point({10.0, h}).vector());
  CHECK(r.angular == doctest::Approx(sphere_distance(direct, stereographic(h))).epsilon(1e-6));
  CHECK(r.r_from_delta == doctest::Approx(2.0 / 1.13));
}

TEST_CASE("hyperbolic radius and direction agree with the chart") {
  const DudleyState s = DudleyState::from_coordinates(1.5, 1.0, {0, 0}, {0.4, 0.9}, 0.0);
  const MinkowskiVector v = iwasawa_point({1.5, {0.4, 0.9}}).vector();
  CHECK(hyperbolic_radius(s) == doctest::Approx(std::acosh(v[0])).epsilon(1e-12));
  const auto dir = velocity_direction(s);
  const auto ref = polar_direction(v);
  for (std::size_t i = 0; i < 3; ++i) CHECK(dir[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  DudleyState far = s;
  far.alpha = 400;
  CHECK(std::isfinite(hyperbolic_radius(far)));
}

TEST_CASE("boundary estimates carry the proportionality of R and δ") {
  const DudleyParams p{3, 1.0};
  const auto x0 = start_state(3);
  const PathEnsemble e = run_ensemble(dudley_fields(p), x0, 40, 30.0, 1e-3, 8, 100, 1);
  const auto b = estimate_boundary(e, p, 1e-2);
  REQUIRE(b.size() == 40);
  std::size_t converged = 0;
  for (const DudleyBoundary& x : b) {
    double n2 = 0;
    for (double v : x.h_inf) n2 += v * v;
    CHECK(std::abs(x.r_inf * (1 + n2) - x.delta_inf) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(x.delta_inf));
    if (x.converged) ++converged;
  }
  CHECK(converged >= 36);
}

TEST_CASE("angle converges at the radial rate") {
  // log d(θ_t, θ_∞) falls by about ½σ²(d-1) per unit time; demand 30% of it.
  const DudleyParams p{3, 1.0};
  const auto x0 = start_state(3);
  const PathEnsemble e = run_ensemble(dudley_fields(p), x0, 100, 20.0, 1e-3, 12, 1000, 1);
  std::vector<double> drops;
  for (const Path& path : e.paths) {
    const DudleyState end = DudleyState::unpack(path.state(path.size() - 1), 3);
    const auto limit = stereographic(end.h);
    const auto at = [&](std::size_t k) {
      return sphere_distance(velocity_direction(DudleyState::unpack(path.state(k), 3)), limit);
    };
    drops.push_back(std::log(at(5)) - std::log(at(10)));
  }
  CHECK(median(drops) > 0.3 * p.alpha_rate() * 5.0);
}

TEST_CASE("clock ∫u² grows at the rate of the scalar u-law") {
  const DudleyParams p{3, 1.0};
  const DudleyLayout L{3};
  const auto x0 = start_state(3);
  const PathEnsemble e = run_ensemble(dudley_fields(p), x0, 200, 40.0, 1e-3, 13, 100, 1);
  int grew = 0;
  for (const Path& path : e.paths) {
    const double c20 = u_clock(path, L, 20.0), c40 = u_clock(path, L, 40.0);
    CHECK(c40 >= c20);
    if (c40 > 1.25 * c20) ++grew;
  }
  // du = (1 - u/2)dt - u dW alone, started at u = 1.
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  const int oracle_count = 1000;
  int oracle_grew = 0;
  for (int i = 0; i < oracle_count; ++i) {
    double u = 1.0, clock = 0.0, clock20 = 0.0;
    for (int k = 0; k < 40000; ++k) {
      clock += u * u * 1e-3;
      u = u * std::exp(-std::sqrt(1e-3) * normal(gen) - 0.5e-3) + (1.0 - 0.5 * u) * 1e-3;
      if (k == 19999) clock20 = clock;
    }
    if (clock > 1.25 * clock20) ++oracle_grew;
  }
  const double a = grew / 200.0, b = static_cast<double>(oracle_grew) / oracle_count;
  const double se = std::sqrt(a * (1 - a) / 200.0 + b * (1 - b) / oracle_count);
  CHECK(std::abs(a - b) <= 3.0 * se);
  CHECK(a > 0.75);
}
