// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <vector>

#include "devissage/coupling.hpp"
#include "devissage/stats.hpp"
#include "doctest.h"

using namespace devissage;

namespace {

// Φ^{-1}(3/4); the first hitting time of level a by √v·W has median a² / (v z²).
constexpr double kQuartile = 0.6744897501960817;

double hitting_median(double a, double v) { return a * a / (v * kQuartile * kQuartile); }

// P(√v·W reaches level a before H) = erfc(a / √(2 v H)).
double hitting_probability(double a, double v, double horizon) { return std::erfc(a / std::sqrt(2 * v * horizon)); }

CouplingOptions quick_options() {
  CouplingOptions o;
  o.dt = 1e-3;
  o.clock_dt = 1e-3;
  o.time_horizon = 200;
  o.clock_horizon = 200;
  return o;
}

}  // namespace

TEST_CASE("equal starts couple immediately") {
  const DudleyParams p{3, 1.0};
  const CouplingStart a{0.0, 1.0, {0.0, 0.0}};
  const CouplingOutcome o = shift_couple(p, a, a, quick_options(), 1);
  CHECK(o.success);
  CHECK(o.t_tilde == 0.0);
  CHECK(o.s == 0.0);
  CHECK(o.s_bar == 0.0);
  CHECK(o.r == 0.0);
  CHECK(o.t == 0.0);
  CHECK(o.t_bar == 0.0);
}

TEST_CASE("equal α and β: stage 2 is immediate") {
  const DudleyParams p{3, 1.0};
  const CouplingOutcome o = shift_couple(p, {0.0, 2.0, {0.0, 0.0}}, {0.0, 2.0, {1.0, 0.0}}, quick_options(), 2);
  CHECK(o.t_tilde == 0.0);
  CHECK(o.s == 0.0);
  CHECK(o.s_bar == 0.0);
  CHECK(o.gap > 0.0);
}

TEST_CASE("the larger β waits for the smaller one") {
  const DudleyParams p{3, 1.0};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CoupledRun run(p, {0.0, 2.0, {0.0, 0.0}}, {1.0, 1.0, {0.0, 0.0}}, quick_options(), seed);
    const CouplingOutcome& o = run.outcome();
    if (!o.alpha_met || !std::isfinite(o.s) || !std::isfinite(o.s_bar)) continue;
    CHECK(std::min(o.s, o.s_bar) == o.t_tilde);
    CHECK(std::max(o.s, o.s_bar) >= o.t_tilde);
    if (run.beta(o.t_tilde) > run.beta_bar(o.t_tilde)) CHECK(o.s == o.t_tilde);
    CHECK(std::abs(run.beta(o.s) - run.beta_bar(o.s_bar)) <= 1e-6 * run.beta(o.s));
  }
}

TEST_CASE("stage times are ordered and the copies meet") {
  const DudleyParams p{3, 1.0};
  CouplingOptions o = quick_options();
  o.checkpoints = {5.0, 10.0};
  const auto runs = full_shift_coupling(p, {0.0, 1.0, {0.0, 0.0}}, {1.0, 2.0, {1.0, 0.0}}, 40, o, 3, 1);
  for (const CouplingOutcome& r : runs) {
    REQUIRE(r.clock_at_checkpoints.size() == 2);
    CHECK(r.clock_at_checkpoints[0] <= r.clock_at_checkpoints[1]);
    CHECK(r.clock_bar_at_checkpoints[0] <= r.clock_bar_at_checkpoints[1]);
    if (!r.success) continue;
    CHECK(r.t_tilde <= r.s);
    CHECK(r.t_tilde <= r.s_bar);
    CHECK(r.s <= r.t);
    CHECK(r.s_bar <= r.t_bar);
    REQUIRE(r.gamma_meet.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(r.gamma_meet[i] - r.gamma_bar_meet[i]) < 1e-9);
  }
  const auto again = full_shift_coupling(p, {0.0, 1.0, {0.0, 0.0}}, {1.0, 2.0, {1.0, 0.0}}, 40, o, 3, 3);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(runs[i].t == again[i].t);
    CHECK(runs[i].t_bar == again[i].t_bar);
  }
}

TEST_CASE("reflection matrix is an involution fixing the hyperplane") {
  const std::vector<double> n{0.6, 0.0, -0.8};
  const auto m = reflection_matrix(n);
  for (std::size_t i = 0; i < 3; ++i) {
    double mn = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      double sq = 0;
      for (std::size_t k = 0; k < 3; ++k) sq += m[i * 3 + k] * m[k * 3 + j];
      CHECK(std::abs(sq - (i == j ? 1.0 : 0.0)) < 1e-12);
      mn += m[i * 3 + j] * n[j];
    }
    CHECK(std::abs(mn + n[i]) < 1e-12);
  }
}

TEST_CASE("α stage against the first-passage law") {
  // α - α̃ is a Brownian motion with variance 2σ² per unit time.
  const DudleyParams p{3, 1.0};
  const int runs = 2000;
  std::vector<double> times;
  int met = 0;
  for (int i = 0; i < runs; ++i) {
    RandomStream w = derive_stream(derive_seed(31, i), 0), wt = derive_stream(derive_seed(31, i), 1);
    const AlphaMeeting m = couple_alpha(0.0, 1.0, p, 1e-3, 1e3, w, wt);
    times.push_back(m.met ? m.t_tilde : std::numeric_limits<double>::infinity());
    if (m.met) ++met;
  }
  CHECK(median(times) == doctest::Approx(hitting_median(1.0, 2.0)).epsilon(0.15));
  const double expected = hitting_probability(1.0, 2.0, 1e3);
  CHECK(std::abs(static_cast<double>(met) / runs - expected) < 3 * std::sqrt(expected * (1 - expected) / runs));
}

TEST_CASE("reflection stage against the first-passage law") {
  // |gap| + 2W hits 0 when W reaches -|gap|/2.
  const int runs = 2000;
  std::vector<double> fine;
  for (int i = 0; i < runs; ++i) {
    RandomStream w = derive_stream(derive_seed(32, i), 0);
    const auto r = reflect_gamma_clock(1.0, 1e-4, 100, w);
    fine.push_back(r ? *r : std::numeric_limits<double>::infinity());
  }
  CHECK(median(fine) == doctest::Approx(hitting_median(0.5, 1.0)).epsilon(0.15));

  int met = 0;
  for (int i = 0; i < runs; ++i) {
    RandomStream w = derive_stream(derive_seed(33, i), 0);
    if (reflect_gamma_clock(1.0, 1e-3, 1e3, w)) ++met;
  }
  const double expected = hitting_probability(0.5, 1.0, 1e3);
  CHECK(std::abs(static_cast<double>(met) / runs - expected) < 3 * std::sqrt(expected * (1 - expected) / runs));

  RandomStream w(1);
  CHECK(reflect_gamma_clock(0.0, 1e-3, 1.0, w) == 0.0);
}

TEST_CASE("summary medians cover successful runs only") {
  std::vector<CouplingOutcome> v(3);
  v[0].success = true;
  v[0].t = 1;
  v[1].success = true;
  v[1].t = 3;
  v[2].success = false;
  v[2].t = std::numeric_limits<double>::infinity();
  const CouplingSummary s = summarize_coupling(v);
  CHECK(s.runs == 3);
  CHECK(s.successes == 2);
  CHECK(s.median_t == 2.0);
}
