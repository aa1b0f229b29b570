// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Three diffusions on R x R, state (x, g), driven by one Brownian motion B:
//
//   1:  dx = dt + e^{-x²} dB,        dg = e^{-x} dt
//   2:  dx = dt + e^{-x²} dB,        dg = -g dt
//   3:  dx = (1 + g) dt + e^{-x²} dB, dg = e^{-x} dt
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "devissage/sde.hpp"
#include "devissage/stats.hpp"

namespace devissage {

inline constexpr std::size_t kToyX = 0;
inline constexpr std::size_t kToyG = 1;

/// `noise_scale` multiplies e^{-x²}; 0 gives the deterministic skeleton.
SdeSpec toy_fields(int id, double noise_scale = 1.0);

/// System 2 steps g exactly, g_{k+1} = g_k e^{-dt}.
Path simulate_toy(int id, double x0, double g0, double horizon, double dt, std::uint64_t seed,
                  std::size_t stride = 1, double noise_scale = 1.0);

PathEnsemble toy_ensemble(int id, double x0, double g0, std::size_t count, double horizon, double dt,
                          std::uint64_t seed, std::size_t stride, int threads = 0);

struct ToyTail {
  int id = 1;
  double u = 0.0;  // x_T - x_0 - T
  double g = 0.0;  // g_T
  double w = 0.0;  // x_T + log|g_T| (system 2)
  ConvergenceCertificate cert_u;
  ConvergenceCertificate cert_g;
  ConvergenceCertificate cert_w;
};

/// Requires T ≥ 10; system 2 requires g_0 ≠ 0.
ToyTail tail_variables(const Path& path, int id, double tol);

/// ⟨u⟩_t = ∫_0^t e^{-2x_s²} ds by the trapezoid rule over recorded points.
double toy_quadratic_variation(const Path& path, double t);

struct GeneratorDescriptor {
  std::string name;
  /// a(x, g): symmetric 2x2 as {a_xx, a_xg, a_gg}.
  std::function<std::array<double, 3>(double, double)> a;
  std::function<std::array<double, 2>(double, double)> b;
};

GeneratorDescriptor toy_generator(int id);

struct TestFunction {
  std::string name;
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> gradient;
  std::function<std::array<double, 3>(double, double)> hessian;  // {f_xx, f_xg, f_gg}
};

/// p(x, g) e^{-x²-g²} for p ∈ {1, x, g, xg}.
std::vector<TestFunction> standard_test_functions();

struct Grid2 {
  double lo = -3.0;
  double hi = 3.0;
  double step = 0.25;
};

/// max over functions and grid points of |𝓛(h·f) - h·(𝓛f)|, with (h·f)(x, g) = f(x, g + h).
double equivariance_residual(const GeneratorDescriptor& gen, double h, const std::vector<TestFunction>& functions,
                             const Grid2& grid = {});

}  // namespace devissage
