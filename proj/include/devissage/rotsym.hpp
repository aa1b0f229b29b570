// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brownian motion on the rotationally symmetric model dr² + f(r)² dθ².
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "devissage/random.hpp"
#include "devissage/stats.hpp"

namespace devissage {

struct WarpModel {
  std::string name;
  int n = 3;
  std::function<double(double)> f;
  std::function<double(double)> fprime;

  /// "sinh", "r" (Euclidean) or "exp".
  static WarpModel builtin(const std::string& name, int n);
  /// Two-column (r, f(r)) table with a header row and strictly increasing r. f' comes
  /// from a monotone cubic Hermite spline. Beyond the last knot f continues
  /// exponentially with the end log-slope; below the first knot it is linear to 0.
  static WarpModel tabulated(std::vector<double> r, std::vector<double> f, int n);
  static WarpModel from_csv(const std::string& path, int n);

  void validate() const;
};

/// (r, θ) plus the angular clock τ = ∫ f(r_s)^{-2} ds. The orthonormal frame
/// (column-major, n x n) has θ as its first column; the remaining columns span
/// the tangent space used for the next angular step. r == 0 marks the centre,
/// where θ is undefined until the first step.
struct RotsymState {
  double r = 1.0;
  std::vector<double> frame;
  double tau = 0.0;
  std::size_t reflections = 0;

  /// Frame built from θ_0 by Gram–Schmidt against e_1, ..., e_n (in that order).
  static RotsymState start(double r0, std::span<const double> theta0);
  /// Frame given explicitly (column-major, orthonormal).
  static RotsymState start_with_frame(double r0, std::vector<double> frame);
  static RotsymState centre(int n);

  std::size_t n() const;
  std::span<const double> theta() const { return {frame.data(), n()}; }
};

/// Radial and angular draws come from separate streams so the radial path does not
/// depend on the angular seed.
struct RotsymStreams {
  RandomStream radial;
  RandomStream angular;

  explicit RotsymStreams(std::uint64_t seed);
  RotsymStreams(std::uint64_t radial_seed, std::uint64_t angular_seed);
};

inline constexpr double kRotsymFloor = 1e-6;
/// Steps with r² < kBesselZone·dt on a warp with f(r) < 2r use the Euclidean Bessel step.
inline constexpr double kBesselZone = 25.0;

/// One step: Euler–Maruyama on dr = dW + (n-1)/2 (f'/f)(r) dt, reflected at 1e-6,
/// and a tangent Gaussian step of variance dτ = f(r)^{-2} dt for θ followed by
/// renormalisation. From the centre the first step is the exact Euclidean one.
RotsymState rotsym_step(const RotsymState& state, const WarpModel& model, double dt, RotsymStreams& streams);

struct RotsymPath {
  std::size_t n = 0;
  std::vector<double> times;
  std::vector<double> r;
  std::vector<double> theta;  // times.size() x n
  std::vector<double> tau;
  std::size_t reflections = 0;

  std::span<const double> theta_at(std::size_t k) const { return {theta.data() + k * n, n}; }
};

RotsymPath simulate_rotsym(const RotsymState& start, const WarpModel& model, double horizon, double dt,
                           RotsymStreams& streams, std::size_t stride);

struct ConditionReport {
  bool c1 = false;  // ∫_1^∞ f^{1-n} < ∞
  bool c2 = false;  // ∫_1^∞ f^{n-1}(r) J(r) dr = ∞
  bool c3 = false;  // ∫_1^∞ f^{n-3}(r) J(r) dr < ∞
  ImproperIntegral i1, i2, i3;
};

/// J(r) = ∫_r^∞ f^{1-n}. Throws DomainError if f is non-finite on the quadrature grid.
ConditionReport check_conditions(const WarpModel& model, double r_lo = 1.0);

struct EscapeSample {
  std::vector<double> theta;  // θ_T
  double sup_increment = 0.0; // sup_{t ∈ [T/2, T]} d(θ_t, θ_{T/2})
  bool converged = false;
  double r_final = 0.0;
  double tau_half = 0.0;
  double tau_final = 0.0;
};

/// One path of escape_angle_law; no condition check.
EscapeSample escape_path(const WarpModel& model, const RotsymState& start, double horizon, double dt,
                         RotsymStreams& streams, double tol);

/// Terminal angles of `count` paths; path i uses RotsymStreams(derive_seed(seed, i)).
/// Refuses (DomainError) unless all three conditions hold.
std::vector<EscapeSample> escape_angle_law(const WarpModel& model, const RotsymState& start, std::size_t count,
                                           double horizon, double dt, std::uint64_t seed, double tol,
                                           int threads = 0);

/// CDF of one coordinate of a uniform point on S^{n-1}.
double sphere_marginal_cdf(double x, int n);

}  // namespace devissage
