// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Bounded harmonic functions H(x) = E_x[ψ(boundary value)] by Monte Carlo, the
// tower (martingale) check at an interior time, and the boundary-law equivariance
// test for models with a translation action on their fiber.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "devissage/dudley.hpp"
#include "devissage/rotsym.hpp"
#include "devissage/stats.hpp"

namespace devissage {

struct BoundarySample {
  std::vector<double> values;
  bool converged = false;
};

class BoundaryModel {
 public:
  virtual ~BoundaryModel() = default;
  virtual std::string name() const = 0;
  virtual std::size_t state_dimension() const = 0;
  virtual std::size_t boundary_dimension() const = 0;
  /// Boundary value read at `horizon` from one path; deterministic in `seed`.
  virtual BoundarySample sample(std::span<const double> start, double horizon, double dt,
                                std::uint64_t seed) const = 0;
  /// State at time t of the path started at `start` with `seed`.
  virtual std::vector<double> advance(std::span<const double> start, double t, double dt,
                                      std::uint64_t seed) const = 0;
  /// Size of a group element; 0 when the model has no translation action.
  virtual std::size_t group_dimension() const { return 0; }
  virtual void act_on_state(std::span<double> state, std::span<const double> g) const;
  virtual void act_on_boundary(std::span<double> boundary, std::span<const double> g) const;
};

/// State: packed Dudley state. Boundary: (h∞, δ∞). Group: translations of (h, δ).
std::unique_ptr<BoundaryModel> dudley_boundary_model(const DudleyParams& params, double tail_tol);
/// State: (x, g). Boundary: g∞. Group: translations of g.
std::unique_ptr<BoundaryModel> toy_boundary_model(int id, double tail_tol);
/// State: (r, θ). Boundary: θ∞. No translation action.
std::unique_ptr<BoundaryModel> rotsym_boundary_model(const WarpModel& warp, double tail_tol);

struct BoundaryFunctional {
  std::string name;
  std::function<double(std::span<const double>)> psi;
  double bound = 1.0;

  static BoundaryFunctional constant(double c);
  /// 1{b[coordinate] > threshold}.
  static BoundaryFunctional half_space(std::size_t coordinate, double threshold);
  /// 1{lo ≤ b ≤ hi} componentwise.
  static BoundaryFunctional box(std::vector<double> lo, std::vector<double> hi);
  /// exp(1 - 1/(1 - |b - c|²/ρ²)) inside the ball, 0 outside.
  static BoundaryFunctional bump(std::vector<double> centre, double radius);
  static BoundaryFunctional combine(double a, const BoundaryFunctional& f, double b, const BoundaryFunctional& g);
};

struct HarmonicEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t unconverged = 0;
  bool warning = false;  // more than 20% of paths unconverged
};

/// Path i uses derive_seed(seed, i).
std::vector<BoundarySample> sample_boundary(const BoundaryModel& model, std::span<const double> start,
                                            std::size_t count, double horizon, double dt, std::uint64_t seed,
                                            int threads = 0);

/// Mean of ψ over converged samples.
HarmonicEstimate harmonic_from_samples(const std::vector<BoundarySample>& samples, const BoundaryFunctional& psi);

HarmonicEstimate mc_harmonic(const BoundaryModel& model, std::span<const double> start,
                             const BoundaryFunctional& psi, std::size_t count, double horizon, double dt,
                             std::uint64_t seed, int threads = 0);

struct TowerCheck {
  HarmonicEstimate direct;
  double nested_mean = 0.0;
  double nested_std_error = 0.0;
  double combined_std_error = 0.0;
  double difference = 0.0;
  bool passed = false;  // |difference| ≤ 3 combined SE
};

/// H(start) against the mean of H(X_t_mid) over `outer` states, each re-estimated
/// with `inner` paths over the remaining horizon.
TowerCheck tower_check(const BoundaryModel& model, std::span<const double> start, const BoundaryFunctional& psi,
                       std::size_t direct_count, std::size_t outer, std::size_t inner, double t_mid,
                       double horizon, double dt, std::uint64_t seed, int threads = 0);

struct EquivarianceReport {
  std::vector<KsResult> per_coordinate;
  std::size_t n = 0;
  std::size_t unconverged_a = 0;
  std::size_t unconverged_b = 0;
  double min_p_value = 1.0;
};

/// Sample A: boundary values from g·start. Sample B: g·(boundary values from start).
/// The two samples use independent seeds unless `shared_streams`.
EquivarianceReport boundary_law_equivariance(const BoundaryModel& model, std::span<const double> start,
                                             std::span<const double> g, std::size_t count, double horizon,
                                             double dt, std::uint64_t seed, bool shared_streams = false,
                                             int threads = 0);

}  // namespace devissage
