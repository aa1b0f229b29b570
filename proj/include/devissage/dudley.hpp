// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dudley's relativistic diffusion on H^d x R^{1,d} written in the coordinates
// (α, β, γ, h, δ): (α, β, γ) is a sub-diffusion and (h, δ) an R^{d-1} x R valued
// process with translation-equivariant dynamics.
//
//   dα = σ dW + ½σ²(d-1) dt          dh = σ e^{-α} dB
//   dβ = e^α dt                      dγ = σ e^{-α} β dB
//   dδ = (e^{-α} + σ²(d-1) β e^{-2α}) dt + 2σ e^{-α} γ·dB
//
// β is carried as log β and u = β e^{-α} is kept alongside, so horizons where e^α
// overflows a double remain usable. γ^i = q(T_h^{-1} ξ, e_i) = -(T_h^{-1} ξ)^i.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "devissage/minkowski.hpp"
#include "devissage/sde.hpp"
#include "devissage/stats.hpp"

namespace devissage {

struct DudleyParams {
  int d = 3;
  double sigma = 1.0;

  void validate() const;
  /// ½σ²(d-1), the almost-sure rate of α_t / t.
  double alpha_rate() const { return 0.5 * sigma * sigma * (d - 1); }
};

/// Component offsets of a packed Dudley state (α, log β, γ, h, δ, u).
struct DudleyLayout {
  std::size_t d;

  static constexpr std::size_t alpha = 0;
  static constexpr std::size_t log_beta = 1;
  std::size_t gamma(std::size_t i) const { return 2 + i; }
  std::size_t h(std::size_t i) const { return 2 + (d - 1) + i; }
  std::size_t delta() const { return 2 + 2 * (d - 1); }
  std::size_t u() const { return 3 + 2 * (d - 1); }
  std::size_t dimension() const { return 4 + 2 * (d - 1); }
};

struct DudleyState {
  double alpha = 0.0;
  double log_beta = 0.0;
  std::vector<double> gamma;
  std::vector<double> h;
  double delta = 0.0;
  double u = 1.0;

  /// Builds a state from (α, β, γ, h, δ); β must be positive.
  static DudleyState from_coordinates(double alpha, double beta, std::vector<double> gamma,
                                      std::vector<double> h, double delta);
  static DudleyState unpack(std::span<const double> packed, std::size_t d);

  std::size_t d() const { return h.size() + 1; }
  double beta() const;
  std::vector<double> pack() const;
};

SdeSpec dudley_fields(const DudleyParams& params);

struct PhasePoint {
  HyperboloidPoint velocity;  // ξ̇ = T_h D_α e_0
  MinkowskiVector position;   // ξ
};

/// Maps a coordinate state back to phase space. Throws DomainError once log β > 700.
PhasePoint reconstruct_phase(const DudleyState& state, const DudleyParams& params);

/// Inverse of reconstruct_phase; requires β = q(T_h^{-1} ξ, e_0 - e_1) > 0.
DudleyState phase_to_state(const HyperboloidPoint& velocity, const MinkowskiVector& position);

/// Hyperbolic distance from e_0 to ξ̇, arccosh(ξ̇^0), evaluated without overflow.
double hyperbolic_radius(const DudleyState& state);

/// Polar angle θ of ξ̇ = T_h D_α e_0 (unit vector of R^d), evaluated without overflow.
std::vector<double> velocity_direction(const DudleyState& state);

struct DudleyBoundary {
  std::vector<double> h_inf;
  double delta_inf = 0.0;
  std::vector<double> theta_inf;  // stereographic(h_inf)
  double r_inf = 0.0;             // delta_inf / (1 + |h_inf|²)
  double cert_h = 0.0;
  double cert_delta = 0.0;
  bool converged = false;

  static DudleyBoundary from_limits(std::vector<double> h, double delta, double cert_h, double cert_delta,
                                    double tail_tol);
};

/// Terminal (h, δ) per path with tail certificates over [T/2, T].
std::vector<DudleyBoundary> estimate_boundary(const PathEnsemble& ensemble, const DudleyParams& params,
                                              double tail_tol);

struct RemarkResidual {
  double angular = 0.0;       // d(θ̂, stereographic(h))
  double r_direct = 0.0;      // q(ξ, e_0 + θ̂)
  double r_from_delta = 0.0;  // δ / (1 + |h|²)
  double r_relative = 0.0;    // |r_direct - r_from_delta| / |r_from_delta|
};

/// Compares the polar angle θ̂ of ξ̇ with stereographic(h) and q(ξ, e_0 + θ̂) with
/// δ/(1+|h|²) at a (terminal) state. Works in the T_h^{-1} frame so that the
/// cancellation between the e^α-sized components of ξ is done analytically.
RemarkResidual check_remark_link(const DudleyState& state, const DudleyParams& params);

/// ∫_0^t u_s² ds by the trapezoid rule over recorded points of a Dudley path.
double u_clock(const Path& path, const DudleyLayout& layout, double t);

}  // namespace devissage
