// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Three-stage shift-coupling of two copies of the (α, β, γ) sub-diffusion of
// Dudley's diffusion:
//   1. α and α̃ run independently until they cross at T̃; afterwards ᾱ = α.
//   2. S, S̄ ≥ T̃ are the first times β and β̄ reach max(β_T̃, β̄_T̃).
//   3. γ and γ̄ read a shared B̂ in their own clocks C = σ² ∫ (e^{-α}β)² up to S, S̄;
//      afterwards γ̄ uses the mirror image of γ's noise B in the hyperplane orthogonal
//      to the clock-S gap, until the reflected gap closes after clock time R. T and
//      T̄ are the original times with C(T) - C(S) = R = C̄(T̄) - C̄(S̄).
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "devissage/dudley.hpp"
#include "devissage/random.hpp"

namespace devissage {

struct CouplingStart {
  double alpha = 0.0;
  double beta = 1.0;
  std::vector<double> gamma;  // d - 1 components
};

struct CouplingOptions {
  double dt = 1e-3;
  double clock_dt = 1e-3;
  double time_horizon = 1e3;
  double clock_horizon = 1e3;
  /// Times at which both copies' clocks are recorded (grid extended to cover them).
  std::vector<double> checkpoints;
};

struct CouplingOutcome {
  double t_tilde = 0.0;
  double s = 0.0;
  double s_bar = 0.0;
  double r = 0.0;
  double t = 0.0;
  double t_bar = 0.0;
  bool alpha_met = false;
  bool gamma_met = false;
  bool success = false;
  double horizon = 0.0;
  double clock_s = 0.0;      // C(S)
  double clock_s_bar = 0.0;  // C̄(S̄)
  double gap = 0.0;          // |γ_S - γ̄_S̄| in the clocks at S, S̄
  std::vector<double> gamma_meet;
  std::vector<double> gamma_bar_meet;
  std::vector<double> clock_at_checkpoints;      // C at options.checkpoints
  std::vector<double> clock_bar_at_checkpoints;  // C̄ at options.checkpoints
};

/// (d-1) x (d-1) row-major I - 2 n nᵀ for a unit vector n.
std::vector<double> reflection_matrix(const std::vector<double>& normal);

struct AlphaMeeting {
  double t_tilde = 0.0;
  bool met = false;
};

/// Independent α, α̃ from `w` and `w_tilde` on the grid k·dt; crossing time by linear
/// interpolation of α - α̃ within the step where its sign changes.
AlphaMeeting couple_alpha(double alpha0, double alpha_bar0, const DudleyParams& params, double dt,
                          double horizon, RandomStream& w, RandomStream& w_tilde);

/// First clock time at which |gap| + 2 W hits 0 for a standard one-dimensional W on
/// the grid k·clock_dt (nullopt on timeout). The component of the reflected gap along
/// the normal is |gap| + 2W.
std::optional<double> reflect_gamma_clock(double gap, double clock_dt, double clock_horizon, RandomStream& w);

/// Both copies on a shared time grid, kept for inspection after the coupling.
class CoupledRun {
 public:
  CoupledRun(const DudleyParams& params, CouplingStart start, CouplingStart start_bar, CouplingOptions options,
             std::uint64_t seed);

  const CouplingOutcome& outcome() const { return outcome_; }

  double beta(double t) const { return interpolate_log(log_beta_, t); }
  double beta_bar(double t) const { return interpolate_log(log_beta_bar_, t); }
  double clock(double t) const { return interpolate(clock_, t); }
  double clock_bar(double t) const { return interpolate(clock_bar_, t); }
  /// Last time covered by the stored grid.
  double grid_end() const { return static_cast<double>(alpha_.size() - 1) * options_.dt; }

 private:
  void extend_to(std::size_t k);
  double interpolate(const std::vector<double>& v, double t) const;
  double interpolate_log(const std::vector<double>& v, double t) const;
  std::optional<double> first_reach(const std::vector<double>& v, double level, double from);
  void run(const CouplingStart& start, const CouplingStart& start_bar);

  DudleyParams params_;
  CouplingOptions options_;
  std::size_t max_steps_ = 0;
  RandomStream w_, w_tilde_, b_hat_, b_;
  std::vector<double> alpha_, alpha_bar_, log_beta_, log_beta_bar_, clock_, clock_bar_;
  std::size_t merge_index_ = 0;  // ᾱ_k = α_k for k ≥ merge_index_
  CouplingOutcome outcome_;
};

CouplingOutcome shift_couple(const DudleyParams& params, const CouplingStart& start, const CouplingStart& start_bar,
                             const CouplingOptions& options, std::uint64_t seed);

struct CouplingSummary {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double median_t_tilde = 0.0;
  double median_s = 0.0;
  double median_s_bar = 0.0;
  double median_r = 0.0;
  double median_t = 0.0;
  double median_t_bar = 0.0;
};

/// Run i uses seed derive_seed(seed, i). Medians are over successful runs.
std::vector<CouplingOutcome> full_shift_coupling(const DudleyParams& params, const CouplingStart& start,
                                                 const CouplingStart& start_bar, std::size_t count,
                                                 const CouplingOptions& options, std::uint64_t seed,
                                                 int threads = 0);

CouplingSummary summarize_coupling(const std::vector<CouplingOutcome>& outcomes);

}  // namespace devissage
