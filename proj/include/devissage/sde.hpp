// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Euler–Maruyama integration of Itô SDEs with reproducible per-path streams.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "devissage/random.hpp"

namespace devissage {

using VectorField = std::function<void(std::span<const double> x, double t, std::span<double> out)>;

/// dX = drift(X,t) dt + diffusion(X,t) dW with W an m-dimensional Brownian motion.
/// `diffusion` fills a row-major dimension x noise_dim matrix.
struct SdeSpec {
  std::string id;
  std::size_t dimension = 0;
  std::size_t noise_dim = 0;
  VectorField drift;
  VectorField diffusion;
  /// Optional post-step hook for components with a known exact discrete update.
  /// Receives the pre-step state and may overwrite components of `next`.
  std::function<void(std::span<const double> prev, std::span<double> next, double t, double dt)> correct;
};

struct Path {
  std::size_t dimension = 0;
  std::vector<double> times;
  std::vector<double> states;  // row-major, times.size() x dimension

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return {states.data() + k * dimension, dimension};
  }
  double value(std::size_t k, std::size_t component) const { return states[k * dimension + component]; }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

struct PathEnsemble {
  std::string spec_id;
  std::uint64_t master_seed = 0;
  std::vector<Path> paths;

  std::size_t size() const noexcept { return paths.size(); }
};

/// Number of Euler steps covering [0, horizon] with step dt.
std::size_t step_count(double horizon, double dt);

/// Reusable single-step kernel; owns scratch buffers, so one per thread.
class EulerStepper {
 public:
  explicit EulerStepper(const SdeSpec& spec);

  /// Advances `x` in place from t to t+dt. Throws OverflowError(step) on a non-finite result.
  void step(std::span<double> x, double t, double dt, RandomStream& stream, std::size_t step_index);

 private:
  const SdeSpec& spec_;
  std::vector<double> drift_, diffusion_, noise_, prev_;
};

/// Called after every step with (step index, time, state); step 0 is the initial state.
using StepObserver = std::function<void(std::size_t, double, std::span<const double>)>;

void integrate(const SdeSpec& spec, std::span<const double> x0, double horizon, double dt,
               RandomStream& stream, const StepObserver& observer);

/// Records every `stride`-th state plus the terminal one.
Path integrate_path(const SdeSpec& spec, std::span<const double> x0, double horizon, double dt,
                    std::uint64_t seed, std::size_t stride);

/// Path i is integrate_path(..., derive_seed(master_seed, i), ...).
PathEnsemble run_ensemble(const SdeSpec& spec, std::span<const double> x0, std::size_t count,
                          double horizon, double dt, std::uint64_t master_seed, std::size_t stride,
                          int threads = 0);

/// Terminal state plus per-component range over [window_start, horizon].
struct MonitoredTerminal {
  std::vector<double> state;
  std::vector<double> low;
  std::vector<double> high;
};

MonitoredTerminal integrate_monitored(const SdeSpec& spec, std::span<const double> x0, double horizon,
                                      double dt, RandomStream& stream, double window_start);

/// Worker count: `requested` if positive, else DEVISSAGE_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on `threads` workers. If any call throws, the
/// exception of the smallest failing index is rethrown after all workers finish;
/// OverflowError gets that index attached as its path.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace devissage
