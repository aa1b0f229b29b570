// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "devissage/error.hpp"

namespace devissage {

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be >= 0");
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

EulerStepper::EulerStepper(const SdeSpec& spec)
    : spec_(spec),
      drift_(spec.dimension),
      diffusion_(spec.dimension * spec.noise_dim),
      noise_(spec.noise_dim),
      prev_(spec.dimension) {
  if (spec.dimension == 0 || spec.noise_dim == 0) throw DomainError("SDE dimensions must be positive");
  if (!spec.drift || !spec.diffusion) throw DomainError("SDE fields missing");
}

void EulerStepper::step(std::span<double> x, double t, double dt, RandomStream& stream,
                        std::size_t step_index) {
  const std::size_t n = spec_.dimension;
  const std::size_t m = spec_.noise_dim;
  std::copy(x.begin(), x.end(), prev_.begin());
  spec_.drift(prev_, t, drift_);
  spec_.diffusion(prev_, t, diffusion_);
  stream.fill_normal(noise_, std::sqrt(dt));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = prev_[i] + drift_[i] * dt;
    const double* row = diffusion_.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) acc += row[j] * noise_[j];
    x[i] = acc;
  }
  if (spec_.correct) spec_.correct(prev_, x, t, dt);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) {
      throw OverflowError(step_index, "non-finite state component " + std::to_string(i) + " at step " +
                                          std::to_string(step_index));
    }
  }
}

void integrate(const SdeSpec& spec, std::span<const double> x0, double horizon, double dt,
               RandomStream& stream, const StepObserver& observer) {
  if (x0.size() != spec.dimension) throw DomainError("initial state has wrong dimension");
  const std::size_t steps = step_count(horizon, dt);
  EulerStepper stepper(spec);
  std::vector<double> x(x0.begin(), x0.end());
  observer(0, 0.0, x);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    stepper.step(x, t, dt, stream, k + 1);
    observer(k + 1, static_cast<double>(k + 1) * dt, x);
  }
}

Path integrate_path(const SdeSpec& spec, std::span<const double> x0, double horizon, double dt,
                    std::uint64_t seed, std::size_t stride) {
  if (stride == 0) throw DomainError("stride must be >= 1");
  const std::size_t steps = step_count(horizon, dt);
  Path path;
  path.dimension = spec.dimension;
  const std::size_t expected = steps / stride + 2;
  path.times.reserve(expected);
  path.states.reserve(expected * spec.dimension);
  RandomStream stream(seed);
  integrate(spec, x0, horizon, dt, stream, [&](std::size_t k, double t, std::span<const double> x) {
    if (k % stride == 0 || k == steps) {
      path.times.push_back(t);
      path.states.insert(path.states.end(), x.begin(), x.end());
    }
  });
  return path;
}

PathEnsemble run_ensemble(const SdeSpec& spec, std::span<const double> x0, std::size_t count,
                          double horizon, double dt, std::uint64_t master_seed, std::size_t stride,
                          int threads) {
  if (count == 0) throw DomainError("ensemble size must be >= 1");
  PathEnsemble ensemble;
  ensemble.spec_id = spec.id;
  ensemble.master_seed = master_seed;
  ensemble.paths.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    ensemble.paths[i] = integrate_path(spec, x0, horizon, dt, derive_seed(master_seed, i), stride);
  });
  return ensemble;
}

MonitoredTerminal integrate_monitored(const SdeSpec& spec, std::span<const double> x0, double horizon,
                                      double dt, RandomStream& stream, double window_start) {
  MonitoredTerminal out;
  const double inf = std::numeric_limits<double>::infinity();
  out.low.assign(spec.dimension, inf);
  out.high.assign(spec.dimension, -inf);
  const double cut = window_start - 1e-9 * std::max(1.0, window_start);
  integrate(spec, x0, horizon, dt, stream, [&](std::size_t, double t, std::span<const double> x) {
    if (t < cut) return;
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.low[i] = std::min(out.low[i], x[i]);
      out.high[i] = std::max(out.high[i], x[i]);
    }
    out.state.assign(x.begin(), x.end());
  });
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DEVISSAGE_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(std::min(value, 1024L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, static_cast<std::size_t>(resolve_threads(threads))));
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};
  std::mutex mutex;
  std::exception_ptr failure;

  auto run = [&](std::size_t worker) {
    for (std::size_t i = worker; i < count; i += workers) {
      if (i > first_failure.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (OverflowError& e) {
        e.set_path(static_cast<std::ptrdiff_t>(i));
        std::lock_guard lock(mutex);
        if (i < first_failure) {
          first_failure = i;
          failure = std::current_exception();
        }
        return;
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < first_failure) {
          first_failure = i;
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace devissage
