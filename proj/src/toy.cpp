// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/toy.hpp"

#include <algorithm>
#include <cmath>

#include "devissage/error.hpp"

namespace devissage {

namespace {

void check_id(int id) {
  if (id < 1 || id > 3) throw DomainError("toy system id must be 1, 2 or 3");
}

}  // namespace

SdeSpec toy_fields(int id, double noise_scale) {
  check_id(id);
  SdeSpec spec;
  spec.id = "toy" + std::to_string(id);
  spec.dimension = 2;
  spec.noise_dim = 1;
  spec.drift = [id](std::span<const double> s, double, std::span<double> out) {
    const double x = s[kToyX], g = s[kToyG];
    out[kToyX] = id == 3 ? 1.0 + g : 1.0;
    out[kToyG] = id == 2 ? -g : std::exp(-x);
  };
  spec.diffusion = [noise_scale](std::span<const double> s, double, std::span<double> out) {
    const double x = s[kToyX];
    out[kToyX] = noise_scale * std::exp(-x * x);
    out[kToyG] = 0.0;
  };
  if (id == 2) {
    spec.correct = [](std::span<const double> prev, std::span<double> next, double, double dt) {
      next[kToyG] = prev[kToyG] * std::exp(-dt);
    };
  }
  return spec;
}

Path simulate_toy(int id, double x0, double g0, double horizon, double dt, std::uint64_t seed,
                  std::size_t stride, double noise_scale) {
  const SdeSpec spec = toy_fields(id, noise_scale);
  const double start[2] = {x0, g0};
  return integrate_path(spec, start, horizon, dt, seed, stride);
}

PathEnsemble toy_ensemble(int id, double x0, double g0, std::size_t count, double horizon, double dt,
                          std::uint64_t seed, std::size_t stride, int threads) {
  const SdeSpec spec = toy_fields(id);
  const double start[2] = {x0, g0};
  return run_ensemble(spec, start, count, horizon, dt, seed, stride, threads);
}

ToyTail tail_variables(const Path& path, int id, double tol) {
  check_id(id);
  if (path.dimension != 2 || path.size() < 2) throw DomainError("toy path must have dimension 2");
  const double T = path.horizon();
  if (T < 10.0) throw DomainError("tail variables need T >= 10");
  const std::size_t last = path.size() - 1;
  ToyTail tail;
  tail.id = id;
  tail.g = path.value(last, kToyG);
  tail.u = path.value(last, kToyX) - path.value(0, kToyX) - T;
  tail.cert_g = tail_certificate(path, kToyG, tol);

  // u_t = x_t - x_0 - t and w_t = x_t + log|g_t| as derived one-dimensional paths.
  Path derived;
  derived.dimension = 1;
  derived.times = path.times;
  derived.states.resize(path.size());
  for (std::size_t k = 0; k < path.size(); ++k)
    derived.states[k] = path.value(k, kToyX) - path.value(0, kToyX) - path.times[k];
  tail.cert_u = tail_certificate(derived, 0, tol);

  if (id == 2) {
    if (path.value(0, kToyG) == 0.0) throw DomainError("system 2 needs g0 != 0 (log|g| undefined)");
    for (std::size_t k = 0; k < path.size(); ++k)
      derived.states[k] = path.value(k, kToyX) + std::log(std::abs(path.value(k, kToyG)));
    tail.w = derived.states[last];
    tail.cert_w = tail_certificate(derived, 0, tol);
  }
  return tail;
}

double toy_quadratic_variation(const Path& path, double t) {
  double total = 0.0;
  auto rate = [&](std::size_t k) {
    const double x = path.value(k, kToyX);
    return std::exp(-2.0 * x * x);
  };
  for (std::size_t k = 1; k < path.size() && path.times[k] <= t + 1e-12; ++k)
    total += 0.5 * (rate(k - 1) + rate(k)) * (path.times[k] - path.times[k - 1]);
  return total;
}

GeneratorDescriptor toy_generator(int id) {
  check_id(id);
  GeneratorDescriptor gen;
  gen.name = "toy" + std::to_string(id);
  gen.a = [](double x, double) { return std::array<double, 3>{std::exp(-2.0 * x * x), 0.0, 0.0}; };
  gen.b = [id](double x, double g) {
    return std::array<double, 2>{id == 3 ? 1.0 + g : 1.0, id == 2 ? -g : std::exp(-x)};
  };
  return gen;
}

std::vector<TestFunction> standard_test_functions() {
  // f = p e^{-x²-g²}; with E = e^{-x²-g²}, ∂_x E = -2xE and ∂_g E = -2gE.
  struct Poly {
    const char* name;
    int px, pg;  // p = x^px g^pg, px, pg ∈ {0, 1}
  };
  std::vector<TestFunction> out;
  for (Poly p : {Poly{"gauss", 0, 0}, Poly{"x*gauss", 1, 0}, Poly{"g*gauss", 0, 1}, Poly{"xg*gauss", 1, 1}}) {
    // One-variable factor q(y) = y^k e^{-y²} and its first two derivatives.
    auto factor = [](int k, double y) {
      const double e = std::exp(-y * y);
      if (k == 0) return std::array<double, 3>{e, -2.0 * y * e, (4.0 * y * y - 2.0) * e};
      return std::array<double, 3>{y * e, (1.0 - 2.0 * y * y) * e, (4.0 * y * y * y - 6.0 * y) * e};
    };
    TestFunction tf;
    tf.name = p.name;
    tf.value = [=](double x, double g) { return factor(p.px, x)[0] * factor(p.pg, g)[0]; };
    tf.gradient = [=](double x, double g) {
      const auto fx = factor(p.px, x), fg = factor(p.pg, g);
      return std::array<double, 2>{fx[1] * fg[0], fx[0] * fg[1]};
    };
    tf.hessian = [=](double x, double g) {
      const auto fx = factor(p.px, x), fg = factor(p.pg, g);
      return std::array<double, 3>{fx[2] * fg[0], fx[1] * fg[1], fx[0] * fg[2]};
    };
    out.push_back(std::move(tf));
  }
  return out;
}

double equivariance_residual(const GeneratorDescriptor& gen, double h, const std::vector<TestFunction>& functions,
                             const Grid2& grid) {
  if (!(grid.step > 0.0) || !(grid.hi >= grid.lo)) throw DomainError("invalid grid");
  const auto points = static_cast<std::size_t>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  // 𝓛 applied at base point (x, g) to the derivatives of f taken at (x, gf).
  auto apply = [&](const TestFunction& f, double x, double g, double gf) {
    const auto a = gen.a(x, g);
    const auto b = gen.b(x, g);
    const auto d1 = f.gradient(x, gf);
    const auto d2 = f.hessian(x, gf);
    return b[0] * d1[0] + b[1] * d1[1] + 0.5 * (a[0] * d2[0] + 2.0 * a[1] * d2[1] + a[2] * d2[2]);
  };
  double worst = 0.0;
  for (const TestFunction& f : functions) {
    for (std::size_t i = 0; i < points; ++i) {
      const double x = grid.lo + static_cast<double>(i) * grid.step;
      for (std::size_t j = 0; j < points; ++j) {
        const double g = grid.lo + static_cast<double>(j) * grid.step;
        const double lhs = apply(f, x, g, g + h);      // 𝓛(h·f)(x, g)
        const double rhs = apply(f, x, g + h, g + h);  // (𝓛f)(x, g + h)
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

}  // namespace devissage
