// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/dudley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "devissage/error.hpp"

namespace devissage {

namespace {

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

void DudleyParams::validate() const {
  if (d < 2) throw DomainError("d must be ≥ 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be > 0");
}

DudleyState DudleyState::from_coordinates(double alpha, double beta, std::vector<double> gamma,
                                          std::vector<double> h, double delta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0 (it is carried in log space)");
  if (gamma.size() != h.size() || h.empty()) throw DomainError("gamma and h must both lie in R^{d-1}, d >= 2");
  DudleyState s;
  s.alpha = alpha;
  s.log_beta = std::log(beta);
  s.gamma = std::move(gamma);
  s.h = std::move(h);
  s.delta = delta;
  s.u = std::exp(s.log_beta - alpha);
  return s;
}

DudleyState DudleyState::unpack(std::span<const double> packed, std::size_t d) {
  const DudleyLayout L{d};
  if (packed.size() != L.dimension()) throw DomainError("packed Dudley state has wrong size");
  DudleyState s;
  s.alpha = packed[L.alpha];
  s.log_beta = packed[L.log_beta];
  s.gamma.resize(d - 1);
  s.h.resize(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    s.gamma[i] = packed[L.gamma(i)];
    s.h[i] = packed[L.h(i)];
  }
  s.delta = packed[L.delta()];
  s.u = packed[L.u()];
  return s;
}

double DudleyState::beta() const { return std::exp(log_beta); }

std::vector<double> DudleyState::pack() const {
  const DudleyLayout L{d()};
  std::vector<double> x(L.dimension());
  x[L.alpha] = alpha;
  x[L.log_beta] = log_beta;
  for (std::size_t i = 0; i < h.size(); ++i) {
    x[L.gamma(i)] = gamma[i];
    x[L.h(i)] = h[i];
  }
  x[L.delta()] = delta;
  x[L.u()] = u;
  return x;
}

SdeSpec dudley_fields(const DudleyParams& params) {
  params.validate();
  const std::size_t d = static_cast<std::size_t>(params.d);
  const DudleyLayout L{d};
  const double sigma = params.sigma;
  const double s2 = sigma * sigma;

  SdeSpec spec;
  spec.id = "dudley";
  spec.dimension = L.dimension();
  spec.noise_dim = d;  // W, then the (d-1)-dimensional block B

  spec.drift = [L, d, s2](std::span<const double> x, double, std::span<double> out) {
    const double ea = std::exp(-x[L.alpha]);
    const double u = x[L.u()];
    std::fill(out.begin(), out.end(), 0.0);
    out[L.alpha] = 0.5 * s2 * static_cast<double>(d - 1);
    out[L.log_beta] = std::exp(x[L.alpha] - x[L.log_beta]);
    out[L.delta()] = ea * (1.0 + s2 * static_cast<double>(d - 1) * u);
    // Itô's formula applied to u = β e^{-α}.
    out[L.u()] = 1.0 - 0.5 * s2 * static_cast<double>(d - 2) * u;
  };

  spec.diffusion = [L, d, sigma](std::span<const double> x, double, std::span<double> out) {
    const std::size_t m = d;
    const double ea = std::exp(-x[L.alpha]);
    const double u = x[L.u()];
    std::fill(out.begin(), out.end(), 0.0);
    out[L.alpha * m + 0] = sigma;
    out[L.u() * m + 0] = -sigma * u;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      out[L.gamma(i) * m + 1 + i] = sigma * u;
      out[L.h(i) * m + 1 + i] = sigma * ea;
      out[L.delta() * m + 1 + i] = 2.0 * sigma * ea * x[L.gamma(i)];
    }
  };

  // β_{k+1} = β_k + e^{α_k} dt taken in log form, and u re-anchored to β e^{-α}.
  spec.correct = [L](std::span<const double> prev, std::span<double> next, double, double dt) {
    next[L.log_beta] = prev[L.log_beta] + std::log1p(std::exp(prev[L.alpha] - prev[L.log_beta]) * dt);
    next[L.u()] = std::exp(next[L.log_beta] - next[L.alpha]);
  };
  return spec;
}

PhasePoint reconstruct_phase(const DudleyState& state, const DudleyParams& params) {
  params.validate();
  const std::size_t d = static_cast<std::size_t>(params.d);
  if (state.d() != d) throw DomainError("state dimension does not match params.d");
  if (state.log_beta > 700.0 || std::abs(state.alpha) > 700.0) {
    throw DomainError("state out of double range for phase-space reconstruction");
  }
  HyperboloidPoint velocity = iwasawa_point({state.alpha, state.h});
  const double beta = state.beta();
  std::vector<double> w(d + 1, 0.0);
  w[0] = 0.5 * (beta + state.delta);
  w[1] = 0.5 * (beta - state.delta);
  for (std::size_t i = 0; i + 1 < d; ++i) w[2 + i] = -state.gamma[i];
  MinkowskiVector position = translation_matrix(state.h).apply(MinkowskiVector(std::move(w)));
  return {std::move(velocity), std::move(position)};
}

DudleyState phase_to_state(const HyperboloidPoint& velocity, const MinkowskiVector& position) {
  const IwasawaCoords c = iwasawa_coords(velocity);
  std::vector<double> minus_h(c.h.size());
  for (std::size_t i = 0; i < c.h.size(); ++i) minus_h[i] = -c.h[i];
  const MinkowskiVector w = translation_matrix(minus_h).apply(position);
  const LightlikeParts parts = lightlike_decompose(w);
  std::vector<double> gamma(parts.perp.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] = -parts.perp[i];
  return DudleyState::from_coordinates(c.alpha, parts.plus, std::move(gamma), c.h, parts.minus);
}

double hyperbolic_radius(const DudleyState& state) {
  const double n2 = squared_norm(state.h);
  if (state.alpha < 300.0) {
    const double x0 = 0.5 * std::exp(state.alpha) * (1.0 + n2) + 0.5 * std::exp(-state.alpha);
    return std::acosh(x0);
  }
  // acosh(x) = log(2x) + O(x^-2)
  return state.alpha + std::log1p(n2);
}

std::vector<double> velocity_direction(const DudleyState& state) {
  // Spatial part of T_h D_α e_0 divided by e^α.
  const double n2 = squared_norm(state.h);
  std::vector<double> s(state.h.size() + 1);
  s[0] = 0.5 * (1.0 - n2) - 0.5 * std::exp(-2.0 * state.alpha);
  for (std::size_t i = 0; i < state.h.size(); ++i) s[1 + i] = state.h[i];
  const double norm = std::sqrt(squared_norm(s));
  if (!(norm > 0.0)) throw DomainError("velocity direction undefined at e_0");
  for (double& x : s) x /= norm;
  return s;
}

DudleyBoundary DudleyBoundary::from_limits(std::vector<double> h, double delta, double cert_h, double cert_delta,
                                           double tail_tol) {
  DudleyBoundary b;
  b.theta_inf = stereographic(h);
  b.r_inf = delta / (1.0 + squared_norm(h));
  b.h_inf = std::move(h);
  b.delta_inf = delta;
  b.cert_h = cert_h;
  b.cert_delta = cert_delta;
  b.converged = cert_h < tail_tol && cert_delta < tail_tol;
  return b;
}

std::vector<DudleyBoundary> estimate_boundary(const PathEnsemble& ensemble, const DudleyParams& params,
                                              double tail_tol) {
  params.validate();
  const std::size_t d = static_cast<std::size_t>(params.d);
  const DudleyLayout L{d};
  std::vector<DudleyBoundary> out;
  out.reserve(ensemble.size());
  for (const Path& p : ensemble.paths) {
    if (p.dimension != L.dimension()) throw DomainError("ensemble is not a Dudley ensemble");
    const std::size_t last = p.size() - 1;
    std::vector<double> h(d - 1);
    double cert_h = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      h[i] = p.value(last, L.h(i));
      cert_h = std::max(cert_h, tail_certificate(p, L.h(i), tail_tol).sup_increment);
    }
    const double cert_delta = tail_certificate(p, L.delta(), tail_tol).sup_increment;
    out.push_back(DudleyBoundary::from_limits(std::move(h), p.value(last, L.delta()), cert_h, cert_delta, tail_tol));
  }
  return out;
}

RemarkResidual check_remark_link(const DudleyState& state, const DudleyParams& params) {
  params.validate();
  const std::size_t d = static_cast<std::size_t>(params.d);
  if (state.d() != d) throw DomainError("state dimension does not match params.d");
  const std::vector<double> theta_hat = velocity_direction(state);
  const std::vector<double> theta_h = stereographic(state.h);
  RemarkResidual r;
  r.angular = sphere_distance(theta_hat, theta_h);

  // q(ξ, z) = q(w, y) with w = T_h^{-1} ξ = (β/2)(e_0+e_1) + (δ/2)(e_0-e_1) - Σ γ^i e_i,
  // z = e_0 + θ̂ and y = T_{-h} z. The β coefficient q(y, e_0+e_1) equals
  // (1+|h|²) q(e_0+θ̂, e_0+θ_h) = (1+|h|²) |θ̂ - θ_h|² / 2.
  const double n2 = squared_norm(state.h);
  double chord2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) chord2 += (theta_hat[i] - theta_h[i]) * (theta_hat[i] - theta_h[i]);
  double beta_term = 0.0;
  if (chord2 > 0.0) beta_term = std::exp(state.log_beta + std::log(0.25 * (1.0 + n2) * chord2));

  std::vector<double> z(d + 1);
  z[0] = 1.0;
  for (std::size_t i = 0; i < d; ++i) z[1 + i] = theta_hat[i];
  std::vector<double> minus_h(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) minus_h[i] = -state.h[i];
  const MinkowskiVector y = translation_matrix(minus_h).apply(MinkowskiVector(std::move(z)));
  double rest = 0.5 * state.delta * (y[0] + y[1]);
  for (std::size_t i = 0; i + 1 < d; ++i) rest += state.gamma[i] * y[2 + i];

  r.r_direct = beta_term + rest;
  r.r_from_delta = state.delta / (1.0 + n2);
  r.r_relative = std::abs(r.r_direct - r.r_from_delta) / std::abs(r.r_from_delta);
  return r;
}

double u_clock(const Path& path, const DudleyLayout& layout, double t) {
  double acc = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double t0 = path.times[k - 1];
    if (t0 >= t) break;
    const double t1 = std::min(path.times[k], t);
    const double u0 = path.value(k - 1, layout.u());
    const double u1 = path.value(k, layout.u());
    // Linear interpolation of u inside a partial last interval.
    const double frac = (t1 - t0) / (path.times[k] - t0);
    const double ue = u0 + frac * (u1 - u0);
    acc += 0.5 * (u0 * u0 + ue * ue) * (t1 - t0);
  }
  return acc;
}

}  // namespace devissage
