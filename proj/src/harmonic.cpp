// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "devissage/error.hpp"
#include "devissage/sde.hpp"
#include "devissage/toy.hpp"

namespace devissage {

void BoundaryModel::act_on_state(std::span<double>, std::span<const double>) const {
  throw DomainError("model '" + name() + "' has no translation action");
}

void BoundaryModel::act_on_boundary(std::span<double>, std::span<const double>) const {
  throw DomainError("model '" + name() + "' has no translation action");
}

namespace {

void check_size(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) throw DomainError(std::string(what) + " has " + std::to_string(v.size()) + " components, expected " + std::to_string(n));
}

std::vector<double> advance_sde(const SdeSpec& spec, std::span<const double> start, double t, double dt,
                                std::uint64_t seed) {
  RandomStream stream(seed);
  std::vector<double> last(start.begin(), start.end());
  integrate(spec, start, t, dt, stream, [&](std::size_t, double, std::span<const double> x) {
    last.assign(x.begin(), x.end());
  });
  return last;
}

class DudleyModel final : public BoundaryModel {
 public:
  DudleyModel(const DudleyParams& params, double tol)
      : params_(params), layout_{static_cast<std::size_t>(params.d)}, spec_(dudley_fields(params)), tol_(tol) {}
  std::string name() const override { return "dudley"; }
  std::size_t state_dimension() const override { return layout_.dimension(); }
  std::size_t boundary_dimension() const override { return layout_.d; }
  std::size_t group_dimension() const override { return layout_.d; }

  BoundarySample sample(std::span<const double> start, double horizon, double dt,
                        std::uint64_t seed) const override {
    check_size(start, state_dimension(), "start");
    RandomStream stream(seed);
    const MonitoredTerminal m = integrate_monitored(spec_, start, horizon, dt, stream, 0.5 * horizon);
    BoundarySample s;
    bool converged = true;
    for (std::size_t i = 0; i + 1 < layout_.d; ++i) {
      s.values.push_back(m.state[layout_.h(i)]);
      converged = converged && m.high[layout_.h(i)] - m.low[layout_.h(i)] < tol_;
    }
    s.values.push_back(m.state[layout_.delta()]);
    s.converged = converged && m.high[layout_.delta()] - m.low[layout_.delta()] < tol_;
    return s;
  }

  std::vector<double> advance(std::span<const double> start, double t, double dt,
                              std::uint64_t seed) const override {
    check_size(start, state_dimension(), "start");
    return advance_sde(spec_, start, t, dt, seed);
  }

  void act_on_state(std::span<double> state, std::span<const double> g) const override {
    check_size(g, group_dimension(), "group element");
    for (std::size_t i = 0; i + 1 < layout_.d; ++i) state[layout_.h(i)] += g[i];
    state[layout_.delta()] += g[layout_.d - 1];
  }
  void act_on_boundary(std::span<double> boundary, std::span<const double> g) const override {
    check_size(g, group_dimension(), "group element");
    for (std::size_t i = 0; i < layout_.d; ++i) boundary[i] += g[i];
  }

 private:
  DudleyParams params_;
  DudleyLayout layout_;
  SdeSpec spec_;
  double tol_;
};

class ToyModel final : public BoundaryModel {
 public:
  ToyModel(int id, double tol) : id_(id), spec_(toy_fields(id)), tol_(tol) {}
  std::string name() const override { return "toy" + std::to_string(id_); }
  std::size_t state_dimension() const override { return 2; }
  std::size_t boundary_dimension() const override { return 1; }
  std::size_t group_dimension() const override { return 1; }

  BoundarySample sample(std::span<const double> start, double horizon, double dt,
                        std::uint64_t seed) const override {
    check_size(start, 2, "start");
    RandomStream stream(seed);
    const MonitoredTerminal m = integrate_monitored(spec_, start, horizon, dt, stream, 0.5 * horizon);
    return {{m.state[kToyG]}, m.high[kToyG] - m.low[kToyG] < tol_};
  }
  std::vector<double> advance(std::span<const double> start, double t, double dt,
                              std::uint64_t seed) const override {
    check_size(start, 2, "start");
    return advance_sde(spec_, start, t, dt, seed);
  }
  void act_on_state(std::span<double> state, std::span<const double> g) const override {
    check_size(g, 1, "group element");
    state[kToyG] += g[0];
  }
  void act_on_boundary(std::span<double> boundary, std::span<const double> g) const override {
    check_size(g, 1, "group element");
    boundary[0] += g[0];
  }

 private:
  int id_;
  SdeSpec spec_;
  double tol_;
};

// State layout (r, θ_1..θ_n); r = 0 starts at the centre.
class RotsymModel final : public BoundaryModel {
 public:
  RotsymModel(WarpModel warp, double tol) : warp_(std::move(warp)), tol_(tol) {}
  std::string name() const override { return "rotsym"; }
  std::size_t state_dimension() const override { return static_cast<std::size_t>(warp_.n) + 1; }
  std::size_t boundary_dimension() const override { return static_cast<std::size_t>(warp_.n); }

  BoundarySample sample(std::span<const double> start, double horizon, double dt,
                        std::uint64_t seed) const override {
    RotsymStreams streams(seed);
    const EscapeSample e = escape_path(warp_, to_state(start), horizon, dt, streams, tol_);
    return {e.theta, e.converged};
  }
  std::vector<double> advance(std::span<const double> start, double t, double dt,
                              std::uint64_t seed) const override {
    RotsymStreams streams(seed);
    RotsymState s = to_state(start);
    const std::size_t steps = step_count(t, dt);
    for (std::size_t k = 0; k < steps; ++k) s = rotsym_step(s, warp_, dt, streams);
    std::vector<double> out{s.r};
    out.insert(out.end(), s.theta().begin(), s.theta().end());
    return out;
  }

 private:
  RotsymState to_state(std::span<const double> start) const {
    check_size(start, state_dimension(), "start");
    if (start[0] == 0.0) return RotsymState::centre(warp_.n);
    return RotsymState::start(start[0], start.subspan(1));
  }

  WarpModel warp_;
  double tol_;
};

}  // namespace

std::unique_ptr<BoundaryModel> dudley_boundary_model(const DudleyParams& params, double tail_tol) {
  params.validate();
  return std::make_unique<DudleyModel>(params, tail_tol);
}

std::unique_ptr<BoundaryModel> toy_boundary_model(int id, double tail_tol) {
  return std::make_unique<ToyModel>(id, tail_tol);
}

std::unique_ptr<BoundaryModel> rotsym_boundary_model(const WarpModel& warp, double tail_tol) {
  warp.validate();
  return std::make_unique<RotsymModel>(warp, tail_tol);
}

BoundaryFunctional BoundaryFunctional::constant(double c) {
  return {"constant", [c](std::span<const double>) { return c; }, std::abs(c)};
}

BoundaryFunctional BoundaryFunctional::half_space(std::size_t coordinate, double threshold) {
  return {"half_space", [coordinate, threshold](std::span<const double> b) {
            if (coordinate >= b.size()) throw DomainError("half-space coordinate out of range");
            return b[coordinate] > threshold ? 1.0 : 0.0;
          },
          1.0};
}

BoundaryFunctional BoundaryFunctional::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw DomainError("box corners differ in size");
  return {"box", [lo = std::move(lo), hi = std::move(hi)](std::span<const double> b) {
            if (b.size() != lo.size()) throw DomainError("box dimension mismatch");
            for (std::size_t i = 0; i < b.size(); ++i)
              if (b[i] < lo[i] || b[i] > hi[i]) return 0.0;
            return 1.0;
          },
          1.0};
}

BoundaryFunctional BoundaryFunctional::bump(std::vector<double> centre, double radius) {
  if (!(radius > 0.0)) throw DomainError("bump radius must be > 0");
  return {"bump", [c = std::move(centre), radius](std::span<const double> b) {
            if (b.size() != c.size()) throw DomainError("bump dimension mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < b.size(); ++i) s += (b[i] - c[i]) * (b[i] - c[i]);
            const double x = s / (radius * radius);
            return x < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x)) : 0.0;
          },
          1.0};
}

BoundaryFunctional BoundaryFunctional::combine(double a, const BoundaryFunctional& f, double b,
                                               const BoundaryFunctional& g) {
  return {"combination", [a, b, fp = f.psi, gp = g.psi](std::span<const double> v) { return a * fp(v) + b * gp(v); },
          std::abs(a) * f.bound + std::abs(b) * g.bound};
}

std::vector<BoundarySample> sample_boundary(const BoundaryModel& model, std::span<const double> start,
                                            std::size_t count, double horizon, double dt, std::uint64_t seed,
                                            int threads) {
  std::vector<BoundarySample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i] = model.sample(start, horizon, dt, derive_seed(seed, i));
  });
  return out;
}

HarmonicEstimate harmonic_from_samples(const std::vector<BoundarySample>& samples, const BoundaryFunctional& psi) {
  std::vector<double> values;
  values.reserve(samples.size());
  HarmonicEstimate est;
  for (const BoundarySample& s : samples) {
    if (!s.converged) {
      ++est.unconverged;
      continue;
    }
    values.push_back(psi.psi(s.values));
  }
  const MeanEstimate m = mean_estimate(values);
  est.value = std::clamp(m.mean, -psi.bound, psi.bound);
  est.std_error = m.std_error;
  est.n = m.count;
  est.warning = 5 * est.unconverged > samples.size();
  return est;
}

HarmonicEstimate mc_harmonic(const BoundaryModel& model, std::span<const double> start,
                             const BoundaryFunctional& psi, std::size_t count, double horizon, double dt,
                             std::uint64_t seed, int threads) {
  return harmonic_from_samples(sample_boundary(model, start, count, horizon, dt, seed, threads), psi);
}

TowerCheck tower_check(const BoundaryModel& model, std::span<const double> start, const BoundaryFunctional& psi,
                       std::size_t direct_count, std::size_t outer, std::size_t inner, double t_mid,
                       double horizon, double dt, std::uint64_t seed, int threads) {
  if (!(t_mid > 0.0 && t_mid < horizon)) throw DomainError("t_mid must lie inside (0, horizon)");
  if (outer < 2 || inner < 1) throw DomainError("tower check needs outer >= 2 and inner >= 1");
  TowerCheck out;
  out.direct = mc_harmonic(model, start, psi, direct_count, horizon, dt, derive_seed(seed, 0), threads);

  const std::uint64_t nested_seed = derive_seed(seed, 1);
  std::vector<double> nested(outer);
  for (std::size_t j = 0; j < outer; ++j) {
    const std::uint64_t seed_j = derive_seed(nested_seed, j);
    const std::vector<double> mid = model.advance(start, t_mid, dt, derive_seed(seed_j, 0));
    nested[j] = mc_harmonic(model, mid, psi, inner, horizon - t_mid, dt, derive_seed(seed_j, 1), threads).value;
  }
  const MeanEstimate m = mean_estimate(nested);
  out.nested_mean = m.mean;
  out.nested_std_error = m.std_error;
  out.combined_std_error = std::hypot(out.direct.std_error, out.nested_std_error);
  out.difference = out.direct.value - out.nested_mean;
  out.passed = std::abs(out.difference) <= 3.0 * out.combined_std_error;
  return out;
}

EquivarianceReport boundary_law_equivariance(const BoundaryModel& model, std::span<const double> start,
                                             std::span<const double> g, std::size_t count, double horizon,
                                             double dt, std::uint64_t seed, bool shared_streams, int threads) {
  if (model.group_dimension() == 0) throw DomainError("model '" + model.name() + "' has no translation action");
  if (count == 0) throw DomainError("boundary law test needs at least one path");
  std::vector<double> moved(start.begin(), start.end());
  model.act_on_state(moved, g);
  const std::uint64_t seed_a = shared_streams ? seed : derive_seed(seed, 0);
  const std::uint64_t seed_b = shared_streams ? seed : derive_seed(seed, 1);
  std::vector<BoundarySample> a = sample_boundary(model, moved, count, horizon, dt, seed_a, threads);
  std::vector<BoundarySample> b = sample_boundary(model, start, count, horizon, dt, seed_b, threads);

  EquivarianceReport report;
  report.n = count;
  for (BoundarySample& s : b) model.act_on_boundary(s.values, g);
  for (const BoundarySample& s : a) report.unconverged_a += s.converged ? 0 : 1;
  for (const BoundarySample& s : b) report.unconverged_b += s.converged ? 0 : 1;
  const std::size_t dim = model.boundary_dimension();
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> xa(count), xb(count);
    for (std::size_t i = 0; i < count; ++i) {
      xa[i] = a[i].values[c];
      xb[i] = b[i].values[c];
    }
    report.per_coordinate.push_back(ks_two_sample(xa, xb));
    report.min_p_value = std::min(report.min_p_value, report.per_coordinate.back().p_value);
  }
  return report;
}

}  // namespace devissage
