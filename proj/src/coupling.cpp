// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "devissage/error.hpp"
#include "devissage/sde.hpp"
#include "devissage/stats.hpp"

namespace devissage {

namespace {

constexpr std::size_t kUnmerged = std::numeric_limits<std::size_t>::max();

// Time of the sign change of g inside step k -> k+1.
double crossing_time(double g0, double g1, std::size_t k, double dt) {
  const double frac = g0 == g1 ? 0.0 : g0 / (g0 - g1);
  return (static_cast<double>(k) + std::clamp(frac, 0.0, 1.0)) * dt;
}

void check_start(const CouplingStart& s, int d) {
  if (!(s.beta > 0.0) || !std::isfinite(s.beta)) throw DomainError("beta0 must be > 0");
  if (!std::isfinite(s.alpha)) throw DomainError("alpha0 must be finite");
  if (s.gamma.size() != static_cast<std::size_t>(d - 1)) throw DomainError("gamma0 must have d-1 components");
}

}  // namespace

std::vector<double> reflection_matrix(const std::vector<double>& normal) {
  const std::size_t m = normal.size();
  double norm2 = 0.0;
  for (double v : normal) norm2 += v * v;
  if (std::abs(norm2 - 1.0) > 1e-9) throw DomainError("reflection normal must be a unit vector");
  std::vector<double> out(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = (i == j ? 1.0 : 0.0) - 2.0 * normal[i] * normal[j];
  return out;
}

AlphaMeeting couple_alpha(double alpha0, double alpha_bar0, const DudleyParams& params, double dt,
                          double horizon, RandomStream& w, RandomStream& w_tilde) {
  params.validate();
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("dt and horizon must be > 0");
  AlphaMeeting m;
  if (alpha0 == alpha_bar0) {
    m.met = true;
    return m;
  }
  const double sd = params.sigma * std::sqrt(dt);
  // The common drift cancels in the difference.
  double gap = alpha0 - alpha_bar0;
  const std::size_t steps = step_count(horizon, dt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double next = gap + sd * (w.normal() - w_tilde.normal());
    if (gap * next <= 0.0) {
      m.t_tilde = crossing_time(gap, next, k, dt);
      m.met = true;
      return m;
    }
    gap = next;
  }
  m.t_tilde = std::numeric_limits<double>::infinity();
  return m;
}

std::optional<double> reflect_gamma_clock(double gap, double clock_dt, double clock_horizon, RandomStream& w) {
  if (!(clock_dt > 0.0) || !(clock_horizon > 0.0)) throw DomainError("clock_dt and clock_horizon must be > 0");
  const double level = std::abs(gap);
  if (level == 0.0) return 0.0;
  const double sd = std::sqrt(clock_dt);
  double x = level;  // |gap| + 2W
  const std::size_t steps = step_count(clock_horizon, clock_dt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double next = x + 2.0 * sd * w.normal();
    if (next <= 0.0) return crossing_time(x, next, k, clock_dt);
    x = next;
  }
  return std::nullopt;
}

CoupledRun::CoupledRun(const DudleyParams& params, CouplingStart start, CouplingStart start_bar,
                       CouplingOptions options, std::uint64_t seed)
    : params_(params),
      options_(std::move(options)),
      w_(derive_stream(seed, 0)),
      w_tilde_(derive_stream(seed, 1)),
      b_hat_(derive_stream(seed, 2)),
      b_(derive_stream(seed, 3)) {
  params_.validate();
  check_start(start, params_.d);
  check_start(start_bar, params_.d);
  if (!(options_.dt > 0.0) || !(options_.clock_dt > 0.0)) throw DomainError("dt and clock_dt must be > 0");
  if (!(options_.time_horizon > 0.0) || !(options_.clock_horizon > 0.0))
    throw DomainError("horizons must be > 0");
  max_steps_ = step_count(options_.time_horizon, options_.dt);
  alpha_ = {start.alpha};
  alpha_bar_ = {start_bar.alpha};
  log_beta_ = {std::log(start.beta)};
  log_beta_bar_ = {std::log(start_bar.beta)};
  clock_ = {0.0};
  clock_bar_ = {0.0};
  merge_index_ = start.alpha == start_bar.alpha ? 0 : kUnmerged;
  run(start, start_bar);
}

void CoupledRun::extend_to(std::size_t k) {
  const double dt = options_.dt;
  const double sd = params_.sigma * std::sqrt(dt);
  const double drift = params_.alpha_rate() * dt;
  const double s2 = params_.sigma * params_.sigma;
  while (alpha_.size() <= k) {
    const std::size_t j = alpha_.size();
    const double a = alpha_[j - 1], ab = alpha_bar_[j - 1];
    const double lb = log_beta_[j - 1], lbb = log_beta_bar_[j - 1];
    alpha_.push_back(a + drift + sd * w_.normal());
    alpha_bar_.push_back(j >= merge_index_ ? alpha_.back() : ab + drift + sd * w_tilde_.normal());
    log_beta_.push_back(lb + std::log1p(std::exp(a - lb) * dt));
    log_beta_bar_.push_back(lbb + std::log1p(std::exp(ab - lbb) * dt));
    const double u = std::exp(lb - a), ub = std::exp(lbb - ab);
    clock_.push_back(clock_[j - 1] + s2 * u * u * dt);
    clock_bar_.push_back(clock_bar_[j - 1] + s2 * ub * ub * dt);
  }
}

double CoupledRun::interpolate(const std::vector<double>& v, double t) const {
  const double pos = t / options_.dt;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(k);
  return v[k] + frac * (v[k + 1] - v[k]);
}

double CoupledRun::interpolate_log(const std::vector<double>& v, double t) const {
  return std::exp(interpolate(v, t));
}

std::optional<double> CoupledRun::first_reach(const std::vector<double>& v, double level, double from) {
  std::size_t k = static_cast<std::size_t>(std::floor(from / options_.dt));
  if (interpolate(v, from) >= level) return from;
  for (;; ++k) {
    if (k + 1 > max_steps_) return std::nullopt;
    extend_to(k + 1);
    if (v[k + 1] >= level) {
      const double t = crossing_time(v[k] - level, v[k + 1] - level, k, options_.dt);
      return std::max(t, from);
    }
  }
}

void CoupledRun::run(const CouplingStart& start, const CouplingStart& start_bar) {
  CouplingOutcome& out = outcome_;
  out.horizon = options_.time_horizon;
  const double inf = std::numeric_limits<double>::infinity();
  out.s = out.s_bar = out.r = out.t = out.t_bar = inf;

  double cover = 0.0;
  for (double c : options_.checkpoints) cover = std::max(cover, c);
  auto record_checkpoints = [&] {
    extend_to(std::min(max_steps_, step_count(cover, options_.dt)));
    for (double c : options_.checkpoints) {
      out.clock_at_checkpoints.push_back(clock(c));
      out.clock_bar_at_checkpoints.push_back(clock_bar(c));
    }
  };

  // Stage 1: α crossing.
  if (merge_index_ == 0) {
    out.t_tilde = 0.0;
    out.alpha_met = true;
  } else {
    out.t_tilde = inf;
    for (std::size_t k = 0; k < max_steps_; ++k) {
      extend_to(k + 1);
      const double g0 = alpha_[k] - alpha_bar_[k], g1 = alpha_[k + 1] - alpha_bar_[k + 1];
      if (g0 * g1 <= 0.0) {
        out.t_tilde = crossing_time(g0, g1, k, options_.dt);
        out.alpha_met = true;
        merge_index_ = k + 1;
        alpha_bar_[k + 1] = alpha_[k + 1];
        break;
      }
    }
  }
  if (!out.alpha_met) {
    record_checkpoints();
    return;
  }

  // Stage 2: β synchronisation.
  const double lb = interpolate(log_beta_, out.t_tilde), lbb = interpolate(log_beta_bar_, out.t_tilde);
  const double level = std::max(lb, lbb);
  const auto s = lb >= lbb ? std::optional<double>(out.t_tilde) : first_reach(log_beta_, level, out.t_tilde);
  const auto s_bar = lbb >= lb ? std::optional<double>(out.t_tilde) : first_reach(log_beta_bar_, level, out.t_tilde);
  if (!s || !s_bar) {
    record_checkpoints();
    return;
  }
  out.s = *s;
  out.s_bar = *s_bar;

  // Stage 3: γ reflection in the clocks.
  out.clock_s = clock(out.s);
  out.clock_s_bar = clock_bar(out.s_bar);
  const std::size_t m = start.gamma.size();
  const double c_lo = std::min(out.clock_s, out.clock_s_bar), c_hi = std::max(out.clock_s, out.clock_s_bar);
  std::vector<double> hat_lo(m), hat_hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    hat_lo[i] = std::sqrt(c_lo) * b_hat_.normal();
    hat_hi[i] = hat_lo[i] + std::sqrt(c_hi - c_lo) * b_hat_.normal();
  }
  const std::vector<double>& hat_s = out.clock_s <= out.clock_s_bar ? hat_lo : hat_hi;
  const std::vector<double>& hat_s_bar = out.clock_s <= out.clock_s_bar ? hat_hi : hat_lo;
  std::vector<double> gamma_s(m), gamma_s_bar(m), gap(m);
  double gap_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    gamma_s[i] = start.gamma[i] + hat_s[i];
    gamma_s_bar[i] = start_bar.gamma[i] + hat_s_bar[i];
    gap[i] = gamma_s[i] - gamma_s_bar[i];
    gap_norm += gap[i] * gap[i];
  }
  gap_norm = std::sqrt(gap_norm);
  out.gap = gap_norm;

  std::optional<double> r = 0.0;
  std::vector<double> b_r(m, 0.0);
  if (gap_norm > 0.0) {
    std::vector<double> n(m);
    for (std::size_t i = 0; i < m; ++i) n[i] = gap[i] / gap_norm;
    r = reflect_gamma_clock(gap_norm, options_.clock_dt, options_.clock_horizon, b_);
    if (r) {
      // B(R) = n W(R) + (I - n nᵀ) √R Z, with W(R) = -|gap| / 2.
      std::vector<double> z(m);
      b_.fill_normal(z, std::sqrt(*r));
      double proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += n[i] * z[i];
      for (std::size_t i = 0; i < m; ++i) b_r[i] = z[i] - proj * n[i] - 0.5 * gap_norm * n[i];
      const std::vector<double> mirror = reflection_matrix(n);
      out.gamma_meet.resize(m);
      out.gamma_bar_meet.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        double mb = 0.0;
        for (std::size_t j = 0; j < m; ++j) mb += mirror[i * m + j] * b_r[j];
        out.gamma_meet[i] = gamma_s[i] + b_r[i];
        out.gamma_bar_meet[i] = gamma_s_bar[i] + mb;
      }
    }
  } else {
    out.gamma_meet = gamma_s;
    out.gamma_bar_meet = gamma_s_bar;
  }
  if (!r) {
    record_checkpoints();
    return;
  }
  out.r = *r;
  out.gamma_met = true;

  const auto t = first_reach(clock_, out.clock_s + out.r, out.s);
  const auto t_bar = first_reach(clock_bar_, out.clock_s_bar + out.r, out.s_bar);
  if (t) out.t = *t;
  if (t_bar) out.t_bar = *t_bar;
  out.success = t.has_value() && t_bar.has_value() && out.t <= out.horizon && out.t_bar <= out.horizon;
  record_checkpoints();
}

CouplingOutcome shift_couple(const DudleyParams& params, const CouplingStart& start, const CouplingStart& start_bar,
                             const CouplingOptions& options, std::uint64_t seed) {
  return CoupledRun(params, start, start_bar, options, seed).outcome();
}

std::vector<CouplingOutcome> full_shift_coupling(const DudleyParams& params, const CouplingStart& start,
                                                 const CouplingStart& start_bar, std::size_t count,
                                                 const CouplingOptions& options, std::uint64_t seed,
                                                 int threads) {
  std::vector<CouplingOutcome> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    out[i] = shift_couple(params, start, start_bar, options, derive_seed(seed, i));
  });
  return out;
}

CouplingSummary summarize_coupling(const std::vector<CouplingOutcome>& outcomes) {
  CouplingSummary s;
  s.runs = outcomes.size();
  std::vector<double> tt, ss, sb, rr, t, tb;
  for (const CouplingOutcome& o : outcomes) {
    if (!o.success) continue;
    ++s.successes;
    tt.push_back(o.t_tilde);
    ss.push_back(o.s);
    sb.push_back(o.s_bar);
    rr.push_back(o.r);
    t.push_back(o.t);
    tb.push_back(o.t_bar);
  }
  s.success_rate = s.runs == 0 ? 0.0 : static_cast<double>(s.successes) / static_cast<double>(s.runs);
  if (s.successes > 0) {
    s.median_t_tilde = median(tt);
    s.median_s = median(ss);
    s.median_s_bar = median(sb);
    s.median_r = median(rr);
    s.median_t = median(t);
    s.median_t_bar = median(tb);
  }
  return s;
}

}  // namespace devissage
