// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/experiments.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "devissage/coupling.hpp"
#include "devissage/dudley.hpp"
#include "devissage/error.hpp"
#include "devissage/harmonic.hpp"
#include "devissage/rotsym.hpp"
#include "devissage/stats.hpp"
#include "devissage/toy.hpp"
#include "devissage/version.hpp"

namespace devissage {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Cell num(double v) { return v; }
Cell idx(std::size_t v) { return static_cast<long long>(v); }

class Claims {
 public:
  explicit Claims(json& summary) : summary_(summary) {}

  /// relation: within (|est - target| <= tol), above (est > target), below (est < target),
  /// at_least (est >= target).
  void add(const std::string& name, double est, const std::string& relation, double target, double tol = kNaN) {
    bool pass = std::isfinite(est);
    if (relation == "within") pass = pass && std::abs(est - target) <= tol;
    else if (relation == "above") pass = pass && est > target;
    else if (relation == "below") pass = pass && est < target;
    else if (relation == "at_least") pass = pass && est >= target;
    json c;
    c["est"] = number_or_null(est);
    c["relation"] = relation;
    c["target"] = number_or_null(target);
    c["tol"] = number_or_null(tol);
    c["pass"] = pass;
    summary_[name] = std::move(c);
    names_.push_back(name);
    all_ = all_ && pass;
  }

  void close() {
    summary_["claims"] = names_;
    summary_["all_pass"] = all_;
  }

 private:
  json& summary_;
  std::vector<std::string> names_;
  bool all_ = true;
};

json base_summary(const std::string& name, std::uint64_t seed, const ConfigReader& in, std::size_t paths) {
  json s;
  s["experiment"] = name;
  s["version"] = kVersion;
  s["seed"] = seed;
  s["parameters"] = in.parameters();
  s["paths"] = paths;
  return s;
}

std::vector<std::string> indexed(const std::string& prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + "_" + std::to_string(i));
  return out;
}

void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

double fraction(std::size_t k, std::size_t n) { return n == 0 ? kNaN : static_cast<double>(k) / static_cast<double>(n); }

double median_or_nan(std::vector<double> v) { return v.empty() ? kNaN : median(std::move(v)); }

// ---------------------------------------------------------------------------
// dudley

ExperimentResult run_dudley(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  DudleyParams p;
  p.d = static_cast<int>(in.integer("d", 3, 2, 64));
  p.sigma = in.real("sigma", 1.0, Bound::positive);
  const std::size_t n = in.count("paths", 100);
  const double horizon = in.real("horizon", 60.0, Bound::positive);
  const double dt = in.real("dt", 1e-3, Bound::positive);
  const std::size_t stride = in.count("stride", 100, 1);
  const std::uint64_t seed = in.seed("seed", 42);
  const double tol = in.real("tol", 1e-2, Bound::positive);
  const double alpha0 = in.real("alpha0", 0.0);
  const double beta0 = in.real("beta0", 1.0, Bound::positive);
  const std::size_t trajectories = in.count("trajectories", 10);
  in.finish();

  const auto d = static_cast<std::size_t>(p.d);
  const DudleyLayout L{d};
  const SdeSpec spec = dudley_fields(p);
  const std::vector<double> x0 =
      DudleyState::from_coordinates(alpha0, beta0, std::vector<double>(d - 1, 0.0), std::vector<double>(d - 1, 0.0), 0.0)
          .pack();
  PathEnsemble ens;
  if (n > 0) ens = run_ensemble(spec, x0, n, horizon, dt, seed, stride, threads);
  const std::vector<DudleyBoundary> boundary = n > 0 ? estimate_boundary(ens, p, tol) : std::vector<DudleyBoundary>{};

  std::vector<std::string> cols{"dudley.path"};
  append(cols, indexed("dudley.h_inf", d - 1));
  cols.push_back("dudley.delta_inf");
  append(cols, indexed("dudley.theta_inf", d));
  for (const char* c : {"dudley.r_inf", "dudley.cert_h", "dudley.cert_delta", "dudley.converged", "dudley.alpha_T",
                        "dudley.radius_T", "dudley.angular_residual", "dudley.r_residual"})
    cols.emplace_back(c);
  Table main("dudley", cols);

  std::vector<double> angular, relative, radius_rate;
  std::size_t converged = 0, clock_growth = 0, clock_paths = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Path& path = ens.paths[i];
    const DudleyState terminal = DudleyState::unpack(path.state(path.size() - 1), d);
    const DudleyBoundary& b = boundary[i];
    const RemarkResidual rr = check_remark_link(terminal, p);
    const double radius = hyperbolic_radius(terminal);
    radius_rate.push_back(radius / path.horizon());
    if (b.converged) {
      ++converged;
      angular.push_back(rr.angular);
      relative.push_back(rr.r_relative);
    }
    if (path.horizon() >= 40.0 - 1e-9) {
      ++clock_paths;
      if (u_clock(path, L, 40.0) > 1.25 * u_clock(path, L, 20.0)) ++clock_growth;
    }
    std::vector<Cell> row{idx(i)};
    for (double v : b.h_inf) row.push_back(num(v));
    row.push_back(num(b.delta_inf));
    for (double v : b.theta_inf) row.push_back(num(v));
    for (double v : {b.r_inf, b.cert_h, b.cert_delta}) row.push_back(num(v));
    row.push_back(b.converged);
    for (double v : {terminal.alpha, radius, rr.angular, rr.r_relative}) row.push_back(num(v));
    main.add_row(row);
  }

  std::vector<std::string> tcols{"dudley.path", "dudley.t", "dudley.alpha", "dudley.log_beta"};
  append(tcols, indexed("dudley.gamma", d - 1));
  append(tcols, indexed("dudley.h", d - 1));
  for (const char* c : {"dudley.delta", "dudley.u", "dudley.xi0", "dudley.xi1", "dudley.xidot0", "dudley.xidot1"})
    tcols.emplace_back(c);
  Table traj("trajectory", tcols);
  for (std::size_t i = 0; i < std::min(trajectories, n); ++i) {
    const Path& path = ens.paths[i];
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto x = path.state(k);
      std::vector<Cell> row{idx(i), num(path.times[k])};
      for (double v : x) row.push_back(num(v));
      double xi0 = kNaN, xi1 = kNaN, v0 = kNaN, v1 = kNaN;
      try {
        const PhasePoint ph = reconstruct_phase(DudleyState::unpack(x, d), p);
        xi0 = ph.position[0];
        xi1 = ph.position[1];
        v0 = ph.velocity.vector()[0];
        v1 = ph.velocity.vector()[1];
      } catch (const DomainError&) {
      }
      for (double v : {xi0, xi1, v0, v1}) row.push_back(num(v));
      traj.add_row(row);
    }
  }

  json s = base_summary("dudley", seed, in, n);
  Claims claims(s);
  if (n > 0) {
    const double t0 = 0.5 * horizon;
    double slope = kNaN, se = kNaN;
    try {
      const DriftEstimate de = drift_rate(ens, DudleyLayout::alpha, t0, horizon);
      slope = de.slope;
      se = de.std_error;
    } catch (const DomainError&) {
    }
    claims.add("alpha_drift", slope, "within", p.alpha_rate(), std::max(0.05, 3.0 * se));
    const MeanEstimate rr = mean_estimate(radius_rate);
    claims.add("radial_rate", rr.mean, "within", p.alpha_rate(), std::max(0.05, 3.0 * rr.std_error));
    claims.add("boundary_converged", fraction(converged, n), "at_least", 0.95);
    claims.add("remark_angular", median_or_nan(angular), "below", 1e-2);
    claims.add("remark_radius", median_or_nan(relative), "below", 5e-2);
    if (clock_paths > 0) claims.add("clock_divergence", fraction(clock_growth, clock_paths), "at_least", 0.9);
  }
  claims.close();
  return {"dudley", {std::move(main), std::move(traj)}, std::move(s)};
}

// ---------------------------------------------------------------------------
// rotsym

WarpModel load_warp(const std::string& warp, int n) {
  try {
    if (warp == "sinh" || warp == "r" || warp == "exp") return WarpModel::builtin(warp, n);
    return WarpModel::from_csv(warp, n);
  } catch (const DomainError& e) {
    throw ConfigError("warp", e.what());
  }
}

const char* verdict_name(IntegralVerdict v) {
  switch (v) {
    case IntegralVerdict::convergent: return "convergent";
    case IntegralVerdict::divergent: return "divergent";
    default: return "inconclusive";
  }
}

json integral_json(const ImproperIntegral& i) {
  json j;
  j["verdict"] = verdict_name(i.verdict);
  j["value"] = number_or_null(i.value);
  json partial = json::array();
  for (double v : i.partial_values) partial.push_back(number_or_null(v));
  j["partial_values"] = partial;
  return j;
}

ExperimentResult run_rotsym(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  const std::string warp_name = in.text("warp", "sinh");
  const int dim = static_cast<int>(in.integer("n", 3, 2, 64));
  const bool check_only = in.flag("check_only", false);
  const std::size_t n = in.count("paths", 2000);
  const double horizon = in.real("horizon", 20.0, Bound::positive);
  const double dt = in.real("dt", 1e-3, Bound::positive);
  const std::uint64_t seed = in.seed("seed", 42);
  const double tol = in.real("tol", 1e-2, Bound::positive);
  const double r0 = in.real("r0", 0.0, Bound::nonnegative);
  const std::size_t trajectories = in.count("trajectories", 5);
  const std::size_t stride = in.count("stride", 100, 1);
  in.finish();

  const WarpModel warp = load_warp(warp_name, dim);
  const ConditionReport cond = check_conditions(warp);
  const auto ud = static_cast<std::size_t>(dim);

  json s = base_summary("rotsym", seed, in, check_only ? 0 : n);
  s["c1"] = cond.c1;
  s["c2"] = cond.c2;
  s["c3"] = cond.c3;
  s["i1"] = number_or_null(cond.i1.value);
  s["i2"] = number_or_null(cond.i2.value);
  s["i3"] = number_or_null(cond.i3.value);
  s["integrals"] = {{"i1", integral_json(cond.i1)}, {"i2", integral_json(cond.i2)}, {"i3", integral_json(cond.i3)}};

  if (check_only) {
    Table t("rotsym_conditions", {"rotsym.integral", "rotsym.verdict", "rotsym.value", "rotsym.doublings"});
    const ImproperIntegral* all[] = {&cond.i1, &cond.i2, &cond.i3};
    for (std::size_t k = 0; k < 3; ++k)
      t.add_row({std::string("i") + std::to_string(k + 1), std::string(verdict_name(all[k]->verdict)),
                 num(all[k]->value), idx(all[k]->partial_values.size())});
    Claims claims(s);
    claims.close();
    return {"rotsym", {std::move(t)}, std::move(s)};
  }

  std::vector<double> e1(ud, 0.0);
  e1[0] = 1.0;
  const RotsymState start = r0 == 0.0 ? RotsymState::centre(dim) : RotsymState::start(r0, e1);
  const std::vector<EscapeSample> esc = escape_angle_law(warp, start, n, horizon, dt, seed, tol, threads);

  std::vector<std::string> cols{"rotsym.path"};
  append(cols, indexed("rotsym.theta", ud));
  for (const char* c : {"rotsym.r_T", "rotsym.tau_half", "rotsym.tau_T", "rotsym.sup_increment", "rotsym.converged"})
    cols.emplace_back(c);
  Table main("rotsym", cols);
  std::size_t converged = 0, forward = 0;
  std::vector<double> tau_half, tau_gain;
  for (std::size_t i = 0; i < n; ++i) {
    const EscapeSample& e = esc[i];
    std::vector<Cell> row{idx(i)};
    for (double v : e.theta) row.push_back(num(v));
    for (double v : {e.r_final, e.tau_half, e.tau_final, e.sup_increment}) row.push_back(num(v));
    row.push_back(e.converged);
    main.add_row(row);
    converged += e.converged ? 1 : 0;
    forward += e.theta[0] > 0.0 ? 1 : 0;
    tau_half.push_back(e.tau_half);
    tau_gain.push_back(e.tau_final - e.tau_half);
  }

  std::vector<std::string> tcols{"rotsym.path", "rotsym.t", "rotsym.r"};
  append(tcols, indexed("rotsym.theta", ud));
  tcols.emplace_back("rotsym.tau");
  Table traj("trajectory", tcols);
  for (std::size_t i = 0; i < std::min(trajectories, n); ++i) {
    RotsymStreams streams(derive_seed(seed, i));
    const RotsymPath path = simulate_rotsym(start, warp, horizon, dt, streams, stride);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      std::vector<Cell> row{idx(i), num(path.times[k]), num(path.r[k])};
      for (double v : path.theta_at(k)) row.push_back(num(v));
      row.push_back(num(path.tau[k]));
      traj.add_row(row);
    }
  }

  s["converged_fraction"] = number_or_null(fraction(converged, n));
  Claims claims(s);
  if (n > 0) {
    if (r0 == 0.0) {
      double min_p = 1.0;
      json per = json::array();
      for (std::size_t c = 0; c < ud; ++c) {
        std::vector<double> coord(n);
        for (std::size_t i = 0; i < n; ++i) coord[i] = esc[i].theta[c];
        const KsResult ks = ks_one_sample(coord, [dim](double x) { return sphere_marginal_cdf(x, dim); });
        per.push_back({{"statistic", ks.statistic}, {"p_value", ks.p_value}});
        min_p = std::min(min_p, ks.p_value);
      }
      s["marginal_ks"] = per;
      claims.add("uniform_marginals", min_p, "above", 1e-3);
    } else {
      claims.add("hemisphere_mass", fraction(forward, n), "above", 0.9);
    }
    const double mh = median(tau_half);
    claims.add("clock_plateau", mh > 0.0 ? median(tau_gain) / mh : kNaN, "below", 0.05);
  }
  claims.close();
  return {"rotsym", {std::move(main), std::move(traj)}, std::move(s)};
}

// ---------------------------------------------------------------------------
// toy

ExperimentResult run_toy(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  const double x0 = in.real("x0", 0.0);
  const double g0 = in.real("g0", 1.0);
  const std::size_t n = in.count("paths", 500);
  const double horizon = in.real("horizon", 40.0, Bound::positive);
  const double dt = in.real("dt", 1e-3, Bound::positive);
  const std::size_t stride = in.count("stride", 10, 1);
  const std::uint64_t seed = in.seed("seed", 42);
  const double tol = in.real("tol", 1e-2, Bound::positive);
  const double h = in.real("h", 1.0);
  in.finish();
  if (g0 == 0.0) throw ConfigError("g0", "g0 must be != 0 (system 2 reads log|g|)");
  if (n > 0 && horizon < 10.0) throw ConfigError("horizon", "horizon must be >= 10 for tail variables");

  Table main("toy", {"toy.system", "toy.path", "toy.x_T", "toy.g_T", "toy.u_T", "toy.w_T", "toy.cert_u", "toy.cert_g",
                     "toy.cert_w", "toy.qv_T", "toy.qv_half"});
  json s = base_summary("toy", seed, in, n);
  Claims claims(s);

  std::size_t escaped = 0, g_tail = 0;
  std::vector<double> w_tail, qv_gain;
  for (int id = 1; id <= 3; ++id) {
    if (n == 0) break;
    const PathEnsemble ens = toy_ensemble(id, x0, g0, n, horizon, dt, derive_seed(seed, static_cast<std::uint64_t>(id)),
                                          stride, threads);
    for (std::size_t i = 0; i < n; ++i) {
      const Path& path = ens.paths[i];
      const ToyTail tail = tail_variables(path, id, tol);
      const double xT = path.value(path.size() - 1, kToyX);
      const double qv = toy_quadratic_variation(path, horizon);
      const double qv_half = toy_quadratic_variation(path, 0.5 * horizon);
      main.add_row({idx(static_cast<std::size_t>(id)), idx(i), num(xT), num(tail.g), num(tail.u),
                    id == 2 ? num(tail.w) : Cell{}, num(tail.cert_u.sup_increment), num(tail.cert_g.sup_increment),
                    id == 2 ? num(tail.cert_w.sup_increment) : Cell{}, num(qv), num(qv_half)});
      if (id == 1) {
        escaped += xT >= 0.5 * horizon ? 1 : 0;
        g_tail += tail.cert_g.sup_increment < std::exp(-0.25 * horizon) ? 1 : 0;
        qv_gain.push_back(qv - qv_half);
      }
      if (id == 2) w_tail.push_back(tail.cert_w.sup_increment);
    }
  }

  Table eq("equivariance", {"toy.system", "toy.h", "toy.residual"});
  const auto family = standard_test_functions();
  double residual[4] = {0, 0, 0, 0};
  for (int id = 1; id <= 3; ++id) {
    residual[id] = equivariance_residual(toy_generator(id), h, family);
    eq.add_row({idx(static_cast<std::size_t>(id)), num(h), num(residual[id])});
  }

  s["equivariance_residuals"] = {residual[1], residual[2], residual[3]};
  claims.add("equivariance_system1", residual[1], "within", 0.0, 1e-12);
  if (h != 0.0) claims.add("equivariance_system2", residual[2], "above", 1e-3);
  if (n > 0) {
    claims.add("system1_linear_escape", fraction(escaped, n), "at_least", 1.0);
    claims.add("system1_g_tail", fraction(g_tail, n), "at_least", 0.99);
    claims.add("system1_qv_tail", median(qv_gain), "below", 1e-4);
    claims.add("system2_invariant_tail", median(w_tail), "below", 1e-2);
  }
  claims.close();
  return {"toy", {std::move(main), std::move(eq)}, std::move(s)};
}

// ---------------------------------------------------------------------------
// coupling

ExperimentResult run_coupling(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  DudleyParams p;
  p.d = static_cast<int>(in.integer("d", 3, 2, 64));
  p.sigma = in.real("sigma", 1.0, Bound::positive);
  const std::size_t n = in.count("paths", 200);
  CouplingOptions opt;
  opt.dt = in.real("dt", 1e-3, Bound::positive);
  opt.clock_dt = in.real("clock_dt", 1e-3, Bound::positive);
  opt.time_horizon = in.real("time_horizon", 1e3, Bound::positive);
  opt.clock_horizon = in.real("clock_horizon", 1e3, Bound::positive);
  const std::uint64_t seed = in.seed("seed", 42);
  const double alpha_gap = in.real("alpha_gap", 1.0);
  const double beta_gap = in.real("beta_gap", 1.0, Bound::nonnegative);
  const double gamma_gap = in.real("gamma_gap", 1.0);
  const std::size_t oracle_runs = in.count("oracle_runs", 2000);
  in.finish();
  opt.checkpoints = {20.0, 40.0};

  const auto m = static_cast<std::size_t>(p.d - 1);
  CouplingStart a{0.0, 1.0, std::vector<double>(m, 0.0)};
  CouplingStart b{alpha_gap, 1.0 + beta_gap, std::vector<double>(m, 0.0)};
  b.gamma[0] = gamma_gap;
  const std::vector<CouplingOutcome> outs = full_shift_coupling(p, a, b, n, opt, seed, threads);
  const CouplingSummary sum = summarize_coupling(outs);

  Table main("coupling", {"coupling.run", "coupling.t_tilde", "coupling.s", "coupling.s_bar", "coupling.r", "coupling.t",
                          "coupling.t_bar", "coupling.success", "coupling.clock_s", "coupling.clock_s_bar",
                          "coupling.gap", "coupling.clock_20", "coupling.clock_40", "coupling.clock_bar_20",
                          "coupling.clock_bar_40"});
  std::size_t monotone = 0, growth = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const CouplingOutcome& o = outs[i];
    main.add_row({idx(i), num(o.t_tilde), num(o.s), num(o.s_bar), num(o.r), num(o.t), num(o.t_bar), o.success,
                  num(o.clock_s), num(o.clock_s_bar), num(o.gap), num(o.clock_at_checkpoints[0]),
                  num(o.clock_at_checkpoints[1]), num(o.clock_bar_at_checkpoints[0]),
                  num(o.clock_bar_at_checkpoints[1])});
    if (!o.alpha_met || (o.t_tilde <= o.s && o.t_tilde <= o.s_bar)) ++monotone;
    if (o.clock_at_checkpoints[1] > o.clock_at_checkpoints[0] &&
        o.clock_bar_at_checkpoints[1] > o.clock_bar_at_checkpoints[0])
      ++growth;
  }

  // One-dimensional stage oracles: the first passage of a Brownian motion with
  // variance v per unit time to level a has median a² / (v q), q = Φ^{-1}(3/4)².
  const double q = std::pow(boost::math::quantile(boost::math::normal(), 0.75), 2);
  std::vector<double> t_tilde, r_clock;
  std::vector<double> alpha_runs(oracle_runs), reflect_runs(oracle_runs);
  parallel_for(oracle_runs, threads, [&](std::size_t i) {
    const std::uint64_t si = derive_seed(derive_seed(seed, 0xA1FA), i);
    RandomStream w(derive_seed(si, 0)), wt(derive_seed(si, 1)), wr(derive_seed(si, 2));
    const AlphaMeeting am = couple_alpha(0.0, alpha_gap, p, opt.dt, opt.time_horizon, w, wt);
    alpha_runs[i] = am.met ? am.t_tilde : std::numeric_limits<double>::infinity();
    const auto r = reflect_gamma_clock(gamma_gap, opt.clock_dt, opt.clock_horizon, wr);
    reflect_runs[i] = r ? *r : std::numeric_limits<double>::infinity();
  });
  const double alpha_oracle = alpha_gap * alpha_gap / (2.0 * p.sigma * p.sigma * q);
  const double reflect_oracle = 0.25 * gamma_gap * gamma_gap / q;

  json s = base_summary("coupling", seed, in, n);
  s["stage_medians"] = {{"t_tilde", number_or_null(sum.median_t_tilde)}, {"s", number_or_null(sum.median_s)},
                        {"s_bar", number_or_null(sum.median_s_bar)}, {"r", number_or_null(sum.median_r)},
                        {"t", number_or_null(sum.median_t)}, {"t_bar", number_or_null(sum.median_t_bar)}};
  s["successes"] = sum.successes;
  Claims claims(s);
  if (n > 0) {
    claims.add("success_rate", sum.success_rate, "at_least", 0.95);
    claims.add("stage_monotone", fraction(monotone, n), "at_least", 1.0);
    claims.add("clock_divergence", fraction(growth, n), "at_least", 0.9);
  }
  if (oracle_runs > 0 && alpha_gap != 0.0)
    claims.add("alpha_stage_median", median(alpha_runs) / alpha_oracle, "within", 1.0, 0.15);
  if (oracle_runs > 0 && gamma_gap != 0.0)
    claims.add("reflection_stage_median", median(reflect_runs) / reflect_oracle, "within", 1.0, 0.15);
  claims.close();
  return {"coupling", {std::move(main)}, std::move(s)};
}

// ---------------------------------------------------------------------------
// boundary-law and harmonic

struct ModelChoice {
  std::unique_ptr<BoundaryModel> model;
  std::vector<double> start;
};

ModelChoice choose_model(ConfigReader& in, const std::string& kind, double tol, bool with_rotsym) {
  ModelChoice out;
  if (kind == "dudley") {
    DudleyParams p;
    p.d = static_cast<int>(in.integer("d", 3, 2, 64));
    p.sigma = in.real("sigma", 1.0, Bound::positive);
    const auto d = static_cast<std::size_t>(p.d);
    out.model = dudley_boundary_model(p, tol);
    out.start = DudleyState::from_coordinates(0.0, 1.0, std::vector<double>(d - 1, 0.0), std::vector<double>(d - 1, 0.0), 0.0)
                    .pack();
  } else if (kind.rfind("toy", 0) == 0) {
    const int id = kind[3] - '0';
    out.model = toy_boundary_model(id, tol);
    out.start = {in.real("x0", 0.0), in.real("g0", 1.0)};
  } else if (with_rotsym && kind == "rotsym") {
    const int n = static_cast<int>(in.integer("n", 3, 2, 64));
    const WarpModel warp = load_warp(in.text("warp", "sinh"), n);
    out.model = rotsym_boundary_model(warp, tol);
    out.start.assign(static_cast<std::size_t>(n) + 1, 0.0);
    out.start[0] = in.real("r0", 1.0, Bound::nonnegative);
    out.start[1] = 1.0;
  }
  return out;
}

ExperimentResult run_boundary_law(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  const std::string kind = in.choice("model", "toy1", {"toy1", "toy2", "toy3", "dudley"});
  const bool dudley = kind == "dudley";
  const double shift = in.real("shift", dudley ? 1.0 : 0.5);
  const std::size_t n = in.count("paths", dudley ? 1000 : 2000, 1);
  const double horizon = in.real("horizon", dudley ? 30.0 : 40.0, Bound::positive);
  const double dt = in.real("dt", 1e-3, Bound::positive);
  const std::uint64_t seed = in.seed("seed", 42);
  const double tol = in.real("tol", 1e-2, Bound::positive);
  const bool shared = in.flag("shared_streams", false);
  ModelChoice mc = choose_model(in, kind, tol, false);
  in.finish();

  std::vector<double> g(mc.model->group_dimension(), 0.0);
  g.back() = shift;  // δ for Dudley, g for the toy systems
  const EquivarianceReport rep = boundary_law_equivariance(*mc.model, mc.start, g, n, horizon, dt, seed, shared, threads);

  Table main("boundary_law", {"boundary_law.coordinate", "boundary_law.statistic", "boundary_law.p_value"});
  json per = json::array();
  for (std::size_t c = 0; c < rep.per_coordinate.size(); ++c) {
    main.add_row({idx(c), num(rep.per_coordinate[c].statistic), num(rep.per_coordinate[c].p_value)});
    per.push_back({{"statistic", rep.per_coordinate[c].statistic}, {"p_value", rep.per_coordinate[c].p_value}});
  }
  json s = base_summary("boundary-law", seed, in, n);
  s["per_coordinate"] = per;
  s["unconverged"] = {rep.unconverged_a, rep.unconverged_b};
  Claims claims(s);
  claims.add("ks_min_p", rep.min_p_value, "above", 1e-3);
  claims.close();
  return {"boundary-law", {std::move(main)}, std::move(s)};
}

ExperimentResult run_harmonic(const Config& cfg, int threads) {
  ConfigReader in(cfg);
  const std::string kind = in.choice("model", "dudley", {"dudley", "toy1", "toy3", "rotsym"});
  const std::size_t n = in.count("paths", 1000);
  const double horizon = in.real("horizon", 20.0, Bound::positive);
  const double dt = in.real("dt", 1e-2, Bound::positive);
  const std::uint64_t seed = in.seed("seed", 42);
  const double tol = in.real("tol", 1e-2, Bound::positive);
  const double constant = in.real("constant", 0.7);
  const std::size_t coordinate = in.count("coordinate", 0);
  const std::size_t outer = in.count("outer", 50);
  const std::size_t inner = in.count("inner", 200);
  const double t_mid = in.real("t_mid", 5.0, Bound::positive);
  ModelChoice mc = choose_model(in, kind, tol, true);
  in.finish();
  if (coordinate >= mc.model->boundary_dimension())
    throw ConfigError("coordinate", "coordinate must be < " + std::to_string(mc.model->boundary_dimension()));
  if (n > 0 && outer > 0 && !(t_mid < horizon)) throw ConfigError("t_mid", "t_mid must be < horizon");

  // The half-space threshold is the start's own value of the boundary coordinate.
  double threshold = 0.0;
  if (kind == "dudley") threshold = mc.start[DudleyLayout{mc.model->boundary_dimension()}.h(0) + coordinate];
  if (kind != "dudley" && kind != "rotsym") threshold = mc.start[kToyG];
  const BoundaryFunctional half = BoundaryFunctional::half_space(coordinate, threshold);
  const BoundaryFunctional flat = BoundaryFunctional::constant(constant);

  const std::vector<BoundarySample> samples = sample_boundary(*mc.model, mc.start, n, horizon, dt, seed, threads);
  std::vector<std::string> cols{"harmonic.path"};
  append(cols, indexed("harmonic.boundary", mc.model->boundary_dimension()));
  cols.emplace_back("harmonic.converged");
  cols.emplace_back("harmonic.psi");
  Table main("harmonic", cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Cell> row{idx(i)};
    for (double v : samples[i].values) row.push_back(num(v));
    row.push_back(samples[i].converged);
    row.push_back(num(half.psi(samples[i].values)));
    main.add_row(row);
  }

  json s = base_summary("harmonic", seed, in, n);
  Claims claims(s);
  if (n > 0) {
    const HarmonicEstimate hc = harmonic_from_samples(samples, flat);
    const HarmonicEstimate hh = harmonic_from_samples(samples, half);
    s["half_space"] = {{"value", hh.value}, {"std_error", hh.std_error}, {"n", hh.n},
                       {"unconverged", hh.unconverged}, {"warning", hh.warning}};
    claims.add("constant_exact", std::abs(hc.value - constant) + hc.std_error, "within", 0.0, 0.0);
    if (kind == "dudley") claims.add("half_space_symmetry", hh.value, "within", 0.5, 3.0 * hh.std_error);
    if (outer > 1 && inner > 0) {
      const TowerCheck tc = tower_check(*mc.model, mc.start, half, n, outer, inner, t_mid, horizon, dt,
                                        derive_seed(seed, 0x70E5), threads);
      s["tower"] = {{"direct", tc.direct.value}, {"direct_std_error", tc.direct.std_error},
                    {"nested", tc.nested_mean}, {"nested_std_error", tc.nested_std_error}};
      claims.add("tower", tc.difference, "within", 0.0, 3.0 * tc.combined_std_error);
    }
  }
  claims.close();
  return {"harmonic", {std::move(main)}, std::move(s)};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"dudley", "rotsym", "toy", "coupling", "boundary-law", "harmonic"};
  return names;
}

ExperimentResult run_experiment(const std::string& name, const Config& config, int threads) {
  if (name == "dudley") return run_dudley(config, threads);
  if (name == "rotsym") return run_rotsym(config, threads);
  if (name == "toy") return run_toy(config, threads);
  if (name == "coupling") return run_coupling(config, threads);
  if (name == "boundary-law") return run_boundary_law(config, threads);
  if (name == "harmonic") return run_harmonic(config, threads);
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

}  // namespace devissage
