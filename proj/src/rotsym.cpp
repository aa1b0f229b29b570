// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/rotsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

using std::isnan;  // boost pchip calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <fstream>
#include <memory>
#include <sstream>

#include "devissage/error.hpp"
#include "devissage/minkowski.hpp"
#include "devissage/sde.hpp"

namespace devissage {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Orthonormalises `columns` (column-major, n x n) in place, in column order.
// A column that collapses is replaced by the first axis e_k that survives.
void gram_schmidt(std::vector<double>& columns, std::size_t n) {
  std::vector<double> candidate(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::span<double> col(columns.data() + c * n, n);
    auto orthogonalise = [&](std::span<double> v) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < c; ++p) {
          std::span<const double> q(columns.data() + p * n, n);
          const double proj = dot(v, q);
          for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q[i];
        }
      }
      return std::sqrt(dot(v, v));
    };
    double norm = orthogonalise(col);
    for (std::size_t axis = 0; norm < 1e-8 && axis < n; ++axis) {
      std::fill(col.begin(), col.end(), 0.0);
      col[axis] = 1.0;
      norm = orthogonalise(col);
    }
    for (double& x : col) x /= norm;
  }
}

}  // namespace

WarpModel WarpModel::builtin(const std::string& name, int n) {
  WarpModel m;
  m.name = name;
  m.n = n;
  if (name == "sinh") {
    m.f = [](double r) { return std::sinh(r); };
    m.fprime = [](double r) { return std::cosh(r); };
  } else if (name == "r") {
    m.f = [](double r) { return r; };
    m.fprime = [](double) { return 1.0; };
  } else if (name == "exp") {
    m.f = [](double r) { return std::exp(r); };
    m.fprime = [](double r) { return std::exp(r); };
  } else {
    throw DomainError("unknown warp '" + name + "' (expected sinh, r, exp or a CSV table)");
  }
  m.validate();
  return m;
}

WarpModel WarpModel::tabulated(std::vector<double> r, std::vector<double> f, int n) {
  if (r.size() != f.size() || r.size() < 4) throw DomainError("warp table needs at least 4 (r, f) rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(f[i] > 0.0) || !std::isfinite(r[i]) || !std::isfinite(f[i]))
      throw DomainError("warp table needs positive finite r and f");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("warp table r column must be strictly increasing");
  }
  const double r_first = r.front(), r_last = r.back();
  const double f_first = f.front(), f_last = f.back();
  const std::size_t k = r.size() - 1;
  const double slope_last = std::log(f[k] / f[k - 1]) / (r[k] - r[k - 1]);
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(r), std::move(f));

  WarpModel m;
  m.name = "table";
  m.n = n;
  m.f = [spline, r_first, r_last, f_first, f_last, slope_last](double x) {
    if (x < r_first) return f_first * x / r_first;
    if (x > r_last) return f_last * std::exp(slope_last * (x - r_last));
    return (*spline)(x);
  };
  m.fprime = [spline, r_first, r_last, f_first, f_last, slope_last](double x) {
    if (x < r_first) return f_first / r_first;
    if (x > r_last) return f_last * slope_last * std::exp(slope_last * (x - r_last));
    return spline->prime(x);
  };
  m.validate();
  return m;
}

WarpModel WarpModel::from_csv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open warp table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("warp table '" + path + "' is empty");
  {
    std::istringstream header(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (header >> a >> comma >> b && comma == ',')
      throw DomainError("warp table '" + path + "' needs a header row");
  }
  std::vector<double> r, f;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ','))
      throw DomainError("warp table row " + std::to_string(row) + " needs two columns");
    try {
      r.push_back(std::stod(a));
      f.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw DomainError("warp table row " + std::to_string(row) + " is not numeric");
    }
  }
  WarpModel m = tabulated(std::move(r), std::move(f), n);
  m.name = "table:" + path;
  return m;
}

void WarpModel::validate() const {
  if (n < 2) throw DomainError("n must be ≥ 2");
  if (!f || !fprime) throw DomainError("warp functions missing");
  for (double r : {1e-3, 0.5, 1.0, 2.0, 5.0}) {
    const double v = f(r);
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(fprime(r)))
      throw DomainError("warp f must be positive and finite on (0, ∞)");
  }
}

RotsymState RotsymState::start(double r0, std::span<const double> theta0) {
  const std::size_t n = theta0.size();
  if (n < 2) throw DomainError("n must be ≥ 2");
  if (!(r0 > 0.0)) throw DomainError("r0 must be > 0 (use centre() for the origin)");
  const double norm = std::sqrt(dot(theta0, theta0));
  if (std::abs(norm - 1.0) > 1e-9) throw DomainError("theta0 must be a unit vector");
  std::vector<double> frame(n * n, 0.0);
  std::copy(theta0.begin(), theta0.end(), frame.begin());
  for (std::size_t c = 1; c < n; ++c) frame[c * n + (c - 1)] = 1.0;
  gram_schmidt(frame, n);
  return start_with_frame(r0, std::move(frame));
}

RotsymState RotsymState::start_with_frame(double r0, std::vector<double> frame) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(frame.size()))));
  if (n < 2 || n * n != frame.size()) throw DomainError("frame must be n x n, n >= 2");
  if (!(r0 >= 0.0)) throw DomainError("r0 must be >= 0");
  RotsymState s;
  s.r = r0;
  s.frame = std::move(frame);
  return s;
}

RotsymState RotsymState::centre(int n) {
  if (n < 2) throw DomainError("n must be ≥ 2");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<double> frame(dim * dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) frame[c * dim + c] = 1.0;
  return start_with_frame(0.0, std::move(frame));
}

std::size_t RotsymState::n() const {
  return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(frame.size()))));
}

RotsymStreams::RotsymStreams(std::uint64_t seed)
    : radial(derive_stream(seed, 0)), angular(derive_stream(seed, 1)) {}

RotsymStreams::RotsymStreams(std::uint64_t radial_seed, std::uint64_t angular_seed)
    : radial(derive_stream(radial_seed, 0)), angular(derive_stream(angular_seed, 1)) {}

RotsymState rotsym_step(const RotsymState& state, const WarpModel& model, double dt, RotsymStreams& streams) {
  const std::size_t n = state.n();
  if (n != static_cast<std::size_t>(model.n)) throw DomainError("state and warp model disagree on n");
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  RotsymState next = state;

  if (state.r == 0.0) {
    // Exact Euclidean step from the centre: |Z| and Z/|Z| are independent.
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = streams.radial.normal();
      chi2 += z * z;
    }
    next.r = std::sqrt(dt * chi2);
    std::vector<double> dir(n);
    streams.angular.fill_normal(dir);
    std::vector<double> frame(n * n, 0.0);
    std::copy(dir.begin(), dir.end(), frame.begin());
    for (std::size_t c = 1; c < n; ++c) frame[c * n + (c - 1)] = 1.0;
    gram_schmidt(frame, n);
    next.frame = std::move(frame);
    return next;
  }
  if (!(state.r > 0.0)) throw DomainError("r must be > 0");

  const double fr = model.f(state.r);
  const double dtau = dt / (fr * fr);
  const double drift = 0.5 * static_cast<double>(n - 1) * model.fprime(state.r) / fr;

  double r;
  if (state.r * state.r < kBesselZone * dt && fr < 2.0 * state.r) {
    // Near a cone-like centre: Euclidean Bessel step, radial draws only.
    const double root = std::sqrt(dt);
    const double lead = state.r + root * streams.radial.normal();
    double chi2 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double z = streams.radial.normal();
      chi2 += z * z;
    }
    r = std::sqrt(lead * lead + dt * chi2);
  } else {
    r = state.r + drift * dt + std::sqrt(dt) * streams.radial.normal();
  }
  if (r < kRotsymFloor) {
    r = 2.0 * kRotsymFloor - r;
    ++next.reflections;
  }
  if (!std::isfinite(r)) throw OverflowError(0, "radial coordinate became non-finite");
  next.r = r;

  // θ + Σ_c z_c F_c over the tangent columns, then renormalise and re-frame.
  const double scale = std::sqrt(dtau);
  std::vector<double>& F = next.frame;
  for (std::size_t c = 1; c < n; ++c) {
    const double z = scale * streams.angular.normal();
    for (std::size_t i = 0; i < n; ++i) F[i] += z * state.frame[c * n + i];
  }
  const double norm = std::sqrt(dot(std::span<const double>(F.data(), n), std::span<const double>(F.data(), n)));
  for (std::size_t i = 0; i < n; ++i) F[i] /= norm;
  gram_schmidt(F, n);
  next.tau = state.tau + dtau;
  return next;
}

RotsymPath simulate_rotsym(const RotsymState& start, const WarpModel& model, double horizon, double dt,
                           RotsymStreams& streams, std::size_t stride) {
  if (stride == 0) throw DomainError("stride must be >= 1");
  const std::size_t steps = step_count(horizon, dt);
  RotsymPath path;
  path.n = start.n();
  auto record = [&](double t, const RotsymState& s) {
    path.times.push_back(t);
    path.r.push_back(s.r);
    path.theta.insert(path.theta.end(), s.theta().begin(), s.theta().end());
    path.tau.push_back(s.tau);
  };
  RotsymState s = start;
  record(0.0, s);
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      s = rotsym_step(s, model, dt, streams);
    } catch (OverflowError& e) {
      throw OverflowError(k, std::string(e.what()) + " at step " + std::to_string(k));
    }
    if (k % stride == 0 || k == steps) record(static_cast<double>(k) * dt, s);
  }
  path.reflections = s.reflections;
  return path;
}

namespace {

// J(r) = ∫_r^∞ g on [r_lo, ∞), built lazily per dyadic segment [r_lo 2^k, r_lo 2^{k+1}]:
// the right end comes from improper_integral, the interior from a cumulative table.
class TailIntegral {
 public:
  TailIntegral(std::function<double(double)> g, double r_lo) : g_(std::move(g)), r_lo_(r_lo) {}

  double operator()(double r) {
    const int k = std::max(0, static_cast<int>(std::floor(std::log2(r / r_lo_))));
    const Segment& seg = segment(k);
    const double h = (seg.right - seg.left) / kCells;
    const auto j = std::min<std::size_t>(kCells - 1, static_cast<std::size_t>(std::max(0.0, (r - seg.left) / h)));
    const double upper = seg.left + static_cast<double>(j + 1) * h;
    return seg.tail[j + 1] + Rule::integrate(g_, r, upper);
  }

 private:
  using Rule = boost::math::quadrature::gauss<double, 10>;
  static constexpr std::size_t kCells = 1024;
  struct Segment {
    double left = 0.0, right = 0.0;
    std::vector<double> tail;  // J at left + i h
  };

  const Segment& segment(int k) {
    auto it = segments_.find(k);
    if (it != segments_.end()) return it->second;
    Segment seg;
    seg.left = std::ldexp(r_lo_, k);
    seg.right = 2.0 * seg.left;
    const ImproperIntegral end = improper_integral(g_, seg.right);
    if (end.verdict != IntegralVerdict::convergent) throw DomainError("inner integral J(r) did not converge");
    seg.tail.assign(kCells + 1, 0.0);
    seg.tail[kCells] = end.value;
    const double h = (seg.right - seg.left) / kCells;
    for (std::size_t i = kCells; i-- > 0;) {
      const double a = seg.left + static_cast<double>(i) * h;
      seg.tail[i] = seg.tail[i + 1] + Rule::integrate(g_, a, a + h);
    }
    return segments_.emplace(k, std::move(seg)).first->second;
  }

  std::function<double(double)> g_;
  double r_lo_;
  std::map<int, Segment> segments_;
};

}  // namespace

ConditionReport check_conditions(const WarpModel& model, double r_lo) {
  model.validate();
  const double n = model.n;
  auto decay = [&](double r) { return std::pow(model.f(r), 1.0 - n); };
  ConditionReport rep;
  rep.i1 = improper_integral(decay, r_lo);
  rep.c1 = rep.i1.verdict == IntegralVerdict::convergent;
  if (rep.i1.verdict == IntegralVerdict::divergent) {
    // J ≡ ∞: the condition-2 integral is +∞ and condition 3 fails.
    rep.c2 = true;
    rep.c3 = false;
    rep.i2.verdict = rep.i3.verdict = IntegralVerdict::divergent;
    rep.i2.value = rep.i3.value = std::numeric_limits<double>::infinity();
    return rep;
  }
  TailIntegral tail(decay, r_lo);
  constexpr double kOuterTol = 1e-9;
  rep.i2 = improper_integral([&](double r) { return std::pow(model.f(r), n - 1.0) * tail(r); }, r_lo, 1.1, 3,
                             kOuterTol);
  rep.i3 = improper_integral([&](double r) { return std::pow(model.f(r), n - 3.0) * tail(r); }, r_lo, 1.1, 3,
                             kOuterTol);
  rep.c2 = rep.i2.verdict == IntegralVerdict::divergent;
  rep.c3 = rep.i3.verdict == IntegralVerdict::convergent;
  return rep;
}

std::vector<EscapeSample> escape_angle_law(const WarpModel& model, const RotsymState& start, std::size_t count,
                                           double horizon, double dt, std::uint64_t seed, double tol,
                                           int threads) {
  const ConditionReport conditions = check_conditions(model);
  if (!(conditions.c1 && conditions.c2 && conditions.c3)) {
    throw DomainError("escape angle undefined: warp '" + model.name + "' fails the integrability conditions (" +
                      std::string(conditions.c1 ? "T" : "F") + (conditions.c2 ? "T" : "F") +
                      (conditions.c3 ? "T" : "F") + ")");
  }
  std::vector<EscapeSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    RotsymStreams streams(derive_seed(seed, i));
    out[i] = escape_path(model, start, horizon, dt, streams, tol);
  });
  return out;
}

EscapeSample escape_path(const WarpModel& model, const RotsymState& start, double horizon, double dt,
                         RotsymStreams& streams, double tol) {
  const std::size_t steps = step_count(horizon, dt);
  const std::size_t half = steps / 2;
  RotsymState s = start;
  std::vector<double> anchor(s.theta().begin(), s.theta().end());
  EscapeSample sample;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      s = rotsym_step(s, model, dt, streams);
    } catch (OverflowError&) {
      throw OverflowError(k, "radial coordinate became non-finite at step " + std::to_string(k));
    }
    if (k == half) {
      anchor.assign(s.theta().begin(), s.theta().end());
      sample.tau_half = s.tau;
    } else if (k > half) {
      sample.sup_increment = std::max(sample.sup_increment, sphere_distance(anchor, s.theta()));
    }
  }
  sample.theta.assign(s.theta().begin(), s.theta().end());
  sample.r_final = s.r;
  sample.tau_final = s.tau;
  sample.converged = sample.sup_increment < tol;
  return sample;
}

double sphere_marginal_cdf(double x, int n) {
  if (n < 2) throw DomainError("n must be ≥ 2");
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // (x+1)/2 ~ Beta((n-1)/2, (n-1)/2).
  const double a = 0.5 * (n - 1);
  return boost::math::ibeta(a, a, 0.5 * (x + 1.0));
}

}  // namespace devissage
