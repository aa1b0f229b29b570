// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/stats.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "devissage/error.hpp"

namespace devissage {

MeanEstimate mean_estimate(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  out.mean = mean;
  if (values.size() > 1) {
    const double n = static_cast<double>(values.size());
    out.std_error = std::sqrt(std::max(0.0, m2) / (n - 1.0) / n);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

struct Window {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
};

Window window_indices(const Path& path, double t0, double t1) {
  const double slack = 1e-9 * std::max(1.0, std::abs(t1));
  Window w;
  w.first = static_cast<std::size_t>(
      std::lower_bound(path.times.begin(), path.times.end(), t0 - slack) - path.times.begin());
  w.last = static_cast<std::size_t>(
      std::upper_bound(path.times.begin(), path.times.end(), t1 + slack) - path.times.begin());
  return w;
}

}  // namespace

double path_slope(const Path& path, std::size_t component, double t0, double t1) {
  if (!(t0 < t1)) throw DomainError("drift window must satisfy t0 < t1");
  if (component >= path.dimension) throw DomainError("component out of range");
  const Window w = window_indices(path, t0, t1);
  const std::size_t n = w.last > w.first ? w.last - w.first : 0;
  if (n < 10) throw DomainError("drift window holds fewer than 10 recorded points");
  double tm = 0.0, xm = 0.0;
  for (std::size_t k = w.first; k < w.last; ++k) {
    tm += path.times[k];
    xm += path.value(k, component);
  }
  tm /= static_cast<double>(n);
  xm /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = w.first; k < w.last; ++k) {
    const double dt = path.times[k] - tm;
    sxy += dt * (path.value(k, component) - xm);
    sxx += dt * dt;
  }
  return sxy / sxx;
}

DriftEstimate drift_rate(const PathEnsemble& ensemble, std::size_t component, double t0, double t1) {
  if (ensemble.paths.empty()) throw DomainError("empty ensemble");
  std::vector<double> slopes;
  slopes.reserve(ensemble.size());
  for (const Path& p : ensemble.paths) slopes.push_back(path_slope(p, component, t0, t1));
  const MeanEstimate m = mean_estimate(slopes);
  return {m.mean, m.std_error, t0, t1};
}

ConvergenceCertificate range_certificate(double low, double high, double t0, double t1, double tol) {
  ConvergenceCertificate c;
  c.sup_increment = std::max(0.0, high - low);
  c.t0 = t0;
  c.t1 = t1;
  c.passed = c.sup_increment < tol;
  return c;
}

ConvergenceCertificate tail_certificate(const Path& path, std::size_t component, double tol) {
  if (path.size() == 0) throw DomainError("empty path");
  const double horizon = path.horizon();
  const double t0 = 0.5 * horizon;
  const Window w = window_indices(path, t0, horizon);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = w.first; k < w.last; ++k) {
    lo = std::min(lo, path.value(k, component));
    hi = std::max(hi, path.value(k, component));
  }
  if (w.first == w.last) lo = hi = path.value(path.size() - 1, component);
  return range_certificate(lo, hi, t0, horizon, tol);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form of the CDF converges quickly for small λ.
    const double pi = std::numbers::pi;
    const double y = -pi * pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 50; k += 2) sum += std::exp(y * k * k);
    const double cdf = std::sqrt(2.0 * pi) / lambda * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double statistic, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * statistic);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("KS test needs a nonempty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

ImproperIntegral improper_integral(const std::function<double(double)>& f, double lower, double growth_ratio,
                                   int doublings, double tolerance, unsigned max_depth) {
  if (!(lower > 0.0)) throw DomainError("improper_integral needs a positive lower bound");
  constexpr int kMaxDoublings = 60;
  auto checked = [&](double r) {
    const double v = f(r);
    if (!std::isfinite(v)) throw DomainError("non-finite integrand at r = " + std::to_string(r));
    return v;
  };
  ImproperIntegral out;
  double total = 0.0;
  double left = lower;
  int growth_run = 0;
  for (int k = 1; k <= kMaxDoublings; ++k) {
    const double right = 2.0 * left;
    const double piece =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(checked, left, right, max_depth, tolerance);
    const double previous = total;
    total += piece;
    out.partial_values.push_back(total);
    left = right;
    if (k == 1) continue;
    if (std::abs(piece) <= 1e-6 * std::abs(total) || total == 0.0) {
      out.verdict = IntegralVerdict::convergent;
      out.value = total;
      return out;
    }
    growth_run = (previous != 0.0 && total / previous > growth_ratio) ? growth_run + 1 : 0;
    if (growth_run >= doublings) {
      out.verdict = IntegralVerdict::divergent;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  out.value = total;
  return out;
}

}  // namespace devissage
