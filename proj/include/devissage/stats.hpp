// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Statistics and numerics shared by the models: drift rates, tail-convergence
// certificates, Kolmogorov–Smirnov tests and improper integrals.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "devissage/sde.hpp"

namespace devissage {

struct DriftEstimate {
  double slope = 0.0;
  double std_error = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct ConvergenceCertificate {
  double sup_increment = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  bool passed = false;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

MeanEstimate mean_estimate(std::span<const double> values);
double median(std::vector<double> values);

/// Least-squares slope of one path component over the recorded points in [t0, t1].
double path_slope(const Path& path, std::size_t component, double t0, double t1);

/// Per-path least-squares slope over [t0, t1], then mean and standard error across paths.
/// Throws DomainError if the window holds fewer than 10 recorded points.
DriftEstimate drift_rate(const PathEnsemble& ensemble, std::size_t component, double t0, double t1);

/// sup |x_t - x_s| over recorded s, t in [T/2, T].
ConvergenceCertificate tail_certificate(const Path& path, std::size_t component, double tol);

/// Same certificate from a precomputed [low, high] range over the window.
ConvergenceCertificate range_certificate(double low, double high, double t0, double t1, double tol);

/// Kolmogorov limiting survival function Q(λ) = 2 Σ (-1)^{k-1} exp(-2 k² λ²).
double kolmogorov_survival(double lambda);

/// Two-sample KS statistic with the asymptotic p-value (Stephens' small-sample correction).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

enum class IntegralVerdict { convergent, divergent, inconclusive };

struct ImproperIntegral {
  IntegralVerdict verdict = IntegralVerdict::inconclusive;
  double value = 0.0;                  // last partial value; +inf when divergent
  std::vector<double> partial_values;  // ∫ over [lower, 2^k lower], k = 1, 2, ...
};

/// ∫_lower^∞ f over doubling horizons [lower, 2^k lower]. Convergent once a doubling adds
/// less than 1e-6 of the running value; divergent once `doublings` consecutive doublings
/// each multiply it by more than `growth_ratio`. Each doubling uses adaptive Gauss–Kronrod
/// with the given relative tolerance and bisection depth. Throws DomainError on a non-finite sample.
ImproperIntegral improper_integral(const std::function<double(double)>& f, double lower,
                                   double growth_ratio = 1.1, int doublings = 3, double tolerance = 1e-11,
                                   unsigned max_depth = 15);

}  // namespace devissage
