// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Linear algebra of Minkowski space R^{1,d}: the Lorentz form, the parabolic
// translations T_h and boosts D_α, the Iwasawa chart of the hyperboloid and the
// light-like decomposition along e_0 ± e_1.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace devissage {

/// Vector (ξ^0, ..., ξ^d) of R^{1,d}, d >= 2.
class MinkowskiVector {
 public:
  explicit MinkowskiVector(std::vector<double> components);
  MinkowskiVector(std::initializer_list<double> components);

  /// Basis vector e_i of R^{1,d}.
  static MinkowskiVector basis(std::size_t d, std::size_t i);
  static MinkowskiVector zero(std::size_t d);

  std::size_t spatial_dim() const noexcept { return c_.size() - 1; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> components() const noexcept { return c_; }
  /// (ξ^1, ..., ξ^d).
  std::vector<double> spatial() const { return {c_.begin() + 1, c_.end()}; }

  MinkowskiVector& operator+=(const MinkowskiVector& o);
  MinkowskiVector& operator-=(const MinkowskiVector& o);
  MinkowskiVector& operator*=(double s);

 private:
  std::vector<double> c_;
};

MinkowskiVector operator+(MinkowskiVector a, const MinkowskiVector& b);
MinkowskiVector operator-(MinkowskiVector a, const MinkowskiVector& b);
MinkowskiVector operator*(double s, MinkowskiVector a);

/// q(ξ, η) = ξ^0 η^0 - Σ_{i>=1} ξ^i η^i. Throws DomainError on dimension mismatch.
double lorentz_form(const MinkowskiVector& xi, const MinkowskiVector& eta);
inline double lorentz_form(const MinkowskiVector& xi) { return lorentz_form(xi, xi); }

/// Dense row-major (d+1) x (d+1) matrix acting on R^{1,d}.
class LorentzMatrix {
 public:
  explicit LorentzMatrix(std::size_t d);
  static LorentzMatrix identity(std::size_t d);

  std::size_t spatial_dim() const noexcept { return n_ - 1; }
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  MinkowskiVector apply(const MinkowskiVector& v) const;
  LorentzMatrix operator*(const LorentzMatrix& o) const;
  /// max_ij |a_ij - b_ij|.
  double max_abs_diff(const LorentzMatrix& o) const;
  /// max_ij |(M^T η M - η)_ij| with η = diag(1, -1, ..., -1).
  double isometry_defect() const;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Point of the upper sheet H^d = {q(ξ) = 1, ξ^0 > 0}; checked to 1e-9.
class HyperboloidPoint {
 public:
  explicit HyperboloidPoint(MinkowskiVector v);
  const MinkowskiVector& vector() const noexcept { return v_; }

 private:
  MinkowskiVector v_;
};

struct IwasawaCoords {
  double alpha = 0.0;
  std::vector<double> h;  // R^{d-1}
};

/// T_h = exp of the nilpotent generator with columns (h, h) and rows (h^t, -h^t).
LorentzMatrix translation_matrix(std::span<const double> h);

/// Boost D_α in the (e_0, e_1) plane of R^{1,d}.
LorentzMatrix boost_matrix(double alpha, std::size_t d);

/// T_h D_α e_0 in closed form.
HyperboloidPoint iwasawa_point(const IwasawaCoords& c);

/// Inverse chart: α = log(ξ^0 + ξ^1), h = (ξ^2..ξ^d) e^{-α}.
IwasawaCoords iwasawa_coords(const HyperboloidPoint& p);

struct LightlikeParts {
  double plus = 0.0;         // q(ξ, e_0 - e_1)
  double minus = 0.0;        // q(ξ, e_0 + e_1)
  std::vector<double> perp;  // ξ^i, i = 2..d
};

/// ξ = plus (e_0+e_1)/2 + minus (e_0-e_1)/2 + Σ perp_i e_i, exactly.
LightlikeParts lightlike_decompose(const MinkowskiVector& xi);
MinkowskiVector lightlike_recompose(const LightlikeParts& parts);

/// θ = ((1 - |h|²) e_1 + 2 Σ h^i e_i) / (1 + |h|²), returned as (θ^1, ..., θ^d).
std::vector<double> stereographic(std::span<const double> h);

/// Unit spatial direction of ξ (the polar angle θ when ξ ∈ H^d).
std::vector<double> polar_direction(const MinkowskiVector& xi);

/// Great-circle distance between unit vectors, 2 asin(|a - b| / 2).
double sphere_distance(std::span<const double> a, std::span<const double> b);

}  // namespace devissage
