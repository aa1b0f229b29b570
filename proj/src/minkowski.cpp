// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/minkowski.hpp"

#include <algorithm>
#include <cmath>

#include "devissage/error.hpp"

namespace devissage {

namespace {

void require_finite(std::span<const double> c) {
  for (double x : c) {
    if (!std::isfinite(x)) throw DomainError("Minkowski vector has a non-finite component");
  }
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

MinkowskiVector::MinkowskiVector(std::vector<double> components) : c_(std::move(components)) {
  if (c_.size() < 3) throw DomainError("Minkowski space needs d >= 2");
  require_finite(c_);
}

MinkowskiVector::MinkowskiVector(std::initializer_list<double> components)
    : MinkowskiVector(std::vector<double>(components)) {}

MinkowskiVector MinkowskiVector::basis(std::size_t d, std::size_t i) {
  if (i > d) throw DomainError("basis index out of range");
  std::vector<double> c(d + 1, 0.0);
  c[i] = 1.0;
  return MinkowskiVector(std::move(c));
}

MinkowskiVector MinkowskiVector::zero(std::size_t d) { return MinkowskiVector(std::vector<double>(d + 1, 0.0)); }

MinkowskiVector& MinkowskiVector::operator+=(const MinkowskiVector& o) {
  if (o.c_.size() != c_.size()) throw DomainError("dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

MinkowskiVector& MinkowskiVector::operator-=(const MinkowskiVector& o) {
  if (o.c_.size() != c_.size()) throw DomainError("dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

MinkowskiVector& MinkowskiVector::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

MinkowskiVector operator+(MinkowskiVector a, const MinkowskiVector& b) { return a += b; }
MinkowskiVector operator-(MinkowskiVector a, const MinkowskiVector& b) { return a -= b; }
MinkowskiVector operator*(double s, MinkowskiVector a) { return a *= s; }

double lorentz_form(const MinkowskiVector& xi, const MinkowskiVector& eta) {
  if (xi.spatial_dim() != eta.spatial_dim()) throw DomainError("lorentz_form: dimension mismatch");
  double s = xi[0] * eta[0];
  for (std::size_t i = 1; i <= xi.spatial_dim(); ++i) s -= xi[i] * eta[i];
  return s;
}

LorentzMatrix::LorentzMatrix(std::size_t d) : n_(d + 1), a_((d + 1) * (d + 1), 0.0) {
  if (d < 2) throw DomainError("Minkowski space needs d >= 2");
}

LorentzMatrix LorentzMatrix::identity(std::size_t d) {
  LorentzMatrix m(d);
  for (std::size_t i = 0; i < m.n_; ++i) m(i, i) = 1.0;
  return m;
}

MinkowskiVector LorentzMatrix::apply(const MinkowskiVector& v) const {
  if (v.spatial_dim() + 1 != n_) throw DomainError("matrix/vector dimension mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * v[j];
    out[i] = s;
  }
  return MinkowskiVector(std::move(out));
}

LorentzMatrix LorentzMatrix::operator*(const LorentzMatrix& o) const {
  if (o.n_ != n_) throw DomainError("matrix dimension mismatch");
  LorentzMatrix r(n_ - 1);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const double aik = a_[i * n_ + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) r.a_[i * n_ + j] += aik * o.a_[k * n_ + j];
    }
  return r;
}

double LorentzMatrix::max_abs_diff(const LorentzMatrix& o) const {
  if (o.n_ != n_) throw DomainError("matrix dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
  return m;
}

double LorentzMatrix::isometry_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      // (M^T η M)_ij = Σ_k η_k M_ki M_kj
      double s = 0.0;
      for (std::size_t k = 0; k < n_; ++k) s += (k == 0 ? 1.0 : -1.0) * a_[k * n_ + i] * a_[k * n_ + j];
      const double eta = i != j ? 0.0 : (i == 0 ? 1.0 : -1.0);
      worst = std::max(worst, std::abs(s - eta));
    }
  return worst;
}

HyperboloidPoint::HyperboloidPoint(MinkowskiVector v) : v_(std::move(v)) {
  const double q = lorentz_form(v_);
  // Relative check: for points far out on the sheet q is a difference of large squares.
  const double scale = std::max(1.0, v_[0] * v_[0]);
  if (!(v_[0] > 0.0) || std::abs(q - 1.0) > 1e-9 * scale) {
    throw DomainError("vector is not on the upper sheet of the hyperboloid");
  }
}

LorentzMatrix translation_matrix(std::span<const double> h) {
  const std::size_t d = h.size() + 1;
  LorentzMatrix t = LorentzMatrix::identity(d);
  const double half = 0.5 * squared_norm(h);
  t(0, 0) = 1.0 + half;
  t(0, 1) = half;
  t(1, 0) = -half;
  t(1, 1) = 1.0 - half;
  for (std::size_t i = 0; i < h.size(); ++i) {
    t(0, 2 + i) = h[i];
    t(1, 2 + i) = -h[i];
    t(2 + i, 0) = h[i];
    t(2 + i, 1) = h[i];
  }
  return t;
}

LorentzMatrix boost_matrix(double alpha, std::size_t d) {
  LorentzMatrix m = LorentzMatrix::identity(d);
  m(0, 0) = std::cosh(alpha);
  m(0, 1) = std::sinh(alpha);
  m(1, 0) = std::sinh(alpha);
  m(1, 1) = std::cosh(alpha);
  return m;
}

HyperboloidPoint iwasawa_point(const IwasawaCoords& c) {
  const std::size_t d = c.h.size() + 1;
  if (d < 2) throw DomainError("Iwasawa chart needs d >= 2");
  const double up = 0.5 * std::exp(c.alpha);
  const double down = 0.5 * std::exp(-c.alpha);
  const double n2 = squared_norm(c.h);
  std::vector<double> x(d + 1);
  x[0] = up * (1.0 + n2) + down;
  x[1] = up * (1.0 - n2) - down;
  for (std::size_t i = 0; i < c.h.size(); ++i) x[2 + i] = 2.0 * up * c.h[i];
  return HyperboloidPoint(MinkowskiVector(std::move(x)));
}

IwasawaCoords iwasawa_coords(const HyperboloidPoint& p) {
  const MinkowskiVector& v = p.vector();
  IwasawaCoords c;
  const double light = v[0] + v[1];  // = e^α
  c.alpha = std::log(light);
  c.h.resize(v.spatial_dim() - 1);
  for (std::size_t i = 0; i < c.h.size(); ++i) c.h[i] = v[2 + i] / light;
  return c;
}

LightlikeParts lightlike_decompose(const MinkowskiVector& xi) {
  LightlikeParts p;
  p.plus = xi[0] + xi[1];
  p.minus = xi[0] - xi[1];
  p.perp.assign(xi.components().begin() + 2, xi.components().end());
  return p;
}

MinkowskiVector lightlike_recompose(const LightlikeParts& parts) {
  const std::size_t d = parts.perp.size() + 1;
  std::vector<double> x(d + 1);
  x[0] = 0.5 * (parts.plus + parts.minus);
  x[1] = 0.5 * (parts.plus - parts.minus);
  for (std::size_t i = 0; i < parts.perp.size(); ++i) x[2 + i] = parts.perp[i];
  return MinkowskiVector(std::move(x));
}

std::vector<double> stereographic(std::span<const double> h) {
  const double n2 = squared_norm(h);
  const double inv = 1.0 / (1.0 + n2);
  std::vector<double> theta(h.size() + 1);
  theta[0] = (1.0 - n2) * inv;
  for (std::size_t i = 0; i < h.size(); ++i) theta[1 + i] = 2.0 * h[i] * inv;
  return theta;
}

std::vector<double> polar_direction(const MinkowskiVector& xi) {
  std::vector<double> s = xi.spatial();
  const double n = std::sqrt(squared_norm(s));
  if (!(n > 0.0)) throw DomainError("polar direction undefined at the sheet's base point");
  for (double& x : s) x /= n;
  return s;
}

double sphere_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("sphere_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(s)));
}

}  // namespace devissage
