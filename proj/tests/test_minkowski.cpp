// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "devissage/error.hpp"
#include "devissage/minkowski.hpp"
#include "devissage/random.hpp"
#include "doctest.h"

using namespace devissage;

namespace {

// T_h written out entrywise from its block form.
LorentzMatrix translation_oracle(const std::vector<double>& h) {
  const std::size_t d = h.size() + 1;
  double n2 = 0;
  for (double x : h) n2 += x * x;
  LorentzMatrix m = LorentzMatrix::identity(d);
  m(0, 0) = 1 + n2 / 2;
  m(0, 1) = n2 / 2;
  m(1, 0) = -n2 / 2;
  m(1, 1) = 1 - n2 / 2;
  for (std::size_t i = 0; i < h.size(); ++i) {
    m(0, i + 2) = h[i];
    m(1, i + 2) = -h[i];
    m(i + 2, 0) = h[i];
    m(i + 2, 1) = h[i];
  }
  return m;
}

std::vector<double> random_h(RandomStream& s, std::size_t n, double scale) {
  std::vector<double> h(n);
  for (double& x : h) x = scale * (2 * s.uniform() - 1);
  return h;
}

}  // namespace

TEST_CASE("Lorentz form examples") {
  CHECK(lorentz_form(MinkowskiVector{1, 0, 0}) == 1.0);
  CHECK(lorentz_form(MinkowskiVector{1, 1, 0}) == 0.0);
  CHECK(lorentz_form(MinkowskiVector{2, 1, 1, 1}) == 1.0);
  CHECK_THROWS_AS(lorentz_form(MinkowskiVector{1, 0, 0}, MinkowskiVector{1, 0, 0, 0}), DomainError);
}

TEST_CASE("translation matrix matches the block form and fixes e0 - e1") {
  RandomStream s(1);
  for (int k = 0; k < 100; ++k) {
    const auto h = random_h(s, 2, 1.0);
    const LorentzMatrix t = translation_matrix(h);
    CHECK(t.max_abs_diff(translation_oracle(h)) < 1e-14);
    const MinkowskiVector v = t.apply(MinkowskiVector{1, -1, 0, 0});
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(v[2]) < 1e-14);
  }
  CHECK(translation_matrix(std::vector<double>{0.0, 0.0}).max_abs_diff(LorentzMatrix::identity(3)) == 0.0);
}

TEST_CASE("group laws, isometry and chart identities over 1000 random cases") {
  RandomStream s(2026);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 4);
    const auto h = random_h(s, d - 1, 1.0);
    const auto g = random_h(s, d - 1, 1.0);
    std::vector<double> hg(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) hg[i] = h[i] + g[i];
    const double a = 3 * (2 * s.uniform() - 1), b = 3 * (2 * s.uniform() - 1);

    CHECK((translation_matrix(h) * translation_matrix(g)).max_abs_diff(translation_matrix(hg)) < 1e-12);
    const LorentzMatrix dab = boost_matrix(a, d) * boost_matrix(b, d);
    CHECK(dab.max_abs_diff(boost_matrix(a + b, d)) < 1e-12 * std::cosh(a + b) + 1e-12);
    CHECK((boost_matrix(a, d) * boost_matrix(-a, d)).max_abs_diff(LorentzMatrix::identity(d)) < 1e-12 * std::cosh(a) * std::cosh(a));
    CHECK(translation_matrix(h).isometry_defect() < 1e-12);
    CHECK(boost_matrix(a, d).isometry_defect() < 1e-12 * std::cosh(2 * a));

    const IwasawaCoords c{a, h};
    const HyperboloidPoint p = iwasawa_point(c);
    CHECK(std::abs(lorentz_form(p.vector()) - 1.0) < 1e-12 * p.vector()[0] * p.vector()[0]);
    const MinkowskiVector direct = (translation_matrix(h) * boost_matrix(a, d)).apply(MinkowskiVector::basis(d, 0));
    for (std::size_t i = 0; i <= d; ++i) CHECK(std::abs(direct[i] - p.vector()[i]) < 1e-12 * p.vector()[0]);
    const IwasawaCoords back = iwasawa_coords(p);
    CHECK(std::abs(back.alpha - a) < 1e-12);
    for (std::size_t i = 0; i + 1 < d; ++i) CHECK(std::abs(back.h[i] - h[i]) < 1e-12);

    std::vector<double> xi(d + 1);
    for (double& x : xi) x = 4 * s.normal();
    const MinkowskiVector v(xi);
    const MinkowskiVector r = lightlike_recompose(lightlike_decompose(v));
    for (std::size_t i = 0; i <= d; ++i) CHECK(std::abs(r[i] - v[i]) < 1e-12 * (1 + std::abs(v[i])));

    // Stereographic light-ray identity: T_h (e0 + e1) is the light ray (1 + |h|²)(e0 + θ).
    const auto theta = stereographic(h);
    const MinkowskiVector ray = translation_matrix(h).apply(MinkowskiVector::basis(d, 0) + MinkowskiVector::basis(d, 1));
    double n2 = 0, unit = 0;
    for (double x : h) n2 += x * x;
    for (double x : theta) unit += x * x;
    CHECK(std::abs(unit - 1.0) < 1e-12);
    CHECK(std::abs(ray[0] - (1 + n2)) < 1e-12);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(ray[i + 1] - (1 + n2) * theta[i]) < 1e-12);
  }
}

TEST_CASE("chart stays on the sheet far out") {
  RandomStream s(9);
  for (int k = 0; k < 1000; ++k) {
    const double a = 20 * (2 * s.uniform() - 1);
    const auto h = random_h(s, 2, 1e3);
    const MinkowskiVector v = iwasawa_point({a, h}).vector();
    CHECK(v[0] > 0);
    CHECK(std::abs(lorentz_form(v) - 1.0) < 1e-12 * std::max(1.0, v[0] * v[0]));
  }
}

TEST_CASE("chart examples") {
  const MinkowskiVector p = iwasawa_point({0.0, {0.0, 0.0}}).vector();
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  const MinkowskiVector q = iwasawa_point({std::log(2.0), {0.0, 0.0}}).vector();
  CHECK(q[0] == doctest::Approx(1.25));
  CHECK(q[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(HyperboloidPoint(MinkowskiVector{2, 0, 0}), DomainError);
}

TEST_CASE("stereographic examples") {
  auto t = stereographic(std::vector<double>{0.0, 0.0});
  CHECK(t == std::vector<double>{1.0, 0.0, 0.0});
  t = stereographic(std::vector<double>{1.0, 0.0});
  CHECK(t[0] == doctest::Approx(0.0));
  CHECK(t[1] == doctest::Approx(1.0));
  CHECK(sphere_distance(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}) ==
        doctest::Approx(std::acos(0.0)));
  CHECK(sphere_distance(std::vector<double>{1, 0, 0}, std::vector<double>{-1, 0, 0}) ==
        doctest::Approx(std::acos(-1.0)));
}

TEST_CASE("lightlike parts of basis vectors") {
  const LightlikeParts p = lightlike_decompose(MinkowskiVector{1, 0, 0});
  CHECK(p.plus == 1.0);
  CHECK(p.minus == 1.0);
  const LightlikeParts q = lightlike_decompose(MinkowskiVector{1, 1, 0});
  CHECK(q.plus == 2.0);
  CHECK(q.minus == 0.0);
}
