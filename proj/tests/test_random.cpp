// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include <set>
#include <vector>

#include "devissage/random.hpp"
#include "devissage/stats.hpp"
#include "doctest.h"

using namespace devissage;

TEST_CASE("derived seeds are a pure function of (master, index)") {
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("a stream replays exactly from its seed") {
  RandomStream a = derive_stream(42, 3), b = derive_stream(42, 3);
  for (int k = 0; k < 100; ++k) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("uniform draws pass a KS test against U(0,1)") {
  RandomStream s(20260101);
  std::vector<double> u(100000);
  for (double& v : u) v = s.uniform();
  const KsResult ks = ks_one_sample(u, [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); });
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("first draws of sibling streams are uncorrelated") {
  const int n = 20000;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    RandomStream a = derive_stream(static_cast<std::uint64_t>(i), 0);
    RandomStream b = derive_stream(static_cast<std::uint64_t>(i), 1);
    const double x = a.normal(), y = b.normal();
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 3.0 / std::sqrt(n));
}
