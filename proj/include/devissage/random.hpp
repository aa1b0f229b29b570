// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace devissage {

/// splitmix64 finaliser; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for `index` under `master`. Pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// A private pseudo-random stream. Never shared between paths or threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  void fill_normal(std::span<double> out, double scale = 1.0) {
    for (double& z : out) z = scale * normal_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream `index` of the family rooted at `master_seed`.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace devissage
