// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace devissage {

/// Invalid experiment configuration (unknown key, out-of-range value).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Argument outside an operation's domain (dimension mismatch, r <= 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulated state became non-finite.
class OverflowError : public std::runtime_error {
 public:
  OverflowError(std::size_t step, const std::string& message)
      : std::runtime_error(message), step_(step) {}
  std::size_t step() const noexcept { return step_; }
  std::ptrdiff_t path() const noexcept { return path_; }
  void set_path(std::ptrdiff_t path) noexcept { path_ = path; }

 private:
  std::size_t step_;
  std::ptrdiff_t path_ = -1;
};

}  // namespace devissage
