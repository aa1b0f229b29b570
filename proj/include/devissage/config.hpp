// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: string key/value pairs with typed, validated reads.
// Keys are normalised to lower case with '-' replaced by '_'.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace devissage {

class Config {
 public:
  void set(const std::string& key, const std::string& value);
  /// `key = value` lines; '#' starts a comment, blank lines are skipped.
  void load_file(const std::string& path);
  void clear() { entries_.clear(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  static std::string normalise_key(const std::string& key);

 private:
  std::map<std::string, std::string> entries_;
};

enum class Bound { any, positive, nonnegative };

/// Typed reads with defaults. Each read records the resolved value for the summary;
/// finish() rejects keys that no read consumed.
class ConfigReader {
 public:
  explicit ConfigReader(const Config& config) : config_(config) {}

  double real(const std::string& key, double fallback, Bound bound = Bound::any);
  std::size_t count(const std::string& key, std::size_t fallback, std::size_t minimum = 0);
  long long integer(const std::string& key, long long fallback, long long lo, long long hi);
  std::uint64_t seed(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed);
  std::string text(const std::string& key, const std::string& fallback);
  bool has(const std::string& key) const;

  void finish() const;
  const nlohmann::ordered_json& parameters() const { return parameters_; }

 private:
  const std::string* lookup(const std::string& key);

  const Config& config_;
  std::set<std::string> used_;
  nlohmann::ordered_json parameters_ = nlohmann::ordered_json::object();
};

}  // namespace devissage
