// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "devissage/error.hpp"

namespace devissage {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key, key + " must be a finite number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    // Accept integral reals such as 1e3.
    const double r = parse_real(key, text);
    if (r != std::floor(r) || std::abs(r) > 9e15) throw ConfigError(key, key + " must be an integer, got '" + text + "'");
    return static_cast<long long>(r);
  }
  return v;
}

}  // namespace

std::string Config::normalise_key(const std::string& key) {
  std::string k = trim(key);
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (char& c : k) {
    if (c == '-') c = '_';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return k;
}

void Config::set(const std::string& key, const std::string& value) {
  const std::string k = normalise_key(key);
  if (k.empty()) throw ConfigError(key, "empty configuration key");
  entries_[k] = trim(value);
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path + "'");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", path + ":" + std::to_string(number) + ": expected 'key = value'");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

const std::string* ConfigReader::lookup(const std::string& key) {
  used_.insert(key);
  const auto it = config_.entries().find(key);
  return it == config_.entries().end() ? nullptr : &it->second;
}

bool ConfigReader::has(const std::string& key) const { return config_.entries().count(key) != 0; }

double ConfigReader::real(const std::string& key, double fallback, Bound bound) {
  const std::string* raw = lookup(key);
  const double v = raw ? parse_real(key, *raw) : fallback;
  if (bound == Bound::positive && !(v > 0.0)) throw ConfigError(key, key + " must be > 0");
  if (bound == Bound::nonnegative && !(v >= 0.0)) throw ConfigError(key, key + " must be ≥ 0");
  parameters_[key] = v;
  return v;
}

std::size_t ConfigReader::count(const std::string& key, std::size_t fallback, std::size_t minimum) {
  const std::string* raw = lookup(key);
  const long long v = raw ? parse_integer(key, *raw) : static_cast<long long>(fallback);
  if (v < static_cast<long long>(minimum))
    throw ConfigError(key, key + " must be ≥ " + std::to_string(minimum));
  parameters_[key] = v;
  return static_cast<std::size_t>(v);
}

long long ConfigReader::integer(const std::string& key, long long fallback, long long lo, long long hi) {
  const std::string* raw = lookup(key);
  const long long v = raw ? parse_integer(key, *raw) : fallback;
  if (v < lo) throw ConfigError(key, key + " must be ≥ " + std::to_string(lo));
  if (v > hi) throw ConfigError(key, key + " must be ≤ " + std::to_string(hi));
  parameters_[key] = v;
  return v;
}

std::uint64_t ConfigReader::seed(const std::string& key, std::uint64_t fallback) {
  const std::string* raw = lookup(key);
  std::uint64_t v = fallback;
  if (raw) {
    const char* end = raw->data() + raw->size();
    auto [ptr, ec] = std::from_chars(raw->data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, key + " must be an unsigned 64-bit integer");
  }
  parameters_[key] = v;
  return v;
}

bool ConfigReader::flag(const std::string& key, bool fallback) {
  const std::string* raw = lookup(key);
  bool v = fallback;
  if (raw) {
    if (*raw == "true" || *raw == "1" || *raw == "yes" || *raw == "on") {
      v = true;
    } else if (*raw == "false" || *raw == "0" || *raw == "no" || *raw == "off") {
      v = false;
    } else {
      throw ConfigError(key, key + " must be true or false");
    }
  }
  parameters_[key] = v;
  return v;
}

std::string ConfigReader::choice(const std::string& key, const std::string& fallback,
                                 const std::vector<std::string>& allowed) {
  const std::string* raw = lookup(key);
  const std::string v = raw ? *raw : fallback;
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(key, key + " must be one of: " + list);
  }
  parameters_[key] = v;
  return v;
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback) {
  const std::string* raw = lookup(key);
  std::string v = raw ? *raw : fallback;
  parameters_[key] = v;
  return v;
}

void ConfigReader::finish() const {
  for (const auto& [key, value] : config_.entries())
    if (!used_.count(key)) throw ConfigError(key, "unknown configuration key '" + key + "'");
}

}  // namespace devissage
