// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/table.hpp"

#include <charconv>
#include <cmath>

#include "devissage/error.hpp"

namespace devissage {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Table::Table(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw DomainError("table needs at least one column");
}

void Table::add_row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size())
    throw DomainError("table '" + name_ + "' row has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(columns_.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) body_ += ',';
    const Cell& c = cells[i];
    if (const auto* d = std::get_if<double>(&c)) {
      body_ += format_double(*d);
    } else if (const auto* n = std::get_if<long long>(&c)) {
      body_ += std::to_string(*n);
    } else if (const auto* b = std::get_if<bool>(&c)) {
      body_ += *b ? "true" : "false";
    } else if (const auto* s = std::get_if<std::string>(&c)) {
      body_ += quote(*s);
    }
  }
  body_ += '\n';
  ++rows_;
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += ',';
    out += quote(columns_[i]);
  }
  out += '\n';
  return out + body_;
}

}  // namespace devissage
