// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// RFC-4180 CSV tables with shortest round-trip number formatting.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace devissage {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double value);

class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_; }

  void add_row(const std::vector<Cell>& cells);
  /// Header line plus rows, LF line endings.
  std::string csv() const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

}  // namespace devissage
