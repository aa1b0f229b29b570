// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// Named experiments: validated configuration in, CSV tables and a JSON summary out.
// Outputs depend only on the configuration, never on the worker count.
#pragma once

#include <string>
#include <vector>

#include "devissage/config.hpp"
#include "devissage/table.hpp"
#include "json.hpp"

namespace devissage {

struct ExperimentResult {
  std::string experiment;
  /// tables[0] holds the per-path records.
  std::vector<Table> tables;
  nlohmann::ordered_json summary;
};

/// dudley, rotsym, toy, coupling, boundary-law, harmonic.
const std::vector<std::string>& experiment_names();

/// Throws ConfigError for bad or unknown keys, DomainError or OverflowError at run time.
ExperimentResult run_experiment(const std::string& name, const Config& config, int threads = 0);

}  // namespace devissage
