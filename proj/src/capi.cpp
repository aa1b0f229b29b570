// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
#include "devissage/devissage.h"

#include <exception>
#include <new>
#include <string>

#include "devissage/config.hpp"
#include "devissage/error.hpp"
#include "devissage/experiments.hpp"
#include "devissage/minkowski.hpp"
#include "devissage/version.hpp"

struct dv_session {
  devissage::Config config;
  int threads = 0;
};

struct dv_result {
  devissage::ExperimentResult result;
  std::vector<std::string> csv;
  std::string summary;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_key;

dv_status fail(dv_status status, std::string message, std::string key = {}) {
  last_error = std::move(message);
  last_error_key = std::move(key);
  return status;
}

template <class F>
dv_status guarded(F&& body) {
  try {
    last_error.clear();
    last_error_key.clear();
    return body();
  } catch (const devissage::ConfigError& e) {
    return fail(DV_ERR_CONFIG, e.what(), e.key());
  } catch (const devissage::OverflowError& e) {
    std::string msg = e.what();
    if (e.path() >= 0) msg = "path " + std::to_string(e.path()) + ": " + msg;
    return fail(DV_ERR_RUNTIME, msg);
  } catch (const devissage::DomainError& e) {
    return fail(DV_ERR_RUNTIME, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DV_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* dv_version(void) { return devissage::kVersion; }

const char* dv_status_name(dv_status status) {
  switch (status) {
    case DV_OK: return "ok";
    case DV_ERR_RUNTIME: return "runtime error";
    case DV_ERR_CONFIG: return "configuration error";
    case DV_ERR_ARGUMENT: return "invalid argument";
    case DV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dv_last_error(void) { return last_error.c_str(); }
const char* dv_last_error_key(void) { return last_error_key.c_str(); }

dv_status dv_session_create(dv_session** out) {
  if (!out) return fail(DV_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new dv_session();
    return DV_OK;
  });
}

void dv_session_destroy(dv_session* session) { delete session; }

dv_status dv_session_set_threads(dv_session* session, int threads) {
  if (!session) return fail(DV_ERR_ARGUMENT, "null session");
  if (threads < 0) return fail(DV_ERR_CONFIG, "threads must be >= 0", "threads");
  session->threads = threads;
  return DV_OK;
}

dv_status dv_config_set(dv_session* session, const char* key, const char* value) {
  if (!session || !key || !value) return fail(DV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    session->config.set(key, value);
    return DV_OK;
  });
}

dv_status dv_config_load(dv_session* session, const char* path) {
  if (!session || !path) return fail(DV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    session->config.load_file(path);
    return DV_OK;
  });
}

dv_status dv_config_clear(dv_session* session) {
  if (!session) return fail(DV_ERR_ARGUMENT, "null session");
  session->config.clear();
  return DV_OK;
}

size_t dv_experiment_count(void) { return devissage::experiment_names().size(); }

const char* dv_experiment_name(size_t index) {
  const auto& names = devissage::experiment_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

dv_status dv_run(dv_session* session, const char* experiment, dv_result** out) {
  if (!session || !experiment || !out) return fail(DV_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<dv_result>();
    r->result = devissage::run_experiment(experiment, session->config, session->threads);
    for (const auto& t : r->result.tables) r->csv.push_back(t.csv());
    r->summary = r->result.summary.dump(2) + "\n";
    *out = r.release();
    return DV_OK;
  });
}

size_t dv_result_table_count(const dv_result* result) { return result ? result->csv.size() : 0; }

const char* dv_result_table_name(const dv_result* result, size_t index) {
  if (!result || index >= result->csv.size()) return nullptr;
  return result->result.tables[index].name().c_str();
}

dv_status dv_result_table_csv(const dv_result* result, size_t index, const char** csv, size_t* length) {
  if (!result || !csv) return fail(DV_ERR_ARGUMENT, "null argument");
  if (index >= result->csv.size()) return fail(DV_ERR_ARGUMENT, "table index out of range");
  *csv = result->csv[index].c_str();
  if (length) *length = result->csv[index].size();
  return DV_OK;
}

const char* dv_result_summary_json(const dv_result* result) { return result ? result->summary.c_str() : nullptr; }

void dv_result_destroy(dv_result* result) { delete result; }

dv_status dv_lorentz_form(const double* xi, const double* eta, size_t components, double* out) {
  if (!xi || !eta || !out) return fail(DV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (components < 3) return fail(DV_ERR_ARGUMENT, "need at least 3 components (d >= 2)");
    const devissage::MinkowskiVector a(std::vector<double>(xi, xi + components));
    const devissage::MinkowskiVector b(std::vector<double>(eta, eta + components));
    *out = devissage::lorentz_form(a, b);
    return DV_OK;
  });
}

dv_status dv_iwasawa_point(double alpha, const double* h, size_t h_length, double* out) {
  if ((!h && h_length > 0) || !out) return fail(DV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (h_length < 1) return fail(DV_ERR_ARGUMENT, "h needs d - 1 >= 1 components");
    const devissage::IwasawaCoords c{alpha, std::vector<double>(h, h + h_length)};
    const auto p = devissage::iwasawa_point(c);
    for (size_t i = 0; i <= h_length + 1; ++i) out[i] = p.vector()[i];
    return DV_OK;
  });
}

dv_status dv_stereographic(const double* h, size_t h_length, double* out) {
  if ((!h && h_length > 0) || !out) return fail(DV_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto theta = devissage::stereographic(std::span<const double>(h, h_length));
    for (size_t i = 0; i < theta.size(); ++i) out[i] = theta[i];
    return DV_OK;
  });
}

}  // extern "C"
