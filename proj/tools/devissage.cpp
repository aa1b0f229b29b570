// Copyright 2026 The Devissage Authors
// SPDX-License-Identifier: Apache-2.0
//
// devissage <experiment> [--config FILE] [--threads N] [--out-dir DIR] [--log FILE] [--key value ...]
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "devissage/devissage.h"

namespace {

struct SessionDeleter {
  void operator()(dv_session* s) const { dv_session_destroy(s); }
};
struct ResultDeleter {
  void operator()(dv_result* r) const { dv_result_destroy(r); }
};

int report(dv_status status) {
  const std::string key = dv_last_error_key();
  std::cerr << "devissage: " << dv_status_name(status) << ": " << dv_last_error();
  if (!key.empty()) std::cerr << " (key: " << key << ")";
  std::cerr << "\n";
  return status == DV_ERR_CONFIG ? 2 : 1;
}

void log_line(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << " " << text << "\n";
}

bool write_file(const std::filesystem::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  out.write(data, static_cast<std::streamsize>(size));
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic simulation experiments for the devissage method"};
  app.set_version_flag("--version", std::string(dv_version()));
  app.require_subcommand(1);

  std::string config_file, out_dir = ".", log_file;
  int threads = -1;
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < dv_experiment_count(); ++i) {
    CLI::App* sub = app.add_subcommand(dv_experiment_name(i), std::string("run the ") + dv_experiment_name(i) + " experiment");
    sub->allow_extras();
    sub->add_option("--config", config_file, "key = value configuration file");
    sub->add_option("--threads", threads, "worker threads (overrides DEVISSAGE_THREADS)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out-dir", out_dir, "directory for CSV and JSON outputs");
    sub->add_option("--log", log_file, "append timestamped progress lines to this file");
    sub->footer("Model and run parameters are passed as --key value (or --flag for booleans).");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = nullptr;
  for (CLI::App* s : subs)
    if (s->parsed()) sub = s;
  const std::string experiment = sub->get_name();

  dv_session* raw = nullptr;
  if (dv_status st = dv_session_create(&raw); st != DV_OK) return report(st);
  std::unique_ptr<dv_session, SessionDeleter> session(raw);
  if (threads >= 0)
    if (dv_status st = dv_session_set_threads(session.get(), threads); st != DV_OK) return report(st);
  if (!config_file.empty())
    if (dv_status st = dv_config_load(session.get(), config_file.c_str()); st != DV_OK) return report(st);

  const std::vector<std::string> extras = sub->remaining();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string token = extras[i];
    if (token.rfind("--", 0) != 0) {
      std::cerr << "devissage: configuration error: unexpected argument '" << token << "'\n";
      return 2;
    }
    token = token.substr(2);
    std::string value = "true";
    if (const auto eq = token.find('='); eq != std::string::npos) {
      value = token.substr(eq + 1);
      token = token.substr(0, eq);
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      value = extras[++i];
    }
    if (dv_status st = dv_config_set(session.get(), token.c_str(), value.c_str()); st != DV_OK) return report(st);
  }

  log_line(log_file, "start " + experiment);
  dv_result* result_raw = nullptr;
  if (dv_status st = dv_run(session.get(), experiment.c_str(), &result_raw); st != DV_OK) {
    log_line(log_file, "failed " + experiment + ": " + dv_last_error());
    return report(st);
  }
  std::unique_ptr<dv_result, ResultDeleter> result(result_raw);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::filesystem::path dir(out_dir);
  for (std::size_t i = 0; i < dv_result_table_count(result.get()); ++i) {
    const char* csv = nullptr;
    std::size_t length = 0;
    if (dv_status st = dv_result_table_csv(result.get(), i, &csv, &length); st != DV_OK) return report(st);
    const std::string name = i == 0 ? experiment + ".csv"
                                    : experiment + "." + dv_result_table_name(result.get(), i) + ".csv";
    if (!write_file(dir / name, csv, length)) {
      std::cerr << "devissage: cannot write " << (dir / name).string() << "\n";
      return 1;
    }
  }
  const std::string summary = dv_result_summary_json(result.get());
  if (!write_file(dir / (experiment + ".json"), summary.data(), summary.size())) {
    std::cerr << "devissage: cannot write " << (dir / (experiment + ".json")).string() << "\n";
    return 1;
  }
  std::cout << summary;
  log_line(log_file, "done " + experiment);
  return 0;
}
