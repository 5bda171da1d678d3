#pragma once

/**
 * @file cli.hpp
 *
 * Subcommands behind the `coinknn` executable. Each writes its outputs into an
 * output directory and returns the list of files written (relative names).
 *
 * Exit codes: 0 success, 2 configuration error, 3 computation error, 4 I/O error.
 */

#include "coinknn/config.hpp"
#include "coinknn/experiment.hpp"
#include "coinknn/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace coinknn::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kComputationError = 3, kIoError = 4 };

/// --threads, else COINKNN_THREADS, else 0 (machine parallelism). Throws ConfigError on malformed values.
std::size_t resolve_threads(std::optional<std::size_t> flag);

/// results.csv: experiment_id, comparator, transform, dim, k, mean_beta, std_beta, realizations
CsvWriter results_table(const ExperimentConfig& config, const AccuracyStats& stats);

/// beta_hist.csv: experiment_id, comparator, k, beta_value, count (every attainable beta, zero counts included)
CsvWriter beta_histogram_table(const ExperimentConfig& config, const AccuracyStats& stats);

std::vector<std::string> cmd_sweep(const RunSettings& settings, const std::filesystem::path& out_dir,
                                   std::size_t threads);

/// One k for every comparator, with per-realization results.
std::vector<std::string> cmd_single(const RunSettings& settings, const std::filesystem::path& out_dir,
                                    std::size_t threads, std::size_t k);

std::vector<std::string> cmd_profile(const RunSettings& settings, const std::filesystem::path& out_dir);

std::vector<std::string> cmd_levelsets(const RunSettings& settings, const std::filesystem::path& out_dir);

/// Writes manifest.json listing `files` (manifest.json itself included).
void write_manifest(const std::filesystem::path& out_dir, const std::string& command, const RunSettings& settings,
                    std::vector<std::string> files);

int run(int argc, char** argv);

}  // namespace coinknn::cli
