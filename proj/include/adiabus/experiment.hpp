#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adiabus/config.hpp"

namespace adiabus {

std::string_view version();

// 12 significant digits; NaN and infinities become an empty cell.
std::string format_number(double x);

struct PointRecord {
  std::string label;  // e.g. "N=7 J2=0.2"
  std::string status;  // ok, Reached, NotReached or an error code name
  std::string message;
  double wall_seconds = 0.0;
};

struct ExperimentOutput {
  std::string csv;
  std::vector<PointRecord> points;
};

// Runs every grid point on cfg.workers threads. Rows follow grid order, and a
// point that fails leaves empty cells plus a status instead of aborting.
ExperimentOutput compute_experiment(const ExperimentConfig& cfg);

std::string manifest_json(const ExperimentConfig& cfg, const ExperimentOutput& out);

// Writes the CSV, the manifest and (when output.plot is set) a gnuplot
// script into out_dir. Throws IoError when a file cannot be written.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace adiabus
