#pragma once

// File formats used by the command-line tool.
//
// Assembly spec (JSON):
//
//   {
//     "name": "gap",
//     "alpha0": 1.0,                          // optional
//     "resultant": {"target": 1.0, "width": 1.0},   // or "inertia": 0.1
//     "components": [
//       {"name": "X1", "alpha": 1, "beta": 1, "target": 0},   // beta, target optional
//       ...
//     ]
//   }
//
// Batch data (CSV): a header row of component names, then one row of
// decimal-point reals per part. Blank lines and lines starting with '#' are
// ignored.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "inertol/stack_model.hpp"

namespace inertol {

AssemblyModel parse_assembly_spec_text(std::string_view text, std::string_view source = "<spec>");
AssemblyModel parse_assembly_spec(const std::filesystem::path& path);

/// Canonical JSON form; parse_assembly_spec_text() of it yields an equal model.
std::string serialize_assembly_spec(const AssemblyModel& model);

struct BatchData {
  /// samples[i] holds the measurements of model component i.
  std::vector<std::vector<double>> samples;
  std::size_t rows = 0;
};

BatchData parse_batch_data_text(std::string_view text, const AssemblyModel& model,
                                std::string_view source = "<data>");
BatchData parse_batch_data(const std::filesystem::path& path, const AssemblyModel& model);

struct DisplayConfig {
  int precision = 6;  // significant digits in human-readable output
};

/// JSON object with an optional integer "precision" in [1, 17].
DisplayConfig parse_display_config(const std::filesystem::path& path);

/// Whole file as a string; throws Io on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace inertol
