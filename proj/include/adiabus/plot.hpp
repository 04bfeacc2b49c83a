#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adiabus/config.hpp"

namespace adiabus {

enum class PlotTemplate {
  Line,     // tau* vs param with one curve per N; also fidelity-curve and degeneracy-check CSVs
  LogLog,   // tau* vs N on log-log axes with one curve per param
  HeatMap,  // gap-scan density map with a log colour scale
};

std::optional<PlotTemplate> plot_template_from_string(std::string_view s);
std::string_view to_string(PlotTemplate t);
PlotTemplate default_template(ExperimentKind kind);

// gnuplot script for the CSV at csv_path. The script refers to the CSV by
// file name and writes <stem>.png beside it. Throws SchemaMismatch when the
// CSV header does not fit the template and IoError when it cannot be read.
std::string emit_plot_script(const std::filesystem::path& csv_path, PlotTemplate t,
                             const std::string& param_label = "param");

}  // namespace adiabus
