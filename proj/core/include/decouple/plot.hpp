#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "decouple/csv.hpp"

namespace decouple {

enum class PlotKind { line, heatmap };

/// Throws ValidationError for names other than "line" and "heatmap".
PlotKind parse_plot_kind(std::string_view name);

struct PlotOptions {
  std::string title;
  /// Empty: derived from the table (first column name / "F" / "dF/dt").
  std::string x_label;
  std::string y_label;
  /// Heatmap value column; empty picks "fidelity" or the third column.
  std::string value_column;
};

/// Static SVG rendering of a runner table. Line plots use the first column
/// as abscissa and every other column as a curve; heatmaps expect long-format
/// columns theta, phi and a value column. Throws FormatError for tables that
/// cannot be drawn.
std::string emit_plot(const CsvTable& table, PlotKind kind, const PlotOptions& options = {});
void emit_plot(const CsvTable& table, PlotKind kind, const std::filesystem::path& out,
               const PlotOptions& options = {});

}  // namespace decouple
