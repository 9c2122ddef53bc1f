#pragma once

#include <filesystem>
#include <string>

#include "ddpen/bench/matrix.hpp"

namespace ddpen::bench {

/// "mean±σ" with one decimal, or "fail" when no run completed.
std::string format_cell(const CellStats& stats);

std::string emit_table_csv(const BenchResult& result);
std::string emit_table_json(const BenchResult& result);
/// SVG overlay of every run of `scenario`: DDPEN solid, DDP dashed, one
/// polyline per run, start/end/failure markers.
std::string emit_plot(const BenchResult& result, const sim::World& scenario);

/// results.csv, results.json and <scenario>.svg in `dir`.
void write_report(const BenchResult& result, const ScenarioCatalog& catalog,
                  const std::filesystem::path& dir);

}  // namespace ddpen::bench
