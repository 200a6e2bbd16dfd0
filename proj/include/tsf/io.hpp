#pragma once

#include "tsf/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsf::io {

struct CsvOptions {
  bool header = false;
  /// Last column holds integer cluster ids.
  bool labels = false;
};

/**
 * Parsed CSV content. When a label column is present, `raw_labels` keeps the
 * ids as written. A negative id marks an injected point: it belongs to the
 * data but is left out of `labels`, which covers only `scored_rows`.
 */
struct CsvData {
  Dataset data;
  std::vector<std::int64_t> raw_labels;
  std::optional<Partition> labels;
  std::vector<Index> scored_rows;
};

CsvData parse_csv(const std::string& text, const CsvOptions& opts);
CsvData read_csv(const std::string& path, const CsvOptions& opts);

/// One row per point, 17 significant digits; an optional trailing label column.
std::string format_csv(const Dataset& X, const std::vector<std::int64_t>* labels = nullptr);
void write_csv(const Dataset& X, const std::string& path, const std::vector<std::int64_t>* labels = nullptr);

/// Writes `text` to `path`, throwing when the file cannot be written.
void write_text(const std::string& path, const std::string& text);

/**
 * Standalone SVG scatter plot: one circle per point, coloured by label when a
 * partition is given, axes autoscaled with a 5% margin. Input with d != 2 is
 * projected to its first two principal components first.
 */
std::string scatter_svg(const Dataset& Y, const std::vector<std::int64_t>* labels = nullptr);
void emit_scatter_svg(const Dataset& Y, const std::vector<std::int64_t>* labels, const std::string& path);

/// Grayscale raster of a square matrix (darker = larger), e.g. interpoint distances.
std::string heatmap_svg(const Matrix& M);
void emit_heatmap(const Matrix& M, const std::string& svg_path, const std::string& csv_path);

}  // namespace tsf::io
