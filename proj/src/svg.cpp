#include "tsf/geometry.hpp"
#include "tsf/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <iostream>
#include <map>

namespace tsf::io {

namespace {

constexpr double kCanvas = 600.0;
constexpr double kRadius = 3.0;

// Tableau-10, then black for anything unlabeled or injected.
constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
constexpr const char* kNoLabel = "#222222";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const Dataset& Y, const std::vector<std::int64_t>* labels) {
  if (Y.empty()) throw Error("scatter_svg: empty dataset");
  if (labels && static_cast<Index>(labels->size()) != Y.size()) throw Error("scatter_svg: label count mismatch");

  Matrix pts;
  if (Y.dim() == 2) {
    pts = Y.points();
  } else if (Y.dim() == 1) {
    pts = Matrix::Zero(Y.size(), 2);
    pts.col(0) = Y.points().col(0);
  } else {
    std::clog << "note: projecting " << Y.dim() << "-dimensional points to 2D with PCA for plotting\n";
    pts = geometry::pca(Y, 2).points();
  }

  const Eigen::RowVector2d lo = pts.colwise().minCoeff();
  const Eigen::RowVector2d hi = pts.colwise().maxCoeff();
  Eigen::RowVector2d span = hi - lo;
  for (int c = 0; c < 2; ++c) span(c) = span(c) > 0.0 ? span(c) : 1.0;
  const double margin = 0.05;

  std::map<std::int64_t, std::size_t> colour_of;
  if (labels) {
    for (auto id : *labels) {
      if (id >= 0) colour_of.emplace(id, 0);
    }
    std::size_t next = 0;
    for (auto& [id, idx] : colour_of) idx = next++ % kPalette.size();
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kCanvas) + "\" height=\"" + fmt(kCanvas) +
         "\" viewBox=\"0 0 " + fmt(kCanvas) + " " + fmt(kCanvas) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kCanvas) + "\" height=\"" + fmt(kCanvas) + "\" fill=\"#ffffff\"/>\n";
  for (Index i = 0; i < pts.rows(); ++i) {
    const double u = margin + (1.0 - 2.0 * margin) * (pts(i, 0) - lo(0)) / span(0);
    const double v = margin + (1.0 - 2.0 * margin) * (pts(i, 1) - lo(1)) / span(1);
    const char* colour = kNoLabel;
    if (labels) {
      const auto id = (*labels)[static_cast<std::size_t>(i)];
      if (id >= 0) colour = kPalette[colour_of.at(id)];
    }
    out += "<circle cx=\"" + fmt(u * kCanvas) + "\" cy=\"" + fmt((1.0 - v) * kCanvas) + "\" r=\"" + fmt(kRadius) +
           "\" fill=\"" + colour + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void emit_scatter_svg(const Dataset& Y, const std::vector<std::int64_t>* labels, const std::string& path) {
  write_text(path, scatter_svg(Y, labels));
}

std::string heatmap_svg(const Matrix& M) {
  const Index n = M.rows();
  if (n == 0 || M.cols() != n) throw Error("heatmap_svg: expected a nonempty square matrix");
  const double lo = M.minCoeff();
  const double hi = M.maxCoeff();
  const double range = hi > lo ? hi - lo : 1.0;
  const double cell = kCanvas / static_cast<double>(n);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kCanvas) + "\" height=\"" + fmt(kCanvas) + "\">\n";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const int level = static_cast<int>(255.0 * (1.0 - (M(i, j) - lo) / range) + 0.5);
      char colour[8];
      std::snprintf(colour, sizeof colour, "#%02x%02x%02x", level, level, level);
      out += "<rect x=\"" + fmt(static_cast<double>(j) * cell) + "\" y=\"" + fmt(static_cast<double>(i) * cell) +
             "\" width=\"" + fmt(cell) + "\" height=\"" + fmt(cell) + "\" fill=\"" + colour + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

void emit_heatmap(const Matrix& M, const std::string& svg_path, const std::string& csv_path) {
  write_text(svg_path, heatmap_svg(M));
  if (!csv_path.empty()) write_csv(Dataset(M), csv_path);
}

}  // namespace tsf::io
