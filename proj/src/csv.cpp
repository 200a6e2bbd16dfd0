#include "tsf/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace tsf::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void fail(std::size_t line_no, std::size_t col, const std::string& what) {
  std::ostringstream msg;
  msg << "csv line " << line_no << ", column " << col << ": " << what;
  throw Error(msg.str());
}

double parse_number(std::string_view cell, std::size_t line_no, std::size_t col) {
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != last) {
    fail(line_no, col, "not a number '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) fail(line_no, col, "non-finite value '" + std::string(cell) + "'");
  return v;
}

std::int64_t parse_label(std::string_view cell, std::size_t line_no, std::size_t col) {
  std::int64_t v = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    fail(line_no, col, "label is not an integer '" + std::string(cell) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CsvData parse_csv(const std::string& text, const CsvOptions& opts) {
  std::vector<std::vector<double>> rows;
  CsvData out;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header_pending = opts.header;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split(line);
    if (width == 0) {
      width = cells.size();
      if (opts.labels && width < 2) fail(line_no, 1, "label column requested but rows have a single column");
    } else if (cells.size() != width) {
      std::ostringstream what;
      what << "ragged row: expected " << width << " columns, found " << cells.size();
      fail(line_no, cells.size(), what.str());
    }
    const std::size_t coords = opts.labels ? width - 1 : width;
    std::vector<double> row(coords);
    for (std::size_t c = 0; c < coords; ++c) row[c] = parse_number(cells[c], line_no, c + 1);
    if (opts.labels) out.raw_labels.push_back(parse_label(cells[width - 1], line_no, width));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("csv: no data rows");

  Matrix X(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) X(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  out.data = Dataset(std::move(X));

  if (opts.labels) {
    std::vector<std::int64_t> scored_ids;
    for (std::size_t r = 0; r < out.raw_labels.size(); ++r) {
      if (out.raw_labels[r] >= 0) {
        out.scored_rows.push_back(static_cast<Index>(r));
        scored_ids.push_back(out.raw_labels[r]);
      }
    }
    if (std::set<std::int64_t>(scored_ids.begin(), scored_ids.end()).size() >= 2) {
      out.labels = Partition::from_ids(scored_ids);
    }
  } else {
    for (Index r = 0; r < out.data.size(); ++r) out.scored_rows.push_back(r);
  }
  return out;
}

CsvData read_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (buf.str().empty()) throw Error("csv '" + path + "' is empty");
  return parse_csv(buf.str(), opts);
}

std::string format_csv(const Dataset& X, const std::vector<std::int64_t>* labels) {
  if (X.empty()) throw Error("cannot write an empty dataset");
  if (labels && static_cast<Index>(labels->size()) != X.size()) throw Error("label count does not match dataset");
  std::string out;
  for (Index i = 0; i < X.size(); ++i) {
    for (Index j = 0; j < X.dim(); ++j) {
      if (j) out += ',';
      out += format_double(X.points()(i, j));
    }
    if (labels) {
      out += ',';
      out += std::to_string((*labels)[static_cast<std::size_t>(i)]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_csv(const Dataset& X, const std::string& path, const std::vector<std::int64_t>* labels) {
  write_text(path, format_csv(X, labels));
}

}  // namespace tsf::io
