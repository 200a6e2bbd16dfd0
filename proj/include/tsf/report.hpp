#pragma once

#include "tsf/outliers.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

/**
 * @file report.hpp
 *
 * @brief Serializable record of one command run.
 *
 * Reports are JSON objects with a fixed key order. Non-finite numbers are
 * written as the strings "inf", "-inf" and "nan". Every report carries
 * `schema_version`; parsing rejects a missing or newer version with a
 * diagnostic instead of guessing.
 */

namespace tsf::report {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "tsf 0.1.0";

struct IndexValues {
  std::string labels_source;  // "supplied" or "kmeans"
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
  std::optional<double> dunn;

  bool operator==(const IndexValues&) const = default;
};

struct StationarityCertificate {
  double max_gradient = 0.0;
  double tolerance = 0.0;
  bool stationary = false;

  bool operator==(const StationarityCertificate&) const = default;
};

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured quantity (e.g. max deviation)
  double tolerance = 0.0;  // pass threshold
  bool passed = false;

  bool operator==(const CheckResult&) const = default;
};

struct TraceSummary {
  int iterations = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double final_max_gradient = 0.0;

  bool operator==(const TraceSummary&) const = default;
};

struct Report {
  int schema_version = kSchemaVersion;
  std::string version = kToolVersion;
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::map<std::string, IndexValues> metrics;
  std::optional<StationarityCertificate> stationarity;
  std::optional<outliers::OutlierReport> outlier;
  std::vector<CheckResult> checks;
  std::optional<TraceSummary> trace;
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;

  bool operator==(const Report&) const = default;
  bool all_checks_passed() const;
};

nlohmann::ordered_json to_json(const Report& r);
Report from_json(const nlohmann::ordered_json& j);

std::string serialize(const Report& r);
Report parse(const std::string& text);

void write_report(const Report& r, const std::string& path);
Report read_report(const std::string& path);

/// JSON number, or "inf" / "-inf" / "nan" for non-finite values.
nlohmann::ordered_json encode_number(double v);
double decode_number(const nlohmann::ordered_json& j);

}  // namespace tsf::report
