#include "tsf/report.hpp"

#include "tsf/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tsf::report {

using json = nlohmann::ordered_json;

namespace {

json encode_optional(const std::optional<double>& v) { return v ? encode_number(*v) : json(nullptr); }

std::optional<double> decode_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return decode_number(j.at(key));
}

json encode_outlier(const outliers::OutlierReport& o) {
  json j;
  j["alpha"] = encode_number(o.alpha);
  j["witness_index"] = o.witness_index;
  j["margin"] = encode_number(o.margin);
  j["bulk_diameter"] = encode_number(o.bulk_diameter);
  j["min_dist_to_bulk"] = encode_number(o.min_dist_to_bulk);
  j["bound"] = encode_optional(o.bound);
  j["p_mass"] = encode_optional(o.p_mass);
  return j;
}

outliers::OutlierReport decode_outlier(const json& j) {
  outliers::OutlierReport o;
  o.alpha = decode_number(j.at("alpha"));
  o.witness_index = j.at("witness_index").get<Index>();
  o.margin = decode_number(j.at("margin"));
  o.bulk_diameter = decode_number(j.at("bulk_diameter"));
  o.min_dist_to_bulk = decode_number(j.at("min_dist_to_bulk"));
  o.bound = decode_optional(j, "bound");
  o.p_mass = decode_optional(j, "p_mass");
  return o;
}

}  // namespace

json encode_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error("report: expected a number, got " + j.dump());
}

bool Report::all_checks_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

json to_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["version"] = r.version;
  j["command"] = r.command;
  j["config"] = r.config;

  json metrics = json::object();
  for (const auto& [name, m] : r.metrics) {
    json e;
    e["labels_source"] = m.labels_source;
    e["silhouette"] = encode_optional(m.silhouette);
    e["calinski_harabasz"] = encode_optional(m.calinski_harabasz);
    e["dunn"] = encode_optional(m.dunn);
    metrics[name] = std::move(e);
  }
  j["metrics"] = std::move(metrics);

  if (r.stationarity) {
    j["stationarity"] = {{"max_gradient", encode_number(r.stationarity->max_gradient)},
                         {"tolerance", encode_number(r.stationarity->tolerance)},
                         {"stationary", r.stationarity->stationary}};
  } else {
    j["stationarity"] = nullptr;
  }
  j["outlier"] = r.outlier ? encode_outlier(*r.outlier) : json(nullptr);

  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", encode_number(c.value)},
                      {"tolerance", encode_number(c.tolerance)},
                      {"passed", c.passed}});
  }
  j["checks"] = std::move(checks);

  if (r.trace) {
    j["trace"] = {{"iterations", r.trace->iterations},
                  {"initial_loss", encode_number(r.trace->initial_loss)},
                  {"final_loss", encode_number(r.trace->final_loss)},
                  {"final_max_gradient", encode_number(r.trace->final_max_gradient)}};
  } else {
    j["trace"] = nullptr;
  }

  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = encode_number(v);
  j["values"] = std::move(values);
  json notes = json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = std::move(notes);
  return j;
}

Report from_json(const json& j) {
  if (!j.is_object()) throw Error("report: top level must be an object");
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
    throw Error("report: missing schema_version");
  }
  const int version = j.at("schema_version").get<int>();
  if (version > kSchemaVersion || version < 1) {
    throw Error("report: unsupported schema_version " + std::to_string(version) + " (this build reads up to " +
                std::to_string(kSchemaVersion) + ")");
  }

  try {
    Report r;
    r.schema_version = version;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    for (const auto& [name, e] : j.at("metrics").items()) {
      IndexValues m;
      m.labels_source = e.at("labels_source").get<std::string>();
      m.silhouette = decode_optional(e, "silhouette");
      m.calinski_harabasz = decode_optional(e, "calinski_harabasz");
      m.dunn = decode_optional(e, "dunn");
      r.metrics.emplace(name, std::move(m));
    }
    if (const auto& s = j.at("stationarity"); !s.is_null()) {
      r.stationarity = StationarityCertificate{decode_number(s.at("max_gradient")), decode_number(s.at("tolerance")),
                                               s.at("stationary").get<bool>()};
    }
    if (const auto& o = j.at("outlier"); !o.is_null()) r.outlier = decode_outlier(o);
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), decode_number(c.at("value")),
                          decode_number(c.at("tolerance")), c.at("passed").get<bool>()});
    }
    if (const auto& t = j.at("trace"); !t.is_null()) {
      r.trace = TraceSummary{t.at("iterations").get<int>(), decode_number(t.at("initial_loss")),
                             decode_number(t.at("final_loss")), decode_number(t.at("final_max_gradient"))};
    }
    for (const auto& [k, v] : j.at("values").items()) r.values.emplace(k, decode_number(v));
    for (const auto& [k, v] : j.at("notes").items()) r.notes.emplace(k, v.get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report: malformed field: ") + e.what());
  }
}

std::string serialize(const Report& r) { return to_json(r).dump(2) + "\n"; }

Report parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("report: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

void write_report(const Report& r, const std::string& path) { io::write_text(path, serialize(r)); }

Report read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace tsf::report
