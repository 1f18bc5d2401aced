#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcbnorm::cli {

struct Gap {
  enum class Bound { kAbsolute, kUpper };
  double value = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::kAbsolute;  // |value| <= tol, or value <= tol

  bool pass() const;
};

struct Record {
  std::string key;    // unique; records are sorted by it
  std::string check;  // e.g. "multiplicativity"
  std::vector<std::string> channels;
  std::optional<double> alpha;
  std::map<std::string, double> values;
  std::map<std::string, Gap> gaps;
  nlohmann::json diagnostics = nlohmann::json::object();
  std::optional<std::string> error;  // the case could not be evaluated
  double wall_time_s = 0.0;

  /// No error and every gap within its tolerance.
  bool pass() const;
};

struct Summary {
  std::size_t records = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Record> records;
  bool timing = true;
  std::string generated_at;  // ISO 8601 UTC, only written with timing

  void sort_records();
  Summary summary() const;
  bool all_pass() const;

  nlohmann::json to_json() const;
  std::string to_json_text() const;
  /// One row per record: key,check,channels,alpha,pass,values,gaps,tolerances,error[,wall_time_s].
  /// Map-valued columns hold name=value pairs joined by ';'.
  std::string to_csv() const;
};

/// Tool version string.
std::string tool_version();

}  // namespace qcbnorm::cli
