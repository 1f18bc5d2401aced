#include "qcbnorm_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifndef QCBNORM_VERSION
#define QCBNORM_VERSION "0.0.0"
#endif

namespace qcbnorm::cli {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string shortest(double v) {
  // nlohmann prints the shortest round-trip representation.
  return json(v).dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string tool_version() { return QCBNORM_VERSION; }

bool Gap::pass() const {
  if (!std::isfinite(value)) return false;
  return bound == Bound::kAbsolute ? std::abs(value) <= tolerance : value <= tolerance;
}

bool Record::pass() const {
  if (error) return false;
  return std::all_of(gaps.begin(), gaps.end(), [](const auto& g) { return g.second.pass(); });
}

void Report::sort_records() {
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.key < b.key; });
}

Summary Report::summary() const {
  Summary s;
  s.records = records.size();
  for (const auto& r : records) (r.pass() ? s.passed : s.failed)++;
  return s;
}

bool Report::all_pass() const { return summary().failed == 0; }

json Report::to_json() const {
  json recs = json::array();
  for (const auto& r : records) {
    json values = json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    json gaps = json::object();
    for (const auto& [k, g] : r.gaps) {
      gaps[k] = {{"value", number(g.value)},
                 {"tolerance", g.tolerance},
                 {"bound", g.bound == Gap::Bound::kAbsolute ? "abs" : "upper"},
                 {"pass", g.pass()}};
    }
    json rec = {{"key", r.key},
                {"check", r.check},
                {"channels", r.channels},
                {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
                {"values", values},
                {"gaps", gaps},
                {"pass", r.pass()},
                {"diagnostics", r.diagnostics},
                {"error", r.error ? json(*r.error) : json(nullptr)}};
    if (timing) rec["wall_time_s"] = r.wall_time_s;
    recs.push_back(std::move(rec));
  }
  const Summary s = summary();
  json doc = {{"tool", "qcbnorm"},
              {"version", tool_version()},
              {"log_base", 2},
              {"units", "bits"},
              {"command", command},
              {"config", config},
              {"summary", {{"records", s.records}, {"passed", s.passed}, {"failed", s.failed}}},
              {"records", recs}};
  if (timing) doc["generated_at"] = generated_at;
  return doc;
}

std::string Report::to_json_text() const { return to_json().dump(2) + "\n"; }

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "key,check,channels,alpha,pass,values,gaps,tolerances,error";
  if (timing) os << ",wall_time_s";
  os << "\n";
  for (const auto& r : records) {
    std::string channels;
    for (std::size_t i = 0; i < r.channels.size(); ++i) channels += (i ? " x " : "") + r.channels[i];
    std::string values;
    for (const auto& [k, v] : r.values) values += (values.empty() ? "" : ";") + k + "=" + shortest(v);
    std::string gaps;
    std::string tols;
    for (const auto& [k, g] : r.gaps) {
      gaps += (gaps.empty() ? "" : ";") + k + "=" + shortest(g.value);
      tols += (tols.empty() ? "" : ";") + k + "=" + shortest(g.tolerance);
    }
    os << csv_field(r.key) << ',' << csv_field(r.check) << ',' << csv_field(channels) << ','
       << (r.alpha ? shortest(*r.alpha) : "") << ',' << (r.pass() ? "true" : "false") << ',' << csv_field(values)
       << ',' << csv_field(gaps) << ',' << csv_field(tols) << ',' << csv_field(r.error.value_or(""));
    if (timing) os << ',' << shortest(r.wall_time_s);
    os << "\n";
  }
  return os.str();
}

}  // namespace qcbnorm::cli
