#include "qcbnorm_cli/channel_spec.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <fstream>
#include <sstream>

#include "qcbnorm/errors.hpp"

namespace qcbnorm::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw ParseError(source + ": " + where + ": " + what);
}

std::size_t read_dim(const json& doc, const std::string& source, const char* key) {
  if (!doc.contains(key)) fail(source, key, "missing");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(source, key, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

std::pair<std::string, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("expected K=V, got '" + text + "'");
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size() || !std::isfinite(v)) throw std::invalid_argument(raw);
    return {key, v};
  } catch (const std::exception&) {
    throw ParseError("parameter '" + key + "': '" + raw + "' is not a number");
  }
}

ChannelSpec zoo_channel(const std::string& name, const ZooParams& params) {
  std::string label = name;
  if (!params.empty()) {
    label += "(";
    bool first = true;
    for (const auto& [k, v] : params) {
      if (!first) label += ",";
      label += k + "=" + format_number(v);
      first = false;
    }
    label += ")";
  }
  try {
    return {label, channel_zoo(name, params)};
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
}

ChannelSpec parse_zoo_descriptor(const std::string& descriptor, const ZooParams& defaults) {
  const auto colon = descriptor.find(':');
  const std::string name = descriptor.substr(0, colon);
  ZooParams params = defaults;
  if (colon != std::string::npos) {
    std::stringstream rest(descriptor.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto [k, v] = parse_assignment(item);
      params[k] = v;
    }
  }
  return zoo_channel(name, params);
}

ChannelSpec parse_channel(const json& doc, const std::string& source) {
  if (!doc.is_object()) fail(source, "document", "expected a JSON object");

  std::optional<std::string> label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) fail(source, "label", "expected a string");
    label = doc.at("label").get<std::string>();
  }

  if (doc.contains("zoo")) {
    if (!doc.at("zoo").is_string()) fail(source, "zoo", "expected a channel name");
    ZooParams params;
    if (doc.contains("params")) {
      const json& p = doc.at("params");
      if (!p.is_object()) fail(source, "params", "expected an object of numbers");
      for (const auto& [k, v] : p.items()) {
        if (!v.is_number()) fail(source, "params." + k, "expected a number");
        params[k] = v.get<double>();
      }
    }
    ChannelSpec spec = [&] {
      try {
        return zoo_channel(doc.at("zoo").get<std::string>(), params);
      } catch (const ParseError& e) {
        fail(source, "zoo", e.what());
      }
    }();
    if (label) spec.label = *label;
    return spec;
  }

  const std::size_t in_dim = read_dim(doc, source, "in_dim");
  const std::size_t out_dim = read_dim(doc, source, "out_dim");
  if (!doc.contains("kraus")) fail(source, "kraus", "missing");
  const json& kraus = doc.at("kraus");
  if (!kraus.is_array() || kraus.empty()) fail(source, "kraus", "expected a non-empty list of matrices");

  std::vector<Matrix> ops;
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    const std::string at = "kraus[" + std::to_string(i) + "]";
    const json& rows = kraus[i];
    if (!rows.is_array() || rows.size() != out_dim) {
      fail(source, at, "expected " + std::to_string(out_dim) + " rows");
    }
    Matrix k(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
    for (std::size_t r = 0; r < out_dim; ++r) {
      const std::string row_at = at + "[" + std::to_string(r) + "]";
      const json& row = rows[r];
      if (!row.is_array() || row.size() != in_dim) {
        fail(source, row_at, "expected " + std::to_string(in_dim) + " entries");
      }
      for (std::size_t c = 0; c < in_dim; ++c) {
        const json& z = row[c];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          fail(source, row_at + "[" + std::to_string(c) + "]", "expected [re, im]");
        }
        k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    ops.push_back(std::move(k));
  }
  try {
    CPMap map = CPMap::from_kraus(std::move(ops));
    return {label.value_or(std::filesystem::path(source).filename().string()), std::move(map)};
  } catch (const Error& e) {
    fail(source, "kraus", e.what());
  }
}

ChannelSpec load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(path + ": line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": invalid JSON");
  }
  return parse_channel(doc, path);
}

json channel_to_json(const CPMap& map) {
  json kraus = json::array();
  for (const Matrix& k : map.kraus()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  return {{"in_dim", map.in_dim()}, {"out_dim", map.out_dim()}, {"kraus", std::move(kraus)}};
}

}  // namespace qcbnorm::cli
