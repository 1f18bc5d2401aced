#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "qcbnorm/channel.hpp"

namespace qcbnorm::cli {

/// Malformed channel description. The message names the file, the line/column for
/// JSON syntax errors, and the offending key path otherwise.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelSpec {
  std::string label;  // e.g. "depolarizing(p=0.3)" or the file name
  CPMap map;
};

/// Channel document:
///   {"in_dim": 2, "out_dim": 2, "kraus": [K_0, K_1, ...]}
/// where each K_i is a list of out_dim rows of in_dim entries [re, im], or
///   {"zoo": "depolarizing", "params": {"p": 0.3}}.
/// An optional "label" string overrides the default label.
ChannelSpec parse_channel(const nlohmann::json& doc, const std::string& source);

/// Reads and parses a channel file.
ChannelSpec load_channel_file(const std::string& path);

/// Zoo channel with a label of the form name(k=v,...).
ChannelSpec zoo_channel(const std::string& name, const ZooParams& params);

/// "name" or "name:k=v,k=v".
ChannelSpec parse_zoo_descriptor(const std::string& descriptor, const ZooParams& defaults = {});

/// "k=v" -> (k, v); throws ParseError.
std::pair<std::string, double> parse_assignment(const std::string& text);

/// Kraus form of a map in the channel document format.
nlohmann::json channel_to_json(const CPMap& map);

}  // namespace qcbnorm::cli
