#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gambles::io {

inline constexpr std::string_view kSpecVersion = "1.0.0";

/// Record of one CLI run: the command line, every resolved parameter and a
/// checksum per output. Text form is one `key = value` per line:
///
///     spec_version = 1.0.0
///     command = figure2
///     seed = 42
///     param.rounds = 1000
///     arg.0 = figure2
///     output.figure2_additive.csv = fnv1a64:...
class RunManifest {
 public:
  std::string command;
  std::string seed;  // empty for commands without randomness
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> arguments;
  std::vector<std::pair<std::string, std::string>> outputs;  // name, checksum
  std::vector<std::pair<std::string, std::string>> results;  // scalar summaries

  void set_parameter(std::string key, std::string value);
  void add_output(std::string name, std::string_view contents);

  std::string to_text() const;
  static RunManifest parse(std::string_view text);
};

}  // namespace gambles::io
