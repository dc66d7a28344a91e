#include "gambles/io/manifest.hpp"

#include <algorithm>
#include <string>

#include "gambles/errors.hpp"
#include "gambles/io/format.hpp"

namespace gambles::io {

void RunManifest::set_parameter(std::string key, std::string value) {
  auto it = std::find_if(parameters.begin(), parameters.end(), [&](const auto& p) { return p.first == key; });
  if (it != parameters.end()) {
    it->second = std::move(value);
  } else {
    parameters.emplace_back(std::move(key), std::move(value));
  }
}

void RunManifest::add_output(std::string name, std::string_view contents) {
  outputs.emplace_back(std::move(name), "fnv1a64:" + fnv1a64_hex(contents));
}

std::string RunManifest::to_text() const {
  std::string out;
  const auto line = [&](std::string_view key, std::string_view value) {
    out.append(key).append(" = ").append(value).append("\n");
  };
  line("spec_version", kSpecVersion);
  line("command", command);
  if (!seed.empty()) line("seed", seed);
  for (const auto& [k, v] : parameters) line("param." + k, v);
  for (std::size_t i = 0; i < arguments.size(); ++i) line("arg." + std::to_string(i), arguments[i]);
  for (const auto& [k, v] : results) line("result." + k, v);
  for (const auto& [k, v] : outputs) line("output." + k, v);
  return out;
}

RunManifest RunManifest::parse(std::string_view text) {
  RunManifest m;
  std::size_t line_number = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string_view::npos) throw ParseError(line_number, 1, "expected 'key = value'");
    const std::string key(line.substr(0, eq));
    std::string value(line.substr(eq + 3));
    if (key == "spec_version") {
      if (value != kSpecVersion) throw ValidationError("manifest spec version " + value + " is not supported");
    } else if (key == "command") {
      m.command = value;
    } else if (key == "seed") {
      m.seed = value;
    } else if (key.starts_with("param.")) {
      m.parameters.emplace_back(key.substr(6), value);
    } else if (key.starts_with("arg.")) {
      const auto index = static_cast<std::size_t>(std::stoul(key.substr(4)));
      if (index != m.arguments.size()) throw ParseError(line_number, 1, "arguments out of order");
      m.arguments.push_back(value);
    } else if (key.starts_with("result.")) {
      m.results.emplace_back(key.substr(7), value);
    } else if (key.starts_with("output.")) {
      m.outputs.emplace_back(key.substr(7), value);
    } else {
      throw ParseError(line_number, 1, "unknown manifest key '" + key + "'");
    }
  }
  return m;
}

}  // namespace gambles::io
