#include "gambles/io/spec_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "gambles/errors.hpp"
#include "gambles/io/format.hpp"

namespace gambles::io {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

double parse_number(const Token& token, std::size_t line) {
  double value = 0.0;
  const char* first = token.text.data();
  const char* last = first + token.text.size();
  if (!token.text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, token.column, "expected a finite number, got '" + std::string(token.text) + "'");
  }
  return value;
}

WealthChange parse_change(const Token& token, std::size_t line) {
  if (token.text.starts_with("e^")) {
    const Token exponent{token.text.substr(2), token.column + 2};
    return WealthChange::from_log_magnitude(parse_number(exponent, line));
  }
  return WealthChange(parse_number(token, line));
}

int parse_integer(const Token& token, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
  if (ec != std::errc{} || ptr != token.text.data() + token.text.size()) {
    throw ParseError(line, token.column, "expected an integer, got '" + std::string(token.text) + "'");
  }
  return value;
}

struct Setting {
  Token value;
  std::size_t line;
};

template <typename Error>
[[noreturn]] void relocate(const Error& e, std::size_t line) {
  throw Error("line " + std::to_string(line) + ": " + e.what());
}

// Rethrows validation errors with their type intact and a line prefix.
template <typename Build>
auto with_location(std::size_t line, Build&& build) {
  try {
    return build();
  } catch (const ProbabilitySumError& e) {
    relocate(e, line);
  } catch (const NonPositiveProbability& e) {
    relocate(e, line);
  } catch (const DuplicateWealthChange& e) {
    relocate(e, line);
  } catch (const NonPositiveDuration& e) {
    relocate(e, line);
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    relocate(e, line);
  }
}

}  // namespace

ParsedSpec parse_spec(std::string_view document, const SpecOverrides& overrides) {
  static const std::map<std::string_view, bool> kKeys{
      {"dt", true}, {"family", true}, {"nmax", true}, {"price", true}, {"menger_inner_base", true},
      {"menger_outer_base", true}};

  std::map<std::string, Setting> settings;
  std::vector<RawOutcome> outcomes;
  std::size_t first_outcome_line = 0;

  std::size_t line_number = 0;
  std::size_t begin = 0;
  while (begin <= document.size()) {
    std::size_t end = document.find('\n', begin);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = document.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split(line);
    if (tokens.empty()) {
      if (end == document.size()) break;
      continue;
    }

    if (tokens[0].text == "outcome") {
      if (tokens.size() != 3) {
        throw ParseError(line_number, tokens[0].column, "expected 'outcome <probability> <wealth_change>'");
      }
      if (first_outcome_line == 0) first_outcome_line = line_number;
      outcomes.push_back({parse_number(tokens[1], line_number), parse_change(tokens[2], line_number)});
    } else {
      if (tokens.size() != 3 || tokens[1].text != "=") {
        throw ParseError(line_number, tokens[0].column, "expected 'key = value' or an outcome row");
      }
      const std::string key(tokens[0].text);
      if (!kKeys.contains(tokens[0].text)) throw ParseError(line_number, tokens[0].column, "unknown key '" + key + "'");
      if (settings.contains(key)) throw ParseError(line_number, tokens[0].column, "duplicate key '" + key + "'");
      settings.emplace(key, Setting{tokens[2], line_number});
    }
    if (end == document.size()) break;
  }

  const auto number_or = [&](const std::string& key, double fallback) {
    const auto it = settings.find(key);
    return it == settings.end() ? fallback : parse_number(it->second.value, it->second.line);
  };
  const double dt = number_or("dt", 1.0);
  const std::size_t dt_line = settings.contains("dt") ? settings.at("dt").line : 1;

  if (const auto family = settings.find("family"); family != settings.end()) {
    if (!outcomes.empty()) {
      throw ParseError(first_outcome_line, 1, "a document declares either a family or outcome rows, not both");
    }
    const auto nmax = settings.find("nmax");
    if (nmax == settings.end()) throw ParseError(family->second.line, 1, "lottery family needs 'nmax'");
    const int n_max = overrides.n_max.value_or(parse_integer(nmax->second.value, nmax->second.line));
    const double price = overrides.price.value_or(number_or("price", 0.0));
    LotteryFamily lottery_family;
    lottery_family.kind = with_location(family->second.line, [&] { return parse_family(family->second.value.text); });
    lottery_family.menger_inner_base = number_or("menger_inner_base", std::numbers::e);
    lottery_family.menger_outer_base = number_or("menger_outer_base", std::numbers::e);
    return with_location(nmax->second.line, [&] {
      return ParsedSpec(lottery_family.build(n_max, price).with_duration(dt));
    });
  }

  if (overrides.n_max || overrides.price) {
    throw ValidationError("nmax and price overrides only apply to lottery documents");
  }
  for (const char* key : {"nmax", "price", "menger_inner_base", "menger_outer_base"}) {
    if (const auto it = settings.find(key); it != settings.end()) {
      throw ParseError(it->second.line, 1, std::string("'") + key + "' only applies to a lottery family");
    }
  }
  if (outcomes.empty()) throw ParseError(line_number, 1, "document declares neither outcomes nor a family");
  if (!(dt > 0.0)) with_location(dt_line, [&] { return validate_gamble(outcomes, dt); });
  return with_location(first_outcome_line, [&] { return ParsedSpec(validate_gamble(outcomes, dt)); });
}

ParsedSpec load_spec(const std::string& path, const SpecOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str(), overrides);
}

std::string serialize_gamble(const Gamble& gamble) {
  std::string out = "dt = " + format_number(gamble.round_duration()) + "\n";
  for (const auto& o : gamble.outcomes()) {
    const auto& change = o.wealth_change;
    const std::string dw = change.log_scaled() ? "e^" + format_number(change.log_magnitude())
                                               : format_number(change.amount());
    out += "outcome " + format_number(o.probability) + " " + dw + "\n";
  }
  return out;
}

}  // namespace gambles::io
