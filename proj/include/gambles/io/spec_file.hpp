#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "gambles/gamble.hpp"
#include "gambles/lotteries.hpp"
#include "gambles/lottery_spec.hpp"

namespace gambles::io {

/// Parsed gamble spec document: an explicit outcome table or a named lottery.
///
/// The format is line oriented. Blank lines and text after '#' are ignored.
///
///     dt = 1                     # round duration, optional, defaults to 1
///     outcome 0.5 -0.4           # probability, wealth change
///     outcome 0.5 0.5
///
/// or
///
///     family = st_petersburg     # or menger
///     nmax = 10
///     price = 2                  # optional, defaults to 0
///     menger_inner_base = 2.718281828459045   # menger only, optional
///     menger_outer_base = 2.718281828459045   # menger only, optional
///
/// A wealth change written `e^L` denotes a gain of e^L, for gains beyond the
/// range of a double. Numbers use the C++ `from_chars` grammar.
using ParsedSpec = std::variant<Gamble, LotterySpec>;

/// Command-line replacements for a lottery document's nmax and price.
struct SpecOverrides {
  std::optional<int> n_max;
  std::optional<double> price;
};

/// Throws ParseError for syntax problems; validation failures are rethrown
/// with their original type and the offending line prepended. Overrides on
/// an outcome-table document are a ValidationError.
ParsedSpec parse_spec(std::string_view document, const SpecOverrides& overrides = {});
ParsedSpec load_spec(const std::string& path, const SpecOverrides& overrides = {});

/// Serializes a gamble so that parse_spec yields an equal Gamble.
std::string serialize_gamble(const Gamble& gamble);

}  // namespace gambles::io
