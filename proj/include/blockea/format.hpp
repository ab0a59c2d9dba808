#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace blockea {

// Renders a double exactly like ECMAScript Number.prototype.toString():
// shortest round-trip digits, fixed notation for 1e-7 <= |x| < 1e21,
// "NaN", "Infinity", and "0" for both zeros. The interpreter, the exporters
// and the generated JavaScript bundle all print numbers through this rule.
std::string format_number(double value);

// Parses a decimal number as written by format_number (and plain decimal or
// exponent forms in general). Returns nullopt on trailing garbage.
std::optional<double> parse_number(std::string_view text);

}  // namespace blockea
