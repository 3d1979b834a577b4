#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace chd {

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// Fixed notation with `digits` decimals; independent of the C locale.
std::string format_fixed(double value, int digits = 6);

/// Locale-independent parse of the whole string; nullopt on any junk.
std::optional<double> parse_real(std::string_view text);

std::string_view trim(std::string_view text) noexcept;
std::string to_lower(std::string_view text);

}  // namespace chd
