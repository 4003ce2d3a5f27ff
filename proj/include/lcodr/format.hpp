#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lcodr {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Parses the whole field (surrounding spaces allowed) or returns nullopt.
std::optional<double> parse_number(std::string_view text) noexcept;

}  // namespace lcodr
