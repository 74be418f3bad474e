#pragma once

#include <string>

#include "xsess/types.hpp"

namespace xsess {

// Parses "YYYY-MM-DDTHH:MM:SS" (optional trailing 'Z', 'T' may be a space)
// or a plain integer of epoch seconds. Throws on anything else.
Timestamp parse_timestamp(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ" (UTC).
std::string format_timestamp(Timestamp t);

constexpr double kSecondsPerDay = 86400.0;

}  // namespace xsess
