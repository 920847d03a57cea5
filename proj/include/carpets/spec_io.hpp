#pragma once

#include <string>
#include <variant>

#include "carpets/carpet.hpp"

namespace carpets {

using AnyCarpet = std::variant<BMCarpet, LGCarpet>;

/// Parses and validates a JSON carpet description. `source` names the input
/// in error messages (a file name or "<inline>"). Rational values may be
/// written as "p/q" or decimal strings (kept exact) or as JSON numbers
/// (integers exact, anything else tracked as inexact).
AnyCarpet parse_carpet_spec(const std::string& text, const std::string& source);

AnyCarpet load_carpet_spec(const std::string& path);

/// Canonical JSON, stable byte-for-byte for a given carpet; exact values
/// round-trip through "p/q" strings.
std::string serialize_carpet_spec(const BMCarpet& carpet);
std::string serialize_carpet_spec(const LGCarpet& carpet);
std::string serialize_carpet_spec(const AnyCarpet& carpet);

}  // namespace carpets
