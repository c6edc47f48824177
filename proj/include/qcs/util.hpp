#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcs {

// Configuration or input-validation failure. The CLI maps this to exit
// code 2; any other exception is reported as a runtime failure (exit 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that parses back to the exact same double.
std::string format_double(double value);

// Strict numeric parsing: the whole token must be consumed.
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

std::uint64_t fnv1a64(std::string_view data);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

// Identifiers that end up in CSV cells (job ids, device names) must not
// contain the separators used by the record format.
bool valid_identifier(std::string_view name);

}  // namespace qcs
