#pragma once

#include <string>
#include <vector>

namespace vqpm {

/// Shortest decimal form that round-trips to the same double ("0.1", "1e-20",
/// "inf" never appears: values written by this project are finite).  Used for
/// all numeric file output so that identical runs produce identical bytes.
std::string format_double(double value);

/// Strict double parse of an entire token; throws std::runtime_error on
/// trailing characters, empty input, or out-of-range values.
double parse_double(const std::string& token);

/// Strict non-negative integer parse; throws std::runtime_error on anything
/// else.
std::uint64_t parse_uint(const std::string& token);

/// Split on a delimiter, keeping empty fields.
std::vector<std::string> split(const std::string& line, char delim);

/// Copy without leading/trailing spaces and tabs.
std::string trim(const std::string& s);

}  // namespace vqpm
