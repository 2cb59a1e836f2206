#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epsmatch/market.hpp"

namespace epsmatch {

/// Writes {"n":..,"k":..,"x":[[..]],"y":[[..]]} with 17 significant digits.
void write_market_json(std::ostream& out, const Market& market);
std::string market_to_json(const Market& market);

/// Parses the format above; throws InvalidArgument on malformed input.
Market market_from_json(const std::string& text);
Market read_market_file(const std::string& path);
void write_market_file(const std::string& path, const Market& market);

/// Parses a comma-separated list of 1-based worker indices, e.g. "2,1,3".
Matching parse_matching(const std::string& text, std::size_t workers);
/// Formats a matching as 1-based comma-separated worker indices.
std::string format_matching(const Matching& m);

}  // namespace epsmatch
