// "translator-field v1" text format:
//
//   # translator-field v1
//   nx ny x0 y0 dx dy
//   shape Rectangle L b | shape Annulus a b A B
//   <ny rows of nx values, row-major from y0 upward; Exterior as nan>
//
// Reals are written with 17 significant digits so finite values round-trip
// bit for bit.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "translab/grid.hpp"

namespace translab {

/// Shortest-exact decimal form used by every text artifact ("%.17g").
std::string format_real(double v);

void write_field(std::ostream& out, const HeightField& f);
void write_field(const std::filesystem::path& path, const HeightField& f);

/// Throws std::runtime_error on malformed input.
HeightField read_field(std::istream& in);
HeightField read_field(const std::filesystem::path& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// One `key = value` per line. On reading, `#` starts a comment.
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);
KeyValues read_key_values(const std::filesystem::path& path);

}  // namespace translab
