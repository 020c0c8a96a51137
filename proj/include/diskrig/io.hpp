#pragma once

#include <array>
#include <optional>
#include <string>

#include "diskrig/packing.hpp"

namespace diskrig {

/// Packing plus the optional tri-cusp boundary triple from the file.
struct PackingFile {
    DiskPacking packing;
    std::optional<std::array<int, 3>> boundary;
};

/// Shortest exact decimal form: 17 significant digits round-trip any double.
std::string format_double(double x);

/// Parses the packing JSON schema:
///   {"radii": [...], "centers": [[x, y], ...], "boundary": [i, j, k]?}
/// Disk indices are 0-based.  Throws ParseError on malformed input.
PackingFile parse_packing(const std::string& text);

PackingFile load_packing(const std::string& path);

std::string packing_to_json(const DiskPacking& packing,
                            const std::optional<std::array<int, 3>>& boundary = std::nullopt);

void save_packing(const std::string& path, const DiskPacking& packing,
                  const std::optional<std::array<int, 3>>& boundary = std::nullopt);

}  // namespace diskrig
