#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace writers {

/// 17 significant digits, C locale, shortest fixed form "%.17g".
std::string fmt_real(double value);

/// Writes content to path atomically (temp file + rename); LF endings are the
/// caller's responsibility, the file is written in binary mode.
void atomic_write(const std::string& path, const std::string& content);

struct RegionRaster {
    int resolution = 0;
    double s_min = 0.0, s_max = 0.0;
    double invp_min = 0.0, invp_max = 0.0;
    std::vector<std::uint8_t> flags; // row-major, s rows bottom-up
};

/// CSV dump of a raster: header + one row per pixel (invp, s, four flags).
std::string region_csv(const RegionRaster& raster);

/// Deterministic standalone SVG 1.1 document: one layer per membership flag
/// (row runs merged into rects), axes for (1/p, s) and a legend.
std::string region_svg(const RegionRaster& raster);

} // namespace writers
