#include "writers.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "paracalc/paracalc.h"

namespace writers {

std::string fmt_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

std::string fmt_coord(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

} // namespace

void atomic_write(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + temp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + temp.string());
    }
    std::filesystem::rename(temp, target);
}

std::string region_csv(const RegionRaster& raster) {
    std::string out = "invp,s,in_a,in_n,in_lu,in_du\n";
    const int res = raster.resolution;
    for (int row = 0; row < res; ++row) {
        const double s =
            raster.s_min + (row + 0.5) * (raster.s_max - raster.s_min) / res;
        for (int col = 0; col < res; ++col) {
            const double invp =
                raster.invp_min + (col + 0.5) * (raster.invp_max - raster.invp_min) / res;
            const std::uint8_t f = raster.flags[static_cast<std::size_t>(row) * res + col];
            out += fmt_real(invp);
            out += ',';
            out += fmt_real(s);
            out += ',';
            out += (f & PC_REGION_A) ? '1' : '0';
            out += ',';
            out += (f & PC_REGION_N) ? '1' : '0';
            out += ',';
            out += (f & PC_REGION_LU) ? '1' : '0';
            out += ',';
            out += (f & PC_REGION_DU) ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string region_svg(const RegionRaster& raster) {
    constexpr double kWidth = 640.0, kHeight = 560.0;
    constexpr double kLeft = 60.0, kTop = 20.0, kPlotW = 520.0, kPlotH = 440.0;

    struct Layer {
        std::uint8_t mask;
        const char* id;
        const char* color;
    };
    static constexpr Layer kLayers[] = {
        {PC_REGION_A, "region_a", "#4477aa"},
        {PC_REGION_N, "region_n", "#cc6677"},
        {PC_REGION_LU, "region_lu", "#ddcc77"},
        {PC_REGION_DU, "region_du", "#117733"},
    };
    static constexpr const char* kLabels[] = {"D(A)", "D(N)", "D(L_u)", "D_u"};

    const int res = raster.resolution;
    const double cell_w = kPlotW / res;
    const double cell_h = kPlotH / res;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 ";
    out += fmt_coord(kWidth);
    out += " ";
    out += fmt_coord(kHeight);
    out += "\">\n";
    out += "<rect x=\"" + fmt_coord(kLeft) + "\" y=\"" + fmt_coord(kTop) + "\" width=\"" +
           fmt_coord(kPlotW) + "\" height=\"" + fmt_coord(kPlotH) +
           "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (const Layer& layer : kLayers) {
        out += "<g id=\"";
        out += layer.id;
        out += "\" fill=\"";
        out += layer.color;
        out += "\" fill-opacity=\"0.35\">\n";
        for (int row = 0; row < res; ++row) {
            // merge consecutive set pixels of the row into one rect
            int col = 0;
            while (col < res) {
                if (!(raster.flags[static_cast<std::size_t>(row) * res + col] &
                      layer.mask)) {
                    ++col;
                    continue;
                }
                int end = col;
                while (end < res && (raster.flags[static_cast<std::size_t>(row) * res +
                                                  end] &
                                     layer.mask))
                    ++end;
                const double x = kLeft + col * cell_w;
                const double y = kTop + kPlotH - (row + 1) * cell_h;
                out += "<rect x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) +
                       "\" width=\"" + fmt_coord((end - col) * cell_w) +
                       "\" height=\"" + fmt_coord(cell_h) + "\"/>\n";
                col = end;
            }
        }
        out += "</g>\n";
    }

    // axes: 1/p horizontal, s vertical
    out += "<g id=\"axes\" font-family=\"monospace\" font-size=\"12\" fill=\"black\">\n";
    out += "<text x=\"" + fmt_coord(kLeft + kPlotW / 2 - 12) + "\" y=\"" +
           fmt_coord(kTop + kPlotH + 36) + "\">1/p</text>\n";
    out += "<text x=\"" + fmt_coord(kLeft - 40) + "\" y=\"" +
           fmt_coord(kTop + kPlotH / 2) + "\">s</text>\n";
    out += "<text x=\"" + fmt_coord(kLeft - 4) + "\" y=\"" +
           fmt_coord(kTop + kPlotH + 16) + "\">" + fmt_coord(raster.invp_min) +
           "</text>\n";
    out += "<text x=\"" + fmt_coord(kLeft + kPlotW - 24) + "\" y=\"" +
           fmt_coord(kTop + kPlotH + 16) + "\">" + fmt_coord(raster.invp_max) +
           "</text>\n";
    out += "<text x=\"" + fmt_coord(kLeft - 46) + "\" y=\"" + fmt_coord(kTop + kPlotH) +
           "\">" + fmt_coord(raster.s_min) + "</text>\n";
    out += "<text x=\"" + fmt_coord(kLeft - 46) + "\" y=\"" + fmt_coord(kTop + 10) +
           "\">" + fmt_coord(raster.s_max) + "</text>\n";
    out += "</g>\n";

    // legend
    out += "<g id=\"legend\" font-family=\"monospace\" font-size=\"12\">\n";
    for (int i = 0; i < 4; ++i) {
        const double x = kLeft + i * 130.0;
        const double y = kHeight - 28.0;
        out += "<rect x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) +
               "\" width=\"14\" height=\"14\" fill=\"";
        out += kLayers[i].color;
        out += "\" fill-opacity=\"0.35\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt_coord(x + 20.0) + "\" y=\"" + fmt_coord(y + 12.0) +
               "\" fill=\"black\">";
        out += kLabels[i];
        out += "</text>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace writers
