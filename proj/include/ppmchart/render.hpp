#pragma once

// Deterministic SVG output for PPMCharts.

#include <map>
#include <stdexcept>
#include <string>

#include "ppmchart/chart.hpp"

namespace ppmchart {

enum class OutOfWindowMarker { Ring, Cross };

struct Margins {
    double left = 10;
    double top = 10;
    double right = 10;
    double bottom = 10;
};

struct RenderStyle {
    /// color key -> "#RRGGBB"; must cover every key in kColorKeys.
    std::map<std::string, std::string, std::less<>> palette;
    double dot_radius = 3;
    double row_height = 10;
    Margins margins;
    OutOfWindowMarker out_of_window_marker = OutOfWindowMarker::Ring;
    bool legend = false;
};

/// The fixed default palette.
RenderStyle default_render_style();

class IncompletePaletteError : public std::runtime_error {
public:
    explicit IncompletePaletteError(const std::string& key)
        : std::runtime_error("INCOMPLETE_PALETTE: no color for '" + key + "'") {}
};

/// One row per timeline, one <circle> per dot. Byte-identical for equal input.
std::string render_svg(const PPMChart& chart, const RenderStyle& style);

/// Small fixed-size view of the unfiltered chart.
std::string render_overview(const PPMChart& chart, const RenderStyle& style);

inline constexpr double kOverviewWidth = 200;
inline constexpr double kOverviewRowHeight = 2;

}  // namespace ppmchart
