#include "ppmchart/render.hpp"

#include <span>

#include "text_util.hpp"

namespace ppmchart {

RenderStyle default_render_style() {
    RenderStyle style;
    style.palette = {
        {"create.event", "#90EE90"}, {"create.activity", "#32CD32"}, {"create.gateway", "#006400"},
        {"create.edge", "#20B2AA"},  {"move.node", "#4169E1"},       {"move.edge", "#5F9EA0"},
        {"delete.node", "#DC143C"},  {"delete.edge", "#8B0000"},     {"name", "#FF69B4"},
        {"reconnect", "#800080"},
    };
    return style;
}

namespace {

using detail::format_fixed;
using detail::xml_escape;

void check_palette(const RenderStyle& style) {
    for (auto key : kColorKeys)
        if (!style.palette.contains(key)) throw IncompletePaletteError(std::string(key));
}

struct Geometry {
    double plot_width;
    double row_height;
    double radius;
    Margins margins;
    double x_scale;  // chart units -> plot units
};

void emit_rows(std::string& out, std::span<const Timeline> rows, const Geometry& g, const RenderStyle& style) {
    const double x0 = g.margins.left;
    const double x1 = g.margins.left + g.plot_width;
    out += "<g class=\"timelines\">\n";
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const auto& line = rows[row];
        const double cy = g.margins.top + (static_cast<double>(row) + 0.5) * g.row_height;
        const auto y = format_fixed(cy);
        out += "<g class=\"timeline\" data-element-id=\"" + xml_escape(line.element_id) + "\" data-element-type=\"";
        out += to_string(line.element_type);
        out += "\">\n";
        out += "<line class=\"row\" x1=\"" + format_fixed(x0) + "\" y1=\"" + y + "\" x2=\"" + format_fixed(x1) +
               "\" y2=\"" + y + "\" stroke=\"#E8E8E8\" stroke-width=\"0.5\"/>\n";
        for (const auto& dot : line.dots) {
            const auto fill = style.palette.find(dot.color_key)->second;
            const double cx = dot.x ? x0 + *dot.x * g.x_scale : x0;
            const auto xs = format_fixed(cx);
            const auto r = format_fixed(g.radius);
            out += "<circle";
            if (dot.out_of_window()) out += " class=\"out-of-window\"";
            out += " cx=\"" + xs + "\" cy=\"" + y + "\" r=\"" + r + "\" fill=\"" + fill + "\"";
            if (dot.out_of_window()) out += " stroke=\"#000000\" stroke-width=\"" + format_fixed(g.radius / 3) + "\"";
            out += " data-kind=\"";
            out += to_string(dot.kind);
            out += "\"/>\n";
            if (dot.out_of_window() && style.out_of_window_marker == OutOfWindowMarker::Cross) {
                const double d = g.radius;
                out += "<path class=\"out-of-window-marker\" d=\"M" + format_fixed(cx - d) + " " + format_fixed(cy - d) +
                       " L" + format_fixed(cx + d) + " " + format_fixed(cy + d) + " M" + format_fixed(cx - d) + " " +
                       format_fixed(cy + d) + " L" + format_fixed(cx + d) + " " + format_fixed(cy - d) +
                       "\" stroke=\"#000000\" stroke-width=\"" + format_fixed(g.radius / 3) + "\"/>\n";
            }
        }
        out += "</g>\n";
    }
    out += "</g>\n";
}

constexpr double kLegendRow = 14;

std::string svg_document(const PPMChart& chart, std::span<const Timeline> rows, const Geometry& g,
                         const RenderStyle& style, bool legend, std::string_view css_class) {
    const double plot_height = static_cast<double>(rows.size()) * g.row_height;
    const double legend_height = legend ? kLegendRow * static_cast<double>(kColorKeys.size()) + 4 : 0;
    const double width = g.margins.left + g.plot_width + g.margins.right;
    const double height = g.margins.top + plot_height + legend_height + g.margins.bottom;
    const auto w = format_fixed(width);
    const auto h = format_fixed(height);

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" class=\"";
    out += css_class;
    out += "\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
    out += "<title>" + xml_escape(chart.session_id) + "</title>\n";
    out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#FFFFFF\"/>\n";
    out += "<rect class=\"window\" x=\"" + format_fixed(g.margins.left) + "\" y=\"" + format_fixed(g.margins.top) +
           "\" width=\"" + format_fixed(g.plot_width) + "\" height=\"" + format_fixed(plot_height) +
           "\" fill=\"none\" stroke=\"#C0C0C0\" stroke-width=\"0.5\"/>\n";
    emit_rows(out, rows, g, style);

    if (legend) {
        out += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
        double y = g.margins.top + plot_height + 4;
        for (auto key : kColorKeys) {
            out += "<rect x=\"" + format_fixed(g.margins.left) + "\" y=\"" + format_fixed(y) +
                   "\" width=\"10\" height=\"10\" fill=\"" + style.palette.find(key)->second + "\"/>";
            out += "<text x=\"" + format_fixed(g.margins.left + 14) + "\" y=\"" + format_fixed(y + 9) + "\">";
            out += key;
            out += "</text>\n";
            y += kLegendRow;
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace

std::string render_svg(const PPMChart& chart, const RenderStyle& style) {
    check_palette(style);
    const Geometry g{chart.config.width, style.row_height, style.dot_radius, style.margins, 1.0};
    return svg_document(chart, chart.timelines, g, style, style.legend, "ppmchart");
}

std::string render_overview(const PPMChart& chart, const RenderStyle& style) {
    check_palette(style);
    const Geometry g{kOverviewWidth, kOverviewRowHeight, kOverviewRowHeight / 2, Margins{2, 2, 2, 2},
                     kOverviewWidth / chart.config.width};
    return svg_document(chart, chart.overview, g, style, false, "ppmchart-overview");
}

}  // namespace ppmchart
