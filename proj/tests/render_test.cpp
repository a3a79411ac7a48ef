#include "doctest.h"

#include <regex>
#include <set>

#include "ppmchart/render.hpp"
#include "support/builders.hpp"
#include "support/session_gen.hpp"

using namespace ppmchart;
using namespace ppmchart::testing;
using enum OperationKind;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

struct Circle {
    double cx, cy;
    std::string fill;
    bool out_of_window;
};

std::vector<Circle> circles(const std::string& svg) {
    static const std::regex re(R"re(<circle( class="out-of-window")? cx="([-0-9.]+)" cy="([-0-9.]+)" r="[0-9.]+" fill="(#[0-9A-F]{6})")re");
    std::vector<Circle> out;
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it)
        out.push_back({std::stod((*it)[2]), std::stod((*it)[3]), (*it)[4], (*it)[1].matched});
    return out;
}

Session seven_events() {
    return SessionBuilder("seven")
        .op(CreateStartEvent, "s", 0, Point{0, 0})
        .op(CreateActivity, "a", 60)
        .edge("e", "s", "a", 120)
        .name(NameActivity, "a", "Check <order> & \"ship\"", 180)
        .op(MoveActivity, "a", 240, Point{50, 0})
        .op(CreateXor, "g", 300)
        .op(DeleteXor, "g", 1800);
}

}  // namespace

TEST_CASE("one circle per dot") {
    const auto chart = build_chart(seven_events(), {});
    const auto svg = render_svg(chart, default_render_style());
    CHECK(count(svg, "<circle") == 7);
    CHECK(circles(svg).size() == 7);
    CHECK(count(svg, "class=\"timeline\"") == 4);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("Check &lt;order&gt;") == std::string::npos);  // labels are not drawn
    CHECK(svg.find("<title>seven</title>") != std::string::npos);
}

TEST_CASE("rendering is byte-identical") {
    const auto s = seven_events();
    const auto a = render_svg(build_chart(s, {}), default_render_style());
    const auto b = render_svg(build_chart(s, {}), default_render_style());
    CHECK(a == b);
}

TEST_CASE("dot positions and colors") {
    const auto chart = build_chart(seven_events(), {});
    const auto style = default_render_style();
    const auto cs = circles(render_svg(chart, style));
    std::size_t i = 0;
    for (std::size_t row = 0; row < chart.timelines.size(); ++row)
        for (const auto& d : chart.timelines[row].dots) {
            REQUIRE(i < cs.size());
            CHECK(cs[i].cx == doctest::Approx(style.margins.left + *d.x).epsilon(1e-6));
            CHECK(cs[i].cy == doctest::Approx(style.margins.top + (row + 0.5) * style.row_height));
            CHECK(cs[i].fill == style.palette.at(std::string(d.color_key)));
            ++i;
        }
    // Last event sits on the right edge of the plot.
    CHECK(cs.back().cx == doctest::Approx(style.margins.left + 1000));
}

TEST_CASE("filtered charts") {
    ChartConfig cfg;
    cfg.hidden_operation_classes = {OperationClass::Move, OperationClass::Delete, OperationClass::Name};
    const auto s = seven_events();
    const auto chart = build_chart(s, cfg);
    std::size_t creates = 0;
    for (const auto& ev : s.events)
        if (classify_operation(ev.kind).contains(OperationClass::Create)) ++creates;
    const auto svg = render_svg(chart, default_render_style());
    CHECK(count(svg, "<circle") == creates);
    CHECK(count(svg, "<circle") == chart.dot_count());

    const auto overview = render_overview(chart, default_render_style());
    CHECK(count(overview, "<circle") == s.events.size());
    CHECK(overview.find("width=\"204\"") != std::string::npos);
}

TEST_CASE("overview of an unfiltered chart matches the main chart") {
    const auto chart = build_chart(seven_events(), {});
    CHECK(count(render_overview(chart, default_render_style()), "<circle") ==
          count(render_svg(chart, default_render_style()), "<circle"));
    const auto single = build_chart(SessionBuilder().op(CreateActivity, "a", 0), {});
    CHECK(count(render_overview(single, default_render_style()), "<circle") == 1);
}

TEST_CASE("out-of-window dots") {
    Session s = SessionBuilder().op(CreateActivity, "a", 0).op(MoveActivity, "a", 5000);
    const auto chart = build_chart(s, {});
    auto style = default_render_style();
    auto cs = circles(render_svg(chart, style));
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].out_of_window);
    CHECK(cs[0].cx == style.margins.left);
    CHECK_FALSE(cs[1].out_of_window);

    style.out_of_window_marker = OutOfWindowMarker::Cross;
    const auto svg = render_svg(chart, style);
    CHECK(count(svg, "class=\"out-of-window-marker\"") == 1);
    CHECK(count(svg, "<circle") == 2);
}

TEST_CASE("palette") {
    auto style = default_render_style();
    CHECK(style.palette.size() == kColorKeys.size());
    CHECK(style.palette.at("create.activity") == "#32CD32");
    CHECK(style.palette.at("reconnect") == "#800080");
    style.palette.erase("name");
    const auto chart = build_chart(SessionBuilder().op(CreateActivity, "a", 0), {});
    CHECK_THROWS_AS(render_svg(chart, style), IncompletePaletteError);
    CHECK_THROWS_AS(render_overview(chart, style), IncompletePaletteError);
}

TEST_CASE("legend") {
    auto style = default_render_style();
    style.legend = true;
    const auto svg = render_svg(build_chart(seven_events(), {}), style);
    for (auto key : kColorKeys) CHECK(svg.find(">" + std::string(key) + "</text>") != std::string::npos);
    CHECK(count(svg, "<circle") == 7);
}

TEST_CASE("rendered generated sessions") {
    const auto style = default_render_style();
    std::set<std::string> palette_colors;
    for (const auto& [k, v] : style.palette) palette_colors.insert(v);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = generate_session(seed).session;
        ChartConfig cfg;
        cfg.width = 777;
        cfg.hidden_element_types = {ElementType::Edge};
        const auto chart = build_chart(s, cfg);
        const auto svg = render_svg(chart, style);
        const auto cs = circles(svg);
        CHECK(cs.size() == chart.dot_count());
        CHECK(count(svg, "class=\"timeline\"") == chart.timelines.size());
        for (const auto& c : cs) {
            CHECK(palette_colors.contains(c.fill));
            CHECK(c.cx >= style.margins.left);
            CHECK(c.cx <= style.margins.left + 777 + 1e-9);
        }
        CHECK(svg.find("nan") == std::string::npos);
        CHECK(svg.find("e+") == std::string::npos);
    }
}
