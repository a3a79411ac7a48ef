#include "ppmchart/chart.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "ppmchart/replay.hpp"

namespace ppmchart {

std::string_view to_string(ChartSort sort) {
    switch (sort) {
        case ChartSort::FirstEvent: return "first_event";
        case ChartSort::DistanceFromStart: return "distance_from_start";
        case ChartSort::CreateOrderFromStart: return "create_order_from_start";
    }
    return "first_event";
}

std::optional<ChartSort> parse_chart_sort(std::string_view name) {
    for (auto s : {ChartSort::FirstEvent, ChartSort::DistanceFromStart, ChartSort::CreateOrderFromStart})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::string_view color_key_of(OperationKind kind) {
    using enum OperationKind;
    switch (kind) {
        case CreateStartEvent:
        case CreateEndEvent: return "create.event";
        case CreateActivity: return "create.activity";
        case CreateXor:
        case CreateAnd: return "create.gateway";
        case CreateEdge: return "create.edge";
        case ReconnectEdge: return "reconnect";
        case MoveStartEvent:
        case MoveEndEvent:
        case MoveActivity:
        case MoveXor:
        case MoveAnd: return "move.node";
        case MoveEdgeLabel:
        case CreateEdgeBendpoint:
        case MoveEdgeBendpoint:
        case DeleteEdgeBendpoint: return "move.edge";
        case DeleteStartEvent:
        case DeleteEndEvent:
        case DeleteActivity:
        case DeleteXor:
        case DeleteAnd: return "delete.node";
        case DeleteEdge: return "delete.edge";
        case NameActivity:
        case RenameActivity:
        case NameEdge:
        case RenameEdge: return "name";
    }
    return "name";
}

bool ChartConfig::has_filters() const {
    return !hidden_element_types.empty() || !hidden_operation_classes.empty() || !hidden_kinds.empty() ||
           !hide_elements_with_class.empty();
}

void ChartConfig::validate() const {
    if (!(window_seconds > 0) || !std::isfinite(window_seconds))
        throw std::invalid_argument("window_seconds must be positive");
    if (!(width > 0) || !std::isfinite(width)) throw std::invalid_argument("width must be positive");
}

std::size_t PPMChart::dot_count() const {
    std::size_t n = 0;
    for (const auto& t : timelines) n += t.dots.size();
    return n;
}

std::size_t PPMChart::overview_dot_count() const {
    std::size_t n = 0;
    for (const auto& t : overview) n += t.dots.size();
    return n;
}

std::optional<double> dot_x(Timestamp t, const ChartWindow& window, double width) {
    const double span_ms = window.seconds * 1000.0;
    const auto before_end = static_cast<double>((window.end - t).count());
    if (before_end > span_ms) return std::nullopt;
    // (span - d) / span is exact at both window ends.
    return width * ((span_ms - before_end) / span_ms);
}

PPMChart build_chart(const Session& session, const ChartConfig& config) {
    config.validate();
    if (session.events.empty()) throw EmptySessionError();

    PPMChart chart;
    chart.session_id = session.session_id;
    chart.config = config;
    const auto last = std::max_element(session.events.begin(), session.events.end(),
                                       [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    chart.window.end = last->timestamp;
    chart.window.seconds = config.window_seconds;
    chart.window.start =
        chart.window.end - std::chrono::milliseconds{std::llround(config.window_seconds * 1000.0)};

    std::unordered_map<std::string, std::size_t> line_of;
    std::vector<Timeline> lines;
    std::vector<std::size_t> first_index;
    for (std::size_t i = 0; i < session.events.size(); ++i) {
        const auto& ev = session.events[i];
        auto [it, inserted] = line_of.try_emplace(ev.element_id, lines.size());
        if (inserted) {
            Timeline t;
            t.element_id = ev.element_id;
            t.element_type = element_type_of(ev.kind);
            t.first_op = ev.timestamp;
            lines.push_back(std::move(t));
            first_index.push_back(i);
        }
        auto& line = lines[it->second];
        line.dots.push_back({ev.timestamp, ev.kind, color_key_of(ev.kind), dot_x(ev.timestamp, chart.window, config.width), i});
        line.first_op = std::min(line.first_op, ev.timestamp);
        if (classify_operation(ev.kind).contains(OperationClass::Delete)) line.deleted = true;
    }
    for (auto& line : lines)
        std::stable_sort(line.dots.begin(), line.dots.end(),
                         [](const Dot& a, const Dot& b) { return a.timestamp < b.timestamp; });

    std::vector<std::size_t> order(lines.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    if (config.sort == ChartSort::FirstEvent) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (lines[a].first_op != lines[b].first_op) return lines[a].first_op < lines[b].first_op;
            return first_index[a] < first_index[b];
        });
    } else {
        const auto metric = config.sort == ChartSort::DistanceFromStart ? SortMetric::DistanceFromStart
                                                                        : SortMetric::CreateOrderFromStart;
        const auto values = sort_values(final_model(session), metric, config.search_budget);
        for (auto& line : lines) {
            auto it = values.find(line.element_id);
            SortValue sv = it == values.end() ? SortValue{} : it->second;
            sv.tiebreak = line.first_op;
            line.sort_value = sv;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return sort_before(*lines[a].sort_value, lines[a].element_id, *lines[b].sort_value, lines[b].element_id);
        });
    }

    chart.timelines.reserve(lines.size());
    for (auto i : order) chart.timelines.push_back(std::move(lines[i]));
    chart.overview = chart.timelines;
    return apply_filters(std::move(chart), config);
}

PPMChart apply_filters(PPMChart chart, const ChartConfig& config) {
    chart.config.hidden_element_types = config.hidden_element_types;
    chart.config.hidden_operation_classes = config.hidden_operation_classes;
    chart.config.hidden_kinds = config.hidden_kinds;
    chart.config.hide_elements_with_class = config.hide_elements_with_class;
    if (!config.has_filters()) return chart;

    std::vector<Timeline> kept;
    for (auto& line : chart.timelines) {
        if (config.hidden_element_types.contains(line.element_type)) continue;
        const bool marked = std::any_of(line.dots.begin(), line.dots.end(), [&](const Dot& d) {
            return classify_operation(d.kind).intersects(config.hide_elements_with_class);
        });
        if (marked) continue;
        std::erase_if(line.dots, [&](const Dot& d) {
            return classify_operation(d.kind).intersects(config.hidden_operation_classes) ||
                   config.hidden_kinds.contains(d.kind);
        });
        if (line.dots.empty()) continue;
        kept.push_back(std::move(line));
    }
    chart.timelines = std::move(kept);
    return chart;
}

namespace {

nlohmann::json classes_json(OperationClassSet set) {
    auto out = nlohmann::json::array();
    for (auto c : kAllOperationClasses)
        if (set.contains(c)) out.push_back(to_string(c));
    return out;
}

nlohmann::json timeline_json(const Timeline& line) {
    auto dots = nlohmann::json::array();
    for (const auto& d : line.dots) {
        dots.push_back({{"timestamp", format_timestamp(d.timestamp)},
                        {"timestamp_ms", d.timestamp.time_since_epoch().count()},
                        {"kind", to_string(d.kind)},
                        {"color_key", d.color_key},
                        {"x", d.x ? nlohmann::json(*d.x) : nlohmann::json(nullptr)},
                        {"out_of_window", d.out_of_window()},
                        {"event_index", d.event_index}});
    }
    nlohmann::json out = {{"element_id", line.element_id},
                          {"element_type", to_string(line.element_type)},
                          {"first_op", format_timestamp(line.first_op)},
                          {"deleted", line.deleted},
                          {"dots", std::move(dots)}};
    if (line.sort_value) {
        const auto& sv = *line.sort_value;
        out["sort_value"] = {{"value", sv.value ? nlohmann::json(*sv.value) : nlohmann::json(nullptr)},
                             {"unreachable", sv.unreachable()},
                             {"approximate", sv.approximate}};
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const ChartConfig& config) {
    auto types = nlohmann::json::array();
    for (auto t : config.hidden_element_types) types.push_back(to_string(t));
    auto kinds = nlohmann::json::array();
    for (auto k : config.hidden_kinds) kinds.push_back(to_string(k));
    return {{"sort", to_string(config.sort)},
            {"window_seconds", config.window_seconds},
            {"width", config.width},
            {"hide_types", std::move(types)},
            {"hide_ops", classes_json(config.hidden_operation_classes)},
            {"hide_kinds", std::move(kinds)},
            {"hide_elements_with", classes_json(config.hide_elements_with_class)}};
}

nlohmann::json to_json(const PPMChart& chart) {
    auto lines = nlohmann::json::array();
    for (const auto& t : chart.timelines) lines.push_back(timeline_json(t));
    return {{"version", kChartJsonVersion},
            {"session_id", chart.session_id},
            {"config", to_json(chart.config)},
            {"window",
             {{"start", format_timestamp(chart.window.start)},
              {"end", format_timestamp(chart.window.end)},
              {"seconds", chart.window.seconds}}},
            {"timeline_count", chart.timelines.size()},
            {"dot_count", chart.dot_count()},
            {"overview", {{"timeline_count", chart.overview.size()}, {"dot_count", chart.overview_dot_count()}}},
            {"timelines", std::move(lines)}};
}

}  // namespace ppmchart
