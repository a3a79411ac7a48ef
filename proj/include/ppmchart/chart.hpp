#pragma once

// The PPMChart value: one timeline per model element, one dot per operation,
// right-aligned in a fixed-width time window.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ppmchart/graphmetrics.hpp"
#include "ppmchart/oplog.hpp"

namespace ppmchart {

enum class ChartSort { FirstEvent, DistanceFromStart, CreateOrderFromStart };

std::string_view to_string(ChartSort sort);
std::optional<ChartSort> parse_chart_sort(std::string_view name);

/// Closed set of palette keys.
inline constexpr std::array<std::string_view, 10> kColorKeys = {
    "create.event", "create.activity", "create.gateway", "create.edge", "move.node",
    "move.edge",    "delete.node",     "delete.edge",    "name",        "reconnect"};

std::string_view color_key_of(OperationKind kind);

struct ChartConfig {
    ChartSort sort = ChartSort::FirstEvent;
    double window_seconds = 3600;
    double width = 1000;
    std::set<ElementType> hidden_element_types;
    OperationClassSet hidden_operation_classes;
    std::set<OperationKind> hidden_kinds;
    /// Hides whole timelines that contain a dot of any of these classes.
    OperationClassSet hide_elements_with_class;
    std::size_t search_budget = kDefaultSearchBudget;

    bool has_filters() const;
    /// Throws std::invalid_argument for a non-positive window or width.
    void validate() const;

    friend bool operator==(const ChartConfig&, const ChartConfig&) = default;
};

struct ChartWindow {
    Timestamp start{};
    Timestamp end{};
    double seconds = 3600;

    friend bool operator==(const ChartWindow&, const ChartWindow&) = default;
};

struct Dot {
    Timestamp timestamp{};
    OperationKind kind = OperationKind::CreateActivity;
    std::string_view color_key;
    /// nullopt: the operation lies before the window start.
    std::optional<double> x;
    /// Position of the operation in the session.
    std::size_t event_index = 0;

    bool out_of_window() const { return !x.has_value(); }

    friend bool operator==(const Dot&, const Dot&) = default;
};

struct Timeline {
    std::string element_id;
    ElementType element_type = ElementType::Activity;
    std::vector<Dot> dots;
    Timestamp first_op{};
    bool deleted = false;
    /// Present when a graph sort is active.
    std::optional<SortValue> sort_value;

    friend bool operator==(const Timeline&, const Timeline&) = default;
};

struct PPMChart {
    std::string session_id;
    ChartConfig config;
    ChartWindow window;
    std::vector<Timeline> timelines;
    /// Every timeline before filtering, in chart order.
    std::vector<Timeline> overview;

    std::size_t dot_count() const;
    std::size_t overview_dot_count() const;

    friend bool operator==(const PPMChart&, const PPMChart&) = default;
};

class EmptySessionError : public std::runtime_error {
public:
    EmptySessionError() : std::runtime_error("EMPTY_SESSION: cannot chart a session without events") {}
};

/// x = width * (1 - (end - t) / window); nullopt before the window start.
std::optional<double> dot_x(Timestamp t, const ChartWindow& window, double width);

PPMChart build_chart(const Session& session, const ChartConfig& config);

/// Applies the filter fields of `config` to the chart's current timelines.
/// The window is kept as is.
PPMChart apply_filters(PPMChart chart, const ChartConfig& config);

nlohmann::json to_json(const ChartConfig& config);
nlohmann::json to_json(const PPMChart& chart);

inline constexpr int kChartJsonVersion = 1;

}  // namespace ppmchart
