#pragma once

// Graph-derived facts about a (final) process model: the two execution-order
// sort values and split/join block detection.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmchart/replay.hpp"

namespace ppmchart {

/// Path-node expansions allowed per longest-path query before falling back
/// to shortest-path distances.
inline constexpr std::size_t kDefaultSearchBudget = 1'000'000;

struct SortValue {
    /// nullopt means Unreachable, which sorts after every finite value.
    std::optional<double> value;
    /// Set when the search budget ran out and shortest paths were used.
    bool approximate = false;
    /// First-operation timestamp of the element; filled in by the chart.
    Timestamp tiebreak{};

    bool unreachable() const { return !value.has_value(); }

    friend bool operator==(const SortValue&, const SortValue&) = default;
};

/// Strict total order over (value, tiebreak, element id); Unreachable last.
bool sort_before(const SortValue& a, const std::string& id_a, const SortValue& b, const std::string& id_b);

class UnanchoredEdgeError : public std::runtime_error {
public:
    explicit UnanchoredEdgeError(const std::string& edge_id)
        : std::runtime_error("UNANCHORED_EDGE: edge '" + edge_id + "' has unknown endpoints") {}
};

/// Polyline length source -> bendpoints -> target using the model's node
/// positions. Falls back to 1 (a hop) when any position is unknown.
/// Throws UnanchoredEdgeError if either endpoint is unknown.
double edge_length(const EdgeState& edge, const ProcessModelState& model);

enum class SortMetric { DistanceFromStart, CreateOrderFromStart };

/// Longest simple-path distances from the start events for every node of the
/// model; nodes without a value are unreachable or deleted.
struct NodeDistances {
    std::map<std::string, std::optional<double>> values;
    bool approximate = false;
};

NodeDistances node_distances(const ProcessModelState& model, std::size_t budget = kDefaultSearchBudget);

/// Sort values for every node and edge in the model.
std::map<std::string, SortValue> sort_values(const ProcessModelState& model, SortMetric metric,
                                             std::size_t budget = kDefaultSearchBudget);

SortValue distance_from_start(const std::string& id, const ProcessModelState& model,
                              std::size_t budget = kDefaultSearchBudget);
SortValue create_order_value(const std::string& id, const ProcessModelState& model,
                             std::size_t budget = kDefaultSearchBudget);

struct Block {
    std::string split_id;
    std::string join_id;
    ElementType gateway_type = ElementType::XorGateway;
    /// Split, join, every node strictly inside and every edge on a split->join path.
    std::set<std::string> members;

    friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks of alive elements, ordered by the split's distance from start.
std::vector<Block> detect_blocks(const ProcessModelState& model, std::size_t budget = kDefaultSearchBudget);

}  // namespace ppmchart
