#pragma once

// Reconstruction of the process model from a prefix of a session.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ppmchart/oplog.hpp"

namespace ppmchart {

struct NodeState {
    std::string id;
    ElementType type = ElementType::Activity;
    std::optional<Point> position;
    std::optional<std::string> label;
    bool alive = true;

    friend bool operator==(const NodeState&, const NodeState&) = default;
};

struct EdgeState {
    std::string id;
    std::optional<std::string> source_id;
    std::optional<std::string> target_id;
    /// Bendpoints in routing order. A bendpoint created without a logged
    /// position is kept (indices stay contiguous) but has no coordinates.
    std::vector<std::optional<Point>> bendpoints;
    std::optional<std::string> label;
    std::optional<Point> label_position;
    bool alive = true;

    bool anchored() const { return source_id.has_value() && target_id.has_value(); }

    friend bool operator==(const EdgeState&, const EdgeState&) = default;
};

struct ProcessModelState {
    std::map<std::string, NodeState> nodes;
    std::map<std::string, EdgeState> edges;
    std::size_t applied_count = 0;
    /// Events consumed but not applicable (unknown element, wrong type, ...).
    std::size_t skipped_count = 0;

    const NodeState* node(const std::string& id) const;
    const EdgeState* edge(const std::string& id) const;

    friend bool operator==(const ProcessModelState&, const ProcessModelState&) = default;
};

/// Incremental replay; apply() consumes one event at a time.
class Replayer {
public:
    /// Returns false when the event was skipped.
    bool apply(const ModelingEvent& event);

    const ProcessModelState& state() const& { return state_; }
    ProcessModelState state() && { return std::move(state_); }

private:
    bool apply_node(const ModelingEvent& event);
    bool apply_edge(const ModelingEvent& event);
    bool endpoint_known(const std::optional<std::string>& id) const;

    ProcessModelState state_;
};

/// State after the first `event_count` events (clamped to the session length).
ProcessModelState replay(const Session& session, std::size_t event_count);

/// State after every event with timestamp <= `until`.
ProcessModelState replay(const Session& session, Timestamp until);

ProcessModelState final_model(const Session& session);

std::set<std::string> alive_elements(const ProcessModelState& model);

/// {"applied_count", "skipped_count", "nodes": [...], "edges": [...]}, ids ascending.
nlohmann::json to_json(const ProcessModelState& model);

}  // namespace ppmchart
