#include "ppmchart/replay.hpp"

#include "json.hpp"

namespace ppmchart {

const NodeState* ProcessModelState::node(const std::string& id) const {
    auto it = nodes.find(id);
    return it == nodes.end() ? nullptr : &it->second;
}

const EdgeState* ProcessModelState::edge(const std::string& id) const {
    auto it = edges.find(id);
    return it == edges.end() ? nullptr : &it->second;
}

bool Replayer::apply(const ModelingEvent& event) {
    ++state_.applied_count;
    const bool ok = element_type_of(event.kind) == ElementType::Edge ? apply_edge(event) : apply_node(event);
    if (!ok) ++state_.skipped_count;
    return ok;
}

bool Replayer::apply_node(const ModelingEvent& event) {
    const auto type = element_type_of(event.kind);
    auto it = state_.nodes.find(event.element_id);

    if (is_creation(event.kind)) {
        if (it != state_.nodes.end() && it->second.alive) return false;
        // Ids are unique across nodes and edges; a node cannot reuse an edge id.
        if (auto e = state_.edges.find(event.element_id); e != state_.edges.end()) return false;
        state_.nodes.insert_or_assign(event.element_id,
                                      NodeState{event.element_id, type, event.position, std::nullopt, true});
        return true;
    }
    if (it == state_.nodes.end() || !it->second.alive || it->second.type != type) return false;

    auto& node = it->second;
    const auto classes = classify_operation(event.kind);
    if (classes.contains(OperationClass::Move)) {
        if (event.position) node.position = event.position;
    } else if (classes.contains(OperationClass::Delete)) {
        node.alive = false;
    } else if (classes.contains(OperationClass::Name)) {
        node.label = event.label;
    }
    return true;
}

bool Replayer::endpoint_known(const std::optional<std::string>& id) const {
    return !id || state_.nodes.contains(*id);
}

bool Replayer::apply_edge(const ModelingEvent& event) {
    auto it = state_.edges.find(event.element_id);

    if (event.kind == OperationKind::CreateEdge) {
        if (it != state_.edges.end() && it->second.alive) return false;
        if (state_.nodes.contains(event.element_id)) return false;
        if (!endpoint_known(event.source_id) || !endpoint_known(event.target_id)) return false;
        EdgeState edge;
        edge.id = event.element_id;
        edge.source_id = event.source_id;
        edge.target_id = event.target_id;
        state_.edges.insert_or_assign(event.element_id, std::move(edge));
        return true;
    }
    if (it == state_.edges.end() || !it->second.alive) return false;

    auto& edge = it->second;
    auto& bends = edge.bendpoints;
    switch (event.kind) {
        case OperationKind::ReconnectEdge:
            if (!endpoint_known(event.source_id) || !endpoint_known(event.target_id)) return false;
            if (event.source_id) edge.source_id = event.source_id;
            if (event.target_id) edge.target_id = event.target_id;
            return true;
        case OperationKind::MoveEdgeLabel:
            if (event.position) edge.label_position = event.position;
            return true;
        case OperationKind::CreateEdgeBendpoint: {
            const auto at = event.bendpoint ? static_cast<std::size_t>(*event.bendpoint) : bends.size();
            if (at > bends.size()) return false;
            bends.insert(bends.begin() + static_cast<std::ptrdiff_t>(at), event.position);
            return true;
        }
        case OperationKind::MoveEdgeBendpoint:
            if (!event.bendpoint || static_cast<std::size_t>(*event.bendpoint) >= bends.size()) return false;
            if (event.position) bends[static_cast<std::size_t>(*event.bendpoint)] = event.position;
            return true;
        case OperationKind::DeleteEdgeBendpoint:
            if (!event.bendpoint || static_cast<std::size_t>(*event.bendpoint) >= bends.size()) return false;
            bends.erase(bends.begin() + *event.bendpoint);
            return true;
        case OperationKind::DeleteEdge:
            edge.alive = false;
            return true;
        case OperationKind::NameEdge:
        case OperationKind::RenameEdge:
            edge.label = event.label;
            return true;
        default:
            return false;
    }
}

ProcessModelState replay(const Session& session, std::size_t event_count) {
    Replayer r;
    const auto n = std::min(event_count, session.events.size());
    for (std::size_t i = 0; i < n; ++i) r.apply(session.events[i]);
    return std::move(r).state();
}

ProcessModelState replay(const Session& session, Timestamp until) {
    Replayer r;
    for (const auto& ev : session.events) {
        if (ev.timestamp > until) break;
        r.apply(ev);
    }
    return std::move(r).state();
}

ProcessModelState final_model(const Session& session) { return replay(session, session.events.size()); }

std::set<std::string> alive_elements(const ProcessModelState& model) {
    std::set<std::string> out;
    for (const auto& [id, n] : model.nodes)
        if (n.alive) out.insert(id);
    for (const auto& [id, e] : model.edges)
        if (e.alive) out.insert(id);
    return out;
}

namespace {

nlohmann::json point_json(const std::optional<Point>& p) {
    if (!p) return nullptr;
    return {{"x", p->x}, {"y", p->y}};
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

nlohmann::json to_json(const ProcessModelState& model) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, n] : model.nodes) {
        nodes.push_back({{"id", id},
                         {"type", to_string(n.type)},
                         {"position", point_json(n.position)},
                         {"label", optional_json(n.label)},
                         {"alive", n.alive}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [id, e] : model.edges) {
        nlohmann::json bends = nlohmann::json::array();
        for (const auto& b : e.bendpoints) bends.push_back(point_json(b));
        edges.push_back({{"id", id},
                         {"source", optional_json(e.source_id)},
                         {"target", optional_json(e.target_id)},
                         {"bendpoints", std::move(bends)},
                         {"label", optional_json(e.label)},
                         {"label_position", point_json(e.label_position)},
                         {"alive", e.alive}});
    }
    return {{"applied_count", model.applied_count},
            {"skipped_count", model.skipped_count},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)}};
}

}  // namespace ppmchart
