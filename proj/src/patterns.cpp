#include "ppmchart/patterns.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "ppmchart/replay.hpp"
#include "text_util.hpp"

namespace ppmchart {

namespace {

double seconds_between(Timestamp a, Timestamp b) {
    return static_cast<double>((b - a).count()) / 1000.0;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

// Rank of each element's first creating event among all first creations.
struct CreationRanks {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::size_t> rank;
    std::unordered_map<std::string, const ModelingEvent*> event;
};

CreationRanks creation_ranks(const Session& session) {
    CreationRanks r;
    for (const auto& ev : session.events) {
        if (!is_creation(ev.kind) || r.rank.contains(ev.element_id)) continue;
        r.rank.emplace(ev.element_id, r.order.size());
        r.event.emplace(ev.element_id, &ev);
        r.order.push_back(ev.element_id);
    }
    return r;
}

}  // namespace

SessionMetrics session_metrics(const Session& session) {
    SessionMetrics m;
    m.total_event_count = session.events.size();
    if (session.events.empty()) return m;

    std::unordered_set<std::string> ids;
    auto [lo, hi] = std::minmax_element(session.events.begin(), session.events.end(),
                                        [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    m.duration_seconds = seconds_between(lo->timestamp, hi->timestamp);
    for (const auto& ev : session.events) {
        ids.insert(ev.element_id);
        const auto classes = classify_operation(ev.kind);
        for (auto c : kAllOperationClasses)
            if (classes.contains(c)) ++m.class_counts[static_cast<std::size_t>(c)];
    }
    m.created_element_count = ids.size();

    const auto model = final_model(session);
    for (const auto& [id, n] : model.nodes) (n.alive ? m.final_alive_count : m.deleted_count)++;
    for (const auto& [id, e] : model.edges) (e.alive ? m.final_alive_count : m.deleted_count)++;
    return m;
}

double auto_chunk_threshold(const Session& session, const PatternThresholds& th) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < session.events.size(); ++i)
        gaps.push_back(seconds_between(session.events[i - 1].timestamp, session.events[i].timestamp));
    if (gaps.empty()) return th.min_pause_seconds;
    return std::max(th.min_pause_seconds, th.pause_gap_factor * median(std::move(gaps)));
}

std::vector<Chunk> detect_chunks(const Session& session, ChunkThreshold threshold, const PatternThresholds& th) {
    std::vector<Chunk> chunks;
    if (session.events.empty()) return chunks;
    const double limit = threshold.seconds.value_or(auto_chunk_threshold(session, th));

    const auto& ev = session.events;
    Chunk current{0, 0, ev[0].timestamp, ev[0].timestamp, 0};
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const double gap = seconds_between(ev[i - 1].timestamp, ev[i].timestamp);
        if (gap >= limit) {
            chunks.push_back(current);
            current = Chunk{i, i, ev[i].timestamp, ev[i].timestamp, gap};
        } else {
            current.end_index = i;
            current.end_time = ev[i].timestamp;
        }
    }
    chunks.push_back(current);
    return chunks;
}

std::string_view to_string(MoveStyle style) {
    switch (style) {
        case MoveStyle::ImmediateMover: return "immediate_mover";
        case MoveStyle::EndBatchMover: return "end_batch_mover";
        case MoveStyle::ContinuousMover: return "continuous_mover";
        case MoveStyle::NoMoves: return "no_moves";
    }
    return "no_moves";
}

MoveProfile move_profile(const Session& session, const PatternThresholds& th) {
    MoveProfile p;
    const auto& ev = session.events;

    std::optional<std::size_t> last_create;
    std::vector<std::size_t> moves;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const auto classes = classify_operation(ev[i].kind);
        if (classes.contains(OperationClass::Create)) last_create = i;
        if (classes.contains(OperationClass::Move)) moves.push_back(i);
    }
    if (moves.empty()) return p;

    const auto t_first = ev.front().timestamp;
    const double duration = seconds_between(t_first, ev.back().timestamp);
    std::size_t late = 0, after_create = 0;
    for (auto i : moves) {
        if (seconds_between(t_first, ev[i].timestamp) >= 0.75 * duration) ++late;
        if (!last_create || i > *last_create) ++after_create;
    }
    p.final_quarter_fraction = static_cast<double>(late) / static_cast<double>(moves.size());
    p.after_last_create_fraction = static_cast<double>(after_create) / static_cast<double>(moves.size());

    std::unordered_map<std::string, Timestamp> created_at;
    std::unordered_set<std::string> seen_move;
    for (const auto& e : ev) {
        if (is_creation(e.kind)) {
            created_at.try_emplace(e.element_id, e.timestamp);
        } else if (classify_operation(e.kind).contains(OperationClass::Move)) {
            auto it = created_at.find(e.element_id);
            if (it == created_at.end() || !seen_move.insert(e.element_id).second) continue;
            p.lags.push_back({e.element_id, seconds_between(it->second, e.timestamp)});
        }
    }
    if (!p.lags.empty()) {
        std::vector<double> values;
        for (const auto& l : p.lags) values.push_back(l.lag_seconds);
        p.median_lag_seconds = median(std::move(values));
    }

    if (p.after_last_create_fraction >= th.end_batch_fraction)
        p.style = MoveStyle::EndBatchMover;
    else if (p.median_lag_seconds && *p.median_lag_seconds <= th.immediate_move_lag_seconds)
        p.style = MoveStyle::ImmediateMover;
    else
        p.style = MoveStyle::ContinuousMover;
    return p;
}

std::string_view to_string(CreationStyle style) {
    switch (style) {
        case CreationStyle::NodesThenEdges: return "nodes_then_edges";
        case CreationStyle::NodesThenGatewaysThenEdges: return "nodes_then_gateways_then_edges";
        case CreationStyle::Interleaved: return "interleaved";
    }
    return "interleaved";
}

namespace {

struct RankSpan {
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    std::size_t hi = 0;
    std::size_t count = 0;

    void add(std::size_t r) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++count;
    }
    bool empty() const { return count == 0; }
};

// Every member of `a` precedes every member of `b`; vacuous if either is empty.
bool precedes(const RankSpan& a, const RankSpan& b) { return a.empty() || b.empty() || a.hi < b.lo; }

RankSpan merge(RankSpan a, const RankSpan& b) {
    if (b.empty()) return a;
    a.lo = std::min(a.lo, b.lo);
    a.hi = std::max(a.hi, b.hi);
    a.count += b.count;
    return a;
}

}  // namespace

CreationProfile creation_profile(const Session& session) {
    CreationProfile p;
    const auto ranks = creation_ranks(session);
    const auto n = static_cast<double>(ranks.order.size());

    RankSpan nodes, gateways, edges;
    std::unordered_map<std::string, std::vector<std::size_t>> neighbours;
    for (const auto& id : ranks.order) {
        const auto* ev = ranks.event.at(id);
        const auto type = element_type_of(ev->kind);
        const auto r = ranks.rank.at(id);
        p.sequence.push_back(type);
        if (type == ElementType::Edge) edges.add(r);
        else if (is_gateway(type)) gateways.add(r);
        else nodes.add(r);
    }

    double edge_lag = 0;
    std::size_t edge_n = 0;
    for (const auto& id : ranks.order) {
        const auto* ev = ranks.event.at(id);
        if (ev->kind != OperationKind::CreateEdge || !ev->source_id || !ev->target_id) continue;
        auto s = ranks.rank.find(*ev->source_id);
        auto t = ranks.rank.find(*ev->target_id);
        if (s == ranks.rank.end() || t == ranks.rank.end()) continue;
        const auto r = ranks.rank.at(id);
        const auto ends = std::max(s->second, t->second);
        edge_lag += r > ends ? static_cast<double>(r - ends) / n : 0.0;
        ++edge_n;
        neighbours[*ev->source_id].push_back(t->second);
        neighbours[*ev->target_id].push_back(s->second);
    }
    if (edge_n > 0) p.edge_lag_index = edge_lag / static_cast<double>(edge_n);

    // A gateway lags when it is created after all of its adjacent nodes.
    double gateway_lag = 0;
    std::size_t gateway_n = 0;
    for (const auto& id : ranks.order) {
        if (!is_gateway(element_type_of(ranks.event.at(id)->kind))) continue;
        auto it = neighbours.find(id);
        if (it == neighbours.end()) continue;
        const auto r = ranks.rank.at(id);
        const auto latest = *std::max_element(it->second.begin(), it->second.end());
        gateway_lag += r > latest ? static_cast<double>(r - latest) / n : 0.0;
        ++gateway_n;
    }
    if (gateway_n > 0) p.gateway_lag_index = gateway_lag / static_cast<double>(gateway_n);

    // Tags need at least one edge and one node; the gateway variant is the
    // more specific one and is checked first.
    const auto all_nodes = merge(nodes, gateways);
    const bool nodes_then_edges = !edges.empty() && !all_nodes.empty() && all_nodes.hi < edges.lo;
    if (nodes_then_edges && !nodes.empty() && !gateways.empty() && nodes.hi < gateways.lo)
        p.style = CreationStyle::NodesThenGatewaysThenEdges;
    else if (nodes_then_edges)
        p.style = CreationStyle::NodesThenEdges;
    else
        p.style = CreationStyle::Interleaved;
    return p;
}

std::string_view to_string(BlockStyle style) {
    switch (style) {
        case BlockStyle::LeftToRight: return "left_to_right";
        case BlockStyle::ActivitiesGatewaysEdges: return "activities_gateways_edges";
        case BlockStyle::ActivitiesThenGatewaysAndEdges: return "activities_then_gateways_and_edges";
        case BlockStyle::AllNodesThenEdges: return "all_nodes_then_edges";
        case BlockStyle::Other: return "other";
    }
    return "other";
}

std::vector<BlockConstructionOrder> block_construction_orders(const Session& session, std::size_t budget) {
    const auto model = final_model(session);
    const auto blocks = detect_blocks(model, budget);
    if (blocks.empty()) return {};

    const auto ranks = creation_ranks(session);
    const auto values = sort_values(model, SortMetric::CreateOrderFromStart, budget);
    constexpr auto unranked = std::numeric_limits<std::size_t>::max();
    auto rank_of = [&](const std::string& id) {
        auto it = ranks.rank.find(id);
        return it == ranks.rank.end() ? unranked : it->second;
    };

    std::vector<BlockConstructionOrder> out;
    for (const auto& block : blocks) {
        BlockConstructionOrder order{block, {}, BlockStyle::Other};
        std::vector<std::string> members(block.members.begin(), block.members.end());
        std::stable_sort(members.begin(), members.end(),
                         [&](const auto& a, const auto& b) { return rank_of(a) < rank_of(b); });

        RankSpan activities, gateways, edges;
        bool left_to_right = true;
        std::optional<double> previous;
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            const auto& id = members[pos];
            const auto type = model.node(id) ? model.node(id)->type : ElementType::Edge;
            order.creation_order.push_back({id, type});
            if (type == ElementType::Edge) edges.add(pos);
            else if (is_gateway(type)) gateways.add(pos);
            else activities.add(pos);

            const auto& v = values.at(id).value;
            if (!v || (previous && *v < *previous)) left_to_right = false;
            if (v) previous = v;
        }

        const bool b = precedes(activities, gateways) && precedes(gateways, edges) && precedes(activities, edges);
        const bool c = precedes(activities, merge(gateways, edges));
        const bool d = precedes(merge(activities, gateways), edges);
        if (left_to_right) order.style = BlockStyle::LeftToRight;
        else if (b) order.style = BlockStyle::ActivitiesGatewaysEdges;
        else if (c) order.style = BlockStyle::ActivitiesThenGatewaysAndEdges;
        else if (d) order.style = BlockStyle::AllNodesThenEdges;
        out.push_back(std::move(order));
    }
    return out;
}

PatternReport analyze(const Session& session, ChunkThreshold threshold, const PatternThresholds& th) {
    PatternReport r;
    r.session_id = session.session_id;
    r.metrics = session_metrics(session);
    r.chunk_threshold_seconds = threshold.seconds.value_or(auto_chunk_threshold(session, th));
    r.chunks = detect_chunks(session, ChunkThreshold::fixed(r.chunk_threshold_seconds), th);
    r.moves = move_profile(session, th);
    r.creation = creation_profile(session);
    r.blocks = block_construction_orders(session);
    return r;
}

nlohmann::json to_json(const PatternReport& r) {
    using nlohmann::json;
    json counts = json::object();
    for (auto c : kAllOperationClasses) counts[std::string(to_string(c))] = r.metrics.count(c);

    json chunks = json::array();
    for (const auto& c : r.chunks)
        chunks.push_back({{"start_index", c.start_index},
                          {"end_index", c.end_index},
                          {"size", c.size()},
                          {"start", format_timestamp(c.start_time)},
                          {"end", format_timestamp(c.end_time)},
                          {"preceding_pause_seconds", c.preceding_pause_seconds}});

    json lags = json::array();
    for (const auto& l : r.moves.lags) lags.push_back({{"element_id", l.element_id}, {"lag_seconds", l.lag_seconds}});

    json sequence = json::array();
    for (auto t : r.creation.sequence) sequence.push_back(to_string(t));

    json blocks = json::array();
    for (const auto& b : r.blocks) {
        json members = json::array();
        for (const auto& m : b.creation_order)
            members.push_back({{"element_id", m.element_id}, {"type", to_string(m.type)}});
        blocks.push_back({{"split_id", b.block.split_id},
                          {"join_id", b.block.join_id},
                          {"gateway_type", to_string(b.block.gateway_type)},
                          {"creation_order", std::move(members)},
                          {"style", to_string(b.style)}});
    }

    return {{"session_id", r.session_id},
            {"metrics",
             {{"created_element_count", r.metrics.created_element_count},
              {"final_alive_count", r.metrics.final_alive_count},
              {"deleted_count", r.metrics.deleted_count},
              {"total_event_count", r.metrics.total_event_count},
              {"duration_seconds", r.metrics.duration_seconds},
              {"class_counts", std::move(counts)}}},
            {"chunks", {{"threshold_seconds", r.chunk_threshold_seconds}, {"chunks", std::move(chunks)}}},
            {"moves",
             {{"lags", std::move(lags)},
              {"median_lag_seconds", r.moves.median_lag_seconds ? json(*r.moves.median_lag_seconds) : json(nullptr)},
              {"final_quarter_fraction", r.moves.final_quarter_fraction},
              {"after_last_create_fraction", r.moves.after_last_create_fraction},
              {"style", to_string(r.moves.style)}}},
            {"creation",
             {{"sequence", std::move(sequence)},
              {"edge_lag_index", r.creation.edge_lag_index},
              {"gateway_lag_index", r.creation.gateway_lag_index},
              {"style", to_string(r.creation.style)}}},
            {"blocks", std::move(blocks)}};
}

std::string pattern_csv_header() {
    return "session_id,created_element_count,final_alive_count,deleted_count,total_event_count,duration_seconds,"
           "create_events,move_events,delete_events,name_events,chunk_threshold_seconds,chunk_count,"
           "median_move_lag_seconds,final_quarter_move_fraction,after_last_create_move_fraction,move_style,"
           "edge_lag_index,gateway_lag_index,creation_style,block_count,block_styles\n";
}

std::string pattern_csv_row(const PatternReport& r) {
    using detail::format_number;
    std::string styles;
    for (const auto& b : r.blocks) {
        if (!styles.empty()) styles += ';';
        styles += to_string(b.style);
    }
    const auto& m = r.metrics;
    std::string row = detail::csv_field(r.session_id);
    for (auto v : {m.created_element_count, m.final_alive_count, m.deleted_count, m.total_event_count})
        row += ',' + std::to_string(v);
    row += ',' + format_number(m.duration_seconds);
    for (auto c : kAllOperationClasses) row += ',' + std::to_string(m.count(c));
    row += ',' + format_number(r.chunk_threshold_seconds);
    row += ',' + std::to_string(r.chunks.size());
    row += ',' + (r.moves.median_lag_seconds ? format_number(*r.moves.median_lag_seconds) : std::string{});
    row += ',' + format_number(r.moves.final_quarter_fraction);
    row += ',' + format_number(r.moves.after_last_create_fraction);
    row += ',';
    row += to_string(r.moves.style);
    row += ',' + format_number(r.creation.edge_lag_index);
    row += ',' + format_number(r.creation.gateway_lag_index);
    row += ',';
    row += to_string(r.creation.style);
    row += ',' + std::to_string(r.blocks.size());
    row += ',' + detail::csv_field(styles);
    row += '\n';
    return row;
}

}  // namespace ppmchart
