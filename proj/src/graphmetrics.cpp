#include "ppmchart/graphmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace ppmchart {

bool sort_before(const SortValue& a, const std::string& id_a, const SortValue& b, const std::string& id_b) {
    if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
    if (a.value && *a.value != *b.value) return *a.value < *b.value;
    if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
    return id_a < id_b;
}

double edge_length(const EdgeState& edge, const ProcessModelState& model) {
    if (!edge.anchored()) throw UnanchoredEdgeError(edge.id);
    const auto* src = model.node(*edge.source_id);
    const auto* dst = model.node(*edge.target_id);
    if (!src || !dst) throw UnanchoredEdgeError(edge.id);
    if (!src->position || !dst->position) return 1.0;

    std::vector<Point> polyline{*src->position};
    for (const auto& b : edge.bendpoints) {
        if (!b) return 1.0;
        polyline.push_back(*b);
    }
    polyline.push_back(*dst->position);

    double total = 0;
    for (std::size_t i = 1; i < polyline.size(); ++i)
        total += std::hypot(polyline[i].x - polyline[i - 1].x, polyline[i].y - polyline[i - 1].y);
    return total;
}

namespace {

struct Arc {
    std::size_t to;
    double weight;
    std::string edge_id;
};

// Alive nodes, and the alive anchored edges between alive nodes.
struct Graph {
    std::vector<std::string> ids;
    std::vector<ElementType> types;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<Arc>> out;
    std::vector<std::vector<Arc>> in;

    std::size_t size() const { return ids.size(); }
};

Graph build_graph(const ProcessModelState& model) {
    Graph g;
    for (const auto& [id, node] : model.nodes) {
        if (!node.alive) continue;
        g.index.emplace(id, g.ids.size());
        g.ids.push_back(id);
        g.types.push_back(node.type);
    }
    g.out.resize(g.size());
    g.in.resize(g.size());
    for (const auto& [id, edge] : model.edges) {
        if (!edge.alive || !edge.anchored()) continue;
        auto s = g.index.find(*edge.source_id);
        auto t = g.index.find(*edge.target_id);
        if (s == g.index.end() || t == g.index.end()) continue;
        const double w = edge_length(edge, model);
        g.out[s->second].push_back({t->second, w, id});
        g.in[t->second].push_back({s->second, w, id});
    }
    return g;
}

constexpr double kUnset = -std::numeric_limits<double>::infinity();

// Exhaustive DFS over simple paths from every start event. Returns false if
// the expansion budget ran out.
bool longest_simple_paths(const Graph& g, std::size_t budget, std::vector<double>& best) {
    best.assign(g.size(), kUnset);
    std::vector<char> on_path(g.size(), 0);
    std::size_t expansions = 0;
    bool exhausted = false;

    std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double dist) {
        if (exhausted) return;
        if (++expansions > budget) {
            exhausted = true;
            return;
        }
        best[u] = std::max(best[u], dist);
        for (const auto& arc : g.out[u]) {
            if (on_path[arc.to]) continue;
            on_path[arc.to] = 1;
            dfs(arc.to, dist + arc.weight);
            on_path[arc.to] = 0;
        }
    };

    for (std::size_t s = 0; s < g.size(); ++s) {
        if (g.types[s] != ElementType::StartEvent) continue;
        on_path[s] = 1;
        dfs(s, 0.0);
        on_path[s] = 0;
        if (exhausted) return false;
    }
    for (std::size_t s = 0; s < g.size(); ++s)
        if (g.types[s] == ElementType::StartEvent) best[s] = 0.0;
    return true;
}

void shortest_paths(const Graph& g, std::vector<double>& dist) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    dist.assign(g.size(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (g.types[s] != ElementType::StartEvent) continue;
        dist[s] = 0;
        queue.emplace(0.0, s);
    }
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& arc : g.out[u]) {
            if (d + arc.weight < dist[arc.to]) {
                dist[arc.to] = d + arc.weight;
                queue.emplace(dist[arc.to], arc.to);
            }
        }
    }
    for (auto& d : dist)
        if (d == inf) d = kUnset;
}

}  // namespace

NodeDistances node_distances(const ProcessModelState& model, std::size_t budget) {
    const Graph g = build_graph(model);
    std::vector<double> best;
    NodeDistances out;
    if (!longest_simple_paths(g, budget, best)) {
        shortest_paths(g, best);
        out.approximate = true;
    }
    for (const auto& [id, node] : model.nodes) out.values.emplace(id, std::nullopt);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (best[i] != kUnset) out.values[g.ids[i]] = best[i];
    return out;
}

std::map<std::string, SortValue> sort_values(const ProcessModelState& model, SortMetric metric, std::size_t budget) {
    const auto distances = node_distances(model, budget);
    std::map<std::string, SortValue> out;
    for (const auto& [id, value] : distances.values) out.emplace(id, SortValue{value, distances.approximate, {}});

    for (const auto& [id, edge] : model.edges) {
        SortValue sv{std::nullopt, distances.approximate, {}};
        if (edge.alive && edge.anchored()) {
            auto s = distances.values.find(*edge.source_id);
            auto t = distances.values.find(*edge.target_id);
            if (s != distances.values.end() && t != distances.values.end() && s->second && t->second) {
                if (metric == SortMetric::DistanceFromStart)
                    sv.value = (*s->second + *t->second) / 2.0;
                else
                    sv.value = std::max(*s->second, *t->second) + 1.0;
            }
        }
        out.insert_or_assign(id, sv);
    }
    return out;
}

SortValue distance_from_start(const std::string& id, const ProcessModelState& model, std::size_t budget) {
    const auto values = sort_values(model, SortMetric::DistanceFromStart, budget);
    auto it = values.find(id);
    return it == values.end() ? SortValue{} : it->second;
}

SortValue create_order_value(const std::string& id, const ProcessModelState& model, std::size_t budget) {
    const auto values = sort_values(model, SortMetric::CreateOrderFromStart, budget);
    auto it = values.find(id);
    return it == values.end() ? SortValue{} : it->second;
}

// ---------------------------------------------------------------------------
// Blocks

namespace {

struct PathCensus {
    std::size_t paths = 0;
    std::vector<std::size_t> hits;    // maximal paths through each node
    std::vector<std::size_t> first;   // node order along the first maximal path
    bool exhausted = false;
};

// Counts, for every node, the maximal simple paths from `split` visiting it.
PathCensus census_from(const Graph& g, std::size_t split, std::size_t budget) {
    PathCensus c;
    c.hits.assign(g.size(), 0);
    std::vector<char> on_path(g.size(), 0);
    std::vector<std::size_t> stack;
    std::size_t expansions = 0;

    std::function<void(std::size_t)> dfs = [&](std::size_t u) {
        if (c.exhausted) return;
        if (++expansions > budget) {
            c.exhausted = true;
            return;
        }
        on_path[u] = 1;
        stack.push_back(u);
        bool extended = false;
        for (const auto& arc : g.out[u]) {
            if (on_path[arc.to]) continue;
            extended = true;
            dfs(arc.to);
        }
        if (!extended) {
            ++c.paths;
            for (auto v : stack) ++c.hits[v];
            if (c.first.empty()) c.first = stack;
        }
        stack.pop_back();
        on_path[u] = 0;
    };
    dfs(split);
    return c;
}

struct Region {
    std::set<std::size_t> nodes;  // split and join included
    std::set<std::string> edges;
    bool exhausted = false;
};

// Union of the simple split->join paths (join only as the final node).
Region region_between(const Graph& g, std::size_t split, std::size_t join, std::size_t budget) {
    Region r;
    std::vector<char> on_path(g.size(), 0);
    std::vector<std::size_t> nodes;
    std::vector<const std::string*> edges;
    std::size_t expansions = 0;

    std::function<void(std::size_t)> dfs = [&](std::size_t u) {
        if (r.exhausted) return;
        if (++expansions > budget) {
            r.exhausted = true;
            return;
        }
        if (u == join) {
            r.nodes.insert(nodes.begin(), nodes.end());
            r.nodes.insert(join);
            for (const auto* e : edges) r.edges.insert(*e);
            return;
        }
        on_path[u] = 1;
        nodes.push_back(u);
        for (const auto& arc : g.out[u]) {
            if (on_path[arc.to]) continue;
            edges.push_back(&arc.edge_id);
            dfs(arc.to);
            edges.pop_back();
        }
        nodes.pop_back();
        on_path[u] = 0;
    };
    dfs(split);
    return r;
}

// No entry into or exit from the region other than through split and join.
bool is_single_entry_exit(const Graph& g, const Region& r, std::size_t split, std::size_t join) {
    for (auto v : r.nodes) {
        if (v != split)
            for (const auto& arc : g.in[v])
                if (!r.nodes.contains(arc.to) || arc.to == join || !r.edges.contains(arc.edge_id)) return false;
        if (v != join)
            for (const auto& arc : g.out[v])
                if (!r.nodes.contains(arc.to) || arc.to == split || !r.edges.contains(arc.edge_id)) return false;
    }
    return true;
}

}  // namespace

std::vector<Block> detect_blocks(const ProcessModelState& model, std::size_t budget) {
    const Graph g = build_graph(model);
    std::vector<Block> blocks;

    for (std::size_t split = 0; split < g.size(); ++split) {
        const auto type = g.types[split];
        if (!is_gateway(type) || g.out[split].size() < 2) continue;

        const auto census = census_from(g, split, budget);
        if (census.exhausted || census.paths == 0) continue;

        for (auto join : census.first) {
            if (join == split || g.types[join] != type || g.in[join].size() < 2) continue;
            if (census.hits[join] != census.paths) continue;
            const auto region = region_between(g, split, join, budget);
            if (region.exhausted || !is_single_entry_exit(g, region, split, join)) continue;

            Block b{g.ids[split], g.ids[join], type, {}};
            for (auto v : region.nodes) b.members.insert(g.ids[v]);
            b.members.insert(region.edges.begin(), region.edges.end());
            blocks.push_back(std::move(b));
            break;
        }
    }

    if (blocks.empty()) return blocks;
    const auto values = sort_values(model, SortMetric::DistanceFromStart, budget);
    std::stable_sort(blocks.begin(), blocks.end(), [&](const Block& a, const Block& b) {
        return sort_before(values.at(a.split_id), a.split_id, values.at(b.split_id), b.split_id);
    });
    return blocks;
}

}  // namespace ppmchart
