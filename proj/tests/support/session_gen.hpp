#pragma once

// Seeded generator of synthetic modeling sessions. A target model is drawn
// first; the event stream is then written so that it must end in exactly that
// model, which makes the target an independent ground truth for replay.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/builders.hpp"

namespace ppmchart::testing {

struct GeneratedSession {
    Session session;
    ProcessModelState truth;
};

namespace gen_detail {

using enum OperationKind;

inline OperationKind create_kind(ElementType t) {
    switch (t) {
        case ElementType::StartEvent: return CreateStartEvent;
        case ElementType::EndEvent: return CreateEndEvent;
        case ElementType::Activity: return CreateActivity;
        case ElementType::XorGateway: return CreateXor;
        case ElementType::AndGateway: return CreateAnd;
        case ElementType::Edge: return CreateEdge;
    }
    return CreateActivity;
}

inline OperationKind move_kind(ElementType t) {
    switch (t) {
        case ElementType::StartEvent: return MoveStartEvent;
        case ElementType::EndEvent: return MoveEndEvent;
        case ElementType::XorGateway: return MoveXor;
        case ElementType::AndGateway: return MoveAnd;
        default: return MoveActivity;
    }
}

inline OperationKind delete_kind(ElementType t) {
    switch (t) {
        case ElementType::StartEvent: return DeleteStartEvent;
        case ElementType::EndEvent: return DeleteEndEvent;
        case ElementType::XorGateway: return DeleteXor;
        case ElementType::AndGateway: return DeleteAnd;
        case ElementType::Edge: return DeleteEdge;
        default: return DeleteActivity;
    }
}

struct Pending {
    ModelingEvent ev;
    std::vector<std::string> requires_ready;
    bool marks_ready = false;
    bool unmarks_ready = false;
    bool final_phase = false;
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    GeneratedSession run(std::size_t max_events) {
        for (std::size_t elements = 14;; elements = std::max<std::size_t>(3, elements - 2)) {
            auto out = attempt(elements);
            if (out.session.events.size() <= max_events) return out;
        }
    }

private:
    std::mt19937_64 rng_;

    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Point point() {
        std::uniform_real_distribution<double> d(0, 800);
        return {d(rng_), d(rng_)};
    }

    static Pending make(OperationKind kind, const std::string& id, std::optional<Point> pos = std::nullopt) {
        Pending p;
        p.ev.kind = kind;
        p.ev.element_id = id;
        p.ev.position = pos;
        return p;
    }

    GeneratedSession attempt(std::size_t max_elements) {
        GeneratedSession out;
        auto& truth = out.truth;
        std::vector<std::vector<Pending>> chains;

        const int node_count = uniform(2, static_cast<int>(std::min<std::size_t>(12, max_elements)));
        std::vector<std::string> node_ids;
        for (int i = 0; i < node_count; ++i) {
            const std::string id = "n" + std::to_string(i);
            node_ids.push_back(id);
            ElementType type = ElementType::Activity;
            if (i == 0) type = ElementType::StartEvent;
            else {
                static constexpr ElementType kPool[] = {ElementType::Activity,   ElementType::Activity,
                                                        ElementType::Activity,   ElementType::XorGateway,
                                                        ElementType::AndGateway, ElementType::EndEvent};
                type = kPool[uniform(0, 5)];
            }
            NodeState target{id, type, chance(0.9) ? std::optional<Point>(point()) : std::nullopt, std::nullopt,
                             !chance(0.15)};
            if (type == ElementType::Activity && chance(0.7)) target.label = "task " + std::to_string(uniform(0, 99));
            chains.push_back(node_chain(target));
            truth.nodes.emplace(id, target);
        }

        const int edge_count = uniform(0, static_cast<int>(std::min<std::size_t>(14, max_elements)));
        for (int i = 0; i < edge_count && node_count >= 2; ++i) {
            const std::string id = "e" + std::to_string(i);
            EdgeState target;
            target.id = id;
            target.alive = !chance(0.15);
            if (!chance(0.05)) {
                const int s = uniform(0, node_count - 1);
                int t = uniform(0, node_count - 2);
                if (t >= s) ++t;
                target.source_id = node_ids[static_cast<std::size_t>(s)];
                target.target_id = node_ids[static_cast<std::size_t>(t)];
            }
            const int bends = uniform(0, 2);
            for (int b = 0; b < bends; ++b) target.bendpoints.push_back(point());
            if (chance(0.4)) target.label = "cond " + std::to_string(uniform(0, 9));
            if (chance(0.3)) target.label_position = point();
            chains.push_back(edge_chain(target, node_ids));
            truth.edges.emplace(id, target);
        }

        out.session.session_id = "synthetic";
        out.session.events = merge(chains);
        truth.applied_count = out.session.events.size();
        return out;
    }

    std::vector<Pending> node_chain(const NodeState& target) {
        std::vector<Pending> chain;
        const auto type = target.type;
        if (chance(0.05)) {
            // Created, deleted, and created again under the same id.
            chain.push_back(make(create_kind(type), target.id, point()));
            chain.push_back(make(delete_kind(type), target.id));
        }
        const bool direct = !target.position || chance(0.3);
        chain.push_back(make(create_kind(type), target.id, direct ? target.position : std::optional<Point>(point())));
        chain.back().marks_ready = true;

        const int moves = uniform(0, 3);
        for (int i = 0; i < moves; ++i)
            chain.push_back(make(move_kind(type), target.id, target.position ? std::optional<Point>(point()) : std::nullopt));
        if (target.position && (!direct || moves > 0)) chain.push_back(make(move_kind(type), target.id, target.position));

        if (target.label) {
            if (chance(0.5)) {
                chain.push_back(make(NameActivity, target.id));
                chain.back().ev.label = "draft";
                chain.push_back(make(RenameActivity, target.id));
            } else {
                chain.push_back(make(NameActivity, target.id));
            }
            chain.back().ev.label = target.label;
        }
        if (!target.alive) {
            chain.push_back(make(delete_kind(type), target.id));
            chain.back().final_phase = true;
        }
        return chain;
    }

    std::vector<Pending> edge_chain(const EdgeState& target, const std::vector<std::string>& nodes) {
        std::vector<Pending> chain;
        auto create = make(CreateEdge, target.id);
        const bool reconnect = target.anchored() && chance(0.25);
        if (target.anchored()) {
            create.ev.source_id = target.source_id;
            create.ev.target_id = target.target_id;
            if (reconnect) create.ev.target_id = nodes[static_cast<std::size_t>(uniform(0, static_cast<int>(nodes.size()) - 1))];
            create.requires_ready = {*create.ev.source_id, *create.ev.target_id};
        }
        chain.push_back(create);

        const auto& bends = target.bendpoints;
        if (!bends.empty()) {
            const bool prepend = chance(0.5);
            const auto m = static_cast<int>(bends.size());
            for (int j = 0; j < m; ++j) {
                const int idx = prepend ? m - 1 - j : j;
                auto p = make(CreateEdgeBendpoint, target.id, chance(0.5) ? bends[idx] : std::optional<Point>(point()));
                p.ev.bendpoint = prepend ? 0 : j;
                chain.push_back(p);
            }
            if (chance(0.4)) {
                auto extra = make(CreateEdgeBendpoint, target.id, point());
                extra.ev.bendpoint = m;
                chain.push_back(extra);
                auto del = make(DeleteEdgeBendpoint, target.id);
                del.ev.bendpoint = m;
                chain.push_back(del);
            }
            for (int j = 0; j < m; ++j) {
                auto mv = make(MoveEdgeBendpoint, target.id, bends[static_cast<std::size_t>(j)]);
                mv.ev.bendpoint = j;
                chain.push_back(mv);
            }
        }
        if (target.label_position) {
            if (chance(0.3)) chain.push_back(make(MoveEdgeLabel, target.id, point()));
            chain.push_back(make(MoveEdgeLabel, target.id, target.label_position));
        }
        if (target.label) {
            chain.push_back(make(NameEdge, target.id));
            if (chance(0.4)) {
                chain.back().ev.label = "draft";
                chain.push_back(make(RenameEdge, target.id));
            }
            chain.back().ev.label = target.label;
        }
        if (reconnect) {
            auto r = make(ReconnectEdge, target.id);
            r.ev.target_id = target.target_id;
            if (chance(0.5)) r.ev.source_id = target.source_id;
            r.requires_ready = {*target.source_id, *target.target_id};
            chain.push_back(r);
        }
        if (!target.alive) {
            chain.push_back(make(DeleteEdge, target.id));
            chain.back().final_phase = true;
        }
        return chain;
    }

    std::vector<ModelingEvent> merge(std::vector<std::vector<Pending>>& chains) {
        std::vector<ModelingEvent> out;
        std::set<std::string> ready;
        std::vector<std::size_t> cursor(chains.size(), 0);
        long long t = 0;
        auto emit = [&](Pending& p) {
            t += uniform(500, 20000);
            p.ev.timestamp = at(0) + std::chrono::milliseconds{t};
            if (p.marks_ready) ready.insert(p.ev.element_id);
            out.push_back(p.ev);
        };

        while (true) {
            std::vector<std::size_t> candidates;
            for (std::size_t c = 0; c < chains.size(); ++c) {
                if (cursor[c] >= chains[c].size()) continue;
                const auto& next = chains[c][cursor[c]];
                if (next.final_phase) continue;
                if (std::all_of(next.requires_ready.begin(), next.requires_ready.end(),
                                [&](const std::string& id) { return ready.contains(id); }))
                    candidates.push_back(c);
            }
            if (candidates.empty()) break;
            const auto c = candidates[static_cast<std::size_t>(uniform(0, static_cast<int>(candidates.size()) - 1))];
            emit(chains[c][cursor[c]++]);
        }

        std::vector<Pending*> finals;
        for (std::size_t c = 0; c < chains.size(); ++c)
            for (; cursor[c] < chains[c].size(); ++cursor[c]) finals.push_back(&chains[c][cursor[c]]);
        std::shuffle(finals.begin(), finals.end(), rng_);
        for (auto* p : finals) emit(*p);
        return out;
    }
};

}  // namespace gen_detail

inline GeneratedSession generate_session(std::uint64_t seed, std::size_t max_events = 200) {
    return gen_detail::Generator(seed).run(max_events);
}

}  // namespace ppmchart::testing
