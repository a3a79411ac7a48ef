#include "doctest.h"

#include "ppmchart/replay.hpp"
#include "support/builders.hpp"
#include "support/session_gen.hpp"

using namespace ppmchart;
using namespace ppmchart::testing;
using enum OperationKind;

TEST_CASE("create, move, delete") {
    Session s = SessionBuilder()
                    .op(CreateActivity, "a1", 0, Point{10, 10})
                    .op(MoveActivity, "a1", 1, Point{20, 15})
                    .op(DeleteActivity, "a1", 2);

    auto m = replay(s, std::size_t{2});
    REQUIRE(m.node("a1"));
    CHECK(m.node("a1")->alive);
    CHECK(m.node("a1")->position == Point{20, 15});
    CHECK(alive_elements(m) == std::set<std::string>{"a1"});

    m = final_model(s);
    REQUIRE(m.node("a1"));
    CHECK_FALSE(m.node("a1")->alive);
    CHECK(alive_elements(m).empty());
    CHECK(m.applied_count == 3);
    CHECK(m.skipped_count == 0);
}

TEST_CASE("replay prefixes") {
    Session s = SessionBuilder()
                    .op(CreateStartEvent, "s", 0)
                    .op(CreateActivity, "a", 10)
                    .edge("e", "s", "a", 20);
    CHECK(replay(s, std::size_t{0}) == ProcessModelState{});
    CHECK(replay(s, std::size_t{99}) == final_model(s));
    CHECK(alive_elements(replay(s, at(10))) == std::set<std::string>{"a", "s"});
    CHECK(alive_elements(replay(s, at(9.999))) == std::set<std::string>{"s"});
    CHECK(replay(s, at(-1)).applied_count == 0);
}

TEST_CASE("deleting a node leaves its edges in place") {
    Session s = SessionBuilder()
                    .op(CreateStartEvent, "s", 0)
                    .op(CreateActivity, "a", 1)
                    .edge("e", "s", "a", 2)
                    .op(DeleteActivity, "a", 3);
    const auto m = final_model(s);
    REQUIRE(m.edge("e"));
    CHECK(m.edge("e")->alive);
    CHECK(m.edge("e")->target_id == "a");
    CHECK(alive_elements(m) == std::set<std::string>{"e", "s"});
}

TEST_CASE("edge operations") {
    Session s = SessionBuilder()
                    .op(CreateStartEvent, "s", 0)
                    .op(CreateActivity, "a", 1)
                    .op(CreateActivity, "b", 2)
                    .edge("e", "s", "a", 3)
                    .bendpoint(CreateEdgeBendpoint, "e", 0, 4, Point{1, 1})
                    .bendpoint(CreateEdgeBendpoint, "e", 0, 5, Point{0, 0})
                    .bendpoint(CreateEdgeBendpoint, "e", 2, 6, Point{2, 2})
                    .bendpoint(MoveEdgeBendpoint, "e", 1, 7, Point{5, 5})
                    .bendpoint(DeleteEdgeBendpoint, "e", 2, 8)
                    .op(MoveEdgeLabel, "e", 9, Point{7, 8})
                    .name(NameEdge, "e", "yes", 10)
                    .name(RenameEdge, "e", "no", 11)
                    .reconnect("e", std::nullopt, std::string("b"), 12);
    const auto m = final_model(s);
    const auto* e = m.edge("e");
    REQUIRE(e);
    CHECK(e->bendpoints == std::vector<std::optional<Point>>{Point{0, 0}, Point{5, 5}});
    CHECK(e->label_position == Point{7, 8});
    CHECK(e->label == "no");
    CHECK(e->source_id == "s");
    CHECK(e->target_id == "b");
    CHECK(m.skipped_count == 0);
}

TEST_CASE("naming nodes") {
    Session s = SessionBuilder()
                    .op(CreateActivity, "a", 0)
                    .name(NameActivity, "a", "Check", 1)
                    .name(RenameActivity, "a", "Check order", 2);
    CHECK(final_model(s).node("a")->label == "Check order");
}

TEST_CASE("inapplicable events are skipped and counted") {
    Session s = SessionBuilder()
                    .op(MoveActivity, "ghost", 0, Point{1, 1})              // unknown element
                    .op(CreateXor, "g", 1, Point{0, 0})
                    .op(MoveAnd, "g", 2, Point{5, 5})                        // wrong node type
                    .op(CreateXor, "g", 3)                                   // already alive
                    .op(CreateEdge, "g", 4)                                  // id taken by a node
                    .edge("e", "g", "nowhere", 5)                            // unknown endpoint
                    .edge("e", "g", "g", 6)
                    .bendpoint(MoveEdgeBendpoint, "e", 0, 7, Point{1, 1})   // no such bendpoint
                    .bendpoint(CreateEdgeBendpoint, "e", 3, 8)               // index past the end
                    .op(DeleteEdgeBendpoint, "e", 9)                         // index missing
                    .op(DeleteEdge, "e", 10)
                    .op(DeleteEdge, "e", 11)                                 // already deleted
                    .op(CreateActivity, "e", 12);                            // id taken by an edge
    const auto m = final_model(s);
    CHECK(m.applied_count == 13);
    CHECK(m.skipped_count == 10);
    CHECK(m.node("g")->position == Point{0, 0});
    CHECK_FALSE(m.edge("e")->alive);
    CHECK_FALSE(m.node("e"));
}

TEST_CASE("a deleted id can be created again") {
    Session s = SessionBuilder()
                    .op(CreateActivity, "a", 0, Point{1, 1})
                    .name(NameActivity, "a", "old", 1)
                    .op(DeleteActivity, "a", 2)
                    .op(CreateXor, "a", 3, Point{2, 2});
    const auto m = final_model(s);
    CHECK(*m.node("a") == NodeState{"a", ElementType::XorGateway, Point{2, 2}, std::nullopt, true});
}

TEST_CASE("moves without a logged position keep the last one") {
    Session s = SessionBuilder().op(CreateActivity, "a", 0, Point{3, 4}).op(MoveActivity, "a", 1);
    CHECK(final_model(s).node("a")->position == Point{3, 4});
}

TEST_CASE("generated sessions replay to their target model") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto g = generate_session(seed);
        CAPTURE(seed);
        CHECK(final_model(g.session) == g.truth);
    }
}

TEST_CASE("replay is a left fold: applying the rest to a prefix state gives the full state") {
    for (std::uint64_t seed = 200; seed < 220; ++seed) {
        const auto s = generate_session(seed).session;
        for (std::size_t k = 0; k <= s.events.size(); k += 1 + s.events.size() / 7) {
            Replayer r;
            for (std::size_t i = 0; i < k; ++i) r.apply(s.events[i]);
            CHECK(r.state() == replay(s, k));
            for (std::size_t i = k; i < s.events.size(); ++i) r.apply(s.events[i]);
            CHECK(r.state() == final_model(s));
        }
    }
}

TEST_CASE("alive element count never exceeds the number of creations so far") {
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        const auto s = generate_session(seed).session;
        Replayer r;
        std::size_t creations = 0;
        for (const auto& ev : s.events) {
            if (is_creation(ev.kind)) ++creations;
            r.apply(ev);
            CHECK(alive_elements(r.state()).size() <= creations);
        }
    }
}

TEST_CASE("model JSON") {
    Session s = SessionBuilder()
                    .op(CreateStartEvent, "s", 0, Point{1.5, 2})
                    .op(CreateActivity, "a", 1)
                    .edge("e", "s", "a", 2)
                    .bendpoint(CreateEdgeBendpoint, "e", 0, 3);
    const auto j = to_json(final_model(s));
    CHECK(j["applied_count"] == 4);
    CHECK(j["skipped_count"] == 0);
    REQUIRE(j["nodes"].size() == 2);
    CHECK(j["nodes"][0]["id"] == "a");
    CHECK(j["nodes"][0]["position"].is_null());
    CHECK(j["nodes"][1]["type"] == "start_event");
    CHECK(j["nodes"][1]["position"]["x"] == 1.5);
    CHECK(j["edges"][0]["source"] == "s");
    CHECK(j["edges"][0]["bendpoints"].size() == 1);
    CHECK(j["edges"][0]["bendpoints"][0].is_null());
    CHECK(j["edges"][0]["alive"] == true);
}
