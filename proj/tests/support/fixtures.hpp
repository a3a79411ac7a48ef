#pragma once

// Small hand-built models and sessions shared by unit and acceptance tests.

#include <map>
#include <string>
#include <vector>

#include "support/builders.hpp"

namespace ppmchart::testing {

/// start -(100)-> A -(50)-> end
inline ProcessModelState chain_model() {
    return ModelBuilder()
        .node("start", ElementType::StartEvent, Point{0, 0})
        .node("A", ElementType::Activity, Point{100, 0})
        .node("end", ElementType::EndEvent, Point{150, 0})
        .edge("e1", "start", "A")
        .edge("e2", "A", "end");
}

/// XOR split with two single-activity branches and a matching XOR join.
inline ProcessModelState xor_block_model() {
    using ET = ElementType;
    return ModelBuilder()
        .node("S", ET::StartEvent, Point{0, 50})
        .node("X1", ET::XorGateway, Point{50, 50})
        .node("A1", ET::Activity, Point{100, 0})
        .node("A2", ET::Activity, Point{100, 100})
        .node("X2", ET::XorGateway, Point{150, 50})
        .node("E", ET::EndEvent, Point{200, 50})
        .edge("s_x1", "S", "X1")
        .edge("x1_a1", "X1", "A1")
        .edge("x1_a2", "X1", "A2")
        .edge("a1_x2", "A1", "X2")
        .edge("a2_x2", "A2", "X2")
        .edge("x2_e", "X2", "E");
}

/// AND block inside the second branch of an XOR block.
inline ProcessModelState nested_block_model() {
    using ET = ElementType;
    return ModelBuilder()
        .node("S", ET::StartEvent, Point{0, 50})
        .node("X1", ET::XorGateway, Point{50, 50})
        .node("A1", ET::Activity, Point{100, 0})
        .node("P1", ET::AndGateway, Point{100, 100})
        .node("B1", ET::Activity, Point{150, 80})
        .node("B2", ET::Activity, Point{150, 120})
        .node("P2", ET::AndGateway, Point{200, 100})
        .node("X2", ET::XorGateway, Point{250, 50})
        .node("E", ET::EndEvent, Point{300, 50})
        .edge("s_x1", "S", "X1")
        .edge("x1_a1", "X1", "A1")
        .edge("a1_x2", "A1", "X2")
        .edge("x1_p1", "X1", "P1")
        .edge("p1_b1", "P1", "B1")
        .edge("p1_b2", "P1", "B2")
        .edge("b1_p2", "B1", "P2")
        .edge("b2_p2", "B2", "P2")
        .edge("p2_x2", "P2", "X2")
        .edge("x2_e", "X2", "E");
}

/// Session ending in xor_block_model(); the block members are created in
/// `order`, the surrounding start, end and edges before and after.
inline Session xor_block_session(const std::vector<std::string>& order) {
    using enum OperationKind;
    struct Spec {
        OperationKind kind;
        Point pos;
        std::string source, target;
    };
    const std::map<std::string, Spec> spec = {
        {"X1", {CreateXor, {50, 50}, {}, {}}},        {"A1", {CreateActivity, {100, 0}, {}, {}}},
        {"A2", {CreateActivity, {100, 100}, {}, {}}}, {"X2", {CreateXor, {150, 50}, {}, {}}},
        {"x1_a1", {CreateEdge, {}, "X1", "A1"}},      {"x1_a2", {CreateEdge, {}, "X1", "A2"}},
        {"a1_x2", {CreateEdge, {}, "A1", "X2"}},      {"a2_x2", {CreateEdge, {}, "A2", "X2"}},
    };
    SessionBuilder b;
    double t = 0;
    b.op(CreateStartEvent, "S", t++, Point{0, 50});
    for (const auto& id : order) {
        const auto& s = spec.at(id);
        if (s.kind == CreateEdge) b.edge(id, s.source, s.target, t++);
        else b.op(s.kind, id, t++, s.pos);
    }
    b.op(CreateEndEvent, "E", t++, Point{200, 50});
    b.edge("s_x1", "S", "X1", t++);
    b.edge("x2_e", "X2", "E", t++);
    return b;
}

/// Member creation orders for the block construction styles.
inline const std::vector<std::string> kLeftToRightOrder = {"X1", "A1", "A2", "x1_a1", "x1_a2", "X2", "a1_x2", "a2_x2"};
inline const std::vector<std::string> kActivitiesGatewaysEdgesOrder = {"A1",    "A2",    "X1",    "X2",
                                                                       "x1_a1", "x1_a2", "a1_x2", "a2_x2"};
inline const std::vector<std::string> kActivitiesThenGatewaysAndEdgesOrder = {"A1",    "A2", "X1",    "x1_a1",
                                                                              "x1_a2", "X2", "a1_x2", "a2_x2"};
inline const std::vector<std::string> kAllNodesThenEdgesOrder = {"X1",    "A1",    "A2",    "X2",
                                                                 "x1_a1", "x1_a2", "a1_x2", "a2_x2"};

}  // namespace ppmchart::testing
