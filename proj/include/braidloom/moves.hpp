#pragma once

#include <variant>

#include "braidloom/diagram.hpp"

namespace braidloom {

// === General movie events on axis diagrams ===
//
// Sites reference the current still by stable ids plus expected local
// patterns; events fail loudly on mismatch rather than searching nearby.
// 'at' fields are gap indices into an edge's point list (0 = before the first
// point). Face ids index CombinedMap::faces() of the current still.

struct R1Insert {
    int edge = -1;
    int at = 0;
    int side = 0;  // 0: loop on the left of the strand direction, 1: right
    int over = 1;  // over flag of the new crossing
};
struct R1Delete {
    int crossing = -1;
};
struct R2Insert {
    int edge_a = -1;  // the strand that is pushed
    int at_a = 0;
    int edge_b = -1;  // the strand pushed across
    int at_b = 0;
    int face = -1;
    bool a_over = true;
};
struct R2Delete {
    int crossing_a = -1;
    int crossing_b = -1;
};
struct R3Slide {
    int face = -1;
};
struct AxisSlideInsert {  // AxisII: arc pushed across an axis arc, marks +2
    int edge = -1;
    int at = 0;
    int axis_pos = 0;  // axis arc from axis_order[pos] to axis_order[pos+1]
    int side_hint = 0; // 0: face left of the forward edge dart, 1: reversed
};
struct AxisSlideDelete {  // AxisII inverse, marks -2
    int mark_a = -1;
    int mark_b = -1;
};
struct AxisCrossingSlide {  // AxisIII: crossing passes across the axis
    int crossing = -1;
    int mark_a = -1;
    int mark_b = -1;
};
struct BirthLoop {
    int face = -1;
    Side side = Side::Plus;
};
struct DeathLoop {
    int edge = -1;  // a crossingless, markless free loop
};
struct SaddleBand {
    int edge_a = -1;
    int at_a = 0;
    int edge_b = -1;
    int at_b = 0;
    int face = -1;
    bool compatible = true;
};

using InputEvent = std::variant<R1Insert, R1Delete, R2Insert, R2Delete, R3Slide, AxisSlideInsert,
                                AxisSlideDelete, AxisCrossingSlide, BirthLoop, DeathLoop,
                                SaddleBand>;

const char* input_event_name(const InputEvent& e);
bool is_critical_input(const InputEvent& e);  // birth, death or saddle

AxisDiagram apply_input_event(const AxisDiagram& d, const InputEvent& e);

struct MovieScript {
    std::string name = "movie";
    AxisDiagram initial;
    std::vector<InputEvent> events;
};

std::vector<AxisDiagram> script_stills(const MovieScript& m);

ValidationReport validate_script(const MovieScript& m);

int script_euler_characteristic(const MovieScript& m);

}  // namespace braidloom
