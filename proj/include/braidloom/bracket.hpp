#pragma once

#include "braidloom/diagram.hpp"
#include "braidloom/laurent.hpp"

namespace braidloom {

// Default cap on the state-sum size: 2^20 states.
int bracket_crossing_cap();

// Kauffman bracket of the underlying diagram (axis ignored), computed from
// exactly 2^c states. Convention: a crossingless state with n loops
// contributes (-A^2 - A^-2)^n; there is no division by one loop.
// Throws TooLarge above the cap.
Laurent kauffman_bracket(const AxisDiagram& d, int max_crossings = -1);

// bracket * (-A)^{-3 writhe}: the equality-comparable normalized invariant.
Laurent normalized_bracket(const AxisDiagram& d, int max_crossings = -1);

struct InvariantReport {
    int components = 0;
    int writhe = 0;
    Laurent bracket;
    Laurent normalized;
};

InvariantReport invariants_of(const AxisDiagram& d, int max_crossings = -1);

}  // namespace braidloom
