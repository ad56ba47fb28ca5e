#pragma once

#include "braidloom/braid.hpp"
#include "braidloom/diagram.hpp"
#include "braidloom/moves.hpp"

namespace braidloom {

// === Overpasses and threading ===

// Overpass points live in the diagram's `overpass` table; this view lists
// them split into the S (start) and F (finish) sets.
struct Overpasses {
    std::vector<int> s_points;
    std::vector<int> f_points;
};

struct ThreadedDiagram {
    AxisDiagram diagram;  // all h-crossings assigned, S in D-, F in D+
    Overpasses overpasses;
};

struct ThreadingCertificate {
    int braid_index = 0;
    BraidWord word;
    // Mark id -> strand index of the lift (1-based), in axis order.
    std::vector<std::pair<int, int>> mark_to_strand;
};

// Chooses overpasses by maximal over-run decomposition and installs the
// points on the diagram. Returns the modified diagram plus the point sets.
// Deterministic: components and runs start at least edge ids.
std::pair<AxisDiagram, Overpasses> choose_overpasses(const AxisDiagram& d);

// Reads the overpass view back off a diagram's point table.
Overpasses overpass_view(const AxisDiagram& d);

bool is_threaded(const AxisDiagram& d, const Overpasses& o);

// Repositions the axis so that it threads the diagram for the given
// overpasses. The underlying link diagram is untouched (axis slides only):
// the new axis is the boundary of a regular neighborhood of a tree connecting
// all S points through the faces.
ThreadedDiagram thread(const AxisDiagram& d, const Overpasses& o);

// Extracts the closed-braid word of a threaded diagram. The certificate's
// index equals half the number of axis marks.
ThreadingCertificate braid_from_threaded(const ThreadedDiagram& t);

// Splits a critical-point-free segment at a midpoint still threaded under
// both overpass transports; events whose support meets an overpass point are
// rewritten with detours.
MovieScript transport_overpasses(const MovieScript& segment, const Overpasses& start,
                                 const Overpasses& end);

// === Canonical closed-braid rendering ===

// Standard closure diagram of a braid word (no axis marks).
AxisDiagram closure_diagram(const BraidWord& w);

// Canonical threaded box form: closure diagram plus the vertical axis through
// the closure arcs (2n marks, all h-crossings assigned).
ThreadedDiagram render_closed_braid(const BraidWord& w);

// Word reader for diagrams in canonical box form; empty if the diagram is not
// in that exact shape.
std::optional<BraidWord> read_box_form(const AxisDiagram& d);

}  // namespace braidloom
