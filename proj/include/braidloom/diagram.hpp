#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "braidloom/errors.hpp"
#include "braidloom/report.hpp"

namespace braidloom {

// === Combinatorial planar link diagram on the sphere with an embedded axis ===
//
// Crossings are 4-valent vertices carrying their edge-ends in counterclockwise
// rotation order. Axis marks are the transverse intersections of the axis
// circle with diagram edges; they act as 4-valent vertices of the combined map
// (two diagram ends, two axis ends). Overpass points are 2-valent decorations
// on edges and do not affect the face structure.

enum class MarkDir { MinusToPlus, PlusToMinus };
enum class HFlag { Over, Under, Unassigned };
enum class Side { Minus, Plus };

inline Side opposite(Side s) { return s == Side::Minus ? Side::Plus : Side::Minus; }

struct EdgeEnd {
    int crossing = -1;  // -1: free end (only for crossingless loop edges)
    int slot = -1;      // 0..3 rotation slot at the crossing

    bool operator==(const EdgeEnd&) const = default;
};

struct EdgePoint {
    enum class Kind { AxisMark, OverS, OverF };
    Kind kind = Kind::AxisMark;
    int id = -1;  // mark id for AxisMark, overpass point id otherwise

    bool operator==(const EdgePoint&) const = default;
};

struct EdgeData {
    EdgeEnd from;
    EdgeEnd to;
    // Points along the edge ordered from 'from' to 'to' (axis marks and
    // overpass points interleaved).
    std::vector<EdgePoint> points;

    bool operator==(const EdgeData&) const = default;
};

struct CrossingData {
    std::array<int, 4> ends{-1, -1, -1, -1};  // edge ids in CCW rotation order
    int over = 1;                             // 1: strand through slots (0,2) is over; 2: (1,3)

    bool operator==(const CrossingData&) const = default;
};

struct AxisMarkData {
    int edge = -1;
    MarkDir dir = MarkDir::MinusToPlus;
    HFlag h = HFlag::Unassigned;
};

struct OverpassPointData {
    int edge = -1;
    bool is_start = true;  // true: S point, false: F point
};

// Axis-mark ids along an edge, in point order.
std::vector<int> edge_mark_ids(const EdgeData& e);
bool is_free_loop(const EdgeData& e);
// Number of diagram-map segments the edge splits into. Marked free loops are
// cyclic: k marks give k segments (segment j runs from mark j to mark j+1).
int edge_segment_count(const EdgeData& e);
// Segment containing a point-list gap position.
int segment_of_gap(const EdgeData& e, int gap);

struct AxisDiagram {
    std::string name = "diagram";
    std::map<int, CrossingData> crossings;
    std::map<int, EdgeData> edges;
    std::map<int, AxisMarkData> marks;          // keyed by mark id
    std::vector<int> axis_order;                // mark ids in cyclic order along the axis
    std::map<int, OverpassPointData> overpass;  // keyed by overpass point id

    int next_id = 0;
    int fresh_id() { return next_id++; }

    bool operator==(const AxisDiagram& o) const {
        return crossings == o.crossings && edges == o.edges && marks_equal(o) &&
               axis_order == o.axis_order && overpass_equal(o);
    }

    bool marks_equal(const AxisDiagram& o) const;
    bool overpass_equal(const AxisDiagram& o) const;
};

// === Darts and traversal ===

// A dart is a directed edge segment of the combined map. Diagram edges split
// at their axis marks into segments; axis arcs run between consecutive marks.
struct Dart {
    enum class Kind { DiagramSeg, AxisArc };
    Kind kind = Kind::DiagramSeg;
    int edge = -1;     // diagram edge id (DiagramSeg) or -1
    int seg = -1;      // segment index along the edge, 0-based (DiagramSeg)
    int axis_pos = -1; // index into axis_order (AxisArc): arc from mark[i] to mark[i+1]
    bool forward = true;

    bool operator==(const Dart&) const = default;
    bool operator<(const Dart& o) const {
        return std::tie(kind, edge, seg, axis_pos, forward) <
               std::tie(o.kind, o.edge, o.seg, o.axis_pos, o.forward);
    }
};

// Vertex of the combined map: a crossing or an axis mark.
struct MapVertex {
    enum class Kind { Crossing, Mark };
    Kind kind = Kind::Crossing;
    int id = -1;

    bool operator==(const MapVertex&) const = default;
    bool operator<(const MapVertex& o) const { return std::tie(kind, id) < std::tie(o.kind, o.id); }
};

class CombinedMap {
public:
    explicit CombinedMap(const AxisDiagram& d);

    const AxisDiagram& diagram() const { return *d_; }

    // All darts, deterministically ordered.
    const std::vector<Dart>& darts() const { return darts_; }

    // Head vertex of a dart, if it ends at a crossing or mark (free loop darts have none).
    std::optional<MapVertex> head(const Dart& dart) const;
    std::optional<MapVertex> tail(const Dart& dart) const;

    Dart reverse(Dart dart) const;

    // Next dart of the same face: reverse then rotate CCW at the head vertex.
    // For closed loop segments (free circles) the face closes onto itself.
    Dart face_next(const Dart& dart) const;

    // Faces as dart cycles; deterministic order. faces()[i] bounds face id i.
    const std::vector<std::vector<Dart>>& faces() const { return faces_; }

    // Face id on the left of each dart.
    int face_left(const Dart& dart) const;

    int num_vertices() const { return static_cast<int>(vertex_degree_.size()); }
    int num_map_edges() const { return num_map_edges_; }
    int num_components() const { return num_components_; }  // of the combined map

    // Side (D-/D+) of every face, when the axis is consistently two-sided.
    // Empty if there is no axis or labeling fails.
    const std::map<int, Side>& face_sides() const { return face_sides_; }
    bool sides_consistent() const { return sides_consistent_; }

    // Side of a diagram edge segment.
    std::optional<Side> segment_side(int edge, int seg) const;

private:
    void build();
    void label_sides();

    const AxisDiagram* d_;
    std::vector<Dart> darts_;
    std::map<Dart, Dart> face_next_;
    std::vector<std::vector<Dart>> faces_;
    std::map<Dart, int> face_of_dart_;
    std::map<MapVertex, int> vertex_degree_;
    int num_map_edges_ = 0;
    int num_components_ = 0;
    std::map<int, Side> face_sides_;
    bool sides_consistent_ = false;
};

// === Strand traversal ===

// One step along a link strand: a directed position on a diagram edge.
struct StrandPos {
    int edge = -1;
    bool forward = true;

    bool operator==(const StrandPos&) const = default;
    bool operator<(const StrandPos& o) const {
        return std::tie(edge, forward) < std::tie(o.edge, o.forward);
    }
};

// Following the strand through the head endpoint of (edge, forward).
// Throws on inconsistent diagrams.
StrandPos strand_next(const AxisDiagram& d, const StrandPos& p);

// Oriented link components as edge sequences (each edge appears once, in its
// own orientation). Deterministic: each component starts at its least edge id.
std::vector<std::vector<int>> link_components(const AxisDiagram& d);

int components_of(const AxisDiagram& d);

// Sum of crossing signs.
int writhe(const AxisDiagram& d);
int crossing_sign(const AxisDiagram& d, int crossing);

// In/out slots: returns the slot where the given strand (0 for slots {0,2},
// 1 for slots {1,3}) enters the crossing.
int strand_in_slot(const AxisDiagram& d, int crossing, int strand);

ValidationReport validate_diagram(const AxisDiagram& d);

// === Builders ===

// A 0-crossing round unknot disjoint from the axis.
AxisDiagram round_unknot();

// The standard 3-crossing diagram of the (right-handed when mirrored=false)
// trefoil, without axis marks.
AxisDiagram trefoil_diagram(bool mirrored = false);

// A twist knot with k half-twists in the twist region plus a clasp.
AxisDiagram twist_knot_diagram(int twists);

}  // namespace braidloom
