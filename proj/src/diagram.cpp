#include "braidloom/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace braidloom {

bool AxisDiagram::marks_equal(const AxisDiagram& o) const {
    if (marks.size() != o.marks.size()) return false;
    for (const auto& [id, m] : marks) {
        auto it = o.marks.find(id);
        if (it == o.marks.end()) return false;
        if (m.edge != it->second.edge || m.dir != it->second.dir || m.h != it->second.h)
            return false;
    }
    return true;
}

bool AxisDiagram::overpass_equal(const AxisDiagram& o) const {
    if (overpass.size() != o.overpass.size()) return false;
    for (const auto& [id, p] : overpass) {
        auto it = o.overpass.find(id);
        if (it == o.overpass.end()) return false;
        if (p.edge != it->second.edge || p.is_start != it->second.is_start) return false;
    }
    return true;
}

std::vector<int> edge_mark_ids(const EdgeData& e) {
    std::vector<int> ids;
    for (const auto& p : e.points)
        if (p.kind == EdgePoint::Kind::AxisMark) ids.push_back(p.id);
    return ids;
}

bool is_free_loop(const EdgeData& e) { return e.from.crossing < 0 && e.to.crossing < 0; }

int edge_segment_count(const EdgeData& e) {
    int k = static_cast<int>(edge_mark_ids(e).size());
    if (is_free_loop(e)) return std::max(k, 1);
    return k + 1;
}

int segment_of_gap(const EdgeData& e, int gap) {
    int before = 0;
    for (int i = 0; i < gap && i < static_cast<int>(e.points.size()); ++i)
        if (e.points[static_cast<std::size_t>(i)].kind == EdgePoint::Kind::AxisMark) ++before;
    int k = static_cast<int>(edge_mark_ids(e).size());
    if (is_free_loop(e) && k > 0) return (before - 1 + k) % k;
    return before;
}

// === CombinedMap ===

CombinedMap::CombinedMap(const AxisDiagram& d) : d_(&d) { build(); }

std::optional<MapVertex> CombinedMap::head(const Dart& dart) const {
    const auto& d = *d_;
    if (dart.kind == Dart::Kind::AxisArc) {
        const int n = static_cast<int>(d.axis_order.size());
        int pos = dart.forward ? (dart.axis_pos + 1) % n : dart.axis_pos;
        return MapVertex{MapVertex::Kind::Mark, d.axis_order[static_cast<std::size_t>(pos)]};
    }
    const EdgeData& e = d.edges.at(dart.edge);
    auto marks = edge_mark_ids(e);
    const int k = static_cast<int>(marks.size());
    if (is_free_loop(e)) {
        if (k == 0) return std::nullopt;
        int m = dart.forward ? (dart.seg + 1) % k : dart.seg;
        return MapVertex{MapVertex::Kind::Mark, marks[static_cast<std::size_t>(m)]};
    }
    if (dart.forward) {
        if (dart.seg < k)
            return MapVertex{MapVertex::Kind::Mark, marks[static_cast<std::size_t>(dart.seg)]};
        if (e.to.crossing < 0) return std::nullopt;
        return MapVertex{MapVertex::Kind::Crossing, e.to.crossing};
    }
    if (dart.seg > 0)
        return MapVertex{MapVertex::Kind::Mark, marks[static_cast<std::size_t>(dart.seg) - 1]};
    if (e.from.crossing < 0) return std::nullopt;
    return MapVertex{MapVertex::Kind::Crossing, e.from.crossing};
}

std::optional<MapVertex> CombinedMap::tail(const Dart& dart) const {
    return head(reverse(dart));
}

Dart CombinedMap::reverse(Dart dart) const {
    dart.forward = !dart.forward;
    return dart;
}

namespace {

// Out-darts at a vertex in CCW rotation order.
struct RotationTable {
    std::map<MapVertex, std::vector<Dart>> out_darts;
};

}  // namespace

void CombinedMap::build() {
    const AxisDiagram& d = *d_;

    // Enumerate darts.
    for (const auto& [eid, e] : d.edges) {
        const int nseg = edge_segment_count(e);
        for (int s = 0; s < nseg; ++s) {
            darts_.push_back(Dart{Dart::Kind::DiagramSeg, eid, s, -1, true});
            darts_.push_back(Dart{Dart::Kind::DiagramSeg, eid, s, -1, false});
        }
    }
    const int axis_n = static_cast<int>(d.axis_order.size());
    for (int i = 0; i < axis_n; ++i) {
        darts_.push_back(Dart{Dart::Kind::AxisArc, -1, -1, i, true});
        darts_.push_back(Dart{Dart::Kind::AxisArc, -1, -1, i, false});
    }

    // Rotation: out-darts in CCW order at each crossing and mark.
    RotationTable rot;

    for (const auto& [cid, c] : d.crossings) {
        MapVertex v{MapVertex::Kind::Crossing, cid};
        std::vector<Dart> order;
        for (int slot = 0; slot < 4; ++slot) {
            int eid = c.ends[static_cast<std::size_t>(slot)];
            if (eid < 0) continue;
            const EdgeData& e = d.edges.at(eid);
            const int nseg = edge_segment_count(e);
            // Out-dart leaving this crossing through this slot.
            if (e.from == EdgeEnd{cid, slot})
                order.push_back(Dart{Dart::Kind::DiagramSeg, eid, 0, -1, true});
            else if (e.to == EdgeEnd{cid, slot})
                order.push_back(Dart{Dart::Kind::DiagramSeg, eid, nseg - 1, -1, false});
            // Invalid references are reported by validate_diagram.
        }
        rot.out_darts[v] = order;
        vertex_degree_[v] = static_cast<int>(order.size());
    }

    // Marks: CCW rotation derived from the crossing direction of the edge over
    // the axis. With D- on the left of the axis direction:
    //   minus-to-plus mark: (edge-out, axis-out, edge-in-reversed, axis-in-reversed)
    // expressed as out-darts: (edge continues, axis departs, edge arrives^-1, axis arrives^-1).
    std::map<int, int> axis_pos_of_mark;
    for (int i = 0; i < axis_n; ++i) axis_pos_of_mark[d.axis_order[static_cast<std::size_t>(i)]] = i;

    for (const auto& [mid, m] : d.marks) {
        MapVertex v{MapVertex::Kind::Mark, mid};
        const EdgeData& e = d.edges.at(m.edge);
        auto marks = edge_mark_ids(e);
        int idx = -1;
        for (std::size_t k = 0; k < marks.size(); ++k)
            if (marks[k] == mid) idx = static_cast<int>(k);
        if (idx < 0) continue;  // validator reports
        const int kk = static_cast<int>(marks.size());
        int seg_out = is_free_loop(e) ? idx : idx + 1;
        int seg_in = is_free_loop(e) ? (idx + kk - 1) % kk : idx;
        Dart e_out{Dart::Kind::DiagramSeg, m.edge, seg_out, -1, true};   // leaves along edge
        Dart e_in_rev{Dart::Kind::DiagramSeg, m.edge, seg_in, -1, false};  // back along arrival
        auto it = axis_pos_of_mark.find(mid);
        if (it == axis_pos_of_mark.end() || axis_n == 0) continue;
        int pos = it->second;
        Dart ax_out{Dart::Kind::AxisArc, -1, -1, pos, true};  // departs along axis
        Dart ax_in_rev{Dart::Kind::AxisArc, -1, -1, (pos + axis_n - 1) % axis_n, false};
        std::vector<Dart> order;
        if (m.dir == MarkDir::MinusToPlus) {
            // Edge crosses axis left-to-right: CCW order (e-out, ax-out, e-back, ax-back).
            order = {e_out, ax_out, e_in_rev, ax_in_rev};
        } else {
            order = {e_out, ax_in_rev, e_in_rev, ax_out};
        }
        rot.out_darts[v] = order;
        vertex_degree_[v] = 4;
    }

    // Face permutation: phi(dart) = previous-in-CCW out-dart at head from reverse(dart).
    for (const Dart& dart : darts_) {
        auto hv = head(dart);
        if (!hv) {
            // Free circle: the face wraps around.
            face_next_[dart] = dart;
            continue;
        }
        const auto& order = rot.out_darts[*hv];
        Dart rev = reverse(dart);
        int at = -1;
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == rev) at = static_cast<int>(i);
        if (at < 0) {
            face_next_[dart] = dart;  // inconsistent; validator reports
            continue;
        }
        int prev = (at + static_cast<int>(order.size()) - 1) % static_cast<int>(order.size());
        face_next_[dart] = order[static_cast<std::size_t>(prev)];
    }

    // Faces.
    std::set<Dart> seen;
    for (const Dart& dart : darts_) {
        if (seen.count(dart)) continue;
        std::vector<Dart> cycle;
        Dart cur = dart;
        while (!seen.count(cur)) {
            seen.insert(cur);
            cycle.push_back(cur);
            cur = face_next_.at(cur);
        }
        int fid = static_cast<int>(faces_.size());
        for (const Dart& dd : cycle) face_of_dart_[dd] = fid;
        faces_.push_back(std::move(cycle));
    }

    num_map_edges_ = static_cast<int>(darts_.size()) / 2;

    // Connected components over vertices; free circles each count as one.
    std::map<MapVertex, int> comp;
    int comp_count = 0;
    for (const auto& [v, deg] : vertex_degree_) {
        (void)deg;
        if (comp.count(v)) continue;
        // BFS through darts.
        std::vector<MapVertex> stack{v};
        comp[v] = comp_count;
        while (!stack.empty()) {
            MapVertex cur = stack.back();
            stack.pop_back();
            for (const Dart& out : rot.out_darts[cur]) {
                auto hv = head(out);
                if (hv && !comp.count(*hv)) {
                    comp[*hv] = comp_count;
                    stack.push_back(*hv);
                }
            }
        }
        ++comp_count;
    }
    for (const auto& [eid, e] : d.edges) {
        if (e.from.crossing < 0 && e.to.crossing < 0 && edge_mark_ids(e).empty()) ++comp_count;
    }
    if (!d.marks.empty() || axis_n > 0) {
        // Axis belongs to a component already counted through its marks.
    } else {
        ++comp_count;  // markless axis circle
    }
    num_components_ = comp_count;

    label_sides();
}

int CombinedMap::face_left(const Dart& dart) const {
    auto it = face_of_dart_.find(dart);
    return it == face_of_dart_.end() ? -1 : it->second;
}

void CombinedMap::label_sides() {
    face_sides_.clear();
    sides_consistent_ = true;
    const int axis_n = static_cast<int>(d_->axis_order.size());
    if (axis_n == 0) {
        sides_consistent_ = false;
        return;
    }
    // Seed: D- is on the left of the axis direction.
    std::vector<std::pair<int, Side>> stack;
    Dart a0{Dart::Kind::AxisArc, -1, -1, 0, true};
    stack.push_back({face_left(a0), Side::Minus});
    stack.push_back({face_left(reverse(a0)), Side::Plus});
    while (!stack.empty()) {
        auto [f, s] = stack.back();
        stack.pop_back();
        if (f < 0) continue;
        auto it = face_sides_.find(f);
        if (it != face_sides_.end()) {
            if (it->second != s) sides_consistent_ = false;
            continue;
        }
        face_sides_[f] = s;
        for (const Dart& dart : faces_[static_cast<std::size_t>(f)]) {
            int g = face_left(reverse(dart));
            Side gs = dart.kind == Dart::Kind::AxisArc ? opposite(s) : s;
            stack.push_back({g, gs});
        }
    }
    // Faces not reached (other components) get sides by a second pass through
    // shared-face placement: every unreached face belongs to a component
    // disjoint from the axis; by the canonical split placement it sits in D+.
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        if (!face_sides_.count(static_cast<int>(f)))
            face_sides_[static_cast<int>(f)] = Side::Plus;
    }
}

std::optional<Side> CombinedMap::segment_side(int edge, int seg) const {
    Dart dart{Dart::Kind::DiagramSeg, edge, seg, -1, true};
    int fl = face_left(dart), fr = face_left(reverse(dart));
    auto it_l = face_sides_.find(fl), it_r = face_sides_.find(fr);
    if (it_l == face_sides_.end() || it_r == face_sides_.end()) return std::nullopt;
    if (it_l->second != it_r->second) return std::nullopt;
    return it_l->second;
}

// === Strand traversal ===

StrandPos strand_next(const AxisDiagram& d, const StrandPos& p) {
    const EdgeData& e = d.edges.at(p.edge);
    const EdgeEnd end = p.forward ? e.to : e.from;
    if (end.crossing < 0) return p;  // free loop wraps onto itself
    const CrossingData& c = d.crossings.at(end.crossing);
    int out_slot = (end.slot + 2) % 4;
    int next_edge = c.ends[static_cast<std::size_t>(out_slot)];
    if (next_edge < 0) fail(ErrorCode::InvariantViolation, "crossing slot unfilled");
    const EdgeData& ne = d.edges.at(next_edge);
    EdgeEnd want{end.crossing, out_slot};
    if (ne.from == want) return StrandPos{next_edge, true};
    if (ne.to == want) return StrandPos{next_edge, false};
    fail(ErrorCode::InvariantViolation, "edge endpoints inconsistent with crossing slots");
}

std::vector<std::vector<int>> link_components(const AxisDiagram& d) {
    std::vector<std::vector<int>> out;
    std::set<int> seen;
    for (const auto& [eid, e] : d.edges) {
        (void)e;
        if (seen.count(eid)) continue;
        std::vector<int> comp;
        StrandPos cur{eid, true};
        while (!seen.count(cur.edge)) {
            seen.insert(cur.edge);
            if (!cur.forward)
                fail(ErrorCode::InvariantViolation,
                     "strand traversal runs against edge orientation at edge " +
                         std::to_string(cur.edge));
            comp.push_back(cur.edge);
            cur = strand_next(d, cur);
        }
        out.push_back(std::move(comp));
    }
    return out;
}

int components_of(const AxisDiagram& d) {
    return static_cast<int>(link_components(d).size());
}

int strand_in_slot(const AxisDiagram& d, int crossing, int strand) {
    const CrossingData& c = d.crossings.at(crossing);
    const int s0 = strand == 0 ? 0 : 1;
    const int s1 = s0 + 2;
    int e0 = c.ends[static_cast<std::size_t>(s0)], e1 = c.ends[static_cast<std::size_t>(s1)];
    bool in0 = d.edges.at(e0).to == EdgeEnd{crossing, s0};
    bool in1 = d.edges.at(e1).to == EdgeEnd{crossing, s1};
    if (in0 == in1)
        fail(ErrorCode::InvariantViolation,
             "incoherent strand orientation at crossing " + std::to_string(crossing));
    return in0 ? s0 : s1;
}

int crossing_sign(const AxisDiagram& d, int crossing) {
    const CrossingData& c = d.crossings.at(crossing);
    int over_strand = c.over == 1 ? 0 : 1;
    int under_strand = 1 - over_strand;
    int a_out = (strand_in_slot(d, crossing, over_strand) + 2) % 4;
    int b_out = (strand_in_slot(d, crossing, under_strand) + 2) % 4;
    return b_out == (a_out + 1) % 4 ? 1 : -1;
}

int writhe(const AxisDiagram& d) {
    int w = 0;
    for (const auto& [cid, c] : d.crossings) {
        (void)c;
        w += crossing_sign(d, cid);
    }
    return w;
}

// === Validation ===

ValidationReport validate_diagram(const AxisDiagram& d) {
    ValidationReport report;

    // Crossing slots reference existing edges whose ends point back.
    for (const auto& [cid, c] : d.crossings) {
        for (int slot = 0; slot < 4; ++slot) {
            int eid = c.ends[static_cast<std::size_t>(slot)];
            std::string loc = "crossing " + std::to_string(cid) + " slot " + std::to_string(slot);
            if (eid < 0) {
                report.add(Severity::Error, loc, "valence violation: unfilled slot");
                continue;
            }
            auto it = d.edges.find(eid);
            if (it == d.edges.end()) {
                report.add(Severity::Error, loc, "references missing edge " + std::to_string(eid));
                continue;
            }
            EdgeEnd want{cid, slot};
            if (!(it->second.from == want) && !(it->second.to == want))
                report.add(Severity::Error, loc,
                           "edge " + std::to_string(eid) + " does not attach here");
        }
    }

    // Edge ends reference crossings consistently; free ends only in pairs.
    for (const auto& [eid, e] : d.edges) {
        std::string loc = "edge " + std::to_string(eid);
        if ((e.from.crossing < 0) != (e.to.crossing < 0)) {
            report.add(Severity::Error, loc, "half-free edge");
            continue;
        }
        for (const EdgeEnd* end : {&e.from, &e.to}) {
            if (end->crossing < 0) continue;
            auto it = d.crossings.find(end->crossing);
            if (it == d.crossings.end()) {
                report.add(Severity::Error, loc, "endpoint crossing missing");
            } else if (end->slot < 0 || end->slot > 3 ||
                       it->second.ends[static_cast<std::size_t>(end->slot)] != eid) {
                report.add(Severity::Error, loc, "endpoint slot mismatch");
            }
        }
        for (const auto& p : e.points) {
            if (p.kind == EdgePoint::Kind::AxisMark) {
                auto mit = d.marks.find(p.id);
                if (mit == d.marks.end() || mit->second.edge != eid)
                    report.add(Severity::Error, loc, "stray axis mark point");
            } else {
                auto oit = d.overpass.find(p.id);
                if (oit == d.overpass.end() || oit->second.edge != eid)
                    report.add(Severity::Error, loc, "stray overpass point");
            }
        }
    }
    if (!report.pass) return report;

    // Orientation coherence at crossings.
    for (const auto& [cid, c] : d.crossings) {
        (void)c;
        try {
            strand_in_slot(d, cid, 0);
            strand_in_slot(d, cid, 1);
        } catch (const Error& err) {
            report.add(Severity::Error, "crossing " + std::to_string(cid), err.what());
        }
    }

    // Marks and axis order agree.
    std::set<int> in_axis(d.axis_order.begin(), d.axis_order.end());
    if (in_axis.size() != d.axis_order.size())
        report.add(Severity::Error, "axis", "duplicate mark in axis order");
    if (in_axis.size() != d.marks.size())
        report.add(Severity::Error, "axis", "axis order does not list every mark exactly once");
    for (const auto& [mid, m] : d.marks) {
        std::string loc = "mark " + std::to_string(mid);
        auto it = d.edges.find(m.edge);
        if (it == d.edges.end()) {
            report.add(Severity::Error, loc, "mark on missing edge");
            continue;
        }
        int count = 0;
        for (const auto& p : it->second.points)
            if (p.kind == EdgePoint::Kind::AxisMark && p.id == mid) ++count;
        if (count != 1) report.add(Severity::Error, loc, "mark not listed exactly once on edge");
        if (!in_axis.count(mid)) report.add(Severity::Error, loc, "mark missing from axis order");
    }
    if (!report.pass) return report;

    // Strand coherence (also confirms edges form oriented cycles).
    int comps = 0;
    try {
        comps = components_of(d);
    } catch (const Error& err) {
        report.add(Severity::Error, "strands", err.what());
        return report;
    }
    report.metrics["components"] = comps;

    // Sphere Euler formula on the combined map: V - E + F == 2 * C.
    CombinedMap map(d);
    int v = map.num_vertices();
    int e = map.num_map_edges();
    int f = static_cast<int>(map.faces().size());
    int c = map.num_components();
    // Free circles contribute one vertex and one edge by convention.
    int free_circles = 0;
    for (const auto& [eid, ed] : d.edges) {
        (void)eid;
        if (ed.from.crossing < 0 && ed.to.crossing < 0) {
            bool has_marks = false;
            for (const auto& p : ed.points)
                if (p.kind == EdgePoint::Kind::AxisMark) has_marks = true;
            if (!has_marks) ++free_circles;
        }
    }
    if (d.marks.empty() && !d.axis_order.empty())
        report.add(Severity::Error, "axis", "axis order nonempty but no marks");
    // Free loop edges already contribute their edge and two faces through the
    // dart traversal; they only lack a vertex. A markless axis contributes
    // nothing to the map and is accounted for entirely by convention.
    int free_axis = d.marks.empty() ? 1 : 0;
    v += free_circles + free_axis;
    e += free_axis;
    f += 2 * free_axis;
    if (v - e + f != 2 * c) {
        std::ostringstream ss;
        ss << "sphere Euler formula fails: V=" << v << " E=" << e << " F=" << f
           << " components=" << c;
        report.add(Severity::Error, "euler", ss.str());
    }
    report.metrics["faces"] = f;

    // Side labeling consistency when the axis carries marks.
    if (!d.marks.empty()) {
        if (!map.sides_consistent())
            report.add(Severity::Error, "axis", "D-/D+ labeling inconsistent");
        else {
            // Mark directions match face sides along each edge.
            for (const auto& [eid, ed] : d.edges) {
                auto marks = edge_mark_ids(ed);
                const bool cyclic = is_free_loop(ed);
                const int nm = static_cast<int>(marks.size());
                for (std::size_t k = 0; k < marks.size(); ++k) {
                    int seg_before = cyclic ? (static_cast<int>(k) + nm - 1) % nm
                                            : static_cast<int>(k);
                    int seg_after = cyclic ? static_cast<int>(k) : static_cast<int>(k) + 1;
                    auto side_before = map.segment_side(eid, seg_before);
                    auto side_after = map.segment_side(eid, seg_after);
                    const AxisMarkData& m = d.marks.at(marks[k]);
                    std::string loc = "mark " + std::to_string(marks[k]);
                    if (!side_before || !side_after) {
                        report.add(Severity::Error, loc, "segment side undefined");
                        continue;
                    }
                    Side need_before =
                        m.dir == MarkDir::MinusToPlus ? Side::Minus : Side::Plus;
                    if (*side_before != need_before || *side_after != opposite(need_before))
                        report.add(Severity::Error, loc, "direction disagrees with face sides");
                }
            }
        }
    }

    report.metrics["crossings"] = static_cast<long long>(d.crossings.size());
    report.metrics["marks"] = static_cast<long long>(d.marks.size());
    return report;
}

// === Builders ===

AxisDiagram round_unknot() {
    AxisDiagram d;
    d.name = "unknot";
    d.edges[0] = EdgeData{};  // free loop
    d.next_id = 1;
    return d;
}

namespace {

// Shared helper: a stack of 2-strand crossings c_0..c_{k-1} between two
// columns, closed off by caps or closure arcs. Used by the named builders;
// the general renderer lives in threading.cpp.
}  // namespace

AxisDiagram trefoil_diagram(bool mirrored) {
    // Closure of sigma_1^3 with three stacked crossings.
    // Slots: 0=NE 1=NW 2=SW 3=SE (CCW); strands run downward.
    AxisDiagram d;
    d.name = mirrored ? "trefoil-mirror" : "trefoil";
    const int over = mirrored ? 2 : 1;
    for (int i = 0; i < 3; ++i) d.crossings[i] = CrossingData{{-1, -1, -1, -1}, over};
    // Edges between consecutive crossings: left (SW->NW) and right (SE->NE).
    // e0,e1: X0->X1; e2,e3: X1->X2; e4: left closure X2->X0; e5: right closure.
    auto connect = [&](int eid, int c_from, int slot_from, int c_to, int slot_to) {
        d.edges[eid] = EdgeData{EdgeEnd{c_from, slot_from}, EdgeEnd{c_to, slot_to}, {}};
        d.crossings[c_from].ends[static_cast<std::size_t>(slot_from)] = eid;
        d.crossings[c_to].ends[static_cast<std::size_t>(slot_to)] = eid;
    };
    connect(0, 0, 2, 1, 1);  // X0.SW -> X1.NW
    connect(1, 0, 3, 1, 0);  // X0.SE -> X1.NE
    connect(2, 1, 2, 2, 1);
    connect(3, 1, 3, 2, 0);
    connect(4, 2, 2, 0, 1);  // left closure X2.SW -> X0.NW
    connect(5, 2, 3, 0, 0);  // right closure X2.SE -> X0.NE
    d.next_id = 6;
    return d;
}

AxisDiagram twist_knot_diagram(int twists) {
    // Four-strand plat: clasp sigma_1^2 above a twist region sigma_2^twists,
    // capped (1,2),(3,4) top and bottom. For odd 'twists' this is the standard
    // twist-knot family (trefoil, 5_2, 7_2, ...); figure-eight style diagrams
    // come from the even members with a mirrored clasp.
    if (twists < 1) fail(ErrorCode::IndexOutOfRange, "twist region needs at least one crossing");
    AxisDiagram d;
    d.name = "twist" + std::to_string(twists);

    // Build as a vertical stack of crossings on 4 columns. Each crossing
    // occupies two adjacent columns; others run straight past (no vertices).
    // We synthesize edges column by column.
    struct Row {
        int col;   // crossing between col and col+1 (1-based: 1..3)
        int over;  // over flag
    };
    // Twist region between the middle strands, then the clasp; bottom caps are
    // nested (2,3),(1,4) so the clasp hooks two different caps.
    std::vector<Row> rows;
    for (int i = 0; i < twists; ++i) rows.push_back({2, 1});
    rows.push_back({1, 2});
    rows.push_back({1, 2});

    const int ncols = 4;
    std::vector<int> cur(ncols + 1, -1);  // pending edge id per column (1-based)
    auto fresh_edge = [&]() { return d.fresh_id(); };

    // Top caps: (1,2) and (3,4).
    {
        int e12 = fresh_edge(), e34 = fresh_edge();
        cur[1] = e12;
        cur[2] = e12;
        cur[3] = e34;
        cur[4] = e34;
    }
    std::map<int, std::pair<EdgeEnd, EdgeEnd>> edge_ends;  // collected ends
    std::map<int, bool> edge_started;  // whether 'from' end was set
    auto set_end = [&](int eid, EdgeEnd end, bool as_from) {
        if (as_from) edge_ends[eid].first = end;
        else edge_ends[eid].second = end;
        edge_started[eid] = true;
    };
    // Cap edges: both ends attach below; orientation chosen when attaching.
    // Track, per column, whether the pending edge runs downward (true) or
    // upward (false); strands alternate because caps reverse direction.
    std::vector<bool> down(ncols + 1, false);
    down[1] = true;
    down[2] = false;
    down[3] = true;
    down[4] = false;

    int next_cross = 1000;
    for (const Row& row : rows) {
        int cid = next_cross++;
        d.crossings[cid] = CrossingData{{-1, -1, -1, -1}, row.over};
        int cl = row.col, cr = row.col + 1;
        // Slots: 0=NE 1=NW 2=SW 3=SE. Attach pending edges at the top.
        auto attach_top = [&](int col, int slot) {
            int eid = cur[col];
            // A downward strand arrives at the top of the crossing (to-end);
            // an upward strand leaves from it (from-end).
            set_end(eid, EdgeEnd{cid, slot}, !down[col]);
            d.crossings[cid].ends[static_cast<std::size_t>(slot)] = eid;
        };
        attach_top(cl, 1);  // NW
        attach_top(cr, 0);  // NE
        // New pending edges at the bottom; strands swap columns.
        int el = fresh_edge(), er = fresh_edge();
        auto attach_bottom = [&](int eid, int slot, bool downward) {
            set_end(eid, EdgeEnd{cid, slot}, downward);
            d.crossings[cid].ends[static_cast<std::size_t>(slot)] = eid;
        };
        // Strand entering at NW (col cl) exits SE (col cr) and vice versa.
        bool down_l = down[cl], down_r = down[cr];
        attach_bottom(er, 3, down_l);  // SE continues the NW strand
        attach_bottom(el, 2, down_r);  // SW continues the NE strand
        cur[cl] = el;
        cur[cr] = er;
        down[cl] = down_r;
        down[cr] = down_l;
    }

    // Bottom caps join (1,2) and (3,4): merge the pending edges pairwise.
    auto merge_bottom = [&](int ca, int cb) {
        int ea = cur[ca], eb = cur[cb];
        if (!down[ca]) {
            std::swap(ea, eb);
            std::swap(ca, cb);
        }
        if (!down[ca] || down[cb])
            fail(ErrorCode::Internal, "plat cap flows do not close up");
        if (ea == eb) {
            edge_ends[ea] = {EdgeEnd{}, EdgeEnd{}};  // free loop column pair
            return;
        }
        // ea flows downward (from-end attached above); eb flows upward
        // (to-end attached above). Fuse into one edge from ea.from to eb.to.
        EdgeEnd ea_from = edge_ends[ea].first;
        EdgeEnd eb_to = edge_ends[eb].second;
        edge_ends[ea] = {ea_from, eb_to};
        if (eb_to.crossing >= 0)
            d.crossings.at(eb_to.crossing).ends[static_cast<std::size_t>(eb_to.slot)] = ea;
        edge_ends.erase(eb);
    };
    merge_bottom(2, 3);
    merge_bottom(1, 4);

    for (const auto& [eid, ends] : edge_ends) d.edges[eid] = EdgeData{ends.first, ends.second, {}};
    return d;
}

}  // namespace braidloom
