#include "braidloom/moves.hpp"

#include <algorithm>
#include <sstream>

namespace braidloom {

namespace {

int mark_count_before_gap(const EdgeData& e, int gap) {
    int n = 0;
    for (int i = 0; i < gap && i < static_cast<int>(e.points.size()); ++i)
        if (e.points[static_cast<std::size_t>(i)].kind == EdgePoint::Kind::AxisMark) ++n;
    return n;
}

void require_gap(const EdgeData& e, int gap, const char* what) {
    if (gap < 0 || gap > static_cast<int>(e.points.size()))
        fail(ErrorCode::IndexOutOfRange, std::string(what) + ": gap out of range");
}

// Updates the crossing slot (if any) referencing an edge end to `neid`.
void repoint(AxisDiagram& d, const EdgeEnd& end, int neid) {
    if (end.crossing < 0) return;
    d.crossings.at(end.crossing).ends[static_cast<std::size_t>(end.slot)] = neid;
}

void adopt_points(AxisDiagram& d, const std::vector<EdgePoint>& pts, int eid) {
    for (const auto& p : pts) {
        if (p.kind == EdgePoint::Kind::AxisMark) d.marks.at(p.id).edge = eid;
        else d.overpass.at(p.id).edge = eid;
    }
}

// Splits edge `eid` at point-gap `gap`. Returns (front id, back id); the cut
// ends dangle (front.to and back.from unset) and must be attached by the
// caller. A free loop is rotated instead: returns (eid, eid) with both ends
// dangling and the cut at the point-list boundary.
std::pair<int, int> split_edge(AxisDiagram& d, int eid, int gap) {
    EdgeData& e = d.edges.at(eid);
    require_gap(e, gap, "split");
    if (e.from.crossing < 0 && e.to.crossing < 0) {
        std::rotate(e.points.begin(), e.points.begin() + gap, e.points.end());
        return {eid, eid};
    }
    int back = d.fresh_id();
    EdgeData nb;
    nb.from = EdgeEnd{};
    nb.to = e.to;
    nb.points.assign(e.points.begin() + gap, e.points.end());
    e.points.erase(e.points.begin() + gap, e.points.end());
    e.to = EdgeEnd{};
    repoint(d, nb.to, back);
    d.edges[back] = nb;
    adopt_points(d, d.edges[back].points, back);
    return {eid, back};
}

// Joins e1 (dangling 'to') with e2 (dangling 'from') into e1; e2 disappears.
// If e1 == e2 the arc closes into a free loop.
int join_edges(AxisDiagram& d, int e1, int e2) {
    if (e1 == e2) {
        EdgeData& e = d.edges.at(e1);
        e.from = EdgeEnd{-1, -1};
        e.to = EdgeEnd{-1, -1};
        return e1;
    }
    EdgeData& a = d.edges.at(e1);
    EdgeData b = d.edges.at(e2);
    a.to = b.to;
    a.points.insert(a.points.end(), b.points.begin(), b.points.end());
    repoint(d, b.to, e1);
    d.edges.erase(e2);
    adopt_points(d, d.edges.at(e1).points, e1);
    return e1;
}

struct BoundarySite {
    Dart dart;
    bool aligned;  // dart direction equals edge orientation
};

// Face-boundary dart of edge `eid` whose mark-segment contains point-gap
// `gap`, bounding face `face`; side_hint picks the reversed side when both
// sides of the segment bound the same face.
BoundarySite find_site(const CombinedMap& map, int eid, int gap, int face, int side_hint,
                       const char* what) {
    const EdgeData& e = map.diagram().edges.at(eid);
    require_gap(e, gap, what);
    int seg = mark_count_before_gap(e, gap);
    Dart fwd{Dart::Kind::DiagramSeg, eid, seg, -1, true};
    Dart rev = fwd;
    rev.forward = false;
    bool f_ok = map.face_left(fwd) == face;
    bool r_ok = map.face_left(rev) == face;
    if (!f_ok && !r_ok)
        fail(ErrorCode::SiteMismatch, std::string(what) + ": edge " + std::to_string(eid) +
                                          " does not bound face " + std::to_string(face));
    bool use_fwd = f_ok && (!r_ok || side_hint == 0);
    return BoundarySite{use_fwd ? fwd : rev, use_fwd};
}

AxisDiagram do_r1_insert(const AxisDiagram& in, const R1Insert& e) {
    AxisDiagram d = in;
    if (!d.edges.count(e.edge)) fail(ErrorCode::SiteMismatch, "r1+: no such edge");
    auto [front, back] = split_edge(d, e.edge, e.at);
    if (front == back) fail(ErrorCode::SiteMismatch, "r1+: kinking a free loop unsupported");
    int x = d.fresh_id();
    int loop = d.fresh_id();
    CrossingData c;
    c.over = e.over;
    if (e.side == 0) {
        // Loop on the left of the strand direction:
        // slots (0,1,2,3) = (back out, loop out, loop in, front in).
        c.ends = {back, loop, loop, front};
        d.edges[loop] = EdgeData{EdgeEnd{x, 1}, EdgeEnd{x, 2}, {}};
        d.edges.at(front).to = EdgeEnd{x, 3};
        d.edges.at(back).from = EdgeEnd{x, 0};
    } else {
        // slots = (loop out, back out, front in, loop in).
        c.ends = {loop, back, front, loop};
        d.edges[loop] = EdgeData{EdgeEnd{x, 0}, EdgeEnd{x, 3}, {}};
        d.edges.at(front).to = EdgeEnd{x, 2};
        d.edges.at(back).from = EdgeEnd{x, 1};
    }
    d.crossings[x] = c;
    return d;
}

AxisDiagram do_r1_delete(const AxisDiagram& in, const R1Delete& ev) {
    AxisDiagram d = in;
    auto cit = d.crossings.find(ev.crossing);
    if (cit == d.crossings.end()) fail(ErrorCode::SiteMismatch, "r1-: no such crossing");
    const auto ends = cit->second.ends;
    int loop = -1, s_lo = -1;
    for (int s = 0; s < 4; ++s) {
        int eid = ends[static_cast<std::size_t>(s)];
        const EdgeData& le = d.edges.at(eid);
        bool fwd = le.from == EdgeEnd{ev.crossing, s} && le.to == EdgeEnd{ev.crossing, (s + 1) % 4};
        bool bwd = le.to == EdgeEnd{ev.crossing, s} && le.from == EdgeEnd{ev.crossing, (s + 1) % 4};
        if (fwd || bwd) {
            loop = eid;
            s_lo = s;
            break;
        }
    }
    if (loop < 0) fail(ErrorCode::SiteMismatch, "r1-: crossing has no kink loop");
    if (!d.edges.at(loop).points.empty())
        fail(ErrorCode::SiteMismatch, "r1-: kink loop carries marked points");
    {
        CombinedMap map(in);
        bool empty_monogon = false;
        for (bool fw : {true, false}) {
            Dart dl{Dart::Kind::DiagramSeg, loop, 0, -1, fw};
            int f = map.face_left(dl);
            if (f >= 0 && map.faces()[static_cast<std::size_t>(f)].size() == 1)
                empty_monogon = true;
        }
        if (!empty_monogon) fail(ErrorCode::SiteMismatch, "r1-: monogon face is not empty");
    }
    int sa = (s_lo + 2) % 4, sb = (s_lo + 3) % 4;
    int ea = ends[static_cast<std::size_t>(sa)], eb = ends[static_cast<std::size_t>(sb)];
    int front = -1, back = -1;
    if (d.edges.at(ea).to == EdgeEnd{ev.crossing, sa}) front = ea;
    else back = ea;
    if (d.edges.at(eb).to == EdgeEnd{ev.crossing, sb}) front = eb;
    else back = eb;
    if (front < 0 || back < 0) fail(ErrorCode::SiteMismatch, "r1-: incoherent kink");
    d.edges.erase(loop);
    d.crossings.erase(ev.crossing);
    d.edges.at(front).to = EdgeEnd{};
    d.edges.at(back).from = EdgeEnd{};
    join_edges(d, front, back);
    return d;
}

AxisDiagram do_r2_insert(const AxisDiagram& in, const R2Insert& ev) {
    if (ev.edge_a == ev.edge_b)
        fail(ErrorCode::SiteMismatch, "r2+: self-poke unsupported; subdivide first");
    CombinedMap map(in);
    if (ev.face < 0 || ev.face >= static_cast<int>(map.faces().size()))
        fail(ErrorCode::SiteMismatch, "r2+: no such face");
    BoundarySite sa = find_site(map, ev.edge_a, ev.at_a, ev.face, 0, "r2+ (a)");
    BoundarySite sb = find_site(map, ev.edge_b, ev.at_b, ev.face, 0, "r2+ (b)");

    AxisDiagram d = in;
    auto [a1, a2] = split_edge(d, ev.edge_a, ev.at_a);
    if (a1 == a2) fail(ErrorCode::SiteMismatch, "r2+: poking a free loop unsupported");
    auto [b1, b2] = split_edge(d, ev.edge_b, ev.at_b);
    if (b1 == b2) fail(ErrorCode::SiteMismatch, "r2+: poking across a free loop unsupported");
    int x = d.fresh_id(), y = d.fresh_id();
    int am = d.fresh_id(), bm = d.fresh_id();
    int flag = ev.a_over ? 1 : 2;
    // Walk-frame slot layout at both crossings: (0,1,2,3) = (E,N,W,S);
    // the a-passage occupies (0,2), the b-passage (1,3). X carries the
    // outgoing pass (a1, am); Y the return pass (am, a2). The hook direction
    // is forced by a's orientation: the return pass lies on the side where a
    // continues, so for an orientation-aligned site Y precedes X along the
    // walk of b (hook-south) and follows it otherwise (hook-north).
    CrossingData cx, cy;
    cx.over = flag;
    cy.over = flag;
    cx.ends = {am, -1, a1, -1};
    cy.ends = {am, -1, a2, -1};
    d.edges.at(a1).to = EdgeEnd{x, 2};
    d.edges.at(a2).from = EdgeEnd{y, 2};
    d.edges[am] = EdgeData{EdgeEnd{x, 0}, EdgeEnd{y, 0}, {}};
    if (!sa.aligned) {
        // Hook-north: X south of Y; bm leaves X northward (slot 1).
        if (sb.aligned) {
            cx.ends[3] = b1;
            cx.ends[1] = bm;
            cy.ends[3] = bm;
            cy.ends[1] = b2;
            d.edges.at(b1).to = EdgeEnd{x, 3};
            d.edges[bm] = EdgeData{EdgeEnd{x, 1}, EdgeEnd{y, 3}, {}};
            d.edges.at(b2).from = EdgeEnd{y, 1};
        } else {
            cx.ends[3] = b2;
            cx.ends[1] = bm;
            cy.ends[3] = bm;
            cy.ends[1] = b1;
            d.edges.at(b1).to = EdgeEnd{y, 1};
            d.edges[bm] = EdgeData{EdgeEnd{y, 3}, EdgeEnd{x, 1}, {}};
            d.edges.at(b2).from = EdgeEnd{x, 3};
        }
    } else {
        // Hook-south: X north of Y; bm leaves X southward (slot 3).
        if (sb.aligned) {
            cx.ends[1] = b2;
            cx.ends[3] = bm;
            cy.ends[1] = bm;
            cy.ends[3] = b1;
            d.edges.at(b2).from = EdgeEnd{x, 1};
            d.edges[bm] = EdgeData{EdgeEnd{y, 1}, EdgeEnd{x, 3}, {}};
            d.edges.at(b1).to = EdgeEnd{y, 3};
        } else {
            cx.ends[1] = b1;
            cx.ends[3] = bm;
            cy.ends[1] = bm;
            cy.ends[3] = b2;
            d.edges.at(b1).to = EdgeEnd{x, 1};
            d.edges[bm] = EdgeData{EdgeEnd{x, 3}, EdgeEnd{y, 1}, {}};
            d.edges.at(b2).from = EdgeEnd{y, 3};
        }
    }
    d.crossings[x] = cx;
    d.crossings[y] = cy;
    return d;
}

AxisDiagram do_r2_delete(const AxisDiagram& in, const R2Delete& ev) {
    if (!in.crossings.count(ev.crossing_a) || !in.crossings.count(ev.crossing_b) ||
        ev.crossing_a == ev.crossing_b)
        fail(ErrorCode::SiteMismatch, "r2-: bad crossing pair");
    CombinedMap map(in);
    int am = -1, bm = -1;
    for (std::size_t f = 0; f < map.faces().size(); ++f) {
        const auto& cyc = map.faces()[f];
        if (cyc.size() != 2) continue;
        if (cyc[0].kind != Dart::Kind::DiagramSeg || cyc[1].kind != Dart::Kind::DiagramSeg)
            continue;
        int e1 = cyc[0].edge, e2 = cyc[1].edge;
        if (e1 == e2) continue;
        const EdgeData& d1 = in.edges.at(e1);
        const EdgeData& d2 = in.edges.at(e2);
        auto spans = [&](const EdgeData& e) {
            return (e.from.crossing == ev.crossing_a && e.to.crossing == ev.crossing_b) ||
                   (e.from.crossing == ev.crossing_b && e.to.crossing == ev.crossing_a);
        };
        if (spans(d1) && spans(d2) && d1.points.empty() && d2.points.empty()) {
            am = e1;
            bm = e2;
            break;
        }
    }
    if (am < 0) fail(ErrorCode::SiteMismatch, "r2-: no empty bigon between the crossings");

    AxisDiagram d = in;
    auto strand_parity = [&](int crossing, int eid) {
        const CrossingData& c = d.crossings.at(crossing);
        for (int s = 0; s < 4; ++s)
            if (c.ends[static_cast<std::size_t>(s)] == eid) return s % 2;
        fail(ErrorCode::Internal, "r2-: edge not at crossing");
    };
    {
        const CrossingData& ca = d.crossings.at(ev.crossing_a);
        const CrossingData& cb = d.crossings.at(ev.crossing_b);
        bool am_over_a = (ca.over == 1) == (strand_parity(ev.crossing_a, am) == 0);
        bool am_over_b = (cb.over == 1) == (strand_parity(ev.crossing_b, am) == 0);
        if (am_over_a != am_over_b)
            fail(ErrorCode::SiteMismatch, "r2-: clasp pattern, strands alternate");
    }
    auto outer_of = [&](int crossing, int inner) {
        const CrossingData& c = d.crossings.at(crossing);
        for (int s = 0; s < 4; ++s)
            if (c.ends[static_cast<std::size_t>(s)] == inner)
                return c.ends[static_cast<std::size_t>((s + 2) % 4)];
        fail(ErrorCode::Internal, "r2-: edge not at crossing");
    };
    int a_out1 = outer_of(ev.crossing_a, am), a_out2 = outer_of(ev.crossing_b, am);
    int b_out1 = outer_of(ev.crossing_a, bm), b_out2 = outer_of(ev.crossing_b, bm);
    if (a_out1 == am || a_out2 == am || b_out1 == bm || b_out2 == bm ||
        a_out1 == bm || a_out2 == bm || b_out1 == am || b_out2 == am)
        fail(ErrorCode::SiteMismatch, "r2-: degenerate bigon");

    auto fuse_through = [&](int inner, int o1, int o2) {
        int front = -1, back = -1;
        auto classify = [&](int eid) {
            const EdgeData& e = d.edges.at(eid);
            if ((e.to.crossing == ev.crossing_a || e.to.crossing == ev.crossing_b)) front = eid;
            else back = eid;
        };
        classify(o1);
        classify(o2);
        if (front < 0 || back < 0 || front == back)
            fail(ErrorCode::SiteMismatch, "r2-: incoherent strand at bigon");
        d.edges.erase(inner);
        d.edges.at(front).to = EdgeEnd{};
        d.edges.at(back).from = EdgeEnd{};
        return join_edges(d, front, back);
    };
    int a_joined = fuse_through(am, a_out1, a_out2);
    if (!d.edges.count(b_out1)) b_out1 = a_joined;
    if (!d.edges.count(b_out2)) b_out2 = a_joined;
    fuse_through(bm, b_out1, b_out2);
    d.crossings.erase(ev.crossing_a);
    d.crossings.erase(ev.crossing_b);
    return d;
}

AxisDiagram do_r3(const AxisDiagram& in, const R3Slide& ev) {
    CombinedMap map(in);
    if (ev.face < 0 || ev.face >= static_cast<int>(map.faces().size()))
        fail(ErrorCode::SiteMismatch, "r3: no such face");
    const auto& cyc = map.faces()[static_cast<std::size_t>(ev.face)];
    if (cyc.size() != 3) fail(ErrorCode::SiteMismatch, "r3: face is not a triangle");
    for (const Dart& dd : cyc)
        if (dd.kind != Dart::Kind::DiagramSeg)
            fail(ErrorCode::SiteMismatch, "r3: triangle touches the axis");
    int inner[3];
    for (int i = 0; i < 3; ++i) {
        inner[i] = cyc[static_cast<std::size_t>(i)].edge;
        const EdgeData& e = in.edges.at(inner[i]);
        if (!e.points.empty()) fail(ErrorCode::SiteMismatch, "r3: triangle side carries points");
        if (e.from.crossing < 0 || e.to.crossing < 0)
            fail(ErrorCode::SiteMismatch, "r3: triangle side not between crossings");
    }
    if (inner[0] == inner[1] || inner[1] == inner[2] || inner[0] == inner[2])
        fail(ErrorCode::SiteMismatch, "r3: degenerate triangle");
    std::array<int, 3> corner{};
    for (int i = 0; i < 3; ++i) {
        auto hv = map.head(cyc[static_cast<std::size_t>(i)]);
        if (!hv || hv->kind != MapVertex::Kind::Crossing)
            fail(ErrorCode::SiteMismatch, "r3: corner is not a crossing");
        corner[static_cast<std::size_t>(i)] = hv->id;
    }
    if (corner[0] == corner[1] || corner[1] == corner[2] || corner[0] == corner[2])
        fail(ErrorCode::SiteMismatch, "r3: corners not distinct");

    AxisDiagram d = in;
    auto strand_index_of_edge = [&](int eid) {
        for (int i = 0; i < 3; ++i)
            if (inner[i] == eid) return i;
        return -1;
    };
    int over_count[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        const CrossingData& cd = d.crossings.at(corner[static_cast<std::size_t>(i)]);
        int winner = -1;
        for (int s = 0; s < 4; ++s) {
            int si = strand_index_of_edge(cd.ends[static_cast<std::size_t>(s)]);
            if (si < 0) continue;
            if ((cd.over == 1) == (s % 2 == 0)) winner = si;
        }
        if (winner < 0) fail(ErrorCode::SiteMismatch, "r3: corner misses inner strands");
        over_count[winner] += 1;
    }
    if (over_count[0] == 1 && over_count[1] == 1 && over_count[2] == 1)
        fail(ErrorCode::SiteMismatch, "r3: cyclic over pattern admits no slide");

    struct EndMove {
        int edge;
        bool from_side;
        EdgeEnd where;
    };
    std::vector<EndMove> moves;
    for (int i = 0; i < 3; ++i) {
        const EdgeData e = d.edges.at(inner[i]);
        int c_first = e.from.crossing, c_second = e.to.crossing;
        int out_first = e.from.slot;             // strand leaves c_first here
        int in_first = (out_first + 2) % 4;      // and used to arrive here
        int in_second = e.to.slot;
        int out_second = (in_second + 2) % 4;
        int pre = d.crossings.at(c_first).ends[static_cast<std::size_t>(in_first)];
        int post = d.crossings.at(c_second).ends[static_cast<std::size_t>(out_second)];
        // After the slide the strand passes c_second first.
        moves.push_back({pre, false, EdgeEnd{c_second, in_second}});
        moves.push_back({inner[i], true, EdgeEnd{c_second, out_second}});
        moves.push_back({inner[i], false, EdgeEnd{c_first, in_first}});
        moves.push_back({post, true, EdgeEnd{c_first, out_first}});
    }
    for (const auto& mv : moves) {
        EdgeData& e = d.edges.at(mv.edge);
        if (mv.from_side) e.from = mv.where;
        else e.to = mv.where;
    }
    for (int i = 0; i < 3; ++i)
        for (auto& s : d.crossings.at(corner[static_cast<std::size_t>(i)]).ends) s = -1;
    for (const auto& [eid, e] : d.edges) {
        for (const EdgeEnd* end : {&e.from, &e.to}) {
            if (end->crossing < 0) continue;
            for (int i = 0; i < 3; ++i)
                if (end->crossing == corner[static_cast<std::size_t>(i)])
                    d.crossings.at(end->crossing).ends[static_cast<std::size_t>(end->slot)] = eid;
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int s = 0; s < 4; ++s)
            if (d.crossings.at(corner[static_cast<std::size_t>(i)]).ends[static_cast<std::size_t>(s)] < 0)
                fail(ErrorCode::Internal, "r3: rewiring left an empty slot");
    return d;
}

AxisDiagram do_axis2_insert(const AxisDiagram& in, const AxisSlideInsert& ev) {
    if (in.axis_order.empty())
        fail(ErrorCode::SiteMismatch, "axis2+: no axis arc to slide across");
    CombinedMap map(in);
    const int axis_n = static_cast<int>(in.axis_order.size());
    if (ev.axis_pos < 0 || ev.axis_pos >= axis_n)
        fail(ErrorCode::SiteMismatch, "axis2+: axis arc out of range");
    const EdgeData& e0 = in.edges.at(ev.edge);
    require_gap(e0, ev.at, "axis2+");
    int seg = mark_count_before_gap(e0, ev.at);
    Dart ax_f{Dart::Kind::AxisArc, -1, -1, ev.axis_pos, true};
    Dart ax_r = ax_f;
    ax_r.forward = false;
    int face = -1;
    bool edge_dart_forward = true, axis_walk_forward = true;
    for (bool efw : {true, false}) {
        if (ev.side_hint == 1 && efw) continue;
        Dart de{Dart::Kind::DiagramSeg, ev.edge, seg, -1, efw};
        int f = map.face_left(de);
        if (f == map.face_left(ax_f)) {
            face = f;
            edge_dart_forward = efw;
            axis_walk_forward = true;
            break;
        }
        if (f == map.face_left(ax_r)) {
            face = f;
            edge_dart_forward = efw;
            axis_walk_forward = false;
            break;
        }
    }
    if (face < 0) fail(ErrorCode::SiteMismatch, "axis2+: edge and axis arc share no face");

    auto side_seg = map.segment_side(ev.edge, seg);
    if (!side_seg) fail(ErrorCode::SiteMismatch, "axis2+: segment side undefined");

    AxisDiagram d = in;
    int m_first = d.fresh_id();
    int m_second = d.fresh_id();
    MarkDir dir_first = *side_seg == Side::Minus ? MarkDir::MinusToPlus : MarkDir::PlusToMinus;
    MarkDir dir_second =
        dir_first == MarkDir::MinusToPlus ? MarkDir::PlusToMinus : MarkDir::MinusToPlus;
    auto hflag = [](MarkDir dir) {
        return dir == MarkDir::MinusToPlus ? HFlag::Over : HFlag::Under;
    };
    d.marks[m_first] = AxisMarkData{ev.edge, dir_first, hflag(dir_first)};
    d.marks[m_second] = AxisMarkData{ev.edge, dir_second, hflag(dir_second)};
    EdgeData& e = d.edges.at(ev.edge);
    e.points.insert(e.points.begin() + ev.at,
                    {EdgePoint{EdgePoint::Kind::AxisMark, m_first},
                     EdgePoint{EdgePoint::Kind::AxisMark, m_second}});
    // Hook direction as in r2+: for an orientation-aligned edge dart the
    // return crossing (m_second) comes first along the axis walk.
    int first_axis = edge_dart_forward ? m_second : m_first;
    int second_axis = first_axis == m_first ? m_second : m_first;
    std::vector<int> na;
    for (int i = 0; i < axis_n; ++i) {
        na.push_back(d.axis_order[static_cast<std::size_t>(i)]);
        if (i == ev.axis_pos) {
            if (axis_walk_forward) {
                na.push_back(first_axis);
                na.push_back(second_axis);
            } else {
                na.push_back(second_axis);
                na.push_back(first_axis);
            }
        }
    }
    d.axis_order = na;
    return d;
}

AxisDiagram do_axis2_delete(const AxisDiagram& in, const AxisSlideDelete& ev) {
    auto ia = in.marks.find(ev.mark_a), ib = in.marks.find(ev.mark_b);
    if (ia == in.marks.end() || ib == in.marks.end() || ev.mark_a == ev.mark_b)
        fail(ErrorCode::SiteMismatch, "axis2-: bad mark pair");
    if (ia->second.edge != ib->second.edge)
        fail(ErrorCode::SiteMismatch, "axis2-: marks on different edges");
    if (ia->second.dir == ib->second.dir)
        fail(ErrorCode::SiteMismatch, "axis2-: marks cross the same way");
    const EdgeData& e = in.edges.at(ia->second.edge);
    int pa = -1, pb = -1;
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        if (e.points[i].kind != EdgePoint::Kind::AxisMark) continue;
        if (e.points[i].id == ev.mark_a) pa = static_cast<int>(i);
        if (e.points[i].id == ev.mark_b) pb = static_cast<int>(i);
    }
    if (pa < 0 || pb < 0 || std::abs(pa - pb) != 1)
        fail(ErrorCode::SiteMismatch, "axis2-: marks not adjacent on the edge");
    const int axis_n = static_cast<int>(in.axis_order.size());
    int qa = -1, qb = -1;
    for (int i = 0; i < axis_n; ++i) {
        if (in.axis_order[static_cast<std::size_t>(i)] == ev.mark_a) qa = i;
        if (in.axis_order[static_cast<std::size_t>(i)] == ev.mark_b) qb = i;
    }
    if (qa < 0 || qb < 0 || ((qa + 1) % axis_n != qb && (qb + 1) % axis_n != qa))
        fail(ErrorCode::SiteMismatch, "axis2-: marks not adjacent along axis");
    {
        CombinedMap map(in);
        int marks_before = 0;
        for (int i = 0; i < std::max(pa, pb); ++i)
            if (e.points[static_cast<std::size_t>(i)].kind == EdgePoint::Kind::AxisMark)
                ++marks_before;
        bool found = false;
        for (bool fw : {true, false}) {
            Dart de{Dart::Kind::DiagramSeg, ia->second.edge, marks_before, -1, fw};
            int f = map.face_left(de);
            if (f >= 0 && map.faces()[static_cast<std::size_t>(f)].size() == 2) found = true;
        }
        if (!found) fail(ErrorCode::SiteMismatch, "axis2-: bigon with axis is not empty");
    }
    AxisDiagram d = in;
    EdgeData& ed = d.edges.at(ia->second.edge);
    ed.points.erase(std::remove_if(ed.points.begin(), ed.points.end(),
                                   [&](const EdgePoint& p) {
                                       return p.kind == EdgePoint::Kind::AxisMark &&
                                              (p.id == ev.mark_a || p.id == ev.mark_b);
                                   }),
                    ed.points.end());
    d.marks.erase(ev.mark_a);
    d.marks.erase(ev.mark_b);
    d.axis_order.erase(std::remove_if(d.axis_order.begin(), d.axis_order.end(),
                                      [&](int m) { return m == ev.mark_a || m == ev.mark_b; }),
                       d.axis_order.end());
    return d;
}

AxisDiagram do_axis3(const AxisDiagram& in, const AxisCrossingSlide& ev) {
    auto cit = in.crossings.find(ev.crossing);
    if (cit == in.crossings.end()) fail(ErrorCode::SiteMismatch, "axis3: no such crossing");
    auto ma_it = in.marks.find(ev.mark_a), mb_it = in.marks.find(ev.mark_b);
    if (ma_it == in.marks.end() || mb_it == in.marks.end())
        fail(ErrorCode::SiteMismatch, "axis3: no such marks");
    int ea = ma_it->second.edge, eb = mb_it->second.edge;

    auto near_slot = [&](int eid, int mark) {
        const EdgeData& e = in.edges.at(eid);
        bool via_from = e.from.crossing == ev.crossing;
        bool via_to = e.to.crossing == ev.crossing;
        if (!via_from && !via_to)
            fail(ErrorCode::SiteMismatch, "axis3: mark edge not at the crossing");
        bool front_is_mark = !e.points.empty() &&
                             e.points.front().kind == EdgePoint::Kind::AxisMark &&
                             e.points.front().id == mark;
        bool back_is_mark = !e.points.empty() &&
                            e.points.back().kind == EdgePoint::Kind::AxisMark &&
                            e.points.back().id == mark;
        if (via_from && front_is_mark) return e.from.slot;
        if (via_to && back_is_mark) return e.to.slot;
        fail(ErrorCode::SiteMismatch, "axis3: mark not adjacent to the crossing");
    };
    int slot_a = near_slot(ea, ev.mark_a);
    int slot_b = near_slot(eb, ev.mark_b);
    if ((slot_a + 1) % 4 != slot_b && (slot_b + 1) % 4 != slot_a)
        fail(ErrorCode::SiteMismatch, "axis3: marked edges not at a corner");
    const int axis_n = static_cast<int>(in.axis_order.size());
    int qa = -1, qb = -1;
    for (int i = 0; i < axis_n; ++i) {
        if (in.axis_order[static_cast<std::size_t>(i)] == ev.mark_a) qa = i;
        if (in.axis_order[static_cast<std::size_t>(i)] == ev.mark_b) qb = i;
    }
    if (qa < 0 || qb < 0 || ((qa + 1) % axis_n != qb && (qb + 1) % axis_n != qa))
        fail(ErrorCode::SiteMismatch, "axis3: marks not adjacent along axis");

    AxisDiagram d = in;
    const CrossingData& c = d.crossings.at(ev.crossing);
    int ea2 = c.ends[static_cast<std::size_t>((slot_a + 2) % 4)];
    int eb2 = c.ends[static_cast<std::size_t>((slot_b + 2) % 4)];
    auto move_mark = [&](int mark, int from_edge, int to_edge, int to_slot) {
        EdgeData& src = d.edges.at(from_edge);
        src.points.erase(std::remove_if(src.points.begin(), src.points.end(),
                                        [&](const EdgePoint& p) {
                                            return p.kind == EdgePoint::Kind::AxisMark &&
                                                   p.id == mark;
                                        }),
                         src.points.end());
        EdgeData& dst = d.edges.at(to_edge);
        EdgePoint pt{EdgePoint::Kind::AxisMark, mark};
        if (dst.from == EdgeEnd{ev.crossing, to_slot}) dst.points.insert(dst.points.begin(), pt);
        else dst.points.push_back(pt);
        d.marks.at(mark).edge = to_edge;
    };
    move_mark(ev.mark_a, ea, ea2, (slot_a + 2) % 4);
    move_mark(ev.mark_b, eb, eb2, (slot_b + 2) % 4);
    std::swap(d.axis_order[static_cast<std::size_t>(qa)],
              d.axis_order[static_cast<std::size_t>(qb)]);
    return d;
}

AxisDiagram do_birth(const AxisDiagram& in, const BirthLoop& ev) {
    CombinedMap map(in);
    if (ev.face < 0 || ev.face >= static_cast<int>(map.faces().size()))
        fail(ErrorCode::SiteMismatch, "birth: no such face");
    if (!in.marks.empty()) {
        auto it = map.face_sides().find(ev.face);
        if (it != map.face_sides().end() && it->second != ev.side)
            fail(ErrorCode::SiteMismatch, "birth: face is on the other side of the axis");
    }
    AxisDiagram d = in;
    d.edges[d.fresh_id()] = EdgeData{};
    return d;
}

AxisDiagram do_death(const AxisDiagram& in, const DeathLoop& ev) {
    auto it = in.edges.find(ev.edge);
    if (it == in.edges.end()) fail(ErrorCode::SiteMismatch, "death: no such edge");
    if (it->second.from.crossing >= 0 || it->second.to.crossing >= 0)
        fail(ErrorCode::SiteMismatch, "death: component still has crossings");
    if (!it->second.points.empty())
        fail(ErrorCode::SiteMismatch, "death: loop carries marks or overpass points");
    AxisDiagram d = in;
    d.edges.erase(ev.edge);
    return d;
}

AxisDiagram do_saddle(const AxisDiagram& in, const SaddleBand& ev);

AxisDiagram saddle_with_half_twist(const AxisDiagram& in, const SaddleBand& ev) {
    // Anti-parallel band: add a half twist (one kink) on strand a, then run
    // the now-compatible saddle from the kink loop.
    for (int side : {0, 1}) {
        AxisDiagram kinked;
        try {
            kinked = do_r1_insert(in, R1Insert{ev.edge_a, ev.at_a, side, 1});
        } catch (const Error&) {
            continue;
        }
        int loop = kinked.next_id - 1;
        CombinedMap map(kinked);
        const EdgeData& be = kinked.edges.at(ev.edge_b);
        int at_b = std::min(ev.at_b, static_cast<int>(be.points.size()));
        int seg_b = mark_count_before_gap(be, at_b);
        for (bool lf : {true, false}) {
            Dart dl{Dart::Kind::DiagramSeg, loop, 0, -1, lf};
            int f = map.face_left(dl);
            for (bool bf : {true, false}) {
                if (lf != bf) continue;
                Dart db{Dart::Kind::DiagramSeg, ev.edge_b, seg_b, -1, bf};
                if (map.face_left(db) != f) continue;
                try {
                    return do_saddle(kinked, SaddleBand{loop, 0, ev.edge_b, at_b, f, true});
                } catch (const Error&) {
                }
            }
        }
    }
    fail(ErrorCode::NonEmbeddedBand, "saddle: no half-twist configuration embeds the band");
}

// Whether two edges belong to the same connected piece of the diagram graph.
bool same_piece(const AxisDiagram& d, int ea, int eb) {
    if (ea == eb) return true;
    std::set<int> seen{ea};
    std::vector<int> stack{ea};
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        if (e == eb) return true;
        for (const EdgeEnd* end : {&d.edges.at(e).from, &d.edges.at(e).to}) {
            if (end->crossing < 0) continue;
            for (int ne : d.crossings.at(end->crossing).ends)
                if (ne >= 0 && !seen.count(ne)) {
                    seen.insert(ne);
                    stack.push_back(ne);
                }
        }
    }
    return seen.count(eb) > 0;
}

AxisDiagram do_saddle(const AxisDiagram& in, const SaddleBand& ev) {
    CombinedMap map(in);
    if (ev.face < 0 || ev.face >= static_cast<int>(map.faces().size()))
        fail(ErrorCode::SiteMismatch, "saddle: no such face");
    if (ev.edge_a == ev.edge_b && ev.at_a == ev.at_b)
        fail(ErrorCode::SiteMismatch, "saddle: band ends coincide");
    if (!in.edges.count(ev.edge_a) || !in.edges.count(ev.edge_b))
        fail(ErrorCode::SiteMismatch, "saddle: no such edge");
    if (!same_piece(in, ev.edge_a, ev.edge_b)) {
        // Split pieces can always be placed so the band embeds coherently.
        find_site(map, ev.edge_a, ev.at_a, ev.face, 0, "saddle (a)");
        require_gap(in.edges.at(ev.edge_b), ev.at_b, "saddle (b)");
        AxisDiagram d = in;
        auto [a1, a2] = split_edge(d, ev.edge_a, ev.at_a);
        auto [b1, b2] = split_edge(d, ev.edge_b, ev.at_b);
        if (a1 == a2 && b1 == b2) {
            EdgeData& ea = d.edges.at(a1);
            EdgeData eb = d.edges.at(b1);
            ea.points.insert(ea.points.end(), eb.points.begin(), eb.points.end());
            d.edges.erase(b1);
            adopt_points(d, d.edges.at(a1).points, a1);
        } else if (a1 == a2) {
            join_edges(d, b1, a1);
            join_edges(d, b1, b2);
        } else if (b1 == b2) {
            join_edges(d, a1, b1);
            join_edges(d, a1, a2);
        } else {
            join_edges(d, a1, b2);
            join_edges(d, b1, a2);
        }
        return d;
    }
    BoundarySite sa = find_site(map, ev.edge_a, ev.at_a, ev.face, 0, "saddle (a)");
    BoundarySite sb = find_site(map, ev.edge_b, ev.at_b, ev.face,
                                (ev.edge_a == ev.edge_b && !sa.aligned) ? 1 : 0, "saddle (b)");
    // A flat band embeds exactly when the strands run anti-parallel along the
    // face, i.e. both boundary darts have the same orientation-alignment.
    // Parallel strands take the half-twisted band instead.
    if (sa.aligned != sb.aligned) {
        if (ev.compatible)
            fail(ErrorCode::SiteMismatch, "saddle: parallel strands need the half-twisted band");
        return saddle_with_half_twist(in, ev);
    }

    AxisDiagram d = in;
    if (ev.edge_a != ev.edge_b) {
        auto [a1, a2] = split_edge(d, ev.edge_a, ev.at_a);
        auto [b1, b2] = split_edge(d, ev.edge_b, ev.at_b);
        if (a1 == a2 && b1 == b2) {
            // Two free loops fuse into one.
            EdgeData& ea = d.edges.at(a1);
            EdgeData eb = d.edges.at(b1);
            ea.points.insert(ea.points.end(), eb.points.begin(), eb.points.end());
            d.edges.erase(b1);
            adopt_points(d, d.edges.at(a1).points, a1);
        } else if (a1 == a2) {
            join_edges(d, b1, a1);
            join_edges(d, b1, b2);
        } else if (b1 == b2) {
            join_edges(d, a1, b1);
            join_edges(d, a1, a2);
        } else {
            join_edges(d, a1, b2);
            join_edges(d, b1, a2);
        }
    } else {
        const EdgeData& e = d.edges.at(ev.edge_a);
        bool free_loop = e.from.crossing < 0 && e.to.crossing < 0;
        int g1 = std::min(ev.at_a, ev.at_b), g2 = std::max(ev.at_a, ev.at_b);
        if (free_loop) {
            // Splitting a circle at two points yields two circles.
            std::vector<EdgePoint> pts = e.points;
            std::vector<EdgePoint> first(pts.begin() + g1, pts.begin() + g2);
            std::vector<EdgePoint> second(pts.begin() + g2, pts.end());
            second.insert(second.end(), pts.begin(), pts.begin() + g1);
            d.edges.at(ev.edge_a).points = first;
            int nb = d.fresh_id();
            d.edges[nb] = EdgeData{EdgeEnd{}, EdgeEnd{}, second};
            adopt_points(d, d.edges.at(nb).points, nb);
            adopt_points(d, d.edges.at(ev.edge_a).points, ev.edge_a);
        } else {
            auto [p12, p3] = split_edge(d, ev.edge_a, g2);
            auto [p1, p2] = split_edge(d, p12, g1);
            join_edges(d, p2, p2);
            join_edges(d, p1, p3);
        }
    }
    return d;
}

}  // namespace

const char* input_event_name(const InputEvent& e) {
    struct V {
        const char* operator()(const R1Insert&) const { return "r1+"; }
        const char* operator()(const R1Delete&) const { return "r1-"; }
        const char* operator()(const R2Insert&) const { return "r2+"; }
        const char* operator()(const R2Delete&) const { return "r2-"; }
        const char* operator()(const R3Slide&) const { return "r3"; }
        const char* operator()(const AxisSlideInsert&) const { return "axis2+"; }
        const char* operator()(const AxisSlideDelete&) const { return "axis2-"; }
        const char* operator()(const AxisCrossingSlide&) const { return "axis3"; }
        const char* operator()(const BirthLoop&) const { return "birth"; }
        const char* operator()(const DeathLoop&) const { return "death"; }
        const char* operator()(const SaddleBand&) const { return "saddle"; }
    };
    return std::visit(V{}, e);
}

bool is_critical_input(const InputEvent& e) {
    return std::holds_alternative<BirthLoop>(e) || std::holds_alternative<DeathLoop>(e) ||
           std::holds_alternative<SaddleBand>(e);
}

AxisDiagram apply_input_event(const AxisDiagram& d, const InputEvent& e) {
    struct V {
        const AxisDiagram& d;
        AxisDiagram operator()(const R1Insert& ev) const { return do_r1_insert(d, ev); }
        AxisDiagram operator()(const R1Delete& ev) const { return do_r1_delete(d, ev); }
        AxisDiagram operator()(const R2Insert& ev) const { return do_r2_insert(d, ev); }
        AxisDiagram operator()(const R2Delete& ev) const { return do_r2_delete(d, ev); }
        AxisDiagram operator()(const R3Slide& ev) const { return do_r3(d, ev); }
        AxisDiagram operator()(const AxisSlideInsert& ev) const { return do_axis2_insert(d, ev); }
        AxisDiagram operator()(const AxisSlideDelete& ev) const { return do_axis2_delete(d, ev); }
        AxisDiagram operator()(const AxisCrossingSlide& ev) const { return do_axis3(d, ev); }
        AxisDiagram operator()(const BirthLoop& ev) const { return do_birth(d, ev); }
        AxisDiagram operator()(const DeathLoop& ev) const { return do_death(d, ev); }
        AxisDiagram operator()(const SaddleBand& ev) const { return do_saddle(d, ev); }
    };
    return std::visit(V{d}, e);
}

std::vector<AxisDiagram> script_stills(const MovieScript& m) {
    std::vector<AxisDiagram> stills;
    stills.push_back(m.initial);
    for (const auto& e : m.events) stills.push_back(apply_input_event(stills.back(), e));
    return stills;
}

ValidationReport validate_script(const MovieScript& m) {
    ValidationReport report;
    auto r0 = validate_diagram(m.initial);
    if (!r0.pass) {
        report.add(Severity::Error, "initial", "initial diagram invalid");
        for (auto& f : r0.findings) report.findings.push_back(f);
        return report;
    }
    AxisDiagram cur = m.initial;
    int chi = 0;
    report.metrics["components_0"] = components_of(cur);
    for (std::size_t i = 0; i < m.events.size(); ++i) {
        const auto& e = m.events[i];
        std::string loc = "event " + std::to_string(i) + " (" + input_event_name(e) + ")";
        try {
            AxisDiagram next = apply_input_event(cur, e);
            auto rr = validate_diagram(next);
            if (!rr.pass) {
                report.add(Severity::Error, loc, "resulting still invalid");
                for (auto& f : rr.findings)
                    if (f.severity == Severity::Error) report.findings.push_back(f);
                return report;
            }
            if (std::holds_alternative<BirthLoop>(e) || std::holds_alternative<DeathLoop>(e))
                chi += 1;
            if (std::holds_alternative<SaddleBand>(e)) chi -= 1;
            int dc = components_of(next) - components_of(cur);
            report.add(Severity::Info, loc, "components delta " + std::to_string(dc));
            cur = next;
        } catch (const Error& err) {
            report.add(Severity::Error, loc, err.what());
            return report;
        }
    }
    report.metrics["chi"] = chi;
    report.metrics["events"] = static_cast<long long>(m.events.size());
    report.metrics["final_components"] = components_of(cur);
    return report;
}

int script_euler_characteristic(const MovieScript& m) {
    ValidationReport r = validate_script(m);
    if (!r.pass) fail(ErrorCode::InvalidMovie, "script fails validation");
    int chi = 0;
    for (const auto& e : m.events) {
        if (std::holds_alternative<BirthLoop>(e) || std::holds_alternative<DeathLoop>(e)) chi += 1;
        if (std::holds_alternative<SaddleBand>(e)) chi -= 1;
    }
    return chi;
}

}  // namespace braidloom
