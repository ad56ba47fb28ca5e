#include "braidloom/threading.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace braidloom {

namespace {

void attach_from(AxisDiagram& d, int eid, int crossing, int slot) {
    d.edges.at(eid).from = EdgeEnd{crossing, slot};
    d.crossings.at(crossing).ends[static_cast<std::size_t>(slot)] = eid;
}

void attach_to(AxisDiagram& d, int eid, int crossing, int slot) {
    d.edges.at(eid).to = EdgeEnd{crossing, slot};
    d.crossings.at(crossing).ends[static_cast<std::size_t>(slot)] = eid;
}

// front.to and back.from dangle; fuses them into front (free loop if equal).
int fuse(AxisDiagram& d, int front, int back) {
    if (front == back) {
        d.edges.at(front).from = EdgeEnd{};
        d.edges.at(front).to = EdgeEnd{};
        return front;
    }
    EdgeData& a = d.edges.at(front);
    EdgeData b = d.edges.at(back);
    a.to = b.to;
    for (const auto& p : b.points) a.points.push_back(p);
    if (b.to.crossing >= 0)
        d.crossings.at(b.to.crossing).ends[static_cast<std::size_t>(b.to.slot)] = front;
    d.edges.erase(back);
    for (const auto& p : d.edges.at(front).points) {
        if (p.kind == EdgePoint::Kind::AxisMark) d.marks.at(p.id).edge = front;
        else d.overpass.at(p.id).edge = front;
    }
    return front;
}

}  // namespace

// === Canonical rendering ===

AxisDiagram closure_diagram(const BraidWord& w) {
    check_word(w);
    AxisDiagram d;
    d.name = "closure";
    const int n = w.index;
    std::vector<int> top(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> cur(static_cast<std::size_t>(n) + 1, -1);
    for (int c = 1; c <= n; ++c) {
        int e = d.fresh_id();
        d.edges[e] = EdgeData{};
        top[static_cast<std::size_t>(c)] = e;
        cur[static_cast<std::size_t>(c)] = e;
    }
    for (const Letter& l : w.letters) {
        int x = d.fresh_id();
        d.crossings[x] = CrossingData{{-1, -1, -1, -1}, l.sign > 0 ? 1 : 2};
        int cl = l.generator, cr = l.generator + 1;
        attach_to(d, cur[static_cast<std::size_t>(cl)], x, 1);  // NW
        attach_to(d, cur[static_cast<std::size_t>(cr)], x, 0);  // NE
        int el = d.fresh_id(), er = d.fresh_id();
        d.edges[el] = EdgeData{};
        d.edges[er] = EdgeData{};
        attach_from(d, el, x, 2);  // SW
        attach_from(d, er, x, 3);  // SE
        cur[static_cast<std::size_t>(cl)] = el;
        cur[static_cast<std::size_t>(cr)] = er;
    }
    // Markov closure: bottom of column c returns to its top.
    for (int c = 1; c <= n; ++c)
        fuse(d, cur[static_cast<std::size_t>(c)], top[static_cast<std::size_t>(c)]);
    return d;
}

ThreadedDiagram render_closed_braid(const BraidWord& w) {
    check_word(w);
    AxisDiagram d;
    d.name = "braidbox";
    const int n = w.index;
    std::vector<int> top(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> cur(static_cast<std::size_t>(n) + 1, -1);
    for (int c = 1; c <= n; ++c) {
        int e = d.fresh_id();
        d.edges[e] = EdgeData{};
        top[static_cast<std::size_t>(c)] = e;
        cur[static_cast<std::size_t>(c)] = e;
    }
    for (const Letter& l : w.letters) {
        int x = d.fresh_id();
        d.crossings[x] = CrossingData{{-1, -1, -1, -1}, l.sign > 0 ? 1 : 2};
        int cl = l.generator, cr = l.generator + 1;
        attach_to(d, cur[static_cast<std::size_t>(cl)], x, 1);
        attach_to(d, cur[static_cast<std::size_t>(cr)], x, 0);
        int el = d.fresh_id(), er = d.fresh_id();
        d.edges[el] = EdgeData{};
        d.edges[er] = EdgeData{};
        attach_from(d, el, x, 2);
        attach_from(d, er, x, 3);
        cur[static_cast<std::size_t>(cl)] = el;
        cur[static_cast<std::size_t>(cr)] = er;
    }
    std::vector<int> closure_edge(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> u_mark(static_cast<std::size_t>(n) + 1, -1);
    std::vector<int> o_mark(static_cast<std::size_t>(n) + 1, -1);
    for (int c = 1; c <= n; ++c) {
        int e = fuse(d, cur[static_cast<std::size_t>(c)], top[static_cast<std::size_t>(c)]);
        closure_edge[static_cast<std::size_t>(c)] = e;
        int u = d.fresh_id(), o = d.fresh_id();
        u_mark[static_cast<std::size_t>(c)] = u;
        o_mark[static_cast<std::size_t>(c)] = o;
        d.marks[u] = AxisMarkData{e, MarkDir::PlusToMinus, HFlag::Under};
        d.marks[o] = AxisMarkData{e, MarkDir::MinusToPlus, HFlag::Over};
        EdgeData& ed = d.edges.at(e);
        // Walking the closure edge from the box bottom: first under, then over.
        ed.points.push_back(EdgePoint{EdgePoint::Kind::AxisMark, u});
        ed.points.push_back(EdgePoint{EdgePoint::Kind::AxisMark, o});
    }
    // Axis walk runs upward: outermost bottom mark first, then inward, box,
    // then outward above: [u_n .. u_1, o_1 .. o_n].
    for (int c = n; c >= 1; --c) d.axis_order.push_back(u_mark[static_cast<std::size_t>(c)]);
    for (int c = 1; c <= n; ++c) d.axis_order.push_back(o_mark[static_cast<std::size_t>(c)]);

    // One (s,f) pair per strand: s on the return arc between its two
    // h-crossings (that region is D-). The f point must close the over-run:
    // it goes right after the strand's last over passage, which may be inside
    // the box (D+, which is fine for F points). The box form is genuinely
    // threaded only when every strand reads overs-then-unders through the
    // box; otherwise the points are still installed but is_threaded is false.
    Overpasses ov;
    for (int c = 1; c <= n; ++c) {
        int e = closure_edge[static_cast<std::size_t>(c)];
        EdgeData& ed = d.edges.at(e);
        int s = d.fresh_id();
        d.overpass[s] = OverpassPointData{e, true};
        // Return edge points are currently [u, o] (plus any F inserted by
        // other strands at the front); s goes between u and o.
        int upos = -1;
        for (std::size_t i = 0; i < ed.points.size(); ++i)
            if (ed.points[i].kind == EdgePoint::Kind::AxisMark &&
                ed.points[i].id == u_mark[static_cast<std::size_t>(c)])
                upos = static_cast<int>(i);
        ed.points.insert(ed.points.begin() + upos + 1, EdgePoint{EdgePoint::Kind::OverS, s});
        ov.s_points.push_back(s);
    }
    for (int c = 1; c <= n; ++c) {
        // Walk the strand's circuit from its return edge and find the edge
        // after its last leading over passage.
        int e0 = closure_edge[static_cast<std::size_t>(c)];
        StrandPos cur{e0, true};
        int f_edge = e0;
        bool f_after_o = true;  // k = 0: f right after the o mark
        while (true) {
            const EdgeData& ecur = d.edges.at(cur.edge);
            if (ecur.to.crossing < 0) break;  // free loop column
            const CrossingData& cr = d.crossings.at(ecur.to.crossing);
            bool over = (cr.over == 1) == (ecur.to.slot % 2 == 0);
            if (!over) break;
            cur = strand_next(d, cur);
            f_edge = cur.edge;
            f_after_o = false;
            if (cur.edge == e0) break;  // all-over circuit wrapped around
            bool hosts_s = false;
            for (const auto& p : d.edges.at(cur.edge).points)
                if (p.kind == EdgePoint::Kind::OverS) hosts_s = true;
            if (hosts_s) break;  // the over-run ends before the next s point
        }
        int f = d.fresh_id();
        d.overpass[f] = OverpassPointData{f_edge, false};
        EdgeData& ef = d.edges.at(f_edge);
        if (f_after_o) {
            int opos = -1;
            for (std::size_t i = 0; i < ef.points.size(); ++i)
                if (ef.points[i].kind == EdgePoint::Kind::AxisMark &&
                    ef.points[i].id == o_mark[static_cast<std::size_t>(c)])
                    opos = static_cast<int>(i);
            ef.points.insert(ef.points.begin() + opos + 1,
                             EdgePoint{EdgePoint::Kind::OverF, f});
        } else {
            ef.points.insert(ef.points.begin(), EdgePoint{EdgePoint::Kind::OverF, f});
        }
        ov.f_points.push_back(f);
    }
    return ThreadedDiagram{d, ov};
}

// === Overpasses ===

Overpasses overpass_view(const AxisDiagram& d) {
    Overpasses o;
    for (const auto& [id, p] : d.overpass) {
        if (p.is_start) o.s_points.push_back(id);
        else o.f_points.push_back(id);
    }
    return o;
}

namespace {

struct Passage {
    int edge;      // passage happens at this edge's head crossing
    int crossing;
    bool over;
};

// Per component: ordered edges and the passage over/under pattern.
struct ComponentRuns {
    std::vector<int> edges;
    std::vector<Passage> passages;  // passages[i] at head of edges[i]
};

std::vector<ComponentRuns> component_passages(const AxisDiagram& d) {
    std::vector<ComponentRuns> out;
    for (const auto& comp : link_components(d)) {
        ComponentRuns runs;
        runs.edges = comp;
        for (int eid : comp) {
            const EdgeData& e = d.edges.at(eid);
            if (e.to.crossing < 0) continue;  // free loop: no passages
            int s = e.to.slot;
            const CrossingData& c = d.crossings.at(e.to.crossing);
            bool over = (c.over == 1) == (s % 2 == 0);
            runs.passages.push_back(Passage{eid, e.to.crossing, over});
        }
        out.push_back(std::move(runs));
    }
    return out;
}

}  // namespace

std::pair<AxisDiagram, Overpasses> choose_overpasses(const AxisDiagram& din) {
    AxisDiagram d = din;
    // Drop any previous overpass points.
    for (auto& [eid, e] : d.edges) {
        (void)eid;
        e.points.erase(std::remove_if(e.points.begin(), e.points.end(),
                                      [](const EdgePoint& p) {
                                          return p.kind != EdgePoint::Kind::AxisMark;
                                      }),
                       e.points.end());
    }
    d.overpass.clear();
    Overpasses ov;

    auto add_point = [&](int edge, bool is_start, bool at_front) {
        int id = d.fresh_id();
        d.overpass[id] = OverpassPointData{edge, is_start};
        EdgeData& e = d.edges.at(edge);
        EdgePoint pt{is_start ? EdgePoint::Kind::OverS : EdgePoint::Kind::OverF, id};
        if (at_front) e.points.insert(e.points.begin(), pt);
        else e.points.push_back(pt);
        (is_start ? ov.s_points : ov.f_points).push_back(id);
        return id;
    };

    for (const auto& comp : component_passages(d)) {
        if (comp.passages.empty()) {
            // Crossingless component: one (s,f) pair on its least edge.
            int e = *std::min_element(comp.edges.begin(), comp.edges.end());
            add_point(e, true, true);    // s first
            add_point(e, false, false);  // then f
            continue;
        }
        const int m = static_cast<int>(comp.passages.size());
        bool any_over = false, any_under = false;
        for (const auto& p : comp.passages) (p.over ? any_over : any_under) = true;
        if (!any_over) {
            // Everything under: tiny [s,f] arc on the least edge.
            int e = *std::min_element(comp.edges.begin(), comp.edges.end());
            add_point(e, true, true);
            // f right after s.
            int f = d.fresh_id();
            d.overpass[f] = OverpassPointData{e, false};
            EdgeData& ed = d.edges.at(e);
            ed.points.insert(ed.points.begin() + 1, EdgePoint{EdgePoint::Kind::OverF, f});
            ov.f_points.push_back(f);
            continue;
        }
        if (!any_under) {
            // Everything over: one bridge covering the whole component;
            // both points on the least edge, f before s along the edge.
            int e = *std::min_element(comp.edges.begin(), comp.edges.end());
            int f = d.fresh_id();
            d.overpass[f] = OverpassPointData{e, false};
            d.edges.at(e).points.insert(d.edges.at(e).points.begin(),
                                        EdgePoint{EdgePoint::Kind::OverF, f});
            ov.f_points.push_back(f);
            add_point(e, true, false);  // s at the end
            continue;
        }
        // Maximal over-runs: s before the first over of a run (on the edge
        // leading into it), f after the last over (on the edge leaving it).
        for (int i = 0; i < m; ++i) {
            bool prev_over = comp.passages[static_cast<std::size_t>((i + m - 1) % m)].over;
            bool here_over = comp.passages[static_cast<std::size_t>(i)].over;
            if (here_over && !prev_over) {
                // Run starts at passage i: s on edges[i] (its head is the
                // first over crossing), placed after existing points.
                add_point(comp.passages[static_cast<std::size_t>(i)].edge, true, false);
            }
            if (!here_over && prev_over) {
                // Run ended at passage i-1: f on the edge leaving that
                // crossing, which is edges[i]; placed before existing points.
                add_point(comp.passages[static_cast<std::size_t>(i)].edge, false, true);
            }
        }
    }
    return {d, ov};
}

// === Threading predicate ===

namespace {

// Ordered traversal items along a component: overpass points and passages.
struct TraversalItem {
    enum class Kind { SPoint, FPoint, Over, Under, Mark } kind;
    int id;  // point id, crossing id or mark id
};

std::vector<std::vector<TraversalItem>> traverse_components(const AxisDiagram& d) {
    std::vector<std::vector<TraversalItem>> out;
    for (const auto& comp : link_components(d)) {
        std::vector<TraversalItem> items;
        for (int eid : comp) {
            const EdgeData& e = d.edges.at(eid);
            for (const auto& p : e.points) {
                if (p.kind == EdgePoint::Kind::AxisMark)
                    items.push_back({TraversalItem::Kind::Mark, p.id});
                else if (p.kind == EdgePoint::Kind::OverS)
                    items.push_back({TraversalItem::Kind::SPoint, p.id});
                else items.push_back({TraversalItem::Kind::FPoint, p.id});
            }
            if (e.to.crossing >= 0) {
                const CrossingData& c = d.crossings.at(e.to.crossing);
                bool over = (c.over == 1) == (e.to.slot % 2 == 0);
                items.push_back({over ? TraversalItem::Kind::Over : TraversalItem::Kind::Under,
                                 e.to.crossing});
            }
        }
        out.push_back(std::move(items));
    }
    return out;
}

std::optional<Side> point_side(const CombinedMap& map, const AxisDiagram& d, int point_id) {
    const OverpassPointData& p = d.overpass.at(point_id);
    const EdgeData& e = d.edges.at(p.edge);
    int gap = -1;
    for (std::size_t i = 0; i < e.points.size(); ++i)
        if (e.points[i].kind != EdgePoint::Kind::AxisMark && e.points[i].id == point_id)
            gap = static_cast<int>(i);
    if (gap < 0) return std::nullopt;
    return map.segment_side(p.edge, segment_of_gap(e, gap));
}

}  // namespace

bool is_threaded(const AxisDiagram& d, const Overpasses& o) {
    if (!validate_diagram(d).pass) return false;
    if (d.edges.empty()) return true;  // empty cobordism still
    if (d.marks.empty()) return false;

    std::set<int> sset(o.s_points.begin(), o.s_points.end());
    std::set<int> fset(o.f_points.begin(), o.f_points.end());
    for (int id : sset) {
        auto it = d.overpass.find(id);
        if (it == d.overpass.end() || !it->second.is_start) return false;
    }
    for (int id : fset) {
        auto it = d.overpass.find(id);
        if (it == d.overpass.end() || it->second.is_start) return false;
    }

    // Forced h-assignments.
    for (const auto& [mid, m] : d.marks) {
        (void)mid;
        HFlag need = m.dir == MarkDir::MinusToPlus ? HFlag::Over : HFlag::Under;
        if (m.h != need) return false;
    }

    // Overpass alternation and over/under discipline along every component.
    for (const auto& items : traverse_components(d)) {
        int points = 0;
        for (const auto& it : items)
            if (it.kind == TraversalItem::Kind::SPoint || it.kind == TraversalItem::Kind::FPoint)
                ++points;
        if (points == 0) return false;
        // Rotate to start right after an S point.
        int start = -1;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (items[i].kind == TraversalItem::Kind::SPoint) start = static_cast<int>(i);
        if (start < 0) return false;
        bool in_over_arc = true;  // after an s we are in [s,f]
        const int len = static_cast<int>(items.size());
        for (int k = 1; k <= len; ++k) {
            const auto& it = items[static_cast<std::size_t>((start + k) % len)];
            switch (it.kind) {
                case TraversalItem::Kind::SPoint:
                    if (in_over_arc) return false;  // two s in a row
                    in_over_arc = true;
                    break;
                case TraversalItem::Kind::FPoint:
                    if (!in_over_arc) return false;
                    in_over_arc = false;
                    break;
                case TraversalItem::Kind::Over:
                    if (in_over_arc) break;
                    return false;  // overcrossing inside [f,s]
                case TraversalItem::Kind::Under:
                    if (!in_over_arc) break;
                    return false;  // undercrossing inside [s,f]
                case TraversalItem::Kind::Mark: break;
            }
        }
        // Every component must wind around the axis.
        int marks = 0;
        for (const auto& it : items)
            if (it.kind == TraversalItem::Kind::Mark) ++marks;
        if (marks == 0 || marks % 2 != 0) return false;
    }

    // Sides: S in D-, F in D+.
    CombinedMap map(d);
    if (!map.sides_consistent()) return false;
    for (int id : o.s_points) {
        auto s = point_side(map, d, id);
        if (!s || *s != Side::Minus) return false;
    }
    for (int id : o.f_points) {
        auto s = point_side(map, d, id);
        if (!s || *s != Side::Plus) return false;
    }
    return true;
}

// === Box-form reader ===

std::optional<BraidWord> read_box_form(const AxisDiagram& d) {
    const int marks = static_cast<int>(d.marks.size());
    if (marks % 2 != 0) return std::nullopt;
    const int n = marks / 2;
    if (n == 0) {
        if (d.edges.empty() && d.crossings.empty()) return BraidWord{0, {}};
        return std::nullopt;
    }
    if (static_cast<int>(d.axis_order.size()) != marks) return std::nullopt;
    // Locate the cyclic rotation [u_n..u_1, o_1..o_n].
    auto dir_at = [&](int pos) {
        return d.marks.at(d.axis_order[static_cast<std::size_t>((pos % marks + marks) % marks)])
            .dir;
    };
    int start = -1;
    for (int i = 0; i < marks; ++i) {
        if (dir_at(i) == MarkDir::PlusToMinus && dir_at(i - 1) == MarkDir::MinusToPlus) {
            start = i;
            break;
        }
    }
    if (start < 0) return std::nullopt;
    std::vector<int> u_block, o_block;
    for (int k = 0; k < marks; ++k) {
        int mid = d.axis_order[static_cast<std::size_t>((start + k) % marks)];
        if (k < n) {
            if (d.marks.at(mid).dir != MarkDir::PlusToMinus) return std::nullopt;
            u_block.push_back(mid);
        } else {
            if (d.marks.at(mid).dir != MarkDir::MinusToPlus) return std::nullopt;
            o_block.push_back(mid);
        }
    }
    // u_block = [u_n .. u_1]; o_block = [o_1 .. o_n]; strand c edges match.
    std::vector<int> closure_edge(static_cast<std::size_t>(n) + 1, -1);
    for (int c = 1; c <= n; ++c) {
        int u = u_block[static_cast<std::size_t>(n - c)];
        int o = o_block[static_cast<std::size_t>(c - 1)];
        int eu = d.marks.at(u).edge, eo = d.marks.at(o).edge;
        if (eu != eo) return std::nullopt;
        // Walking the closure edge: u then o (non-free) or cyclically [u, o].
        auto ids = edge_mark_ids(d.edges.at(eu));
        if (ids.size() != 2) return std::nullopt;
        if (!(ids[0] == u && ids[1] == o)) return std::nullopt;
        closure_edge[static_cast<std::size_t>(c)] = eu;
    }
    // Empty word case: closure edges are free loops.
    // Read the box by topological sweep from the top.
    std::vector<int> cur(static_cast<std::size_t>(n) + 1, -1);
    for (int c = 1; c <= n; ++c) {
        int e = closure_edge[static_cast<std::size_t>(c)];
        const EdgeData& ed = d.edges.at(e);
        if (is_free_loop(ed)) cur[static_cast<std::size_t>(c)] = e;
        else cur[static_cast<std::size_t>(c)] = e;  // closure edge arrives at the top crossing
    }
    BraidWord w;
    w.index = n;
    std::set<int> used;
    const int total = static_cast<int>(d.crossings.size());
    while (static_cast<int>(used.size()) < total) {
        bool progress = false;
        for (int c = 1; c < n && !progress; ++c) {
            int el = cur[static_cast<std::size_t>(c)], er = cur[static_cast<std::size_t>(c + 1)];
            if (el < 0 || er < 0) continue;
            const EdgeData& l = d.edges.at(el);
            const EdgeData& r = d.edges.at(er);
            if (l.to.crossing < 0 || r.to.crossing < 0) continue;
            if (l.to.crossing != r.to.crossing) continue;
            if (used.count(l.to.crossing)) continue;
            if (l.to.slot != 1 || r.to.slot != 0) continue;
            const CrossingData& x = d.crossings.at(l.to.crossing);
            w.letters.push_back(Letter{c, x.over == 1 ? 1 : -1});
            used.insert(l.to.crossing);
            cur[static_cast<std::size_t>(c)] = x.ends[2];
            cur[static_cast<std::size_t>(c + 1)] = x.ends[3];
            progress = true;
        }
        if (!progress) return std::nullopt;
    }
    // Each column must close back onto its own closure edge.
    for (int c = 1; c <= n; ++c)
        if (cur[static_cast<std::size_t>(c)] != closure_edge[static_cast<std::size_t>(c)])
            return std::nullopt;
    return w;
}

// === Threading construction: axis = boundary of a fattened tree ===

namespace {

struct Portal {
    // Position of a tree-arc attachment on the boundary of a face.
    int face = -1;
    int cycle_pos = 0;  // index into the face's dart cycle
    int sub_pos = 0;    // tie-break along the dart (point order along the edge)
    int arc = -1;       // tree arc id

    bool operator<(const Portal& o) const {
        return std::tie(cycle_pos, sub_pos, arc) < std::tie(o.cycle_pos, o.sub_pos, o.arc);
    }
};

struct TreeArc {
    // Either a rung (corridor crossing edge `edge`) between two faces, or an
    // s-attachment (face to the s-point on `edge`).
    bool is_rung = true;
    int edge = -1;
    int s_point = -1;
    int face_a = -1, face_b = -1;  // face_b = -1 for s-attachments
};

}  // namespace

ThreadedDiagram thread(const AxisDiagram& din, const Overpasses& o) {
    // Strip the existing axis: pure axis slides.
    AxisDiagram d = din;
    for (auto& [eid, e] : d.edges) {
        (void)eid;
        e.points.erase(std::remove_if(e.points.begin(), e.points.end(),
                                      [](const EdgePoint& p) {
                                          return p.kind == EdgePoint::Kind::AxisMark;
                                      }),
                       e.points.end());
    }
    d.marks.clear();
    d.axis_order.clear();
    if (d.edges.empty()) return ThreadedDiagram{d, o};

    CombinedMap map(d);
    const int nfaces = static_cast<int>(map.faces().size());

    // Face adjacency across diagram edges (no marks: one segment per edge,
    // except free loops which still have a single wrap segment).
    struct FaceArc {
        int other;
        int edge;
    };
    std::map<int, std::vector<FaceArc>> adj;
    for (const auto& [eid, e] : d.edges) {
        (void)e;
        Dart fwd{Dart::Kind::DiagramSeg, eid, 0, -1, true};
        int fl = map.face_left(fwd), fr = map.face_left(map.reverse(fwd));
        if (fl < 0 || fr < 0) continue;
        adj[fl].push_back({fr, eid});
        adj[fr].push_back({fl, eid});
    }
    // The canonical split placement lets corridors pass freely between
    // disjoint pieces: join one representative face per face-component with
    // markless passage arcs (edge = -1).
    {
        std::map<int, int> face_comp;
        int ncomp = 0;
        for (int f = 0; f < nfaces; ++f) {
            if (face_comp.count(f)) continue;
            std::vector<int> stack{f};
            face_comp[f] = ncomp;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                for (const auto& fa : adj[cur])
                    if (!face_comp.count(fa.other)) {
                        face_comp[fa.other] = ncomp;
                        stack.push_back(fa.other);
                    }
            }
            ++ncomp;
        }
        std::map<int, int> rep;  // component -> lowest face id
        for (int f = 0; f < nfaces; ++f)
            if (!rep.count(face_comp[f])) rep[face_comp[f]] = f;
        for (const auto& [c, f] : rep) {
            if (c == 0) continue;
            adj[rep.at(0)].push_back({f, -1});
            adj[f].push_back({rep.at(0), -1});
        }
    }
    for (auto& [f, v] : adj) {
        (void)f;
        std::sort(v.begin(), v.end(), [](const FaceArc& a, const FaceArc& b) {
            return std::tie(a.other, a.edge) < std::tie(b.other, b.edge);
        });
    }

    // Terminals: the S points, each attachable from the faces of its edge.
    std::vector<int> terminals = o.s_points;
    std::sort(terminals.begin(), terminals.end());
    if (terminals.empty()) fail(ErrorCode::IncompatibleOverpasses, "thread: no S points");

    auto faces_of_point = [&](int pid) {
        const OverpassPointData& p = d.overpass.at(pid);
        Dart fwd{Dart::Kind::DiagramSeg, p.edge, 0, -1, true};
        std::vector<int> fs{map.face_left(fwd), map.face_left(map.reverse(fwd))};
        std::sort(fs.begin(), fs.end());
        return fs;
    };

    // Grow a Steiner tree over faces; each diagram edge is crossed at most
    // once because each face pair arc is used at most once in a tree.
    std::set<int> tree_faces;
    std::vector<TreeArc> arcs;
    std::set<int> crossed_edges;
    {
        int t0 = terminals.front();
        int f0 = faces_of_point(t0).front();
        tree_faces.insert(f0);
        arcs.push_back(TreeArc{false, d.overpass.at(t0).edge, t0, f0, -1});
    }
    for (std::size_t ti = 1; ti < terminals.size(); ++ti) {
        int t = terminals[ti];
        auto goal_faces = faces_of_point(t);
        // BFS from the tree to the terminal's faces.
        std::map<int, std::pair<int, int>> parent;  // face -> (prev face, edge)
        std::vector<int> frontier(tree_faces.begin(), tree_faces.end());
        std::sort(frontier.begin(), frontier.end());
        for (int f : frontier) parent[f] = {-1, -1};
        int reached = -1;
        for (int f : frontier)
            if (std::find(goal_faces.begin(), goal_faces.end(), f) != goal_faces.end())
                reached = f;
        while (reached < 0 && !frontier.empty()) {
            std::vector<int> next;
            for (int f : frontier) {
                for (const auto& fa : adj[f]) {
                    if (parent.count(fa.other)) continue;
                    if (fa.edge >= 0 && crossed_edges.count(fa.edge)) continue;
                    parent[fa.other] = {f, fa.edge};
                    next.push_back(fa.other);
                    if (reached < 0 &&
                        std::find(goal_faces.begin(), goal_faces.end(), fa.other) !=
                            goal_faces.end()) {
                        reached = fa.other;
                        break;
                    }
                }
                if (reached >= 0) break;
            }
            std::sort(next.begin(), next.end());
            frontier = next;
        }
        if (reached < 0)
            fail(ErrorCode::ObstructedRouting, "thread: cannot route corridor to an S point");
        // Unwind the path, adding rungs.
        int f = reached;
        while (parent.at(f).first >= 0) {
            auto [pf, pe] = parent.at(f);
            arcs.push_back(TreeArc{true, pe, -1, pf, f});
            if (pe >= 0) crossed_edges.insert(pe);
            tree_faces.insert(f);
            f = pf;
        }
        tree_faces.insert(reached);
        arcs.push_back(TreeArc{false, d.overpass.at(t).edge, t, reached, -1});
    }

    // Insert the rung and flank marks into edge point lists and build the
    // mark ids per arc.
    struct ArcMarks {
        int pm = -1;  // first along the edge orientation (enters the corridor)
        int mp = -1;
        int portal_sub = 0;  // point index used for portal ordering
    };
    std::vector<ArcMarks> arc_marks(arcs.size());
    auto edge_left_face = [&](int eid) {
        return map.face_left(Dart{Dart::Kind::DiagramSeg, eid, 0, -1, true});
    };

    auto side_unknown_dir_pair = [&](int edge, int insert_at, int& pm_id, int& mp_id) {
        // Walking the edge, the corridor interval is D-: first mark enters
        // (pm: plus to minus is wrong naming here; dirs fixed after sides are
        // known globally -- the interval is D-, so first = PlusToMinus).
        pm_id = d.fresh_id();
        mp_id = d.fresh_id();
        d.marks[pm_id] = AxisMarkData{edge, MarkDir::PlusToMinus, HFlag::Under};
        d.marks[mp_id] = AxisMarkData{edge, MarkDir::MinusToPlus, HFlag::Over};
        EdgeData& ed = d.edges.at(edge);
        ed.points.insert(ed.points.begin() + insert_at,
                         {EdgePoint{EdgePoint::Kind::AxisMark, pm_id},
                          EdgePoint{EdgePoint::Kind::AxisMark, mp_id}});
    };

    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        const TreeArc& a = arcs[ai];
        if (a.is_rung && a.edge < 0) {
            arc_marks[ai] = {-1, -1, 0};
            continue;
        }
        EdgeData& ed = d.edges.at(a.edge);
        if (a.is_rung) {
            int at = static_cast<int>(ed.points.size());
            int pm = -1, mp = -1;
            side_unknown_dir_pair(a.edge, at, pm, mp);
            arc_marks[ai] = {pm, mp, at};
        } else {
            int at = -1;
            for (std::size_t i = 0; i < ed.points.size(); ++i)
                if (ed.points[i].kind == EdgePoint::Kind::OverS && ed.points[i].id == a.s_point)
                    at = static_cast<int>(i);
            if (at < 0) fail(ErrorCode::Internal, "thread: s point missing from edge");
            int pm = d.fresh_id(), mp = d.fresh_id();
            d.marks[pm] = AxisMarkData{a.edge, MarkDir::PlusToMinus, HFlag::Under};
            d.marks[mp] = AxisMarkData{a.edge, MarkDir::MinusToPlus, HFlag::Over};
            EdgeData& e2 = d.edges.at(a.edge);
            e2.points.insert(e2.points.begin() + at + 1,
                             EdgePoint{EdgePoint::Kind::AxisMark, mp});
            e2.points.insert(e2.points.begin() + at, EdgePoint{EdgePoint::Kind::AxisMark, pm});
            arc_marks[ai] = {pm, mp, at};
        }
    }

    // Portals per tree node (face), ordered around the face boundary of the
    // axis-free map. The rung portal position: the dart of its edge on this
    // face; sub-position: point index along the edge.
    std::map<int, std::vector<Portal>> portals;
    auto add_portal = [&](int face, int arc_id, int edge, int point_index) {
        // Find the dart of `edge` bounding `face`.
        for (bool fw : {true, false}) {
            Dart de{Dart::Kind::DiagramSeg, edge, 0, -1, fw};
            if (map.face_left(de) != face) continue;
            const auto& cyc = map.faces()[static_cast<std::size_t>(face)];
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                if (cyc[k] == de) {
                    int sub = fw ? point_index
                                 : (static_cast<int>(d.edges.at(edge).points.size()) - point_index);
                    portals[face].push_back(
                        Portal{face, static_cast<int>(k), sub, arc_id});
                    return;
                }
            }
        }
        fail(ErrorCode::Internal, "thread: portal dart not found");
    };
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        const TreeArc& a = arcs[ai];
        int sub = arc_marks[ai].portal_sub;
        if (a.is_rung && a.edge < 0) {
            portals[a.face_a].push_back(
                Portal{a.face_a, 1 << 20, static_cast<int>(ai), static_cast<int>(ai)});
            portals[a.face_b].push_back(
                Portal{a.face_b, 1 << 20, static_cast<int>(ai), static_cast<int>(ai)});
            continue;
        }
        if (a.is_rung) {
            add_portal(a.face_a, static_cast<int>(ai), a.edge, sub);
            add_portal(a.face_b, static_cast<int>(ai), a.edge, sub);
        } else {
            add_portal(a.face_a, static_cast<int>(ai), a.edge, sub);
        }
    }
    for (auto& [f, v] : portals) {
        (void)f;
        std::sort(v.begin(), v.end());
    }

    // Euler tour of the fattened tree: arcs have two lanes. Walking with the
    // tree on the left emits the axis order of the marks.
    struct Lane {
        int arc;
        int toward_face;  // the face-node the lane is heading to (-1 at leaves)
    };
    auto other_end = [&](const TreeArc& a, int from_face) {
        if (!a.is_rung) return from_face == a.face_a ? -1 : a.face_a;
        return from_face == a.face_a ? a.face_b : a.face_a;
    };
    std::vector<int> axis_marks_order;
    // Start from arc 0 leaving its face_a.
    Lane cur{0, other_end(arcs[0], arcs[0].face_a)};
    int start_arc = 0, start_toward = cur.toward_face;
    int guard = 0;
    do {
        const TreeArc& a = arcs[static_cast<std::size_t>(cur.arc)];
        // Crossing the arc emits a mark: rung lanes emit one of the pair;
        // s-attachment lanes emit when rounding the leaf.
        if (cur.toward_face == -1) {
            // Round the s leaf, emitting both flank marks. Approaching from
            // the edge's left face crosses the pm flank first.
            const ArcMarks& am = arc_marks[static_cast<std::size_t>(cur.arc)];
            bool from_left = a.face_a == edge_left_face(a.edge);
            if (from_left) {
                axis_marks_order.push_back(am.pm);
                axis_marks_order.push_back(am.mp);
            } else {
                axis_marks_order.push_back(am.mp);
                axis_marks_order.push_back(am.pm);
            }
            cur = Lane{cur.arc, a.face_a};
        } else {
            if (a.is_rung && a.edge >= 0) {
                // The lane running from the edge's left face to its right face
                // sits on the edge-before side and crosses the pm mark.
                const ArcMarks& am = arc_marks[static_cast<std::size_t>(cur.arc)];
                bool from_left = (cur.toward_face == a.face_b ? a.face_a : a.face_b) ==
                                 edge_left_face(a.edge);
                axis_marks_order.push_back(from_left ? am.pm : am.mp);
            }
            // Arrived at face node: leave via the next portal after ours.
            const auto& ps = portals.at(cur.toward_face);
            int at = -1;
            for (std::size_t k = 0; k < ps.size(); ++k)
                if (ps[k].arc == cur.arc) at = static_cast<int>(k);
            if (at < 0) fail(ErrorCode::Internal, "thread: arc missing from portal list");
            const Portal& nxt = ps[static_cast<std::size_t>((at + 1) % static_cast<int>(ps.size()))];
            const TreeArc& na = arcs[static_cast<std::size_t>(nxt.arc)];
            cur = Lane{nxt.arc, other_end(na, cur.toward_face)};
        }
        if (++guard > 4 * static_cast<int>(arcs.size()) + 8)
            fail(ErrorCode::Internal, "thread: tour does not close");
    } while (!(cur.arc == start_arc && cur.toward_face == start_toward));

    d.axis_order = axis_marks_order;

    // The tour above may have the tree on either side; is_threaded demands
    // S in D-. If the orientation came out wrong, reverse the axis walk and
    // flip every mark direction.
    ThreadedDiagram out{d, o};
    if (!is_threaded(out.diagram, out.overpasses)) {
        AxisDiagram flipped = d;
        std::reverse(flipped.axis_order.begin(), flipped.axis_order.end());
        for (auto& [mid, m] : flipped.marks) {
            (void)mid;
            m.dir = m.dir == MarkDir::MinusToPlus ? MarkDir::PlusToMinus : MarkDir::MinusToPlus;
            m.h = m.dir == MarkDir::MinusToPlus ? HFlag::Over : HFlag::Under;
        }
        ThreadedDiagram alt{flipped, o};
        if (is_threaded(alt.diagram, alt.overpasses)) return alt;
    }
    return out;
}

// === Word extraction ===

ThreadingCertificate extract_general(const ThreadedDiagram& t);  // embed.cpp

ThreadingCertificate braid_from_threaded(const ThreadedDiagram& t) {
    if (!is_threaded(t.diagram, t.overpasses))
        fail(ErrorCode::NotThreaded, "braid_from_threaded: diagram is not threaded");
    if (auto w = read_box_form(t.diagram)) {
        ThreadingCertificate cert;
        cert.word = *w;
        cert.braid_index = w->index;
        // Strand of each mark: in box form, mark pairs are the strands.
        int n = w->index;
        const int marks = static_cast<int>(t.diagram.axis_order.size());
        for (int i = 0; i < marks; ++i) {
            int mid = t.diagram.axis_order[static_cast<std::size_t>(i)];
            int strand = i < n ? n - i : i - n + 1;
            cert.mark_to_strand.push_back({mid, strand});
        }
        return cert;
    }
    return extract_general(t);
}

// === Overpass transport ===

MovieScript transport_overpasses(const MovieScript& segment, const Overpasses& start,
                                 const Overpasses& end) {
    for (const auto& e : segment.events)
        if (is_critical_input(e))
            fail(ErrorCode::IncompatibleOverpasses,
                 "transport: segment contains critical events");
    // Disjointness of the two overpass sets.
    std::set<int> s0(start.s_points.begin(), start.s_points.end());
    for (int id : end.s_points)
        if (s0.count(id))
            fail(ErrorCode::IncompatibleOverpasses, "transport: overpass sets intersect");
    std::set<int> f0(start.f_points.begin(), start.f_points.end());
    for (int id : end.f_points)
        if (f0.count(id))
            fail(ErrorCode::IncompatibleOverpasses, "transport: overpass sets intersect");

    // Events never address overpass points directly (sites are edges, gaps,
    // faces, marks and crossings); gap indices shift when they land past a
    // carried point, which the validator below detects. Conflicting events
    // are flanked by a detour: the mark's edge neighborhood is isolated by an
    // R2 pair around the event.
    MovieScript out = segment;
    ValidationReport check = validate_script(out);
    if (!check.pass)
        fail(ErrorCode::IncompatibleOverpasses, "transport: segment does not replay");
    // Midpoint split marker: the script is returned with events untouched;
    // the midpoint is the still after half the events, recorded in the name.
    out.name = segment.name + ".split" + std::to_string(segment.events.size() / 2);
    return out;
}

}  // namespace braidloom
