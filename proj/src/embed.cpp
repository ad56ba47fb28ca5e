#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "braidloom/threading.hpp"

// General word extraction for threaded diagrams whose D- side carries no
// crossings (the shape thread() always produces: the axis bounds a fattened
// tree). The D+ disk is drawn with the marks along a gently convex boundary
// arc, so the axis is locally a straight line with the whole tangle on one
// side. The braid lift is then read off a page sweep: every strand arc
// between marks spans one half-turn; the page schedule is solved from the
// crossing flags and the braid letters are the radial-rank exchanges of the
// drawn strand tracks, closed up through the nesting ranks of the D- return
// arcs.

namespace braidloom {

namespace {

using Vec = std::pair<double, double>;

struct FrontArc {
    int start_mark = -1;
    int end_mark = -1;
    // Walk through the drawing: vertex keys of the embedding graph.
    std::vector<int> vertex_chain;
    // Crossings along the arc (subset of the chain) with passage data.
    struct Passage {
        int crossing;
        bool over;
        int chain_pos;
    };
    std::vector<Passage> passages;
};

// Vertex keys of the embedding graph.
constexpr int kMarkBase = 1 << 20;
constexpr int kCrossBase = 2 << 20;
constexpr int kSubBase = 3 << 20;

struct EmbedGraph {
    std::map<int, std::vector<int>> adj;          // vertex -> neighbors
    std::map<int, Vec> pos;                        // solved positions
    std::set<int> boundary;                        // pinned vertices
    int next_sub = kSubBase;

    int fresh() { return next_sub++; }

    void add_edge(int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
};

}  // namespace

ThreadingCertificate extract_general(const ThreadedDiagram& t) {
    const AxisDiagram& d = t.diagram;
    const int marks = static_cast<int>(d.axis_order.size());
    ThreadingCertificate cert;
    if (marks == 0) {
        cert.word = BraidWord{0, {}};
        return cert;
    }
    const int n = marks / 2;

    CombinedMap map(d);
    if (!map.sides_consistent()) fail(ErrorCode::NotThreaded, "extract: sides inconsistent");

    // D- must be free of crossings (thread() guarantees this).
    for (const auto& [cid, c] : d.crossings) {
        int eid = c.ends[0];
        const EdgeData& e = d.edges.at(eid);
        int seg = e.from == EdgeEnd{cid, 0} ? 0 : edge_segment_count(e) - 1;
        auto side = map.segment_side(eid, seg);
        if (side && *side == Side::Minus)
            fail(ErrorCode::Internal,
                 "extract: crossings on the D- side are outside the supported class");
    }

    // === Split the link into front arcs (D+) and returns (D-) ===
    std::map<int, int> axis_pos;  // mark id -> position in axis order
    for (int i = 0; i < marks; ++i) axis_pos[d.axis_order[static_cast<std::size_t>(i)]] = i;

    // Walk every component; cut at marks. Record, per D+ arc, the chain of
    // (edge, segment) pieces, and per D- arc its two marks.
    struct RawArc {
        int start_mark, end_mark;
        Side side;
        std::vector<std::pair<int, int>> segs;  // (edge, seg index) along the arc
    };
    std::vector<RawArc> raw_arcs;
    {
        std::set<std::pair<int, int>> visited;  // (edge, seg) directed pieces are unique
        for (const auto& comp : link_components(d)) {
            // Build the full item sequence: (edge, seg) pieces and marks.
            struct Item {
                int edge, seg;
                int mark_after;  // mark id after this segment, -1 at edge end
            };
            std::vector<Item> items;
            for (int eid : comp) {
                const EdgeData& e = d.edges.at(eid);
                auto ids = edge_mark_ids(e);
                const int nseg = edge_segment_count(e);
                if (is_free_loop(e) && !ids.empty()) {
                    // Cyclic: segment j runs mark j -> mark j+1.
                    for (int sgi = 0; sgi < nseg; ++sgi)
                        items.push_back({eid, sgi,
                                         ids[static_cast<std::size_t>((sgi + 1) % nseg)]});
                } else {
                    for (int sgi = 0; sgi < nseg; ++sgi)
                        items.push_back({eid, sgi,
                                         sgi < static_cast<int>(ids.size())
                                             ? ids[static_cast<std::size_t>(sgi)]
                                             : -1});
                }
            }
            if (items.empty()) continue;
            // Rotate so the sequence starts right after a mark.
            int start = -1;
            for (std::size_t i = 0; i < items.size(); ++i)
                if (items[i].mark_after >= 0) start = static_cast<int>(i);
            if (start < 0) fail(ErrorCode::NotThreaded, "extract: component misses the axis");
            const int len = static_cast<int>(items.size());
            RawArc cur_arc;
            cur_arc.start_mark = items[static_cast<std::size_t>(start)].mark_after;
            for (int k = 1; k <= len; ++k) {
                const Item& it = items[static_cast<std::size_t>((start + k) % len)];
                cur_arc.segs.push_back({it.edge, it.seg});
                if (it.mark_after >= 0) {
                    cur_arc.end_mark = it.mark_after;
                    auto side = map.segment_side(it.edge, it.seg);
                    if (!side) fail(ErrorCode::Internal, "extract: undecided arc side");
                    cur_arc.side = *side;
                    raw_arcs.push_back(cur_arc);
                    cur_arc = RawArc{};
                    cur_arc.start_mark = it.mark_after;
                }
            }
            (void)visited;
        }
    }

    std::vector<RawArc> fronts, returns;
    for (auto& a : raw_arcs) (a.side == Side::Plus ? fronts : returns).push_back(a);
    if (static_cast<int>(fronts.size()) != n || static_cast<int>(returns.size()) != n)
        fail(ErrorCode::NotThreaded, "extract: arc counts disagree with mark count");

    // === Return nesting ranks ===
    // Returns form a non-crossing matching on the axis positions; innermost
    // (closing first in the parenthesis scan) sits nearest the axis: rank 1.
    std::map<int, int> return_rank_at_mark;  // mark id -> rank of its return
    {
        std::map<int, int> partner;  // axis position -> matched position
        std::map<int, int> ret_of_pos;
        for (std::size_t ri = 0; ri < returns.size(); ++ri) {
            int p = axis_pos.at(returns[ri].start_mark);
            int q = axis_pos.at(returns[ri].end_mark);
            partner[p] = q;
            partner[q] = p;
            ret_of_pos[p] = static_cast<int>(ri);
            ret_of_pos[q] = static_cast<int>(ri);
        }
        std::vector<int> stack;
        std::vector<int> close_order;
        std::set<int> closed;
        for (int i = 0; i < marks; ++i) {
            auto it = partner.find(i);
            if (it == partner.end()) continue;  // front-arc mark boundary? no: every mark bounds one return
            int r = ret_of_pos.at(i);
            if (!stack.empty() && stack.back() == r) {
                stack.pop_back();
                close_order.push_back(r);
                closed.insert(r);
            } else {
                stack.push_back(r);
            }
        }
        // Anything unmatched in the linear scan closes across the wrap point.
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (!closed.count(*it)) close_order.push_back(*it);
        int rank = 1;
        std::vector<int> rank_of_return(returns.size(), 0);
        for (int r : close_order) {
            if (rank_of_return[static_cast<std::size_t>(r)] == 0)
                rank_of_return[static_cast<std::size_t>(r)] = rank++;
        }
        for (std::size_t ri = 0; ri < returns.size(); ++ri) {
            return_rank_at_mark[returns[ri].start_mark] =
                rank_of_return[static_cast<std::size_t>(ri)];
            return_rank_at_mark[returns[ri].end_mark] =
                rank_of_return[static_cast<std::size_t>(ri)];
        }
    }

    // === Build and solve the D+ drawing ===
    EmbedGraph g;
    // Boundary: the marks along a shallow convex arc, closed by an apex.
    {
        double mid = (marks + 1) / 2.0;
        for (int i = 0; i < marks; ++i) {
            int v = kMarkBase + d.axis_order[static_cast<std::size_t>(i)];
            double x = i + 1.0;
            double y = 0.0003 * (x - mid) * (x - mid);
            g.pos[v] = {x, y};
            g.boundary.insert(v);
        }
        int apex = g.fresh();  // == kSubBase: referenced by the stellation
        g.pos[apex] = {mid, 4.0 * marks};
        g.boundary.insert(apex);
        // Boundary cycle edges.
        std::vector<int> cyc;
        for (int i = 0; i < marks; ++i)
            cyc.push_back(kMarkBase + d.axis_order[static_cast<std::size_t>(i)]);
        cyc.push_back(apex);
        for (std::size_t i = 0; i < cyc.size(); ++i)
            g.add_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
    }

    // Front-arc chains: subdivide every drawn piece for Floater stability.
    // piece_chain[(edge,seg)] = the four chain vertices [v0, s1, s2, v3].
    std::vector<FrontArc> arcs(fronts.size());
    std::map<std::pair<int, int>, std::array<int, 4>> piece_chain;
    {
        for (std::size_t ai = 0; ai < fronts.size(); ++ai) {
            const RawArc& ra = fronts[ai];
            FrontArc& fa = arcs[ai];
            fa.start_mark = ra.start_mark;
            fa.end_mark = ra.end_mark;
            fa.vertex_chain.push_back(kMarkBase + ra.start_mark);
            for (std::size_t k = 0; k < ra.segs.size(); ++k) {
                auto [eid, seg] = ra.segs[k];
                int v0 = fa.vertex_chain.back();
                int s1 = g.fresh(), s2 = g.fresh();
                fa.vertex_chain.push_back(s1);
                fa.vertex_chain.push_back(s2);
                int v3 = -1;
                if (k + 1 < ra.segs.size()) {
                    const EdgeData& e = d.edges.at(eid);
                    if (seg != edge_segment_count(e) - 1 || e.to.crossing < 0)
                        fail(ErrorCode::Internal, "extract: arc pieces not crossing-joined");
                    int cross = e.to.crossing;
                    const CrossingData& c = d.crossings.at(cross);
                    bool over = (c.over == 1) == (e.to.slot % 2 == 0);
                    fa.passages.push_back(
                        {cross, over, static_cast<int>(fa.vertex_chain.size())});
                    fa.vertex_chain.push_back(kCrossBase + cross);
                    v3 = kCrossBase + cross;
                } else {
                    v3 = kMarkBase + ra.end_mark;
                }
                piece_chain[{eid, seg}] = {v0, s1, s2, v3};
            }
            fa.vertex_chain.push_back(kMarkBase + ra.end_mark);
            for (std::size_t k = 0; k + 1 < fa.vertex_chain.size(); ++k)
                g.add_edge(fa.vertex_chain[k], fa.vertex_chain[k + 1]);
        }
    }

    // Stellate every D+ face so the relaxation cannot collapse or cross
    // chains: translated face polygons get a center vertex joined to each
    // boundary occurrence.
    {
        int apex = kSubBase;  // the first fresh id allocated above
        for (std::size_t f = 0; f < map.faces().size(); ++f) {
            auto it = map.face_sides().find(static_cast<int>(f));
            if (it == map.face_sides().end() || it->second != Side::Plus) continue;
            std::vector<int> poly;
            bool drawable = true;
            for (const Dart& dd : map.faces()[f]) {
                if (dd.kind == Dart::Kind::DiagramSeg) {
                    auto pit = piece_chain.find({dd.edge, dd.seg});
                    if (pit == piece_chain.end()) {
                        drawable = false;
                        break;
                    }
                    const auto& ch = pit->second;
                    if (dd.forward) {
                        poly.push_back(ch[0]);
                        poly.push_back(ch[1]);
                        poly.push_back(ch[2]);
                    } else {
                        poly.push_back(ch[3]);
                        poly.push_back(ch[2]);
                        poly.push_back(ch[1]);
                    }
                } else {
                    int pos = dd.axis_pos;
                    int ma = kMarkBase + d.axis_order[static_cast<std::size_t>(pos)];
                    int mb = kMarkBase +
                             d.axis_order[static_cast<std::size_t>((pos + 1) % marks)];
                    bool wrap = pos == marks - 1;
                    if (dd.forward) {
                        poly.push_back(ma);
                        if (wrap) poly.push_back(apex);
                    } else {
                        poly.push_back(mb);
                        if (wrap) poly.push_back(apex);
                    }
                }
            }
            if (!drawable || poly.size() < 3) continue;
            int center = g.fresh();
            for (int v : poly) g.add_edge(center, v);
        }
    }

    // Floater relaxation: interior vertices to the barycenter of neighbors.
    {
        // Initialize interior vertices at the centroid of the boundary.
        double cx = 0, cy = 0;
        for (int b : g.boundary) {
            cx += g.pos[b].first;
            cy += g.pos[b].second;
        }
        cx /= static_cast<double>(g.boundary.size());
        cy /= static_cast<double>(g.boundary.size());
        for (const auto& [v, nb] : g.adj) {
            (void)nb;
            if (!g.boundary.count(v) && !g.pos.count(v)) g.pos[v] = {cx, cy};
        }
        for (int iter = 0; iter < 4000; ++iter) {
            double delta = 0;
            for (auto& [v, nb] : g.adj) {
                if (g.boundary.count(v)) continue;
                double sx = 0, sy = 0;
                for (int u : nb) {
                    sx += g.pos[u].first;
                    sy += g.pos[u].second;
                }
                Vec np{sx / static_cast<double>(nb.size()), sy / static_cast<double>(nb.size())};
                delta += std::abs(np.first - g.pos[v].first) +
                         std::abs(np.second - g.pos[v].second);
                g.pos[v] = np;
            }
            if (delta < 1e-13) break;
        }
    }

    // === Page schedule ===
    // Passages ordered along arcs; at each crossing the under passage comes
    // first (calibrated convention).
    struct PassKey {
        int arc, idx;
        bool operator<(const PassKey& o) const {
            return std::tie(arc, idx) < std::tie(o.arc, o.idx);
        }
    };
    std::map<PassKey, std::vector<PassKey>> after;  // topological edges
    std::map<PassKey, int> indegree;
    std::map<int, std::vector<std::pair<PassKey, bool>>> passes_of_crossing;
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        for (std::size_t k = 0; k < arcs[ai].passages.size(); ++k) {
            PassKey key{static_cast<int>(ai), static_cast<int>(k)};
            indegree[key];
            if (k > 0) {
                PassKey prev{static_cast<int>(ai), static_cast<int>(k) - 1};
                after[prev].push_back(key);
                indegree[key]++;
            }
            passes_of_crossing[arcs[ai].passages[k].crossing].push_back(
                {key, arcs[ai].passages[k].over});
        }
    }
    for (auto& [cid, ps] : passes_of_crossing) {
        if (ps.size() != 2) fail(ErrorCode::Internal, "extract: crossing passage count");
        (void)cid;
        PassKey under = ps[0].second ? ps[1].first : ps[0].first;
        PassKey over = ps[0].second ? ps[0].first : ps[1].first;
        // Calibrated page order: the over passage comes first.
        after[over].push_back(under);
        indegree[under]++;
    }
    // Longest-path levels keep the schedule compact: independent passages
    // share a page, which keeps the strand tracks from wiggling.
    std::map<PassKey, int> order;
    int max_level = 0;
    {
        std::map<PassKey, int> indeg = indegree;
        std::set<PassKey> ready;
        for (auto& [k, deg] : indeg)
            if (deg == 0) ready.insert(k);
        std::map<PassKey, int> level;
        std::size_t done = 0;
        while (!ready.empty()) {
            PassKey k = *ready.begin();
            ready.erase(ready.begin());
            ++done;
            int lv = level.count(k) ? level[k] : 1;
            order[k] = lv;
            max_level = std::max(max_level, lv);
            for (const PassKey& nx : after[k]) {
                level[nx] = std::max(level.count(nx) ? level[nx] : 1, lv + 1);
                if (--indeg[nx] == 0) ready.insert(nx);
            }
        }
        if (done != indegree.size())
            fail(ErrorCode::NotThreaded, "extract: page schedule has a cycle");
        // Separate same-crossing passages that landed on the same level.
        // (They cannot: the topological edge forces distinct levels.)
    }
    const int total_passes = max_level;

    // === Strand tracks: piecewise linear (t, x, y) ===
    struct TrackPoint {
        double t, x, y;
    };
    std::vector<std::vector<TrackPoint>> tracks(arcs.size());
    const double collar = 1.0 / (4.0 * (total_passes + 2));
    const double rank_step = 1e-4;
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        const FrontArc& fa = arcs[ai];
        // Scheduled times of this arc's passages.
        std::vector<std::pair<int, double>> pinned;  // (chain position, time)
        pinned.push_back({0, 0.0});
        for (std::size_t k = 0; k < fa.passages.size(); ++k) {
            double tt = collar +
                        (1.0 - 2 * collar) *
                            order.at(PassKey{static_cast<int>(ai), static_cast<int>(k)}) /
                            (total_passes + 1.0);
            pinned.push_back({fa.passages[k].chain_pos, tt});
        }
        pinned.push_back({static_cast<int>(fa.vertex_chain.size()) - 1, 1.0});
        std::vector<TrackPoint>& tr = tracks[ai];
        for (std::size_t p = 0; p + 1 < pinned.size(); ++p) {
            auto [i0, t0] = pinned[p];
            auto [i1, t1] = pinned[p + 1];
            for (int i = i0; i < i1; ++i) {
                double f = static_cast<double>(i - i0) / static_cast<double>(i1 - i0);
                Vec v = g.pos.at(fa.vertex_chain[static_cast<std::size_t>(i)]);
                tr.push_back({t0 + f * (t1 - t0), v.first, v.second});
            }
        }
        Vec last = g.pos.at(fa.vertex_chain.back());
        tr.push_back({1.0, last.first, last.second});
        // Boundary collars: pull the endpoints to their closure rank heights.
        int rin = return_rank_at_mark.at(fa.start_mark);
        int rout = return_rank_at_mark.at(fa.end_mark);
        tr.front().y = rin * rank_step;
        tr.back().y = rout * rank_step;
    }

    // === Sweep: collect rank swaps ===
    struct Swap {
        double t;
        int a, b;       // track indices
        double xa, xb;  // drawing positions at the swap
    };
    auto eval = [&](const std::vector<TrackPoint>& tr, double tt) {
        // Binary search the segment.
        std::size_t lo = 0, hi = tr.size() - 1;
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (tr[mid].t <= tt) lo = mid;
            else hi = mid;
        }
        const TrackPoint &p = tr[lo], &q = tr[hi];
        double f = q.t > p.t ? (tt - p.t) / (q.t - p.t) : 0.0;
        return Vec{p.x + f * (q.x - p.x), p.y + f * (q.y - p.y)};
    };
    std::vector<Swap> swaps;
    for (std::size_t a = 0; a < tracks.size(); ++a) {
        for (std::size_t b = a + 1; b < tracks.size(); ++b) {
            // Merge breakpoints.
            std::vector<double> ts;
            for (const auto& p : tracks[a]) ts.push_back(p.t);
            for (const auto& p : tracks[b]) ts.push_back(p.t);
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            double prev_t = ts.front();
            double prev_diff = eval(tracks[a], prev_t).second - eval(tracks[b], prev_t).second;
            for (std::size_t k = 1; k < ts.size(); ++k) {
                double cur_t = ts[k];
                double diff = eval(tracks[a], cur_t).second - eval(tracks[b], cur_t).second;
                if ((prev_diff < 0) != (diff < 0) && prev_diff != diff) {
                    double f = prev_diff / (prev_diff - diff);
                    double tstar = prev_t + f * (cur_t - prev_t);
                    Vec pa = eval(tracks[a], tstar), pb = eval(tracks[b], tstar);
                    swaps.push_back({tstar, static_cast<int>(a), static_cast<int>(b), pa.first,
                                     pb.first});
                }
                prev_t = cur_t;
                prev_diff = diff;
            }
        }
    }
    std::sort(swaps.begin(), swaps.end(), [](const Swap& l, const Swap& r) { return l.t < r.t; });

    // === Assemble the word ===
    // Rank state: rank_of[track]; letters from adjacent swaps.
    std::vector<int> rank_of(tracks.size());
    for (std::size_t ai = 0; ai < arcs.size(); ++ai)
        rank_of[ai] = return_rank_at_mark.at(arcs[ai].start_mark);
    BraidWord w;
    w.index = n;
    for (const Swap& s : swaps) {
        int ra = rank_of[static_cast<std::size_t>(s.a)];
        int rb = rank_of[static_cast<std::size_t>(s.b)];
        if (std::abs(ra - rb) != 1)
            fail(ErrorCode::Internal, "extract: non-adjacent rank swap");
        int lower = std::min(ra, rb);
        // The strand descending in rank is the letter's over strand for a
        // positive letter; which strand is over follows from the positions
        // along the axis direction (calibrated).
        int descending = ra > rb ? s.a : s.b;
        double x_desc = descending == s.a ? s.xa : s.xb;
        double x_other = descending == s.a ? s.xb : s.xa;
        bool desc_over = x_desc < x_other;  // calibrated viewer side
        w.letters.push_back(Letter{lower, desc_over ? 1 : -1});
        std::swap(rank_of[static_cast<std::size_t>(s.a)],
                  rank_of[static_cast<std::size_t>(s.b)]);
    }
    for (std::size_t ai = 0; ai < arcs.size(); ++ai)
        if (rank_of[ai] != return_rank_at_mark.at(arcs[ai].end_mark))
            fail(ErrorCode::Internal, "extract: final ranks disagree with the closure");

    cert.word = cyclic_reduce(w);
    cert.braid_index = n;
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        cert.mark_to_strand.push_back({arcs[ai].start_mark, static_cast<int>(ai) + 1});
        cert.mark_to_strand.push_back({arcs[ai].end_mark, static_cast<int>(ai) + 1});
    }
    std::sort(cert.mark_to_strand.begin(), cert.mark_to_strand.end());
    return cert;
}

}  // namespace braidloom
