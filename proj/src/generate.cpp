#include "braidloom/generate.hpp"

#include <algorithm>

#include "braidloom/threading.hpp"

namespace braidloom {

BraidedMovie random_braided_movie(std::uint64_t seed, int max_events, int max_index) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    BraidedMovie m;
    m.name = "random" + std::to_string(seed);
    m.initial.index = 1 + pick(std::max(1, max_index - 1));
    for (int i = 0; i < pick(5) && m.initial.index >= 2; ++i)
        m.initial.letters.push_back(Letter{1 + pick(m.initial.index - 1), pick(2) ? 1 : -1});
    BraidWord cur = m.initial;
    int guard = 0;
    while (static_cast<int>(m.events.size()) < max_events && ++guard < 40 * max_events) {
        BraidedMovieEvent e = Birth{};
        const int len = static_cast<int>(cur.letters.size());
        switch (pick(9)) {
            case 0:
                if (cur.index >= max_index) continue;
                e = Birth{};
                break;
            case 1: {
                bool used = false;
                for (const auto& l : cur.letters)
                    if (l.generator == cur.index - 1) used = true;
                if (cur.index < 1 || used) continue;
                e = Death{};
                break;
            }
            case 2:
                if (cur.index < 2) continue;
                e = Band{pick(len + 1), 1 + pick(cur.index - 1), pick(2) ? 1 : -1};
                break;
            case 3:
                if (cur.index < 2) continue;
                e = CancelInsert{pick(len + 1), 1 + pick(cur.index - 1), pick(2) ? 1 : -1};
                break;
            case 4: {
                // Find a cancelable pair.
                std::vector<int> sites;
                for (int p = 0; p + 1 < len; ++p)
                    if (cur.letters[static_cast<std::size_t>(p)].generator ==
                            cur.letters[static_cast<std::size_t>(p) + 1].generator &&
                        cur.letters[static_cast<std::size_t>(p)].sign ==
                            -cur.letters[static_cast<std::size_t>(p) + 1].sign)
                        sites.push_back(p);
                if (sites.empty()) continue;
                e = CancelDelete{sites[static_cast<std::size_t>(pick(
                    static_cast<int>(sites.size())))]};
                break;
            }
            case 5: {
                std::vector<int> sites;
                for (int p = 0; p + 2 < len; ++p) {
                    const Letter &a = cur.letters[static_cast<std::size_t>(p)],
                                 &b = cur.letters[static_cast<std::size_t>(p) + 1],
                                 &c = cur.letters[static_cast<std::size_t>(p) + 2];
                    if (a.sign == b.sign && b.sign == c.sign && a.generator == c.generator &&
                        std::abs(a.generator - b.generator) == 1)
                        sites.push_back(p);
                }
                if (sites.empty()) continue;
                e = Relation3{sites[static_cast<std::size_t>(pick(
                    static_cast<int>(sites.size())))]};
                break;
            }
            case 6: {
                std::vector<int> sites;
                for (int p = 0; p + 1 < len; ++p)
                    if (std::abs(cur.letters[static_cast<std::size_t>(p)].generator -
                                 cur.letters[static_cast<std::size_t>(p) + 1].generator) >= 2)
                        sites.push_back(p);
                if (sites.empty()) continue;
                e = Commute{sites[static_cast<std::size_t>(pick(
                    static_cast<int>(sites.size())))]};
                break;
            }
            default:
                if (len == 0) continue;
                e = CyclicShift{1 + pick(len)};
                break;
        }
        try {
            cur = apply_event(cur, e);
            m.events.push_back(e);
        } catch (const Error&) {
        }
    }
    return m;
}

std::vector<InputEvent> random_isotopy_events(std::mt19937_64& rng, AxisDiagram& d, int count,
                                              int max_crossings) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    std::vector<InputEvent> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count && ++guard < 30 * count + 60) {
        InputEvent e = R3Slide{-1};
        int kind = pick(5);
        if (static_cast<int>(d.crossings.size()) >= max_crossings && kind <= 1) kind = 2 + pick(3);
        switch (kind) {
            case 0: {  // R1 insert
                std::vector<int> eids;
                for (const auto& [eid, ed] : d.edges)
                    if (!is_free_loop(ed)) eids.push_back(eid);
                if (eids.empty()) continue;
                int eid = eids[static_cast<std::size_t>(pick(static_cast<int>(eids.size())))];
                int at = pick(static_cast<int>(d.edges.at(eid).points.size()) + 1);
                e = R1Insert{eid, at, pick(2), 1 + pick(2)};
                break;
            }
            case 1: {  // R2 insert
                CombinedMap map(d);
                std::vector<R2Insert> cands;
                for (std::size_t f = 0; f < map.faces().size(); ++f) {
                    std::vector<int> edges_here;
                    for (const Dart& dd : map.faces()[f])
                        if (dd.kind == Dart::Kind::DiagramSeg) edges_here.push_back(dd.edge);
                    std::sort(edges_here.begin(), edges_here.end());
                    edges_here.erase(std::unique(edges_here.begin(), edges_here.end()),
                                     edges_here.end());
                    for (std::size_t i = 0; i < edges_here.size(); ++i)
                        for (std::size_t j = 0; j < edges_here.size(); ++j)
                            if (i != j)
                                cands.push_back(R2Insert{edges_here[i], 0, edges_here[j], 0,
                                                         static_cast<int>(f), pick(2) == 0});
                }
                if (cands.empty()) continue;
                e = cands[static_cast<std::size_t>(pick(static_cast<int>(cands.size())))];
                break;
            }
            case 2: {  // R1 delete
                std::vector<int> cands;
                for (const auto& [cid, c] : d.crossings) {
                    (void)c;
                    cands.push_back(cid);
                }
                if (cands.empty()) continue;
                e = R1Delete{cands[static_cast<std::size_t>(pick(static_cast<int>(cands.size())))]};
                break;
            }
            case 3: {  // R2 delete
                std::vector<int> cands;
                for (const auto& [cid, c] : d.crossings) {
                    (void)c;
                    cands.push_back(cid);
                }
                if (cands.size() < 2) continue;
                int a = cands[static_cast<std::size_t>(pick(static_cast<int>(cands.size())))];
                int b = cands[static_cast<std::size_t>(pick(static_cast<int>(cands.size())))];
                if (a == b) continue;
                e = R2Delete{a, b};
                break;
            }
            default: {  // R3
                CombinedMap map(d);
                std::vector<int> tris;
                for (std::size_t f = 0; f < map.faces().size(); ++f)
                    if (map.faces()[f].size() == 3) tris.push_back(static_cast<int>(f));
                if (tris.empty()) continue;
                e = R3Slide{tris[static_cast<std::size_t>(pick(static_cast<int>(tris.size())))]};
                break;
            }
        }
        try {
            AxisDiagram next = apply_input_event(d, e);
            if (!validate_diagram(next).pass) continue;
            d = next;
            out.push_back(e);
        } catch (const Error&) {
        }
    }
    return out;
}

AxisDiagram random_diagram(std::uint64_t seed, int max_crossings) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    // Seed link: a small braid closure.
    int n = 2 + pick(2);
    BraidWord w;
    w.index = n;
    int letters = 1 + pick(4);
    for (int i = 0; i < letters; ++i)
        w.letters.push_back(Letter{1 + pick(n - 1), pick(2) ? 1 : -1});
    AxisDiagram d = closure_diagram(w);
    d.name = "random" + std::to_string(seed);
    random_isotopy_events(rng, d, 3 + pick(6), max_crossings);
    return d;
}

}  // namespace braidloom
