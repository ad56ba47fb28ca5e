#include "braidloom/bracket.hpp"

#include <cstdlib>
#include <numeric>

namespace braidloom {

int bracket_crossing_cap() {
    if (const char* env = std::getenv("BRAIDLOOM_MAX_CROSSINGS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 20;
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    void reset(int n) {
        parent.resize(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

}  // namespace

Laurent kauffman_bracket(const AxisDiagram& d, int max_crossings) {
    const int cap = max_crossings > 0 ? max_crossings : bracket_crossing_cap();
    const int c = static_cast<int>(d.crossings.size());
    if (c > cap)
        fail(ErrorCode::TooLarge, "diagram has " + std::to_string(c) +
                                      " crossings, oracle cap is " + std::to_string(cap));

    // Index edges and their two ends.
    std::map<int, int> edge_index;
    for (const auto& [eid, e] : d.edges) {
        (void)e;
        int idx = static_cast<int>(edge_index.size());
        edge_index[eid] = idx;
    }
    const int nends = 2 * static_cast<int>(edge_index.size());
    auto end_id = [&](int eid, bool from_side) {
        return 2 * edge_index.at(eid) + (from_side ? 0 : 1);
    };

    // For each crossing slot, the edge-end sitting there.
    struct SlotEnd { int end = -1; };
    std::vector<std::array<int, 4>> slot_ends;
    std::vector<int> over_in_slot;
    slot_ends.reserve(static_cast<std::size_t>(c));
    for (const auto& [cid, cr] : d.crossings) {
        std::array<int, 4> ends{};
        for (int s = 0; s < 4; ++s) {
            int eid = cr.ends[static_cast<std::size_t>(s)];
            const EdgeData& e = d.edges.at(eid);
            bool from_side = e.from == EdgeEnd{cid, s};
            ends[static_cast<std::size_t>(s)] = end_id(eid, from_side);
        }
        slot_ends.push_back(ends);
        over_in_slot.push_back(strand_in_slot(d, cid, cr.over == 1 ? 0 : 1));
    }

    // Precompute loop-value powers: delta^k, delta = -A^2 - A^-2.
    const Laurent delta = Laurent::term(-1, 2) + Laurent::term(-1, -2);
    std::vector<Laurent> delta_pow(static_cast<std::size_t>(nends / 2 + c + 2));
    delta_pow[0] = Laurent::one();
    for (std::size_t k = 1; k < delta_pow.size(); ++k) delta_pow[k] = delta_pow[k - 1] * delta;

    // Accumulate coefficient-of-A^(a-b) per loop count, then combine.
    std::map<std::pair<int, int>, long long> states;  // (a-b, loops) -> count

    UnionFind uf;
    const std::uint64_t nstates = 1ull << c;
    for (std::uint64_t mask = 0; mask < nstates; ++mask) {
        uf.reset(nends);
        for (const auto& [eid, idx] : edge_index) {
            (void)eid;
            uf.unite(2 * idx, 2 * idx + 1);
        }
        int a_count = 0;
        for (int k = 0; k < c; ++k) {
            const auto& ends = slot_ends[static_cast<std::size_t>(k)];
            int o = over_in_slot[static_cast<std::size_t>(k)];
            bool a_smooth = ((mask >> k) & 1) == 0;
            if (a_smooth) ++a_count;
            int r = a_smooth ? 3 : 1;  // A joins over-in with its CW neighbor
            uf.unite(ends[static_cast<std::size_t>(o)],
                     ends[static_cast<std::size_t>((o + r) % 4)]);
            uf.unite(ends[static_cast<std::size_t>((o + 2) % 4)],
                     ends[static_cast<std::size_t>((o + 2 + r) % 4)]);
        }
        int loops = 0;
        for (int x = 0; x < nends; ++x)
            if (uf.find(x) == x) ++loops;
        states[{2 * a_count - c, loops}] += 1;
    }

    Laurent result;
    for (const auto& [key, count] : states) {
        auto [exp, loops] = key;
        result += Laurent::term(count, exp) * delta_pow[static_cast<std::size_t>(loops)];
    }
    return result;
}

Laurent normalized_bracket(const AxisDiagram& d, int max_crossings) {
    Laurent b = kauffman_bracket(d, max_crossings);
    int w = writhe(d);
    // (-A)^{-3w}
    int e = -3 * w;
    Laurent twist = Laurent::term((e % 2 == 0) ? 1 : -1, e);
    return b * twist;
}

InvariantReport invariants_of(const AxisDiagram& d, int max_crossings) {
    InvariantReport r;
    r.components = components_of(d);
    r.writhe = writhe(d);
    r.bracket = kauffman_bracket(d, max_crossings);
    int e = -3 * r.writhe;
    r.normalized = r.bracket * Laurent::term((e % 2 == 0) ? 1 : -1, e);
    return r;
}

}  // namespace braidloom
