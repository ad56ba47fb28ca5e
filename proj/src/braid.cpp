#include "braidloom/braid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace braidloom {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::SiteMismatch: return "SiteMismatch";
        case ErrorCode::IllegalDeath: return "IllegalDeath";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::IllegalDestabilize: return "IllegalDestabilize";
        case ErrorCode::InvalidMovie: return "InvalidMovie";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NonEmbeddedBand: return "NonEmbeddedBand";
        case ErrorCode::ObstructedRouting: return "ObstructedRouting";
        case ErrorCode::NotThreaded: return "NotThreaded";
        case ErrorCode::IncompatibleOverpasses: return "IncompatibleOverpasses";
        case ErrorCode::NotBadPattern: return "NotBadPattern";
        case ErrorCode::BadR3Unresolved: return "BadR3Unresolved";
        case ErrorCode::InconsistentDisk: return "InconsistentDisk";
        case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
        case ErrorCode::NonEmptyStart: return "NonEmptyStart";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

std::string ValidationReport::to_string() const {
    std::ostringstream ss;
    ss << (pass ? "PASS" : "FAIL") << "\n";
    for (const auto& f : findings) {
        const char* sev = f.severity == Severity::Error     ? "error"
                          : f.severity == Severity::Warning ? "warning"
                                                            : "info";
        ss << "  [" << sev << "] " << f.location << ": " << f.message << "\n";
    }
    for (const auto& [k, v] : metrics) ss << "  " << k << " = " << v << "\n";
    return ss.str();
}

void check_word(const BraidWord& w) {
    if (w.index < 0) fail(ErrorCode::InvariantViolation, "negative braid index");
    for (const auto& l : w.letters) {
        if (l.sign != 1 && l.sign != -1)
            fail(ErrorCode::InvariantViolation, "letter sign must be +1 or -1");
        if (l.generator < 1 || l.generator > w.index - 1)
            fail(ErrorCode::InvariantViolation,
                 "generator " + std::to_string(l.generator) + " out of range for index " +
                     std::to_string(w.index));
    }
}

std::vector<int> permutation_of(const BraidWord& w) {
    check_word(w);
    // pos[j] = current position of the strand that started at j.
    std::vector<int> pos(static_cast<std::size_t>(w.index));
    std::iota(pos.begin(), pos.end(), 0);
    for (const auto& l : w.letters) {
        int a = l.generator - 1, b = l.generator;
        for (auto& p : pos) {
            if (p == a) p = b;
            else if (p == b) p = a;
        }
    }
    return pos;
}

int closure_components(const BraidWord& w) {
    auto perm = permutation_of(w);
    std::vector<bool> seen(perm.size(), false);
    int cycles = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(perm[j]);
        }
    }
    return cycles;
}

int exponent_sum(const BraidWord& w) {
    int s = 0;
    for (const auto& l : w.letters) s += l.sign;
    return s;
}

const char* event_kind_name(const BraidedMovieEvent& e) {
    struct V {
        const char* operator()(const CyclicShift&) const { return "cyclic"; }
        const char* operator()(const Relation3&) const { return "relation3"; }
        const char* operator()(const Commute&) const { return "commute"; }
        const char* operator()(const CancelInsert&) const { return "cancel+"; }
        const char* operator()(const CancelDelete&) const { return "cancel-"; }
        const char* operator()(const Birth&) const { return "birth"; }
        const char* operator()(const Death&) const { return "death"; }
        const char* operator()(const Band&) const { return "band"; }
    };
    return std::visit(V{}, e);
}

bool is_critical_event(const BraidedMovieEvent& e) {
    return std::holds_alternative<Birth>(e) || std::holds_alternative<Death>(e) ||
           std::holds_alternative<Band>(e);
}

namespace {

void require_pos(const BraidWord& w, int pos, int span) {
    if (pos < 0 || pos + span > static_cast<int>(w.letters.size()))
        fail(ErrorCode::IndexOutOfRange,
             "position " + std::to_string(pos) + " out of range in word of length " +
                 std::to_string(w.letters.size()));
}

struct ApplyVisitor {
    const BraidWord& w;

    BraidWord operator()(const CyclicShift& e) const {
        BraidWord out = w;
        const int n = static_cast<int>(w.letters.size());
        if (n == 0) return out;
        int k = ((e.k % n) + n) % n;
        std::rotate(out.letters.begin(), out.letters.begin() + k, out.letters.end());
        return out;
    }

    BraidWord operator()(const Relation3& e) const {
        require_pos(w, e.pos, 3);
        const Letter &a = w.letters[static_cast<std::size_t>(e.pos)],
                     &b = w.letters[static_cast<std::size_t>(e.pos) + 1],
                     &c = w.letters[static_cast<std::size_t>(e.pos) + 2];
        if (a.sign != b.sign || b.sign != c.sign)
            fail(ErrorCode::SiteMismatch, "relation3 needs a uniform-sign triple");
        BraidWord out = w;
        auto set = [&](int off, int gen) {
            out.letters[static_cast<std::size_t>(e.pos + off)] = Letter{gen, a.sign};
        };
        if (a.generator == c.generator && b.generator == a.generator + 1) {
            // sigma_i sigma_{i+1} sigma_i -> sigma_{i+1} sigma_i sigma_{i+1}
            set(0, b.generator);
            set(1, a.generator);
            set(2, b.generator);
        } else if (a.generator == c.generator && b.generator == a.generator - 1) {
            // sigma_{i+1} sigma_i sigma_{i+1} -> sigma_i sigma_{i+1} sigma_i
            set(0, b.generator);
            set(1, a.generator);
            set(2, b.generator);
        } else {
            fail(ErrorCode::SiteMismatch, "relation3 pattern absent at position " +
                                              std::to_string(e.pos));
        }
        return out;
    }

    BraidWord operator()(const Commute& e) const {
        require_pos(w, e.pos, 2);
        const Letter &a = w.letters[static_cast<std::size_t>(e.pos)],
                     &b = w.letters[static_cast<std::size_t>(e.pos) + 1];
        if (std::abs(a.generator - b.generator) < 2)
            fail(ErrorCode::SiteMismatch, "commute needs |i-j| >= 2");
        BraidWord out = w;
        std::swap(out.letters[static_cast<std::size_t>(e.pos)],
                  out.letters[static_cast<std::size_t>(e.pos) + 1]);
        return out;
    }

    BraidWord operator()(const CancelInsert& e) const {
        if (e.pos < 0 || e.pos > static_cast<int>(w.letters.size()))
            fail(ErrorCode::IndexOutOfRange, "cancel+ position out of range");
        if (e.generator < 1 || e.generator > w.index - 1)
            fail(ErrorCode::IndexOutOfRange, "cancel+ generator out of range");
        BraidWord out = w;
        out.letters.insert(out.letters.begin() + e.pos,
                           {Letter{e.generator, e.sign}, Letter{e.generator, -e.sign}});
        return out;
    }

    BraidWord operator()(const CancelDelete& e) const {
        require_pos(w, e.pos, 2);
        const Letter &a = w.letters[static_cast<std::size_t>(e.pos)],
                     &b = w.letters[static_cast<std::size_t>(e.pos) + 1];
        if (a.generator != b.generator || a.sign != -b.sign)
            fail(ErrorCode::SiteMismatch, "cancel- needs a canceling adjacent pair");
        BraidWord out = w;
        out.letters.erase(out.letters.begin() + e.pos, out.letters.begin() + e.pos + 2);
        return out;
    }

    BraidWord operator()(const Birth&) const {
        BraidWord out = w;
        out.index += 1;
        return out;
    }

    BraidWord operator()(const Death&) const {
        if (w.index < 1) fail(ErrorCode::IllegalDeath, "death on empty 0-strand word");
        for (const auto& l : w.letters)
            if (l.generator == w.index - 1)
                fail(ErrorCode::IllegalDeath, "strand " + std::to_string(w.index) +
                                                  " is not a disjoint loop");
        BraidWord out = w;
        out.index -= 1;
        return out;
    }

    BraidWord operator()(const Band& e) const {
        const int len = static_cast<int>(w.letters.size());
        if (e.pos >= 0 && e.pos < len &&
            w.letters[static_cast<std::size_t>(e.pos)] == Letter{e.generator, e.sign}) {
            BraidWord out = w;
            out.letters.erase(out.letters.begin() + e.pos);
            return out;
        }
        if (e.pos < 0 || e.pos > len)
            fail(ErrorCode::IndexOutOfRange, "band position out of range");
        if (e.generator < 1 || e.generator > w.index - 1)
            fail(ErrorCode::SiteMismatch, "band generator out of range for index " +
                                              std::to_string(w.index));
        BraidWord out = w;
        out.letters.insert(out.letters.begin() + e.pos, Letter{e.generator, e.sign});
        return out;
    }
};

}  // namespace

BraidWord apply_event(const BraidWord& w, const BraidedMovieEvent& e) {
    check_word(w);
    BraidWord out = std::visit(ApplyVisitor{w}, e);
    check_word(out);
    return out;
}

std::vector<BraidWord> movie_stills(const BraidedMovie& m) {
    std::vector<BraidWord> stills;
    stills.reserve(m.events.size() + 1);
    stills.push_back(m.initial);
    for (const auto& e : m.events) stills.push_back(apply_event(stills.back(), e));
    return stills;
}

ValidationReport validate_movie(const BraidedMovie& m) {
    ValidationReport report;
    BraidWord cur = m.initial;
    try {
        check_word(cur);
    } catch (const Error& err) {
        report.add(Severity::Error, "initial", err.what());
        return report;
    }
    int chi = 0;
    for (std::size_t i = 0; i < m.events.size(); ++i) {
        const auto& e = m.events[i];
        std::string loc = "event " + std::to_string(i) + " (" + event_kind_name(e) + ")";
        try {
            BraidWord next = apply_event(cur, e);
            int dc = closure_components(next) - closure_components(cur);
            int dx = exponent_sum(next) - exponent_sum(cur);
            int dn = next.index - cur.index;
            std::ostringstream ss;
            ss << "delta components " << dc << ", exponent " << dx << ", index " << dn;
            report.add(Severity::Info, loc, ss.str());
            if (std::holds_alternative<Birth>(e) || std::holds_alternative<Death>(e)) chi += 1;
            if (std::holds_alternative<Band>(e)) chi -= 1;
            cur = next;
        } catch (const Error& err) {
            report.add(Severity::Error, loc, err.what());
            return report;
        }
    }
    report.metrics["chi"] = chi;
    report.metrics["events"] = static_cast<long long>(m.events.size());
    report.metrics["final_components"] = closure_components(cur);
    report.metrics["final_index"] = cur.index;
    return report;
}

int euler_characteristic(const BraidedMovie& m) {
    ValidationReport report = validate_movie(m);
    if (!report.pass) fail(ErrorCode::InvalidMovie, "movie fails validation");
    int chi = 0;
    for (const auto& e : m.events) {
        if (std::holds_alternative<Birth>(e) || std::holds_alternative<Death>(e)) chi += 1;
        if (std::holds_alternative<Band>(e)) chi -= 1;
    }
    return chi;
}

namespace {

struct MarkovVisitor {
    const BraidWord& w;

    BraidWord operator()(const Conjugate& m) const {
        if (m.by.index != w.index)
            fail(ErrorCode::IndexOutOfRange, "conjugating word has mismatched index");
        check_word(m.by);
        return concat(concat(m.by, w), inverse_word(m.by));
    }

    BraidWord operator()(const StabilizePositive&) const {
        BraidWord out = w;
        out.index += 1;
        out.letters.push_back(Letter{w.index, 1});
        return out;
    }

    BraidWord operator()(const StabilizeNegative&) const {
        BraidWord out = w;
        out.index += 1;
        out.letters.push_back(Letter{w.index, -1});
        return out;
    }

    BraidWord operator()(const Destabilize&) const {
        if (w.letters.empty())
            fail(ErrorCode::IllegalDestabilize, "empty word has no terminal letter");
        const Letter last = w.letters.back();
        if (last.generator != w.index - 1)
            fail(ErrorCode::IllegalDestabilize, "terminal letter is not sigma_{n-1}");
        for (std::size_t i = 0; i + 1 < w.letters.size(); ++i)
            if (w.letters[i].generator == w.index - 1)
                fail(ErrorCode::IllegalDestabilize, "generator n-1 occurs before the end");
        BraidWord out = w;
        out.letters.pop_back();
        out.index -= 1;
        return out;
    }
};

}  // namespace

BraidWord apply_markov(const BraidWord& w, const MarkovMove& mv) {
    check_word(w);
    BraidWord out = std::visit(MarkovVisitor{w}, mv);
    check_word(out);
    return out;
}

BraidWord free_reduce(const BraidWord& w) {
    BraidWord cur = w;
    bool changed = true;
    while (changed) {
        changed = false;
        // Adjacent cancellation.
        for (std::size_t i = 0; i + 1 < cur.letters.size(); ++i) {
            if (cur.letters[i].generator == cur.letters[i + 1].generator &&
                cur.letters[i].sign == -cur.letters[i + 1].sign) {
                cur.letters.erase(cur.letters.begin() + static_cast<long>(i),
                                  cur.letters.begin() + static_cast<long>(i) + 2);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        // Commute a letter toward a canceling partner.
        for (std::size_t i = 0; !changed && i + 1 < cur.letters.size(); ++i) {
            for (std::size_t j = i + 1; j < cur.letters.size(); ++j) {
                if (std::abs(cur.letters[i].generator - cur.letters[j].generator) < 2 &&
                    cur.letters[i].generator != cur.letters[j].generator)
                    break;  // blocked
                if (cur.letters[i].generator == cur.letters[j].generator) {
                    if (cur.letters[i].sign == -cur.letters[j].sign) {
                        cur.letters.erase(cur.letters.begin() + static_cast<long>(j));
                        cur.letters.erase(cur.letters.begin() + static_cast<long>(i));
                        changed = true;
                    }
                    break;
                }
            }
        }
        if (changed) continue;
        // Cyclic cancellation (conjugation, closure-safe).
        const std::size_t len = cur.letters.size();
        if (len >= 2 && cur.letters.front().generator == cur.letters.back().generator &&
            cur.letters.front().sign == -cur.letters.back().sign) {
            cur.letters.pop_back();
            cur.letters.erase(cur.letters.begin());
            changed = true;
        }
    }
    return cur;
}

BraidWord handle_reduce(const BraidWord& w) {
    BraidWord cur = free_reduce(w);
    BraidWord best = cur;
    const std::size_t watchdog = 64 * (cur.letters.size() + 16);
    for (int step = 0; step < 200000; ++step) {
        if (cur.letters.size() < best.letters.size()) best = cur;
        if (cur.letters.size() > watchdog) return best;
        // A handle: two occurrences of one generator with opposite signs and
        // no occurrence of it between. Reducible when the interior letters of
        // the neighboring generator sit on one side only and carry one sign
        // (innermost strategy keeps the rewriting terminating).
        int ha = -1, hb = -1;
        bool dual = false;
        const int len = static_cast<int>(cur.letters.size());
        for (int a = 0; a < len && ha < 0; ++a) {
            int gi = cur.letters[static_cast<std::size_t>(a)].generator;
            int e = cur.letters[static_cast<std::size_t>(a)].sign;
            for (int b = a + 1; b < len; ++b) {
                const Letter& lb = cur.letters[static_cast<std::size_t>(b)];
                if (lb.generator == gi) {
                    if (lb.sign != -e) break;
                    bool up_plus = false, up_minus = false, dn_plus = false, dn_minus = false;
                    for (int k = a + 1; k < b; ++k) {
                        const Letter& lk = cur.letters[static_cast<std::size_t>(k)];
                        if (lk.generator == gi + 1) (lk.sign > 0 ? up_plus : up_minus) = true;
                        if (lk.generator == gi - 1) (lk.sign > 0 ? dn_plus : dn_minus) = true;
                    }
                    bool has_dn = dn_plus || dn_minus;
                    if (!has_dn && !(up_plus && up_minus)) {
                        ha = a;
                        hb = b;
                        dual = false;
                    }
                    break;
                }
            }
        }
        if (ha < 0) break;
        const int gi = cur.letters[static_cast<std::size_t>(ha)].generator;
        const int e = cur.letters[static_cast<std::size_t>(ha)].sign;
        const int gn = dual ? gi - 1 : gi + 1;
        BraidWord next;
        next.index = cur.index;
        for (int k = 0; k < ha; ++k)
            next.letters.push_back(cur.letters[static_cast<std::size_t>(k)]);
        for (int k = ha + 1; k < hb; ++k) {
            const Letter& l = cur.letters[static_cast<std::size_t>(k)];
            if (l.generator == gn) {
                next.letters.push_back(Letter{gn, -e});
                next.letters.push_back(Letter{gi, l.sign});
                next.letters.push_back(Letter{gn, e});
            } else {
                next.letters.push_back(l);
            }
        }
        for (int k = hb + 1; k < len; ++k)
            next.letters.push_back(cur.letters[static_cast<std::size_t>(k)]);
        cur = free_reduce(next);
    }
    return cur;  // handle-free fixed point (best only on watchdog exit)
}

BraidWord cyclic_reduce(const BraidWord& w) {
    BraidWord best = handle_reduce(w);
    bool improved = true;
    while (improved) {
        improved = false;
        const int len = static_cast<int>(best.letters.size());
        for (int k = 1; k < len; ++k) {
            BraidWord rot = best;
            std::rotate(rot.letters.begin(), rot.letters.begin() + k, rot.letters.end());
            BraidWord red = handle_reduce(rot);
            if (red.letters.size() < best.letters.size()) {
                best = red;
                improved = true;
                break;
            }
        }
    }
    return best;
}

namespace {

// One dual handle rewrite on the top generator: sigma_t^e v sigma_t^-e with v
// free of sigma_t and its sigma_{t-1} letters of one sign collapses the pair.
bool reduce_top_handle(BraidWord& cur) {
    const int len = static_cast<int>(cur.letters.size());
    const int top = cur.index - 1;
    for (int shift = 0; shift < std::max(1, len); ++shift) {
        BraidWord rot = cur;
        std::rotate(rot.letters.begin(), rot.letters.begin() + shift, rot.letters.end());
        for (int a = 0; a < len; ++a) {
            if (rot.letters[static_cast<std::size_t>(a)].generator != top) continue;
            int e = rot.letters[static_cast<std::size_t>(a)].sign;
            for (int b = a + 1; b < len; ++b) {
                const Letter& lb = rot.letters[static_cast<std::size_t>(b)];
                if (lb.generator != top) continue;
                if (lb.sign != -e) break;
                bool plus = false, minus = false;
                for (int k = a + 1; k < b; ++k) {
                    const Letter& lk = rot.letters[static_cast<std::size_t>(k)];
                    if (lk.generator == top - 1) (lk.sign > 0 ? plus : minus) = true;
                }
                if (plus && minus) break;
                BraidWord next;
                next.index = rot.index;
                for (int k = 0; k < a; ++k)
                    next.letters.push_back(rot.letters[static_cast<std::size_t>(k)]);
                for (int k = a + 1; k < b; ++k) {
                    const Letter& l = rot.letters[static_cast<std::size_t>(k)];
                    if (l.generator == top - 1) {
                        next.letters.push_back(Letter{top - 1, -e});
                        next.letters.push_back(Letter{top, l.sign});
                        next.letters.push_back(Letter{top - 1, e});
                    } else {
                        next.letters.push_back(l);
                    }
                }
                for (int k = b + 1; k < len; ++k)
                    next.letters.push_back(rot.letters[static_cast<std::size_t>(k)]);
                cur = free_reduce(next);
                return true;
            }
            break;
        }
    }
    return false;
}

}  // namespace

BraidWord markov_shrink(const BraidWord& w) {
    BraidWord cur = cyclic_reduce(w);
    for (int guard = 0; guard < 4000; ++guard) {
        // Destabilize whenever some rotation ends in a unique top letter.
        bool destabilized = false;
        const int len = static_cast<int>(cur.letters.size());
        for (int k = 0; k < std::max(1, len); ++k) {
            BraidWord rot = cur;
            std::rotate(rot.letters.begin(), rot.letters.begin() + k, rot.letters.end());
            try {
                BraidWord dest = apply_markov(rot, Destabilize{});
                cur = cyclic_reduce(dest);
                destabilized = true;
                break;
            } catch (const Error&) {
            }
        }
        if (destabilized) continue;
        // Untwist the top generator toward a unique occurrence.
        int top_count = 0;
        for (const auto& l : cur.letters)
            if (l.generator == cur.index - 1) ++top_count;
        if (top_count >= 2 && reduce_top_handle(cur)) {
            cur = cyclic_reduce(cur);
            continue;
        }
        break;
    }
    return cur;
}

BraidWord inverse_word(const BraidWord& w) {
    BraidWord out;
    out.index = w.index;
    out.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        out.letters.push_back(Letter{it->generator, -it->sign});
    return out;
}

BraidWord concat(const BraidWord& a, const BraidWord& b) {
    if (a.index != b.index) fail(ErrorCode::IndexOutOfRange, "concat of mismatched indices");
    BraidWord out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

std::string word_to_string(const BraidWord& w) {
    std::ostringstream ss;
    ss << "B" << w.index << "[";
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) ss << " ";
        ss << (w.letters[i].sign > 0 ? "" : "-") << w.letters[i].generator;
    }
    ss << "]";
    return ss.str();
}

}  // namespace braidloom
