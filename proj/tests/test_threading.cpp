#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "braidloom/bracket.hpp"
#include "braidloom/generate.hpp"
#include "braidloom/threading.hpp"

using namespace braidloom;

namespace {

BraidWord make_word(int n, std::initializer_list<int> signed_gens) {
    BraidWord w;
    w.index = n;
    for (int g : signed_gens) w.letters.push_back(Letter{std::abs(g), g > 0 ? 1 : -1});
    return w;
}

}  // namespace

TEST_CASE("closure diagram matches braid invariants") {
    BraidWord w = make_word(2, {1, 1, 1});
    AxisDiagram d = closure_diagram(w);
    auto r = validate_diagram(d);
    INFO(r.to_string());
    CHECK(r.pass);
    CHECK(components_of(d) == closure_components(w));
    CHECK(writhe(d) == exponent_sum(w));
    CHECK(normalized_bracket(d) == normalized_bracket(trefoil_diagram(false)));
}

TEST_CASE("closure of the empty 3-braid is a 3-unlink") {
    AxisDiagram d = closure_diagram(make_word(3, {}));
    CHECK(validate_diagram(d).pass);
    CHECK(components_of(d) == 3);
}

TEST_CASE("rendered box form validates and reads back") {
    for (auto w : {make_word(1, {}), make_word(2, {1}), make_word(2, {1, 1, 1}),
                   make_word(3, {1, 2}), make_word(3, {1, -2, 1, -2}),
                   make_word(4, {1, 2, 3, -2, 1})}) {
        ThreadedDiagram t = render_closed_braid(w);
        auto r = validate_diagram(t.diagram);
        INFO(word_to_string(w) << "\n" << r.to_string());
        CHECK(r.pass);
        auto back = read_box_form(t.diagram);
        REQUIRE(back.has_value());
        CHECK(*back == w);
    }
}

TEST_CASE("box forms of overs-then-unders words are genuinely threaded") {
    // A braid box is threaded exactly when every strand reads overs before
    // unders on its circuit.
    for (auto w : {make_word(1, {}), make_word(2, {1}), make_word(3, {1, 2})}) {
        ThreadedDiagram t = render_closed_braid(w);
        INFO(word_to_string(w));
        CHECK(is_threaded(t.diagram, t.overpasses));
        ThreadingCertificate cert = braid_from_threaded(t);
        CHECK(cert.word == w);
        CHECK(cert.braid_index == w.index);
        CHECK(static_cast<int>(cert.mark_to_strand.size()) == 2 * w.index);
    }
    // The standard trefoil box is not in that position.
    ThreadedDiagram t = render_closed_braid(make_word(2, {1, 1, 1}));
    CHECK_FALSE(is_threaded(t.diagram, t.overpasses));
}

TEST_CASE("box form invariants equal plain closure invariants") {
    BraidWord w = make_word(3, {1, -2, 1, -2});
    ThreadedDiagram t = render_closed_braid(w);
    CHECK(normalized_bracket(t.diagram) == normalized_bracket(closure_diagram(w)));
    CHECK(components_of(t.diagram) == closure_components(w));
}

TEST_CASE("choose_overpasses on the trefoil gives three bridges") {
    auto [d, o] = choose_overpasses(trefoil_diagram(false));
    CHECK(validate_diagram(d).pass);
    CHECK(o.s_points.size() == 3);
    CHECK(o.f_points.size() == 3);
}

TEST_CASE("choose_overpasses on the round unknot gives one pair") {
    auto [d, o] = choose_overpasses(round_unknot());
    CHECK(o.s_points.size() == 1);
    CHECK(o.f_points.size() == 1);
}

TEST_CASE("thread produces a threaded diagram on the round unknot") {
    auto [d, o] = choose_overpasses(round_unknot());
    ThreadedDiagram t = thread(d, o);
    auto r = validate_diagram(t.diagram);
    INFO(r.to_string());
    CHECK(r.pass);
    CHECK(is_threaded(t.diagram, t.overpasses));
    CHECK(t.diagram.marks.size() == 2);
}

TEST_CASE("thread produces a threaded trefoil with the diagram untouched") {
    AxisDiagram base = trefoil_diagram(false);
    Laurent before = normalized_bracket(base);
    auto [d, o] = choose_overpasses(base);
    ThreadedDiagram t = thread(d, o);
    auto r = validate_diagram(t.diagram);
    INFO(r.to_string());
    CHECK(r.pass);
    CHECK(is_threaded(t.diagram, t.overpasses));
    CHECK(normalized_bracket(t.diagram) == before);
    CHECK(t.diagram.marks.size() >= 6);
}

TEST_CASE("is_threaded rejects a flipped h-crossing") {
    ThreadedDiagram t = render_closed_braid(make_word(2, {1}));
    AxisDiagram bad = t.diagram;
    bad.marks.begin()->second.h = bad.marks.begin()->second.h == HFlag::Over
                                      ? HFlag::Under
                                      : HFlag::Over;
    CHECK_FALSE(is_threaded(bad, t.overpasses));
}

TEST_CASE("is_threaded rejects an S point in D+") {
    ThreadedDiagram t = render_closed_braid(make_word(2, {1}));
    AxisDiagram bad = t.diagram;
    // Move an S point across a mark: swap it with its neighbor in the list.
    for (auto& [eid, e] : bad.edges) {
        (void)eid;
        for (std::size_t i = 0; i + 1 < e.points.size(); ++i) {
            if (e.points[i].kind == EdgePoint::Kind::OverS &&
                e.points[i + 1].kind == EdgePoint::Kind::AxisMark) {
                std::swap(e.points[i], e.points[i + 1]);
                CHECK_FALSE(is_threaded(bad, t.overpasses));
                return;
            }
        }
    }
    FAIL("no S point adjacent to a mark");
}

TEST_CASE("general extraction: unknot pipeline") {
    auto [d, o] = choose_overpasses(round_unknot());
    ThreadedDiagram t = thread(d, o);
    ThreadingCertificate cert = braid_from_threaded(t);
    CHECK(cert.braid_index == static_cast<int>(t.diagram.marks.size()) / 2);
    AxisDiagram closed = closure_diagram(cert.word);
    CHECK(components_of(closed) == 1);
    CHECK(normalized_bracket(closed) == normalized_bracket(round_unknot()));
}

TEST_CASE("general extraction: trefoil pipeline matches the oracle") {
    AxisDiagram base = trefoil_diagram(false);
    Laurent target = normalized_bracket(base);
    auto [d, o] = choose_overpasses(base);
    ThreadedDiagram t = thread(d, o);
    ThreadingCertificate cert = braid_from_threaded(t);
    INFO("word: " << word_to_string(cert.word));
    CHECK(cert.braid_index == static_cast<int>(t.diagram.marks.size()) / 2);
    AxisDiagram closed = closure_diagram(cert.word);
    CHECK(components_of(closed) == 1);
    CHECK(normalized_bracket(closed) == target);
}

TEST_CASE("general extraction: mirror trefoil keeps its chirality") {
    AxisDiagram base = trefoil_diagram(true);
    Laurent target = normalized_bracket(base);
    auto [d, o] = choose_overpasses(base);
    ThreadedDiagram t = thread(d, o);
    ThreadingCertificate cert = braid_from_threaded(t);
    AxisDiagram closed = closure_diagram(cert.word);
    CHECK(normalized_bracket(closed) == target);
}

TEST_CASE("general extraction: corpus stress over torus, twist and random diagrams") {
    std::vector<AxisDiagram> corpus;
    for (int q = 2; q <= 7; ++q) {
        BraidWord w{2, {}};
        for (int i = 0; i < q; ++i) w.letters.push_back(Letter{1, 1});
        corpus.push_back(closure_diagram(w));
    }
    for (int tw = 1; tw <= 4; ++tw) corpus.push_back(twist_knot_diagram(tw));
    for (std::uint64_t seed = 1; seed <= 8; ++seed) corpus.push_back(random_diagram(seed, 12));

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const AxisDiagram& base = corpus[i];
        INFO("corpus item " << i << " (" << base.name << ", "
                            << base.crossings.size() << " crossings)");
        REQUIRE(validate_diagram(base).pass);
        Laurent target = normalized_bracket(base);
        int comps = components_of(base);
        auto [d, o] = choose_overpasses(base);
        ThreadedDiagram t = thread(d, o);
        CHECK(is_threaded(t.diagram, t.overpasses));
        ThreadingCertificate cert = braid_from_threaded(t);
        CHECK(cert.braid_index == static_cast<int>(t.diagram.marks.size()) / 2);
        AxisDiagram closed = closure_diagram(markov_shrink(cert.word));
        CHECK(components_of(closed) == comps);
        CHECK(normalized_bracket(closed) == target);
    }
}
