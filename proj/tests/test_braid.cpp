#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "braidloom/braid.hpp"

using namespace braidloom;

namespace {

BraidWord make_word(int n, std::initializer_list<int> signed_gens) {
    BraidWord w;
    w.index = n;
    for (int g : signed_gens) w.letters.push_back(Letter{std::abs(g), g > 0 ? 1 : -1});
    return w;
}

// Independent cycle counter used as the brute-force oracle: follows strands
// through the letters one position swap at a time.
int oracle_closure_components(const BraidWord& w) {
    int n = w.index;
    std::vector<int> to(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int pos = i;
        for (const auto& l : w.letters) {
            if (pos == l.generator - 1) pos = l.generator;
            else if (pos == l.generator) pos = l.generator - 1;
        }
        to[static_cast<std::size_t>(i)] = pos;
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        ++cycles;
        for (int j = i; !seen[static_cast<std::size_t>(j)]; j = to[static_cast<std::size_t>(j)])
            seen[static_cast<std::size_t>(j)] = true;
    }
    return cycles;
}

}  // namespace

TEST_CASE("permutation of basic words") {
    CHECK(permutation_of(make_word(3, {})) == std::vector<int>{0, 1, 2});
    CHECK(permutation_of(make_word(2, {1, 1, 1})) == std::vector<int>{1, 0});
    // sigma_1 sigma_2 sigma_3 on 4 strands is a 4-cycle; composed by hand:
    // strand 0 ends at 1 -> 2 -> 3, strand k>0 shifts down by one.
    CHECK(permutation_of(make_word(4, {1, 2, 3})) == std::vector<int>{3, 0, 1, 2});
}

TEST_CASE("closure components") {
    CHECK(closure_components(make_word(3, {})) == 3);
    CHECK(closure_components(make_word(2, {1, 1, 1})) == 1);  // trefoil closure is a knot
    CHECK(closure_components(make_word(3, {1, 2})) == 1);
}

TEST_CASE("exponent sum") {
    CHECK(exponent_sum(make_word(2, {1, 1, 1})) == 3);
    CHECK(exponent_sum(make_word(2, {})) == 0);
    CHECK(exponent_sum(make_word(3, {1, -2, 1})) == 1);
}

TEST_CASE("apply_event birth death") {
    BraidWord w = make_word(2, {1, 1, 1});
    BraidWord b = apply_event(w, Birth{});
    CHECK(b.index == 3);
    CHECK(b.letters == w.letters);
    BraidWord back = apply_event(b, Death{});
    CHECK(back == w);
    // Death is illegal when strand n is used.
    CHECK_THROWS_AS(apply_event(w, Death{}), Error);
}

TEST_CASE("band insert then cancellations, components tracked per still") {
    BraidWord w = make_word(2, {1, 1, 1});
    CHECK(closure_components(w) == 1);
    BraidWord x = apply_event(w, Band{3, 1, -1});
    CHECK(x == make_word(2, {1, 1, 1, -1}));
    CHECK(closure_components(x) == 2);
    BraidWord y = apply_event(x, CancelDelete{2});
    CHECK(y == make_word(2, {1, 1}));
    CHECK(closure_components(y) == 2);
    BraidWord z = apply_event(y, Band{1, 1, 1});
    CHECK(z == make_word(2, {1}));
    CHECK(closure_components(z) == 1);
}

TEST_CASE("band deletes a matching letter") {
    BraidWord w = make_word(2, {1, 1, 1});
    BraidWord x = apply_event(w, Band{1, 1, 1});
    CHECK(x == make_word(2, {1, 1}));
}

TEST_CASE("relation3 and commute") {
    BraidWord w = make_word(3, {1, 2, 1});
    BraidWord x = apply_event(w, Relation3{0});
    CHECK(x == make_word(3, {2, 1, 2}));
    CHECK(apply_event(x, Relation3{0}) == w);
    CHECK_THROWS_AS(apply_event(make_word(3, {1, 2, -1}), Relation3{0}), Error);

    BraidWord c = make_word(4, {1, 3});
    CHECK(apply_event(c, Commute{0}) == make_word(4, {3, 1}));
    CHECK_THROWS_AS(apply_event(make_word(4, {1, 2}), Commute{0}), Error);
}

TEST_CASE("cyclic shift") {
    BraidWord w = make_word(3, {1, 2, 1, 2});
    BraidWord x = apply_event(w, CyclicShift{1});
    CHECK(x == make_word(3, {2, 1, 2, 1}));
    CHECK(apply_event(x, CyclicShift{-1}) == w);
}

TEST_CASE("validate_movie trivia") {
    BraidedMovie empty_on_trefoil{"m", make_word(2, {1, 1, 1}), {}};
    auto r1 = validate_movie(empty_on_trefoil);
    CHECK(r1.pass);
    CHECK(r1.metrics["events"] == 0);

    BraidedMovie sphere{"sphere", make_word(0, {}), {Birth{}, Death{}}};
    auto r2 = validate_movie(sphere);
    CHECK(r2.pass);
    CHECK(euler_characteristic(sphere) == 2);

    BraidedMovie bad{"bad", make_word(2, {1}), {Death{}}};
    CHECK_FALSE(validate_movie(bad).pass);
    CHECK_THROWS_AS(euler_characteristic(bad), Error);
}

TEST_CASE("markov moves") {
    BraidWord e1 = make_word(1, {});
    BraidWord s = apply_markov(e1, StabilizePositive{});
    CHECK(s == make_word(2, {1}));
    CHECK(apply_markov(s, Destabilize{}) == e1);

    BraidWord w = make_word(2, {1, 1, 1});
    BraidWord conj = apply_markov(w, Conjugate{make_word(2, {1})});
    CHECK(closure_components(conj) == closure_components(w));
    CHECK(exponent_sum(conj) == exponent_sum(w));

    CHECK_THROWS_AS(apply_markov(make_word(2, {1, 1}), Destabilize{}), Error);
}

TEST_CASE("randomized bookkeeping deltas match the event table") {
    std::mt19937_64 rng(7);
    for (int run = 0; run < 300; ++run) {
        BraidWord w;
        w.index = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < static_cast<int>(rng() % 6) && w.index >= 2; ++i)
            w.letters.push_back(
                Letter{1 + static_cast<int>(rng() % (w.index - 1)), rng() % 2 ? 1 : -1});
        for (int step = 0; step < 20; ++step) {
            // Draw a random applicable event.
            BraidedMovieEvent e = Birth{};
            int kind = static_cast<int>(rng() % 8);
            const int len = static_cast<int>(w.letters.size());
            switch (kind) {
                case 0: e = Birth{}; break;
                case 1: e = CyclicShift{static_cast<int>(rng() % 5) - 2}; break;
                case 2:
                    if (w.index < 2) continue;
                    e = CancelInsert{static_cast<int>(rng() % (len + 1)),
                                     1 + static_cast<int>(rng() % (w.index - 1)),
                                     rng() % 2 ? 1 : -1};
                    break;
                case 3:
                    if (w.index < 2) continue;
                    e = Band{static_cast<int>(rng() % (len + 1)),
                             1 + static_cast<int>(rng() % (w.index - 1)), rng() % 2 ? 1 : -1};
                    break;
                default: {
                    // Try Death, else skip.
                    bool uses_last = false;
                    for (const auto& l : w.letters)
                        if (l.generator == w.index - 1) uses_last = true;
                    if (w.index >= 1 && !uses_last) e = Death{};
                    else continue;
                }
            }
            BraidWord next;
            try {
                next = apply_event(w, e);
            } catch (const Error&) {
                continue;
            }
            int dc = closure_components(next) - closure_components(w);
            int dx = exponent_sum(next) - exponent_sum(w);
            int dn = next.index - w.index;
            if (std::holds_alternative<Birth>(e)) {
                CHECK(dc == 1);
                CHECK(dx == 0);
                CHECK(dn == 1);
            } else if (std::holds_alternative<Death>(e)) {
                CHECK(dc == -1);
                CHECK(dx == 0);
                CHECK(dn == -1);
            } else if (std::holds_alternative<Band>(e)) {
                CHECK((dc == 1 || dc == -1));
                CHECK((dx == 1 || dx == -1));
                CHECK(dn == 0);
            } else {
                CHECK(dc == 0);
                CHECK(dx == 0);
                CHECK(dn == 0);
            }
            CHECK(closure_components(next) == oracle_closure_components(next));
            w = next;
        }
    }
}

TEST_CASE("euler characteristic is additive under concatenation") {
    BraidedMovie a{"a", make_word(0, {}), {Birth{}, Birth{}, Band{0, 1, 1}}};
    BraidedMovie b{"b", make_word(2, {1}), {Band{0, 1, 1}, Death{}, Death{}}};
    // b starts where a ends.
    auto stills = movie_stills(a);
    REQUIRE(stills.back() == b.initial);
    BraidedMovie joined{"ab", a.initial, a.events};
    joined.events.insert(joined.events.end(), b.events.begin(), b.events.end());
    CHECK(euler_characteristic(joined) == euler_characteristic(a) + euler_characteristic(b));
}
