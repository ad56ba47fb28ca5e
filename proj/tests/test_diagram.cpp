#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "braidloom/diagram.hpp"

using namespace braidloom;

TEST_CASE("round unknot validates") {
    AxisDiagram d = round_unknot();
    auto r = validate_diagram(d);
    CHECK(r.pass);
    CHECK(r.metrics["components"] == 1);
    CHECK(components_of(d) == 1);
    CHECK(writhe(d) == 0);
}

TEST_CASE("empty diagram has zero components") {
    AxisDiagram d;
    CHECK(components_of(d) == 0);
}

TEST_CASE("trefoil diagram validates with five faces") {
    AxisDiagram d = trefoil_diagram();
    auto r = validate_diagram(d);
    INFO(r.to_string());
    CHECK(r.pass);
    CHECK(components_of(d) == 1);
    CHECK(writhe(d) == 3);
    // V - E + F = 2 with V=3, E=6 forces F=5; the markless axis adds two.
    CHECK(r.metrics["faces"] == 7);
}

TEST_CASE("mirror trefoil has opposite writhe") {
    AxisDiagram d = trefoil_diagram(true);
    CHECK(validate_diagram(d).pass);
    CHECK(writhe(d) == -3);
}

TEST_CASE("invalid diagram: unfilled slot reported as valence violation") {
    AxisDiagram d = trefoil_diagram();
    d.crossings[0].ends[2] = -1;
    auto r = validate_diagram(d);
    CHECK_FALSE(r.pass);
    bool found = false;
    for (const auto& f : r.findings)
        if (f.message.find("valence") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("twist knot diagrams validate; odd twist counts give knots") {
    for (int t = 1; t <= 6; ++t) {
        AxisDiagram d = twist_knot_diagram(t);
        auto r = validate_diagram(d);
        INFO("t = " << t << "\n" << r.to_string());
        CHECK(r.pass);
        CHECK(static_cast<int>(d.crossings.size()) == t + 2);
        if (t % 2 == 1) CHECK(components_of(d) == 1);
    }
}
