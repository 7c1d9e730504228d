#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace tropex;
using namespace tropex::testutil;

namespace {

EmbeddedOneComplex single_vertex_at_origin(const ConeComplex& sigma) {
    EmbeddedOneComplex e;
    e.positions.push_back(QVec(sigma.ambient_dim, Rat(0)));
    e.type.vertices.push_back({minimal_cone_index(sigma, e.positions[0])});
    return e;
}

}  // namespace

TEST_CASE("single vertex at the origin is valid") {
    ConeComplex p2 = fan_p2();
    auto e = single_vertex_at_origin(p2);
    CHECK(validate_embedded(e, p2).ok());
}

TEST_CASE("empty graph is valid and operations are vacuous") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e;
    CHECK(validate_embedded(e, p2).ok());
    CHECK(minimal_dilation(e, p2) == 1);
    CHECK(minimal_structure(e, p2) == e);
    ConeComplex c = cone_over(e, p2);
    CHECK(c.cones.size() == 1);  // just the origin
}

TEST_CASE("segment condition violation is reported") {
    ConeComplex p2 = fan_p2();
    int orthant = -1;
    for (size_t i = 0; i < p2.cones.size(); ++i)
        if (p2.cones[i].dim == 2 && contains(p2.cones[i], qv({1, 1}))) orthant = static_cast<int>(i);
    EmbeddedOneComplex e;
    e.positions = {qv({0, 0}), qv({1, 1})};
    e.type.vertices = {{minimal_cone_index(p2, e.positions[0])}, {orthant}};
    e.type.edges = {{0, 1, orthant, iv({1, 0})}};  // displacement is (1,1)
    auto rep = validate_embedded(e, p2);
    REQUIRE(!rep.ok());
    bool found = false;
    for (const auto& v : rep.violations) found = found || v.kind == "segment";
    CHECK(found);
}

TEST_CASE("interior crossing is an embedding violation") {
    ConeComplex p2 = fan_p2();
    int orthant = -1;
    for (size_t i = 0; i < p2.cones.size(); ++i)
        if (p2.cones[i].dim == 2 && contains(p2.cones[i], qv({1, 1}))) orthant = static_cast<int>(i);
    // two segments crossing at (2,2) without a shared vertex
    EmbeddedOneComplex e;
    e.positions = {qv({1, 1}), qv({3, 3}), qv({1, 3}), qv({3, 1})};
    e.type.vertices = {{orthant}, {orthant}, {orthant}, {orthant}};
    e.type.edges = {{0, 1, orthant, iv({1, 1})}, {2, 3, orthant, iv({1, -1})}};
    // independent crossing oracle: solve the 2x2 system directly
    // (1,1)+t(1,1) = (1,3)+s(1,-1) -> t = 1, s = 1, crossing (2,2) interior
    Rat t(1), s(1);
    REQUIRE(Rat(1) + t == Rat(1) + s);
    REQUIRE(Rat(1) + t == Rat(3) - s);
    auto rep = validate_embedded(e, p2);
    REQUIRE(!rep.ok());
    bool found = false;
    for (const auto& v : rep.violations) found = found || v.kind == "embedding";
    CHECK(found);
}

TEST_CASE("collinear midpoint is removed by the minimal structure") {
    ConeComplex orthant = orthant_complex();
    int top = -1;
    for (size_t i = 0; i < orthant.cones.size(); ++i)
        if (orthant.cones[i].dim == 2) top = static_cast<int>(i);
    // segment (0,1)-(2,1) subdivided at (1,1)
    EmbeddedOneComplex e;
    e.positions = {qv({0, 1}), qv({1, 1}), qv({2, 1})};
    e.type.vertices = {{top}, {top}, {top}};
    e.type.edges = {{0, 1, top, iv({1, 0})}, {1, 2, top, iv({1, 0})}};
    EmbeddedOneComplex m = minimal_structure(e, orthant);
    CHECK(m.positions.size() == 2);
    CHECK(m.type.edges.size() == 1);
    CHECK(m.positions[0] == qv({0, 1}));
    CHECK(m.positions[1] == qv({2, 1}));
}

TEST_CASE("a two-valent vertex on a wall is kept") {
    ConeComplex p2 = fan_p2();
    // (1,2) -> (1,0) -> (1,-2) along direction (0,-1): the middle vertex sits
    // on the ray e1 and its germs leave the wall, so condition (1) fails.
    RawCurve raw;
    raw.segments.push_back({qv({1, 2}), qv({1, -2})});
    EmbeddedOneComplex e = embed_into(p2, raw);
    REQUIRE(validate_embedded(e, p2).ok());
    REQUIRE(e.positions.size() == 3);  // wall vertex at (1,0) inserted
    EmbeddedOneComplex m = minimal_structure(e, p2);
    CHECK(m.positions.size() == 3);  // still there
    CHECK(m == e);
}

TEST_CASE("round trip: subdivide then minimize recovers the complex") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        EmbeddedOneComplex e = minimal_structure(random_embedded(rng, p2), p2);
        EmbeddedOneComplex sub = random_subdivision(rng, e);
        REQUIRE(validate_embedded(sub, p2).ok());
        CHECK(minimal_structure(sub, p2) == e);
        // idempotence
        CHECK(minimal_structure(e, p2) == e);
    }
}

TEST_CASE("minimal structure commutes with dilation") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        EmbeddedOneComplex e = random_embedded(rng, p2);
        for (long k : {2L, 3L}) {
            EmbeddedOneComplex a = minimal_structure(dilate(e, Rat(k)), p2);
            EmbeddedOneComplex b = dilate(minimal_structure(e, p2), Rat(k));
            CHECK(a == canonicalize(b, p2));
        }
    }
}

TEST_CASE("minimal dilation examples") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e = tropical_line(p2, qv({1, 1}));
    CHECK(minimal_dilation(e, p2) == 1);

    EmbeddedOneComplex half = tropical_line(p2, QVec{Rat(1, 2), Rat(1, 2)});
    CHECK(minimal_dilation(half, p2) == 2);

    EmbeddedOneComplex mixed;
    mixed.positions = {QVec{Rat(1, 2), Rat(0)}, QVec{Rat(0), Rat(1, 3)}};
    mixed.type.vertices = {{0}, {0}};
    mixed = canonicalize(mixed, p2);
    CHECK(minimal_dilation(mixed, p2) == 6);  // lcm(2,3)
}

TEST_CASE("dilation divisibility property") {
    // minimal_dilation(k*E) = b / gcd(k, b)
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        EmbeddedOneComplex e = random_embedded(rng, p2);
        Int b = minimal_dilation(e, p2);
        for (long k : {2L, 3L, 4L, 6L}) {
            Int bk = minimal_dilation(dilate(e, Rat(k)), p2);
            CHECK(bk == b / gcd(Int(k), b));
            CHECK(b % bk == 0);
        }
    }
}

TEST_CASE("cone over a single integral vertex") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e;
    e.positions = {qv({2, 1})};
    e.type.vertices = {{minimal_cone_index(p2, e.positions[0])}};
    ConeComplex c = cone_over(e, p2);
    // one vertex ray plus the origin
    REQUIRE(c.cones.size() == 2);
    CHECK(c.cones[1].rays == IMat{iv({2, 1, 1})});
}

TEST_CASE("cone over the tropical line at (1,1)") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e = tropical_line(p2, qv({1, 1}));
    REQUIRE(e.positions.size() == 2);  // center and origin
    ConeComplex c = cone_over(e, p2);
    int d0 = 0, d1 = 0, d2 = 0;
    for (const auto& cone : c.cones) (cone.dim == 0 ? d0 : cone.dim == 1 ? d1 : d2)++;
    CHECK(d0 == 1);
    CHECK(d1 == 5);  // two vertex rays and three direction rays
    CHECK(d2 == 4);  // one per edge/ray of the line
    // the height-1 slice reproduces the complex
    CHECK(height_one_slice(c, p2) == e);
}

TEST_CASE("cone over two disjoint vertices meets only at the origin") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e;
    e.positions = {qv({1, 2}), qv({-1, -3})};
    e.type.vertices = {{0}, {0}};
    e = canonicalize(e, p2);
    ConeComplex c = cone_over(e, p2);
    REQUIRE(c.cones.size() == 3);
    CHECK(c.cones[0].dim == 0);
    CHECK(c.cones[1].dim == 1);
    CHECK(c.cones[2].dim == 1);
}

TEST_CASE("height-one slice round trip on random complexes") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        EmbeddedOneComplex e = canonicalize(random_embedded(rng, p2), p2);
        ConeComplex c = cone_over(e, p2);
        CHECK(height_one_slice(c, p2) == e);
    }
}

TEST_CASE("slice rejects complexes that are not cones over graphs") {
    ConeComplex p2 = fan_p2();
    ConeComplex notagraph =
        make_complex(3, {make_cone(3, IMat{iv({1, 0, 1}), iv({0, 1, 1}), iv({1, 1, 1})})});
    CHECK_THROWS_AS(height_one_slice(notagraph, p2), Error);
    ConeComplex freeray = make_complex(3, {make_cone(3, IMat{iv({1, 0, 0})})});
    CHECK_THROWS_AS(height_one_slice(freeray, p2), Error);
}

TEST_CASE("every edge of a valid complex lies in a single cone") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        EmbeddedOneComplex e = random_embedded(rng, p2);
        for (size_t i = 0; i < e.type.edges.size(); ++i) {
            const auto& ed = e.type.edges[i];
            const Cone& c = p2.cones[ed.cone];
            CHECK(contains(c, e.positions[ed.a]));
            CHECK(contains(c, e.positions[ed.b]));
        }
    }
}
