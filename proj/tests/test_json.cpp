#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "tropex/json_io.hpp"

using namespace tropex;
using namespace tropex::testutil;

TEST_CASE("fan round trip with names and sublattices") {
    ConeComplex p2 = fan_p2();
    p2.ray_names["D0"] = iv({1, 0});
    p2.ray_names["D1"] = iv({0, 1});
    p2.ray_names["D2"] = iv({-1, -1});
    json j = to_json(p2);
    ConeComplex back = complex_from_json(j);
    CHECK(back == p2);
    CHECK(back.ray_names == p2.ray_names);
    CHECK(to_json(back).dump(2) == j.dump(2));  // byte-identical reserialization

    IMat sub{iv({2, 2})};
    ConeComplex lat = make_complex(2, {make_cone(2, IMat{iv({1, 1})}, sub)});
    CHECK(complex_from_json(to_json(lat)) == lat);
}

TEST_CASE("big integers serialize as decimal strings") {
    Int big("123456789012345678901234567890");
    json j = to_json(big);
    REQUIRE(j.is_string());
    CHECK(int_from_json(j) == big);
    CHECK(int_from_json(json(42)) == 42);
    Rat r = frac(1, 3);
    CHECK(rat_from_json(to_json(r)) == r);
    CHECK(to_json(r).get<std::string>() == "1/3");
}

TEST_CASE("graph and curve round trips") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        EmbeddedOneComplex e = canonicalize(random_embedded(rng, p2), p2);
        EmbeddedOneComplex back = embedded_from_json(to_json(e));
        CHECK(back == e);
    }
    TropicalPolynomial p;
    p.ambient_dim = 2;
    p.terms = {{iv({0, 0}), frac(1, 2)}, {iv({1, 0}), Rat(0)}, {iv({0, 1}), Rat(-3)}};
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    WeightedOneComplex back = weighted_from_json(to_json(w));
    CHECK(back == w);
    TropicalPolynomial pb = poly_from_json(to_json(p));
    CHECK(pb.ambient_dim == p.ambient_dim);
    CHECK(pb.terms == p.terms);
}

TEST_CASE("expansion and limit serialization") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e = tropical_line(p2, qv({2, 1}));
    LimitResult lr = limit_expansion(e, p2);
    json j = to_json(lr);
    ExpansionDualComplex back = expansion_from_json(j.at("expansion"));
    CHECK(back == lr.expansion);
    CHECK(embedded_from_json(j.at("minimal_complex")) == lr.minimal_complex);
    CHECK(complex_from_json(j.at("cone")) == lr.cone);
    CHECK(int_from_json(j.at("base_change_order")) == lr.base_change_order);
}

TEST_CASE("malformed inputs raise parse errors") {
    CHECK_THROWS_AS(complex_from_json(json::object()), Error);
    CHECK_THROWS_AS(rat_from_json(json(1.5)), Error);
    CHECK_THROWS_AS(rat_from_json(json("1/0")), std::exception);
    json bad_graph;
    bad_graph["edges"] = json::array();
    CHECK_THROWS_AS(embedded_from_json(bad_graph), Error);
}
