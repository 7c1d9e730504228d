#include <catch2/catch_amalgamated.hpp>

#include "tropex/cone.hpp"

using namespace tropex;

namespace {

IVec iv(std::initializer_list<long> xs) { return IVec(xs.begin(), xs.end()); }

QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST_CASE("standard orthant") {
    Cone c = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
    REQUIRE(c.dim == 2);
    REQUIRE(c.rays == IMat{iv({0, 1}), iv({1, 0})});
    REQUIRE(c.halfspaces.size() == 2);
    REQUIRE(c.span_equations.empty());
    CHECK(contains(c, qv({3, 5})));
    CHECK(!contains(c, qv({-1, 2})));
    CHECK(is_smooth(c));
}

TEST_CASE("zero cone from empty generation") {
    Cone c = make_cone(2, IMat{});
    CHECK(c.dim == 0);
    CHECK(c.rays.empty());
    CHECK(is_smooth(c));
    CHECK(contains(c, qv({0, 0})));
    CHECK(!contains(c, qv({1, 0})));
}

TEST_CASE("generators normalize to primitive rays, index 2") {
    Cone c = make_cone(2, IMat{iv({2, 0}), iv({1, 2})});
    REQUIRE(c.rays == IMat{iv({1, 0}), iv({1, 2})});
    CHECK(smoothness_index(c) == 2);
    CHECK(!is_smooth(c));
}

TEST_CASE("redundant generators are dropped") {
    Cone c = make_cone(2, IMat{iv({1, 0}), iv({1, 1}), iv({0, 1})});
    CHECK(c.rays == IMat{iv({0, 1}), iv({1, 0})});
}

TEST_CASE("a line is rejected") {
    CHECK_THROWS_AS(make_cone(2, IMat{iv({1, 0}), iv({-1, 0})}), Error);
    CHECK_THROWS_AS(make_cone(3, IMat{iv({1, 0, 0}), iv({0, 1, 0}), iv({-1, -1, 0})}), Error);
}

TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(make_cone(2, IMat{iv({1, 0, 0})}), Error);
}

TEST_CASE("double description round trip reproduces rays") {
    // re-running double description on emitted halfspaces gives the rays back
    std::vector<IMat> gens = {
        {iv({1, 0}), iv({0, 1})},
        {iv({1, 0}), iv({1, 2})},
        {iv({2, 1}), iv({1, 3}), iv({1, 1})},
        {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})},
        {iv({1, 0, 0}), iv({1, 2, 0}), iv({1, 0, 3}), iv({1, 2, 3})},
        {iv({1, 1, 1})},
    };
    for (const auto& g : gens) {
        Cone c = make_cone(static_cast<int>(g[0].size()), g);
        DDResult back = dd_solve(c.halfspaces, c.span_equations, g[0].size());
        CHECK(back.lineality.empty());
        CHECK(back.rays == c.rays);
    }
}

TEST_CASE("non-simplicial cone in R^3") {
    // square cone over the 4 vertices of a square
    Cone c = make_cone(3, IMat{iv({1, 0, 1}), iv({0, 1, 1}), iv({-1, 0, 1}), iv({0, -1, 1})});
    CHECK(c.dim == 3);
    CHECK(c.rays.size() == 4);
    CHECK(c.halfspaces.size() == 4);
    CHECK(!is_smooth(c));
    CHECK(smoothness_index(c) == 0);  // not simplicial
    CHECK(facets(c).size() == 4);
    CHECK(all_faces(c).size() == 1 + 4 + 4 + 1);  // cone, facets, rays, origin
}

TEST_CASE("faces and face membership") {
    Cone c = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
    auto fs = all_faces(c);
    REQUIRE(fs.size() == 4);
    Cone ray = make_cone(2, IMat{iv({1, 0})});
    Cone zero = zero_cone(2);
    CHECK(is_face_of(ray, c));
    CHECK(is_face_of(zero, c));
    CHECK(is_face_of(zero, ray));
    CHECK(is_face_of(c, c));
    Cone diag = make_cone(2, IMat{iv({1, 1})});
    CHECK(contains_cone(c, diag));
    CHECK(!is_face_of(diag, c));
}

TEST_CASE("low-dimensional cone carries span equations") {
    Cone c = make_cone(3, IMat{iv({1, 1, 0})});
    CHECK(c.dim == 1);
    CHECK(c.span_equations.size() == 2);
    CHECK(contains(c, qv({2, 2, 0})));
    CHECK(!contains(c, qv({2, 1, 0})));
    CHECK(is_smooth(c));
}

TEST_CASE("intersection of cones") {
    Cone a = make_cone(2, IMat{iv({1, 0}), iv({1, 2})});
    Cone b = make_cone(2, IMat{iv({2, 1}), iv({0, 1})});
    Cone m = intersect(a, b);
    CHECK(m.rays == IMat{iv({1, 2}), iv({2, 1})});
    Cone disjoint = intersect(make_cone(2, IMat{iv({1, 0})}), make_cone(2, IMat{iv({0, 1})}));
    CHECK(disjoint.dim == 0);
}

TEST_CASE("explicit sublattice is kept and used by smoothness") {
    IMat sub{iv({2, 2})};
    Cone c = make_cone(2, IMat{iv({1, 1})}, sub);
    CHECK(c.lattice.has_value());
    CHECK(!is_smooth(c));  // ray (1,1) is not in the lattice 2Z(1,1)
    CHECK(smoothness_index(c) == 0);
}

TEST_CASE("relint samples are interior") {
    Cone c = make_cone(3, IMat{iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})});
    CHECK(in_relative_interior(c, relint_sample(c)));
    Cone ray = make_cone(2, IMat{iv({1, 1})});
    CHECK(in_relative_interior(ray, relint_sample(ray)));
    CHECK(!in_relative_interior(ray, qv({0, 0})));
}

TEST_CASE("smith normal form and lattice helpers") {
    IMat m{iv({2, 4, 4}), iv({-6, 6, 12}), iv({10, 4, 16})};
    IMat u, v;
    IVec d = smith_normal_form(m, &u, &v);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == 2);
    CHECK(d[1] == 2);
    CHECK(d[2] == 156);  // det = 624 = 2*2*156
    CHECK(d[1] % d[0] == 0);
    CHECK(d[2] % d[1] == 0);
    // U * m * V == diag(d)
    auto mul = [](const IMat& a, const IMat& b) {
        size_t r = a.size(), c = b[0].size(), k = b.size();
        IMat out(r, IVec(c, 0));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j)
                for (size_t t = 0; t < k; ++t) out[i][j] += a[i][t] * b[t][j];
        return out;
    };
    IMat prod = mul(mul(u, m), v);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) CHECK(prod[i][j] == (i == j ? d[i] : Int(0)));

    IMat lat{iv({1, 2, 0}), iv({0, 0, 3})};
    CHECK(lattice_contains(lat, iv({1, 2, 3}), 3));
    CHECK(lattice_contains(lat, iv({2, 4, 0}), 3));
    CHECK(!lattice_contains(lat, iv({1, 1, 0}), 3));
    CHECK(lattice_index(saturation_basis(lat, 3), lat, 3) == 3);

    IMat half{iv({2, 0}), iv({0, 1})};
    IMat other{iv({1, 0}), iv({0, 3})};
    IMat meet = lattice_intersection(half, other, 2);
    CHECK(lattice_contains(meet, iv({2, 0}), 2));
    CHECK(lattice_contains(meet, iv({0, 3}), 2));
    CHECK(!lattice_contains(meet, iv({1, 0}), 2));
    CHECK(!lattice_contains(meet, iv({0, 1}), 2));

    // saturation of a non-saturated kernel-style lattice
    IMat skew{iv({1, 2, 0}), iv({1, 0, 2})};
    IMat sat = saturation_basis(skew, 3);
    CHECK(lattice_contains(sat, iv({1, 1, 1}), 3));  // (1,1,1) = ((1,2,0)+(1,0,2))/2
}

TEST_CASE("quotient map kills exactly the sublattice") {
    IMat q = lattice_quotient_map({iv({1, 0, 0})}, 3);
    REQUIRE(q.size() == 2);
    CHECK(apply_map(q, iv({1, 0, 0})) == IVec(2, 0));
    CHECK(apply_map(q, iv({5, 0, 0})) == IVec(2, 0));
    CHECK(apply_map(q, iv({0, 1, 0})) != IVec(2, 0));
    // surjectivity onto Z^2: the images of the standard basis generate
    IMat imgs;
    imgs.push_back(apply_map(q, iv({1, 0, 0})));
    imgs.push_back(apply_map(q, iv({0, 1, 0})));
    imgs.push_back(apply_map(q, iv({0, 0, 1})));
    CHECK(lattice_contains(imgs, iv({1, 0}), 2));
    CHECK(lattice_contains(imgs, iv({0, 1}), 2));
}
