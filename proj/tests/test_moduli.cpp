#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "tropex/moduli.hpp"

using namespace tropex;
using namespace tropex::testutil;

namespace {

// the cone over the unit square, with its rays as vertex anchors
ConeComplex square_cone_complex() {
    return make_complex(3, {make_cone(3, IMat{iv({1, 0, 1}), iv({0, 1, 1}), iv({-1, 0, 1}),
                                              iv({0, -1, 1})})});
}

int cone_index(const ConeComplex& s, const Cone& c) {
    int i = cone_index_of(s, c);
    REQUIRE(i >= 0);
    return i;
}

// two skew edges anchored on opposite rays of the square cone
CombinatorialOneComplex skew_edges(const ConeComplex& sigma) {
    int r1 = cone_index(sigma, make_cone(3, IMat{iv({1, 0, 1})}));
    int r2 = cone_index(sigma, make_cone(3, IMat{iv({0, 1, 1})}));
    int r3 = cone_index(sigma, make_cone(3, IMat{iv({-1, 0, 1})}));
    int r4 = cone_index(sigma, make_cone(3, IMat{iv({0, -1, 1})}));
    int top = -1;
    for (size_t i = 0; i < sigma.cones.size(); ++i)
        if (sigma.cones[i].dim == 3) top = static_cast<int>(i);
    CombinatorialOneComplex g;
    g.vertices = {{r1}, {r3}, {r2}, {r4}};
    g.edges = {{0, 1, top, iv({-1, 0, 0})}, {2, 3, top, iv({0, -1, 0})}};
    return g;
}

}  // namespace

TEST_CASE("cone of a vertex-only type is the vertex cone") {
    ConeComplex p2 = fan_p2();
    int orthant = minimal_cone_index(p2, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{orthant}};
    XGCone x = build_xg(g, p2);
    CHECK(x.dim == 2);
    CHECK(x.cone == p2.cones[orthant]);
}

TEST_CASE("edge in the orthant cuts a 3-dimensional cone") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}};
    g.edges = {{0, 1, top, iv({1, 0})}};
    XGCone x = build_xg(g, orth);
    CHECK(x.dim == 3);
    // membership sampler: the cone is { a,b in the orthant : a2 = b2, b1 >= a1 }
    std::mt19937 rng(41);
    for (int i = 0; i < 200; ++i) {
        QVec p{frac(static_cast<long>(rng() % 9) - 2, 1 + static_cast<long>(rng() % 2)),
               frac(static_cast<long>(rng() % 9) - 2, 1 + static_cast<long>(rng() % 2)),
               frac(static_cast<long>(rng() % 9) - 2, 1 + static_cast<long>(rng() % 2)),
               frac(static_cast<long>(rng() % 9) - 2, 1 + static_cast<long>(rng() % 2))};
        bool expect = p[0] >= 0 && p[1] >= 0 && p[2] >= 0 && p[3] >= 0 && p[1] == p[3] &&
                      p[2] >= p[0];
        CHECK(contains(x.cone, p) == expect);
    }
}

TEST_CASE("infeasible edge direction has no faithful point") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    int e1 = cone_index(orth, make_cone(2, IMat{iv({1, 0})}));
    CombinatorialOneComplex g;
    g.vertices = {{e1}, {e1}};
    g.edges = {{0, 1, top, iv({0, 1})}};  // forced to contract on the axis
    CHECK_THROWS_AS(build_xg(g, orth), Error);
}

TEST_CASE("generic point yields the identity surjection") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}};
    g.edges = {{0, 1, top, iv({2, 1})}};
    std::vector<QVec> pos{qv({1, 1}), qv({5, 3})};
    ImageResult im = image_surjection(g, pos, orth);
    CHECK(is_identity_surjection(g, im.graph, im.surj));
    CHECK(validate_surjection(g, im.graph, im.surj, orth));
}

TEST_CASE("skew edges crossing produces a 4-valent vertex") {
    ConeComplex sigma = square_cone_complex();
    CombinatorialOneComplex g = skew_edges(sigma);
    XGCone x = build_xg(g, sigma);
    CHECK(x.dim == 2);

    // disjoint heights: identity
    std::vector<QVec> apart{qv({1, 0, 1}), qv({-1, 0, 1}), qv({0, 2, 2}), qv({0, -2, 2})};
    ImageResult im1 = image_surjection(g, apart, sigma);
    CHECK(is_identity_surjection(g, im1.graph, im1.surj));

    // equal heights: the segments cross at (0,0,1)
    std::vector<QVec> crossing{qv({1, 0, 1}), qv({-1, 0, 1}), qv({0, 1, 1}), qv({0, -1, 1})};
    ImageResult im2 = image_surjection(g, crossing, sigma);
    REQUIRE(im2.graph.vertices.size() == 5);
    CHECK(im2.graph.edges.size() == 4);
    CHECK(validate_surjection(g, im2.graph, im2.surj, sigma));
    int crossings = 0;
    for (size_t v = 0; v < im2.provenance.size(); ++v)
        if (im2.provenance[v].kind == VertexProvenance::Crossing) {
            ++crossings;
            CHECK(valence(im2.graph, static_cast<int>(v)) == 4);
        }
    CHECK(crossings == 1);
}

TEST_CASE("overlapping collinear edges merge into a multi-edge path") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}, {top}, {top}};
    g.edges = {{0, 1, top, iv({1, 0})}, {2, 3, top, iv({1, 0})}};
    std::vector<QVec> pos{qv({1, 1}), qv({4, 1}), qv({2, 1}), qv({6, 1})};
    // segment-arrangement oracle: overlap is [2,4] x {1}
    ImageResult im = image_surjection(g, pos, orth);
    REQUIRE(im.graph.vertices.size() == 4);
    REQUIRE(im.graph.edges.size() == 3);
    CHECK(im.positions[0] == qv({1, 1}));
    CHECK(im.positions[1] == qv({2, 1}));
    CHECK(im.positions[2] == qv({4, 1}));
    CHECK(im.positions[3] == qv({6, 1}));
    CHECK(validate_surjection(g, im.graph, im.surj, orth));
    CHECK(im.surj.edge_paths[0].steps.size() == 2);  // [1,2] + [2,4]
    CHECK(im.surj.edge_paths[1].steps.size() == 2);  // [2,4] + [4,6]
}

TEST_CASE("single edge enumerates to the identity alone") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}};
    g.edges = {{0, 1, top, iv({1, 0})}};
    XGCone x = build_xg(g, orth);
    SurjectionEnumeration en = enumerate_surjections(g, x, orth);
    REQUIRE(en.types.size() == 1);
    CHECK(is_identity_surjection(g, en.types[0].graph, en.types[0].surj));
}

TEST_CASE("skew edges enumerate to exactly the two predicted types") {
    ConeComplex sigma = square_cone_complex();
    CombinatorialOneComplex g = skew_edges(sigma);
    XGCone x = build_xg(g, sigma);
    SurjectionEnumeration en = enumerate_surjections(g, x, sigma);
    REQUIRE(en.types.size() == 2);
    int identities = 0, crossings = 0;
    for (const auto& t : en.types) {
        if (is_identity_surjection(g, t.graph, t.surj)) ++identities;
        else if (t.graph.vertices.size() == 5) ++crossings;
        // the witness lies in the embedded X_H
        CHECK(contains(t.sub_cone, t.witness));
    }
    CHECK(identities == 1);
    CHECK(crossings == 1);
}

TEST_CASE("an edge with a free vertex enumerates its slide degenerations") {
    // one edge plus a vertex that can slide onto it
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}, {top}};
    g.edges = {{0, 1, top, iv({1, 0})}};
    XGCone x = build_xg(g, orth);
    SurjectionEnumeration en = enumerate_surjections(g, x, orth);
    // identity, vertex interior to the edge, vertex onto each endpoint
    REQUIRE(en.types.size() == 4);
    std::multiset<size_t> vertex_counts;
    for (const auto& t : en.types) vertex_counts.insert(t.graph.vertices.size());
    CHECK(vertex_counts == std::multiset<size_t>{2, 2, 3, 3});
}

TEST_CASE("common surjections factor through pairwise intersections") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    // an edge with two independent free vertices
    CombinatorialOneComplex g;
    g.vertices = {{top}, {top}, {top}, {top}};
    g.edges = {{0, 1, top, iv({1, 0})}};
    XGCone x = build_xg(g, orth);
    SurjectionEnumeration en = enumerate_surjections(g, x, orth, 50000);
    int checked = 0;
    for (size_t a = 0; a < en.types.size(); ++a)
        for (size_t b = a + 1; b < en.types.size(); ++b) {
            Cone meet = intersect(en.types[a].sub_cone, en.types[b].sub_cone);
            if (meet.dim == 0) continue;
            QVec f = relint_sample(meet);
            ImageResult j = image_surjection(g, unflatten(f, 4, 2), orth);
            std::string expect = surjection_key(j.graph, j.surj);
            for (size_t t : {a, b}) {
                const auto& ty = en.types[t];
                XGCone xh = build_xg(ty.graph, orth, false);
                auto lifted = lift_point(g, ty.graph, ty.surj, f, xh, 2);
                REQUIRE(lifted.has_value());
                ImageResult j2 = image_surjection(
                    ty.graph, unflatten(*lifted, static_cast<int>(ty.graph.vertices.size()), 2),
                    orth);
                Surjection through = compose(ty.surj, j2.surj);
                CHECK(surjection_key(j2.graph, through) == expect);
                ++checked;
            }
        }
    CHECK(checked > 0);
}

TEST_CASE("equivariant subdivision: stellar at an interior ray") {
    Cone orthant = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
    std::vector<Cone> f{make_cone(2, IMat{iv({1, 1})})};
    ConeComplex sub = equivariant_subdivision(orthant, f, {});
    CHECK(maximal_cone_indices(sub).size() == 2);
    CHECK(cone_index_of(sub, f[0]) >= 0);
    CHECK(is_subdivision(sub, make_complex(2, {orthant})) == SubdivisionKind::Proper);
}

TEST_CASE("equivariant subdivision: swap group with the diagonal") {
    Cone orthant = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
    IMat swap_mat{iv({0, 1}), iv({1, 0})};
    std::vector<Cone> f{make_cone(2, IMat{iv({1, 1})})};
    ConeComplex sub = equivariant_subdivision(orthant, f, {swap_mat});
    CHECK(maximal_cone_indices(sub).size() == 2);
    // swap invariance of the cone set
    std::set<Cone> cones(sub.cones.begin(), sub.cones.end());
    for (const auto& c : sub.cones) CHECK(cones.count(apply_linear_map(swap_mat, c)));
}

TEST_CASE("equivariant subdivision: asymmetric ray forces its mirror") {
    Cone orthant = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
    IMat swap_mat{iv({0, 1}), iv({1, 0})};
    Cone r = make_cone(2, IMat{iv({2, 1})});
    Cone rm = make_cone(2, IMat{iv({1, 2})});
    ConeComplex sub = equivariant_subdivision(orthant, {r, rm}, {swap_mat});
    CHECK(cone_index_of(sub, r) >= 0);
    CHECK(cone_index_of(sub, rm) >= 0);
    std::set<Cone> cones(sub.cones.begin(), sub.cones.end());
    for (const auto& c : sub.cones) CHECK(cones.count(apply_linear_map(swap_mat, c)));
    // the one-sided family is not stable
    CHECK_THROWS_AS(equivariant_subdivision(orthant, {r}, {swap_mat}), Error);
}

TEST_CASE("assembling the vertex family of the orthant") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex seed;
    seed.vertices = {{top}};
    auto family = close_family({seed}, orth);
    REQUIRE(family.size() == 4);  // interior, two walls, origin
    std::vector<FragmentInput> inputs;
    for (const auto& g : family) inputs.push_back({g, std::nullopt});
    ConeSpaceFragment frag = assemble_fragment(inputs, orth);
    // the moduli fragment reproduces the fan itself
    std::set<Cone> xcones;
    for (const auto& x : frag.xg) xcones.insert(x.cone);
    std::set<Cone> fan(orth.cones.begin(), orth.cones.end());
    CHECK(xcones == fan);
    for (const auto& info : frag.cones) CHECK(info.tube_vertices.empty());
}

TEST_CASE("missing degeneration type is rejected") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex seed;
    seed.vertices = {{top}};
    CHECK_THROWS_AS(assemble_fragment({{seed, std::nullopt}}, orth), Error);
}

TEST_CASE("refining fragments with different stellar choices") {
    ConeComplex orth = orthant_complex();
    int top = minimal_cone_index(orth, qv({1, 1}));
    CombinatorialOneComplex seed;
    seed.vertices = {{top}};
    auto family = close_family({seed}, orth);
    std::vector<FragmentInput> left, right;
    for (const auto& g : family) {
        left.push_back({g, std::nullopt});
        right.push_back({g, std::nullopt});
    }
    // subdivide the big cell differently in the two fragments
    for (size_t i = 0; i < family.size(); ++i) {
        if (family[i].vertices[0].cone != top) continue;
        Cone big = make_cone(2, IMat{iv({1, 0}), iv({0, 1})});
        left[i].subdivision = equivariant_subdivision(big, {make_cone(2, IMat{iv({2, 1})})}, {});
        right[i].subdivision = equivariant_subdivision(big, {make_cone(2, IMat{iv({1, 3})})}, {});
    }
    ConeSpaceFragment a = assemble_fragment(left, orth);
    ConeSpaceFragment b = assemble_fragment(right, orth);
    ConeSpaceFragment r = refine_fragments(a, b);
    for (size_t i = 0; i < family.size(); ++i) {
        CHECK(is_subdivision(r.subdivisions[i], a.subdivisions[i]) == SubdivisionKind::Proper);
        CHECK(is_subdivision(r.subdivisions[i], b.subdivisions[i]) == SubdivisionKind::Proper);
    }
    // idempotence and commutativity at the level of subdivisions
    ConeSpaceFragment r2 = refine_fragments(b, a);
    for (size_t i = 0; i < family.size(); ++i)
        CHECK(r.subdivisions[i] == r2.subdivisions[i]);
    ConeSpaceFragment self = refine_fragments(a, a);
    for (size_t i = 0; i < family.size(); ++i)
        CHECK(self.subdivisions[i] == a.subdivisions[i]);
}

TEST_CASE("fragment universal family integrality on the skew family") {
    ConeComplex sigma = square_cone_complex();
    CombinatorialOneComplex g = skew_edges(sigma);
    auto family = close_family({g}, sigma);
    std::vector<FragmentInput> inputs;
    XGCone xg = build_xg(g, sigma, false);
    std::string gkey = canonical_graph(g).key;
    for (const auto& h : family) {
        FragmentInput in;
        in.graph = h;
        if (canonical_graph(h).key == gkey) {
            // subdivide along the crossing wall so X_H becomes a face
            SurjectionEnumeration en = enumerate_surjections(g, xg, sigma);
            for (const auto& t : en.types)
                if (!is_identity_surjection(g, t.graph, t.surj))
                    in.subdivision = equivariant_subdivision(xg.cone, {t.sub_cone}, {});
        }
        inputs.push_back(std::move(in));
    }
    ConeSpaceFragment frag = assemble_fragment(inputs, sigma);
    // fiber vertex positions are integral exactly at the declared lattice
    int checked = 0;
    for (const auto& info : frag.cones) {
        const Cone& c = frag.subdivisions[info.type].cones[info.cone];
        if (c.dim == 0) continue;
        const auto& gtype = frag.types[info.type];
        int nv = static_cast<int>(gtype.vertices.size());
        size_t nvars = gtype.vertices.size() * 3;
        for (const auto& ray : c.rays) {
            for (long k = 1; k <= 24; ++k) {
                IVec scaled(ray.size());
                for (size_t i = 0; i < ray.size(); ++i) scaled[i] = k * ray[i];
                bool in_lattice = lattice_contains(info.integral_lattice, scaled, nvars);
                ImageResult im =
                    image_surjection(gtype, unflatten(to_rational(scaled), nv, 3), sigma);
                bool integral = true;
                for (const auto& p : im.positions)
                    for (const auto& coord : p) integral = integral && is_integer(coord);
                CHECK(integral == in_lattice);
                ++checked;
                if (in_lattice) break;
            }
        }
    }
    CHECK(checked > 0);
}
