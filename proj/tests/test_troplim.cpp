#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "tropex/troplim.hpp"

using namespace tropex;
using namespace tropex::testutil;

namespace {

TropicalPolynomial poly(std::initializer_list<std::pair<std::initializer_list<long>, Rat>> ts) {
    TropicalPolynomial p;
    p.ambient_dim = 2;
    for (const auto& [e, v] : ts) p.terms.push_back({IVec(e.begin(), e.end()), v});
    return p;
}

// degree-d polynomial supported on all lattice points of d*Delta_2
TropicalPolynomial random_full_poly(std::mt19937& rng, int d) {
    TropicalPolynomial p;
    p.ambient_dim = 2;
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j)
            p.terms.push_back({iv({i, j}), frac(static_cast<long>(rng() % 25) - 12,
                                                1 + static_cast<long>(rng() % 4))});
    return p;
}

// break-locus sampling oracle: x is on the curve iff the minimum is attained
// at least twice
void check_against_oracle(const TropicalPolynomial& p, const WeightedOneComplex& w,
                          const std::vector<QVec>& probes) {
    for (const auto& x : probes) {
        bool on_break = tropical_multiplicity(p, x) >= 2;
        bool on_curve = on_support(w, x);
        REQUIRE(on_break == on_curve);
    }
}

std::vector<QVec> grid_probes(const WeightedOneComplex& w, std::mt19937& rng, int count) {
    std::vector<QVec> probes;
    for (int i = 0; i < count / 2; ++i)
        probes.push_back(QVec{frac(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3)),
                              frac(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3))});
    // points on and near the computed support exercise both directions
    auto pieces = geometric_pieces(w.base);
    for (int i = 0; static_cast<int>(probes.size()) < count && !pieces.empty(); ++i) {
        const Piece& pc = pieces[i % pieces.size()];
        Rat t = frac(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3));
        if (pc.len && t > *pc.len) t = *pc.len;
        probes.push_back(piece_point(pc, t));
        QVec off = piece_point(pc, t);
        off[0] += frac(1, 17);
        probes.push_back(off);
    }
    return probes;
}

}  // namespace

TEST_CASE("tropical line 1+x+y") {
    ConeComplex p2 = fan_p2();
    auto p = poly({{{0, 0}, Rat(0)}, {{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}});
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    REQUIRE(w.base.positions.size() == 1);
    CHECK(w.base.positions[0] == qv({0, 0}));
    REQUIRE(w.base.type.rays.size() == 3);
    CHECK(w.base.type.rays[0].dir == iv({-1, -1}));
    CHECK(w.base.type.rays[1].dir == iv({0, 1}));
    CHECK(w.base.type.rays[2].dir == iv({1, 0}));
    CHECK(w.ray_weights == std::vector<Int>{1, 1, 1});
    std::mt19937 rng(3);
    check_against_oracle(p, w, grid_probes(w, rng, 60));
}

TEST_CASE("tropical line t+x+y has vertex (1,1)") {
    ConeComplex p2 = fan_p2();
    auto p = poly({{{0, 0}, Rat(1)}, {{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}});
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    // the (-1,-1) ray from (1,1) crosses the origin, so the complex has an
    // extra wall vertex there
    REQUIRE(w.base.positions.size() == 2);
    CHECK(w.base.positions[0] == qv({0, 0}));
    CHECK(w.base.positions[1] == qv({1, 1}));
    CHECK(w.base.type.edges.size() == 1);
    CHECK(w.base.type.rays.size() == 3);
    for (const auto& wt : w.ray_weights) CHECK(wt == 1);
    CHECK(w.edge_weights == std::vector<Int>{1});
    std::mt19937 rng(5);
    check_against_oracle(p, w, grid_probes(w, rng, 60));
}

TEST_CASE("doubled line from two even terms") {
    ConeComplex p2 = fan_p2();
    auto p = poly({{{0, 0}, Rat(0)}, {{2, 0}, Rat(0)}});
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    // the wall x = 0 with weight 2, subdivided at the origin
    REQUIRE(w.base.positions.size() == 1);
    CHECK(w.base.positions[0] == qv({0, 0}));
    REQUIRE(w.base.type.rays.size() == 2);
    CHECK(w.base.type.rays[0].dir == iv({0, -1}));
    CHECK(w.base.type.rays[1].dir == iv({0, 1}));
    CHECK(w.ray_weights == std::vector<Int>{2, 2});
    std::mt19937 rng(7);
    check_against_oracle(p, w, grid_probes(w, rng, 60));
}

TEST_CASE("degenerate inputs are rejected") {
    ConeComplex p2 = fan_p2();
    TropicalPolynomial single;
    single.ambient_dim = 2;
    single.terms.push_back({iv({1, 1}), Rat(0)});
    CHECK_THROWS_AS(tropicalize_hypersurface(single, p2), Error);
    TropicalPolynomial threed;
    threed.ambient_dim = 3;
    CHECK_THROWS_AS(tropicalize_hypersurface(threed, p2), Error);
}

TEST_CASE("balancing of the tropical line and a broken variant") {
    ConeComplex p2 = fan_p2();
    auto p = poly({{{0, 0}, Rat(0)}, {{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}});
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    CHECK(check_balancing(w).balanced());

    // doubling the weight on the e1 ray leaves defect (1,0) at the vertex
    WeightedOneComplex broken = w;
    for (size_t i = 0; i < broken.base.type.rays.size(); ++i)
        if (broken.base.type.rays[i].dir == iv({1, 0})) broken.ray_weights[i] = 2;
    auto rep = check_balancing(broken);
    REQUIRE(rep.defects.size() == 1);
    CHECK(rep.defects[0].defect == iv({1, 0}));
}

TEST_CASE("random degree <= 3 curves balance and have degree asymptotics") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(20240812);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + trial % 3;
        TropicalPolynomial p = random_full_poly(rng, d);
        WeightedOneComplex w = tropicalize_hypersurface(p, p2);
        CHECK(check_balancing(w).balanced());
        AsymptoticProfile prof = asymptotic_profile(w, p2);
        std::vector<Int> expect{Int(d), Int(d), Int(d)};
        CHECK(prof.totals() == expect);
        check_against_oracle(p, w, grid_probes(w, rng, 40));
    }
}

TEST_CASE("asymptotic profile of the line and a nonparallel ray") {
    ConeComplex p2 = fan_p2();
    auto p = poly({{{0, 0}, Rat(0)}, {{1, 0}, Rat(0)}, {{0, 1}, Rat(0)}});
    WeightedOneComplex w = tropicalize_hypersurface(p, p2);
    AsymptoticProfile prof = asymptotic_profile(w, p2);
    REQUIRE(prof.by_ray.size() == 3);
    for (const auto& [dir, ws] : prof.by_ray) CHECK(ws == std::vector<Int>{1});

    // a complex with a ray in a non-fan direction
    WeightedOneComplex bad = w;
    bad.base.type.rays[1].dir = iv({1, 2});
    CHECK_THROWS_AS(asymptotic_profile(bad, p2), Error);
}

TEST_CASE("limit of an integral minimal complex is the identity case") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e = tropical_line(p2, qv({2, 1}));
    LimitResult lr = limit_expansion(e, p2);
    CHECK(lr.base_change_order == 1);
    CHECK(lr.minimal_complex == minimal_structure(e, p2));
    CHECK(lr.cone == cone_over(lr.minimal_complex, p2));
    CHECK(lr.expansion.components.size() == lr.minimal_complex.positions.size());
}

TEST_CASE("limit of the half-integral line dilates by 2") {
    ConeComplex p2 = fan_p2();
    EmbeddedOneComplex e = tropical_line(p2, QVec{Rat(1, 2), Rat(1, 2)});
    LimitResult lr = limit_expansion(e, p2);
    CHECK(lr.base_change_order == 2);
    // the dilated complex has its center at (1,1)
    bool found = false;
    for (const auto& c : lr.expansion.components) found = found || c.position == qv({1, 1});
    CHECK(found);
}

TEST_CASE("limit is invariant under collinear subdivision") {
    ConeComplex p2 = fan_p2();
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        EmbeddedOneComplex e = random_embedded(rng, p2);
        LimitResult base = limit_expansion(e, p2);
        EmbeddedOneComplex sub = random_subdivision(rng, e);
        CHECK(limit_expansion(sub, p2) == base);
        // dilation of the output complex is always 1
        EmbeddedOneComplex dilated =
            canonicalize(dilate(base.minimal_complex, Rat(base.base_change_order)), p2);
        CHECK(minimal_dilation(dilated, p2) == 1);
    }
}
