#pragma once

#include <algorithm>
#include <random>

#include "tropex/graphs.hpp"

namespace tropex::testutil {

inline IVec iv(std::initializer_list<long> xs) { return IVec(xs.begin(), xs.end()); }

inline QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline ConeComplex fan_p1() {
    return make_complex(1, {make_cone(1, IMat{iv({1})}), make_cone(1, IMat{iv({-1})})});
}

inline ConeComplex fan_p2() {
    IVec e1 = iv({1, 0}), e2 = iv({0, 1}), f = iv({-1, -1});
    return make_complex(2, {make_cone(2, IMat{e1, e2}), make_cone(2, IMat{e1, f}),
                            make_cone(2, IMat{e2, f})});
}

inline ConeComplex orthant_complex(int n = 2) {
    IMat gens;
    for (int i = 0; i < n; ++i) {
        IVec e(n, 0);
        e[i] = 1;
        gens.push_back(e);
    }
    return make_complex(n, {make_cone(n, gens)});
}

// complete fan in R^2 on the given rays plus a seed triple
inline ConeComplex complete_fan(IMat rays) {
    rays.push_back(iv({1, 0}));
    rays.push_back(iv({0, 1}));
    rays.push_back(iv({-1, -1}));
    for (auto& r : rays) r = primitive(r);
    std::sort(rays.begin(), rays.end(), [](const IVec& a, const IVec& b) {
        auto half = [](const IVec& v) { return v[1] < 0 || (v[1] == 0 && v[0] < 0) ? 1 : 0; };
        if (half(a) != half(b)) return half(a) < half(b);
        return a[0] * b[1] - a[1] * b[0] > 0;
    });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    std::vector<Cone> cones;
    for (size_t i = 0; i < rays.size(); ++i)
        cones.push_back(make_cone(2, IMat{rays[i], rays[(i + 1) % rays.size()]}));
    return make_complex(2, cones);
}

// The tropical line with center c in the fan of P^2, wall-subdivided.
inline EmbeddedOneComplex tropical_line(const ConeComplex& p2, const QVec& center) {
    RawCurve raw;
    raw.rays.push_back({center, iv({1, 0})});
    raw.rays.push_back({center, iv({0, 1})});
    raw.rays.push_back({center, iv({-1, -1})});
    return embed_into(p2, raw);
}

// Random valid embedded 1-complex in the fan of P^2: a segment tree grown
// from random rational points with axis directions, plus some rays.
inline EmbeddedOneComplex random_embedded(std::mt19937& rng, const ConeComplex& sigma,
                                          int extra = 2) {
    auto rnd = [&](int span) { return frac(static_cast<long>(rng() % (2 * span + 1)) - span, 1 + static_cast<long>(rng() % 3)); };
    for (int attempt = 0; attempt < 200; ++attempt) {
        RawCurve raw;
        QVec p{rnd(4), rnd(4)};
        raw.points.push_back(p);
        std::vector<QVec> anchors{p};
        IMat dirs{iv({1, 0}), iv({0, 1}), iv({1, 1}), iv({1, -1}), iv({-1, -1}), iv({2, 1})};
        for (int i = 0; i < extra; ++i) {
            const QVec& base = anchors[rng() % anchors.size()];
            const IVec& d = dirs[rng() % dirs.size()];
            Rat t = frac(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 2));
            QVec q = base;
            for (size_t j = 0; j < q.size(); ++j) q[j] += t * Rat(d[j]);
            raw.segments.push_back({base, q});
            anchors.push_back(q);
        }
        const QVec& rb = anchors[rng() % anchors.size()];
        raw.rays.push_back({rb, dirs[rng() % 3]});
        try {
            EmbeddedOneComplex e = embed_into(sigma, raw);
            if (validate_embedded(e, sigma).ok()) return e;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorCode::InternalError, "random generator failed to produce a valid complex");
}

// Insert up to k collinear interior vertices on every edge (and one on each
// ray) without changing the support.
inline EmbeddedOneComplex random_subdivision(std::mt19937& rng, const EmbeddedOneComplex& e,
                                             int k = 3) {
    EmbeddedOneComplex out = e;
    int rounds = k + static_cast<int>(rng() % 3);
    for (int c = 0; c < rounds; ++c) {
        size_t total = out.type.edges.size() + out.type.rays.size();
        if (total == 0) break;
        size_t pick = rng() % total;
        if (pick < out.type.edges.size())
            out = subdivide_edge(out, static_cast<int>(pick), Rat(1, 2 + static_cast<long>(rng() % 4)));
        else
            out = subdivide_ray(out, static_cast<int>(pick - out.type.edges.size()),
                                Rat(1 + static_cast<long>(rng() % 4)));
    }
    return out;
}

}  // namespace tropex::testutil
