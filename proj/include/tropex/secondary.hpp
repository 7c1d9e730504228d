#pragma once

#include "tropex/parallel.hpp"
#include "tropex/troplim.hpp"

namespace tropex {

// ----- regular subdivisions of the dilated simplex -----------------------------

// Lattice points of d*Delta_2, lex-sorted.
inline std::vector<IVec> simplex_points(int d) {
    std::vector<IVec> pts;
    for (int i = 0; i <= d; ++i)
        for (int j = 0; d - i - j >= 0; ++j) pts.push_back(IVec{Int(i), Int(j)});
    std::sort(pts.begin(), pts.end(), [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    return pts;
}

struct RegularSubdivision {
    int d = 1;
    std::vector<IVec> points;
    std::vector<std::vector<int>> cells;  // tied sets, sorted
    QVec witness_heights;

    bool operator==(const RegularSubdivision& o) const {
        return d == o.d && points == o.points && cells == o.cells;
    }
};

inline RegularSubdivision subdivision_from_heights(int d, const QVec& h) {
    if (d < 1 || d > 3) throw Error(ErrorCode::BadIndex, "d must be 1, 2 or 3");
    RegularSubdivision s;
    s.d = d;
    s.points = simplex_points(d);
    if (h.size() != s.points.size())
        throw Error(ErrorCode::BadIndex, "height vector does not match the lattice points");
    s.cells = regular_subdivision_2d(s.points, h);
    s.witness_heights = h;
    return s;
}

// ----- heights modulo affine functions ------------------------------------------

namespace detail {

struct HeightQuotient {
    std::vector<int> corner;      // indices of (0,0), (d,0), (0,d)
    std::vector<int> free_index;  // non-corner points, in order
};

inline HeightQuotient height_quotient(const std::vector<IVec>& pts, int d) {
    HeightQuotient q;
    IVec c0{Int(0), Int(0)}, cx{Int(d), Int(0)}, cy{Int(0), Int(d)};
    q.corner = {-1, -1, -1};
    for (size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] == c0) q.corner[0] = static_cast<int>(i);
        else if (pts[i] == cx) q.corner[1] = static_cast<int>(i);
        else if (pts[i] == cy) q.corner[2] = static_cast<int>(i);
        else q.free_index.push_back(static_cast<int>(i));
    }
    return q;
}

// Subtract the affine function matching h at the corners; quotient
// coordinates are the normalized non-corner heights.
inline QVec normalize_heights(const std::vector<IVec>& pts, int d, const QVec& h,
                              const HeightQuotient& q) {
    Rat h0 = h[q.corner[0]];
    Rat gx = (h[q.corner[1]] - h0) / Rat(d);
    Rat gy = (h[q.corner[2]] - h0) / Rat(d);
    QVec out;
    for (int i : q.free_index)
        out.push_back(h[i] - h0 - gx * Rat(pts[i][0]) - gy * Rat(pts[i][1]));
    return out;
}

inline QVec lift_heights(const std::vector<IVec>& pts, const HeightQuotient& q, const QVec& y) {
    QVec h(pts.size(), Rat(0));
    for (size_t i = 0; i < q.free_index.size(); ++i) h[q.free_index[i]] = y[i];
    return h;
}

// Quotient covector of a height covector that vanishes on affine functions.
inline IVec quotient_covector(const QVec& cov, const HeightQuotient& q) {
    QVec out;
    for (int i : q.free_index) out.push_back(cov[i]);
    return primitive(out);
}

}  // namespace detail

struct SecondaryCone {
    RegularSubdivision subdivision;
    Cone cone;  // in height space modulo the affine lineality
};

// The closed cone of all heights inducing this subdivision or a coarsening,
// from the folding equalities and inequalities of its cells. NotRegular if
// the interior fails to reproduce the subdivision.
inline SecondaryCone secondary_cone(const RegularSubdivision& s) {
    const auto& pts = s.points;
    size_t np = pts.size();
    detail::HeightQuotient q = detail::height_quotient(pts, s.d);
    IMat ineqs, eqs;
    for (const auto& cell : s.cells) {
        if (cell.size() < 3) throw Error(ErrorCode::NotRegular, "cell with fewer than 3 points");
        // barycentric weights of any point against an affine basis of the cell
        int p0 = cell[0], p1 = -1, p2 = -1;
        for (size_t i = 1; i < cell.size() && p2 < 0; ++i) {
            if (p1 < 0) { p1 = cell[i]; continue; }
            Int det = (pts[cell[i]][0] - pts[p0][0]) * (pts[p1][1] - pts[p0][1]) -
                      (pts[cell[i]][1] - pts[p0][1]) * (pts[p1][0] - pts[p0][0]);
            if (det != 0) p2 = cell[i];
        }
        if (p2 < 0) throw Error(ErrorCode::NotRegular, "cell is not two-dimensional");
        auto barycentric = [&](int target) {
            QMat m{{Rat(pts[p0][0]), Rat(pts[p1][0]), Rat(pts[p2][0])},
                   {Rat(pts[p0][1]), Rat(pts[p1][1]), Rat(pts[p2][1])},
                   {Rat(1), Rat(1), Rat(1)}};
            QVec rhs{Rat(pts[target][0]), Rat(pts[target][1]), Rat(1)};
            auto sol = solve(m, rhs, 3);
            return *sol;
        };
        std::set<int> in_cell(cell.begin(), cell.end());
        for (size_t t = 0; t < np; ++t) {
            if (static_cast<int>(t) == p0 || static_cast<int>(t) == p1 ||
                static_cast<int>(t) == p2)
                continue;
            QVec lam = barycentric(static_cast<int>(t));
            QVec cov(np, Rat(0));
            cov[t] = 1;
            cov[p0] -= lam[0];
            cov[p1] -= lam[1];
            cov[p2] -= lam[2];
            IVec qcov = detail::quotient_covector(cov, q);
            if (in_cell.count(static_cast<int>(t))) {
                if (!is_zero(qcov)) eqs.push_back(qcov);
            } else {
                ineqs.push_back(qcov);
            }
        }
    }
    SecondaryCone out;
    out.subdivision = s;
    out.cone = cone_from_inequalities(static_cast<int>(q.free_index.size()), ineqs, eqs);
    // the interior must reproduce the subdivision exactly
    QVec sample = relint_sample(out.cone);
    QVec h = detail::lift_heights(pts, q, sample);
    RegularSubdivision check = subdivision_from_heights(s.d, h);
    if (!(check.cells == s.cells))
        throw Error(ErrorCode::NotRegular, "no height vector induces exactly this subdivision");
    return out;
}

// The balanced tropical curve dual to a regular subdivision at an interior
// height vector: one vertex per cell, edges across interior walls, rays at
// boundary walls, weighted by lattice lengths.
inline WeightedOneComplex dual_curve(const RegularSubdivision& s, const QVec& h,
                                     const ConeComplex& sigma) {
    detail::HeightQuotient q = detail::height_quotient(s.points, s.d);
    SecondaryCone sc = secondary_cone(s);
    QVec y = detail::normalize_heights(s.points, s.d, h, q);
    if (!in_relative_interior(sc.cone, y))
        throw Error(ErrorCode::NotInterior, "heights do not lie interior to the secondary cone");
    TropicalPolynomial p;
    p.ambient_dim = 2;
    for (size_t i = 0; i < s.points.size(); ++i) p.terms.push_back({s.points[i], h[i]});
    return tropicalize_hypersurface(p, sigma);
}

// ----- exhaustive enumeration of the secondary fan ------------------------------

struct SecondaryFanReport {
    std::vector<SecondaryCone> maximal;
    bool covers = false;            // union is all of height space mod lineality
    bool pairwise_faces = false;    // intersections are common faces
    bool all_triangulations = false;
    bool all_unimodular = false;
    size_t count = 0;
};

namespace detail {

// All triangulations of the point configuration: sets of affinely
// independent triples with pairwise disjoint interiors covering the simplex.
inline std::vector<std::vector<std::vector<int>>> all_triangulations(
    const std::vector<IVec>& pts, int d, size_t budget) {
    std::vector<std::vector<int>> tris;
    size_t np = pts.size();
    std::vector<Int> twice_area;
    for (size_t i = 0; i < np; ++i)
        for (size_t j = i + 1; j < np; ++j)
            for (size_t k = j + 1; k < np; ++k) {
                Int det = (pts[j][0] - pts[i][0]) * (pts[k][1] - pts[i][1]) -
                          (pts[j][1] - pts[i][1]) * (pts[k][0] - pts[i][0]);
                if (det == 0) continue;
                tris.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
                twice_area.push_back(abs(det));
            }
    // exact interior-disjointness of triangle pairs
    auto inside_strict = [&](const std::vector<int>& t, const QVec& x) {
        for (int r = 0; r < 3; ++r) {
            const IVec &a = pts[t[r]], &b = pts[t[(r + 1) % 3]], &c = pts[t[(r + 2) % 3]];
            Rat side = Rat(b[0] - a[0]) * (x[1] - Rat(a[1])) - Rat(b[1] - a[1]) * (x[0] - Rat(a[0]));
            Rat ref = Rat(b[0] - a[0]) * Rat(c[1] - a[1]) - Rat(b[1] - a[1]) * Rat(c[0] - a[0]);
            if (sgn(side) * sgn(ref) <= 0) return false;
        }
        return true;
    };
    auto overlap = [&](size_t s, size_t t) {
        // shared interior point exists iff some vertex of one is strictly
        // inside the other or two edges cross properly
        for (int r = 0; r < 3; ++r) {
            if (inside_strict(tris[t], to_rational(pts[tris[s][r]]))) return true;
            if (inside_strict(tris[s], to_rational(pts[tris[t][r]]))) return true;
        }
        for (int r1 = 0; r1 < 3; ++r1)
            for (int r2 = 0; r2 < 3; ++r2) {
                Piece e1{to_rational(pts[tris[s][r1]]),
                         primitive(sub(to_rational(pts[tris[s][(r1 + 1) % 3]]),
                                       to_rational(pts[tris[s][r1]]))),
                         std::nullopt};
                QVec d1 = sub(to_rational(pts[tris[s][(r1 + 1) % 3]]), to_rational(pts[tris[s][r1]]));
                for (size_t c = 0; c < d1.size(); ++c)
                    if (e1.dir[c] != 0) { e1.len = d1[c] / Rat(e1.dir[c]); break; }
                Piece e2{to_rational(pts[tris[t][r2]]),
                         primitive(sub(to_rational(pts[tris[t][(r2 + 1) % 3]]),
                                       to_rational(pts[tris[t][r2]]))),
                         std::nullopt};
                QVec d2 = sub(to_rational(pts[tris[t][(r2 + 1) % 3]]), to_rational(pts[tris[t][r2]]));
                for (size_t c = 0; c < d2.size(); ++c)
                    if (e2.dir[c] != 0) { e2.len = d2[c] / Rat(e2.dir[c]); break; }
                PieceMeet m = meet_pieces(e1, e2);
                if (m.kind == PieceMeet::Point) {
                    bool interior1 = m.t1 > 0 && m.t1 < *e1.len;
                    bool interior2 = m.t2 > 0 && m.t2 < *e2.len;
                    if (interior1 && interior2) return true;
                }
            }
        return false;
    };
    size_t nt = tris.size();
    std::vector<std::vector<bool>> compat(nt, std::vector<bool>(nt, false));
    for (size_t s = 0; s < nt; ++s)
        for (size_t t = s + 1; t < nt; ++t) compat[s][t] = compat[t][s] = !overlap(s, t);

    Int target = Int(d) * Int(d);  // twice the area of d*Delta_2
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> chosen;
    std::function<void(size_t, Int)> rec = [&](size_t next, Int area) {
        if (area == target) {
            std::vector<std::vector<int>> tri;
            for (int c : chosen) tri.push_back(tris[c]);
            out.push_back(tri);
            return;
        }
        if (next == nt) return;
        if (out.size() > budget) throw Error(ErrorCode::BudgetExceeded, "triangulation budget");
        // include tris[next] if compatible with everything chosen
        bool ok = true;
        for (int c : chosen)
            if (!compat[c][next]) { ok = false; break; }
        if (ok && area + twice_area[next] <= target) {
            chosen.push_back(static_cast<int>(next));
            rec(next + 1, area + twice_area[next]);
            chosen.pop_back();
        }
        rec(next + 1, area);
    };
    rec(0, 0);
    return out;
}

}  // namespace detail

// All maximal secondary cones for d in {1, 2}, with the fan-hood report.
inline SecondaryFanReport enumerate_secondary_fan(int d, size_t budget = 100000,
                                                  int threads = 1) {
    if (d < 1 || d > 2) throw Error(ErrorCode::BadIndex, "full enumeration only for d <= 2");
    auto pts = simplex_points(d);
    detail::HeightQuotient q = detail::height_quotient(pts, d);
    auto candidates = detail::all_triangulations(pts, d, budget);

    SecondaryFanReport rep;
    std::vector<std::optional<SecondaryCone>> found(candidates.size());
    parallel_for(candidates.size(), threads, [&](size_t i) {
        RegularSubdivision s;
        s.d = d;
        s.points = pts;
        s.cells = candidates[i];
        std::sort(s.cells.begin(), s.cells.end());
        try {
            found[i] = secondary_cone(s);
        } catch (const Error&) {
            found[i] = std::nullopt;  // not regular
        }
    });
    for (auto& f : found)
        if (f) rep.maximal.push_back(std::move(*f));
    rep.count = rep.maximal.size();

    size_t qdim = q.free_index.size();
    rep.all_triangulations = true;
    rep.all_unimodular = true;
    for (const auto& sc : rep.maximal) {
        for (const auto& cell : sc.subdivision.cells) {
            if (cell.size() != 3) rep.all_triangulations = false;
            else {
                Int det = (pts[cell[1]][0] - pts[cell[0]][0]) * (pts[cell[2]][1] - pts[cell[0]][1]) -
                          (pts[cell[1]][1] - pts[cell[0]][1]) * (pts[cell[2]][0] - pts[cell[0]][0]);
                if (abs(det) != 1) rep.all_unimodular = false;
            }
        }
    }

    // fan-hood: pairwise common faces and facet-matched coverage
    rep.pairwise_faces = true;
    for (size_t i = 0; i < rep.maximal.size() && rep.pairwise_faces; ++i)
        for (size_t j = i + 1; j < rep.maximal.size(); ++j) {
            Cone m = intersect(rep.maximal[i].cone, rep.maximal[j].cone);
            if (!is_face_of(m, rep.maximal[i].cone) || !is_face_of(m, rep.maximal[j].cone)) {
                rep.pairwise_faces = false;
                break;
            }
        }
    if (qdim == 0) {
        rep.covers = rep.count == 1;
    } else {
        std::map<Cone, int> facet_count;
        bool full_dim = true;
        for (const auto& sc : rep.maximal) {
            if (sc.cone.dim != static_cast<int>(qdim)) full_dim = false;
            for (auto& f : facets(sc.cone)) facet_count[f] += 1;
        }
        rep.covers = full_dim && !rep.maximal.empty();
        for (const auto& [f, count] : facet_count)
            if (count != 2) rep.covers = false;
    }
    return rep;
}

}  // namespace tropex
