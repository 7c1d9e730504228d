#pragma once

#include "tropex/expansion.hpp"
#include "tropex/hull.hpp"

namespace tropex {

// ----- tropical polynomials (min-plus) ---------------------------------------

struct TropicalPolynomial {
    int ambient_dim = 0;
    std::vector<std::pair<IVec, Rat>> terms;  // (exponent, coefficient valuation)
};

struct WeightedOneComplex {
    EmbeddedOneComplex base;
    std::vector<Int> edge_weights;
    std::vector<Int> ray_weights;

    bool operator==(const WeightedOneComplex& o) const {
        return base == o.base && edge_weights == o.edge_weights && ray_weights == o.ray_weights;
    }
};

// Value min over terms of <exponent, x> + val.
inline Rat tropical_value(const TropicalPolynomial& p, const QVec& x) {
    Rat best;
    bool first = true;
    for (const auto& [e, v] : p.terms) {
        Rat val = dot(e, x) + v;
        if (first || val < best) { best = val; first = false; }
    }
    return best;
}

// Number of terms attaining the minimum; the break locus is where this is >= 2.
inline int tropical_multiplicity(const TropicalPolynomial& p, const QVec& x) {
    Rat best = tropical_value(p, x);
    int count = 0;
    for (const auto& [e, v] : p.terms)
        if (dot(e, x) + v == best) ++count;
    return count;
}

inline bool on_support(const WeightedOneComplex& w, const QVec& x) {
    for (size_t v = 0; v < w.base.positions.size(); ++v)
        if (w.base.positions[v] == x) return true;
    for (const auto& piece : geometric_pieces(w.base)) {
        auto t = param_on_line(piece, x);
        if (t && param_in_range(piece, *t)) return true;
    }
    return false;
}

// ----- hypersurface tropicalization ------------------------------------------

namespace detail {

struct WeightedPiece {
    Piece piece;
    Int weight;
};

inline Int lookup_weight(const std::vector<WeightedPiece>& raw, const QVec& x) {
    for (const auto& wp : raw) {
        auto t = param_on_line(wp.piece, x);
        if (t && param_in_range(wp.piece, *t)) return wp.weight;
    }
    throw Error(ErrorCode::InternalError, "no raw wall hosts the sample point");
}

}  // namespace detail

// The non-differentiability locus of min over terms, structured by the dual
// regular subdivision of the exponent configuration and subdivided along the
// walls of Sigma. Edge weights are lattice lengths of the dual walls.
inline WeightedOneComplex tropicalize_hypersurface(const TropicalPolynomial& p,
                                                   const ConeComplex& sigma) {
    if (p.ambient_dim != 2)
        throw Error(ErrorCode::UnsupportedDimension, "only plane curves in this release");
    if (sigma.ambient_dim != 2)
        throw Error(ErrorCode::AmbientMismatch, "fan must live in the plane");
    if (!is_complete(sigma))
        throw Error(ErrorCode::InvalidInput, "fan must be complete");
    if (p.terms.size() < 2)
        throw Error(ErrorCode::DegenerateInput, "a hypersurface needs at least two terms");
    std::vector<IVec> exps;
    QVec heights;
    for (const auto& [e, v] : p.terms) {
        if (e.size() != 2) throw Error(ErrorCode::DimensionMismatch, "exponent of wrong length");
        if (std::find(exps.begin(), exps.end(), e) != exps.end())
            throw Error(ErrorCode::InvalidInput, "duplicate exponents");
        exps.push_back(e);
        heights.push_back(v);
    }

    IMat diffs;
    for (size_t i = 1; i < exps.size(); ++i) {
        IVec d(2);
        d[0] = exps[i][0] - exps[0][0];
        d[1] = exps[i][1] - exps[0][1];
        diffs.push_back(d);
    }
    size_t affine_rank = rank(diffs);

    RawCurve raw;
    std::vector<detail::WeightedPiece> raw_walls;

    if (affine_rank == 2) {
        auto cells = regular_subdivision_2d(exps, heights);
        // dual vertex of each cell: the point where all its terms tie
        std::vector<QVec> cell_vertex(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            const auto& cell = cells[c];
            QMat m;
            QVec rhs;
            for (size_t i = 1; i < cell.size(); ++i) {
                const IVec &a = exps[cell[0]], &b = exps[cell[i]];
                m.push_back({Rat(a[0] - b[0]), Rat(a[1] - b[1])});
                rhs.push_back(heights[cell[i]] - heights[cell[0]]);
            }
            auto x = solve(m, rhs, 2);
            if (!x) throw Error(ErrorCode::InternalError, "cell tie system inconsistent");
            cell_vertex[c] = *x;
            raw.points.push_back(*x);
        }
        for (const auto& wall : subdivision_walls(exps, cells)) {
            Int weight = wall.lattice_length();
            if (wall.cell_b >= 0) {
                const QVec &a = cell_vertex[wall.cell_a], &b = cell_vertex[wall.cell_b];
                raw.segments.push_back({a, b});
                Piece piece{a, primitive(sub(b, a)), std::nullopt};
                QVec d = sub(b, a);
                for (size_t i = 0; i < d.size(); ++i)
                    if (piece.dir[i] != 0) { piece.len = d[i] / Rat(piece.dir[i]); break; }
                raw_walls.push_back({piece, weight});
            } else {
                // boundary wall: ray in the rotated direction that keeps the
                // wall's terms minimal among the cell's terms
                IVec w(2);
                w[0] = wall.to[0] - wall.from[0];
                w[1] = wall.to[1] - wall.from[1];
                IVec d = primitive(IVec{-w[1], w[0]});
                const auto& cell = cells[wall.cell_a];
                bool ok = true;
                for (int q : cell) {
                    Int s = (exps[q][0] - wall.from[0]) * d[0] + (exps[q][1] - wall.from[1]) * d[1];
                    if (s < 0) { ok = false; break; }
                }
                if (!ok) d = negate(d);
                const QVec& v = cell_vertex[wall.cell_a];
                raw.rays.push_back({v, d});
                raw_walls.push_back({Piece{v, d, std::nullopt}, weight});
            }
        }
    } else {
        // collinear exponents: a union of parallel lines, one per break of
        // the induced one-variable polynomial
        IVec u;
        for (const auto& d : diffs)
            if (!is_zero(d)) { u = primitive(d); break; }
        std::vector<std::pair<Int, Rat>> lifted;  // (coordinate along u, height)
        Rat uu(dot(u, u));
        for (size_t i = 0; i < exps.size(); ++i) {
            IVec d(2);
            d[0] = exps[i][0] - exps[0][0];
            d[1] = exps[i][1] - exps[0][1];
            Rat k = Rat(dot(u, d)) / uu;
            lifted.push_back({k.get_num(), heights[i]});
        }
        std::sort(lifted.begin(), lifted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // lower hull of (k, h): selected terms of the 1-variable envelope
        std::vector<std::pair<Int, Rat>> hull;
        for (const auto& pt : lifted) {
            while (hull.size() >= 2) {
                const auto& a = hull[hull.size() - 2];
                const auto& b = hull[hull.size() - 1];
                // keep b only if it is strictly below the chord a--pt
                if ((b.second - a.second) * Rat(pt.first - a.first) <
                    (pt.second - a.second) * Rat(b.first - a.first))
                    break;
                hull.pop_back();
            }
            if (!hull.empty() && hull.back().first == pt.first) {
                if (pt.second < hull.back().second) hull.back() = pt;
                continue;
            }
            hull.push_back(pt);
        }
        if (hull.size() < 2)
            throw Error(ErrorCode::DegenerateInput, "no break locus");
        IVec dline = primitive(IVec{-u[1], u[0]});
        for (size_t i = 0; i + 1 < hull.size(); ++i) {
            const auto& [k1, h1] = hull[i];
            const auto& [k2, h2] = hull[i + 1];
            Rat s = -(h2 - h1) / Rat(k2 - k1);  // tie of the two selected terms
            QVec anchor{s * Rat(u[0]) / uu, s * Rat(u[1]) / uu};
            raw.points.push_back(anchor);
            raw.rays.push_back({anchor, dline});
            raw.rays.push_back({anchor, negate(dline)});
            raw_walls.push_back({Piece{anchor, dline, std::nullopt}, k2 - k1});
            raw_walls.push_back({Piece{anchor, negate(dline), std::nullopt}, k2 - k1});
        }
    }

    EmbeddedOneComplex embedded = minimal_structure(embed_into(sigma, raw), sigma);
    WeightedOneComplex out;
    out.base = embedded;
    for (const auto& ed : embedded.type.edges) {
        QVec mid = scale(Rat(1, 2), add(embedded.positions[ed.a], embedded.positions[ed.b]));
        out.edge_weights.push_back(detail::lookup_weight(raw_walls, mid));
    }
    for (const auto& r : embedded.type.rays) {
        QVec probe = embedded.positions[r.base];
        for (size_t i = 0; i < probe.size(); ++i) probe[i] += Rat(r.dir[i]);
        out.ray_weights.push_back(detail::lookup_weight(raw_walls, probe));
    }
    return out;
}

// ----- balancing --------------------------------------------------------------

struct BalanceEntry {
    int vertex = 0;
    IVec defect;
};

struct BalanceReport {
    std::vector<BalanceEntry> defects;  // nonzero per-vertex sums only
    bool balanced() const { return defects.empty(); }
};

// Per vertex: sum of weight times primitive outgoing direction over incident
// edges and rays; balanced iff every sum vanishes.
inline BalanceReport check_balancing(const WeightedOneComplex& w) {
    BalanceReport rep;
    size_t n = w.base.positions.empty() ? 0 : w.base.positions[0].size();
    for (size_t v = 0; v < w.base.positions.size(); ++v) {
        IVec sum(n, 0);
        for (size_t i = 0; i < w.base.type.edges.size(); ++i) {
            const auto& ed = w.base.type.edges[i];
            if (ed.a == static_cast<int>(v))
                for (size_t j = 0; j < n; ++j) sum[j] += w.edge_weights[i] * ed.dir[j];
            if (ed.b == static_cast<int>(v))
                for (size_t j = 0; j < n; ++j) sum[j] -= w.edge_weights[i] * ed.dir[j];
        }
        for (size_t i = 0; i < w.base.type.rays.size(); ++i) {
            const auto& r = w.base.type.rays[i];
            if (r.base == static_cast<int>(v))
                for (size_t j = 0; j < n; ++j) sum[j] += w.ray_weights[i] * r.dir[j];
        }
        if (!is_zero(sum)) rep.defects.push_back({static_cast<int>(v), sum});
    }
    return rep;
}

// ----- asymptotics -------------------------------------------------------------

struct AsymptoticProfile {
    // per ray of Sigma (lex-sorted primitive generators): sorted ray weights
    std::vector<std::pair<IVec, std::vector<Int>>> by_ray;

    std::vector<Int> totals() const {
        std::vector<Int> t;
        for (const auto& [dir, ws] : by_ray) {
            Int s = 0;
            for (const auto& w : ws) s += w;
            t.push_back(s);
        }
        return t;
    }
};

// Groups the unbounded rays of W by direction against the rays of Sigma;
// total weight per direction is the degree against the matching divisor.
inline AsymptoticProfile asymptotic_profile(const WeightedOneComplex& w,
                                            const ConeComplex& sigma) {
    IMat rays = complex_rays(sigma);
    AsymptoticProfile out;
    for (const auto& r : rays) out.by_ray.push_back({r, {}});
    for (size_t i = 0; i < w.base.type.rays.size(); ++i) {
        const IVec& d = w.base.type.rays[i].dir;
        bool found = false;
        for (auto& [dir, ws] : out.by_ray)
            if (dir == d) {
                ws.push_back(w.ray_weights[i]);
                found = true;
                break;
            }
        if (!found)
            throw Error(ErrorCode::NonparallelRay,
                        "unbounded direction is not a ray of the fan");
    }
    for (auto& [dir, ws] : out.by_ray) std::sort(ws.begin(), ws.end());
    return out;
}

// ----- the flat-limit algorithm -------------------------------------------------

struct LimitResult {
    EmbeddedOneComplex minimal_complex;  // canonical coarsening of the input
    Int base_change_order = 1;
    ConeComplex cone;                    // cone over the dilated complex
    ExpansionDualComplex expansion;

    bool operator==(const LimitResult& o) const {
        return minimal_complex == o.minimal_complex && base_change_order == o.base_change_order &&
               cone == o.cone && expansion == o.expansion;
    }
};

// Canonical limit data: minimal structure, minimal integral dilation, the
// cone over the dilated complex, and the dual complex of the expansion.
// Deterministic and invariant under collinear subdivision of the input.
inline LimitResult limit_expansion(const EmbeddedOneComplex& e, const ConeComplex& sigma) {
    LimitResult out;
    out.minimal_complex = minimal_structure(e, sigma);
    out.base_change_order = minimal_dilation(out.minimal_complex, sigma);
    EmbeddedOneComplex dilated =
        canonicalize(dilate(out.minimal_complex, Rat(out.base_change_order)), sigma);
    out.cone = cone_over(dilated, sigma);
    out.expansion = dual_complex(out.cone, sigma);
    return out;
}

}  // namespace tropex
