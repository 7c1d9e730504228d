#pragma once

#include <sstream>

#include "tropex/complex.hpp"

namespace tropex {

// ----- combinatorial and embedded 1-complexes ------------------------------

struct GraphVertex {
    int cone = 0;  // index into the ambient complex
    bool operator==(const GraphVertex&) const = default;
};

struct GraphEdge {
    int a = 0, b = 0;
    int cone = 0;
    IVec dir;  // primitive, points from a to b
    bool operator==(const GraphEdge&) const = default;
};

struct GraphRay {
    int base = 0;
    int cone = 0;
    IVec dir;
    bool operator==(const GraphRay&) const = default;
};

struct CombinatorialOneComplex {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
    std::vector<GraphRay> rays;
    bool operator==(const CombinatorialOneComplex&) const = default;
};

struct EmbeddedOneComplex {
    CombinatorialOneComplex type;
    std::vector<QVec> positions;
    bool operator==(const EmbeddedOneComplex&) const = default;
};

inline int valence(const CombinatorialOneComplex& g, int v) {
    int k = 0;
    for (const auto& e : g.edges) k += (e.a == v) + (e.b == v);
    for (const auto& r : g.rays) k += (r.base == v);
    return k;
}

inline Rat edge_length(const EmbeddedOneComplex& e, int edge) {
    const auto& ed = e.type.edges[edge];
    QVec d = sub(e.positions[ed.b], e.positions[ed.a]);
    for (size_t i = 0; i < d.size(); ++i)
        if (ed.dir[i] != 0) return d[i] / Rat(ed.dir[i]);
    return Rat(0);
}

// ----- exact 1-dimensional geometry ----------------------------------------

// A segment (len set) or a ray (len empty): { base + t*dir : 0 <= t <= len }.
struct Piece {
    QVec base;
    IVec dir;  // primitive
    std::optional<Rat> len;
};

inline QVec piece_point(const Piece& p, const Rat& t) {
    QVec x = p.base;
    for (size_t i = 0; i < x.size(); ++i) x[i] += t * Rat(p.dir[i]);
    return x;
}

// Parameter of x on the line of p, when x lies on it.
inline std::optional<Rat> param_on_line(const Piece& p, const QVec& x) {
    Rat dd(0);
    for (size_t i = 0; i < p.dir.size(); ++i) dd += Rat(p.dir[i] * p.dir[i]);
    QVec delta = sub(x, p.base);
    Rat t = dot(p.dir, delta) / dd;
    for (size_t i = 0; i < x.size(); ++i)
        if (delta[i] != t * Rat(p.dir[i])) return std::nullopt;
    return t;
}

inline bool param_in_range(const Piece& p, const Rat& t) {
    if (t < 0) return false;
    return !p.len || t <= *p.len;
}

struct PieceMeet {
    enum Kind { None, Point, Overlap } kind = None;
    Rat t1, t2;            // parameters of the meeting point (Point case)
    Rat lo1, hi1;          // overlap range on the first piece (Overlap case)
    bool hi1_unbounded = false;
};

// Intersection of two pieces as subsets of the ambient space.
inline PieceMeet meet_pieces(const Piece& p, const Piece& q) {
    PieceMeet out;
    bool parallel = p.dir == q.dir || p.dir == negate(q.dir);
    if (parallel) {
        auto t0 = param_on_line(p, q.base);
        if (!t0) return out;
        bool same_dir = p.dir == q.dir;
        // q's range mapped into p-parameters
        Rat a = *t0;
        std::optional<Rat> b;
        if (q.len) b = same_dir ? Rat(*t0 + *q.len) : Rat(*t0 - *q.len);
        Rat lo, hi;
        bool lo_inf = false, hi_inf = false;
        if (b) {
            lo = std::min(a, *b);
            hi = std::max(a, *b);
        } else if (same_dir) {
            lo = a; hi_inf = true; hi = a;
        } else {
            hi = a; lo_inf = true; lo = a;
        }
        // intersect with p's range [0, len or inf)
        if (!lo_inf) lo = std::max(lo, Rat(0)); else lo = Rat(0);
        bool out_hi_inf = hi_inf && !p.len;
        Rat out_hi;
        if (hi_inf) { if (p.len) out_hi = *p.len; }
        else if (p.len) out_hi = std::min(hi, *p.len);
        else out_hi = hi;
        if (!out_hi_inf && out_hi < lo) return out;
        if (!out_hi_inf && out_hi == lo) {
            out.kind = PieceMeet::Point;
            out.t1 = lo;
            QVec x = piece_point(p, lo);
            auto tq = param_on_line(q, x);
            out.t2 = *tq;
            return out;
        }
        out.kind = PieceMeet::Overlap;
        out.lo1 = lo;
        out.hi1 = out_hi;
        out.hi1_unbounded = out_hi_inf;
        return out;
    }
    // independent directions: solve t*pd - s*qd = q.base - p.base on two
    // independent coordinates, then verify the rest
    size_t n = p.base.size();
    int i1 = -1, i2 = -1;
    for (size_t i = 0; i < n && i2 < 0; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            Int det = p.dir[i] * (-q.dir[j]) - (-q.dir[i]) * p.dir[j];
            if (det != 0) { i1 = static_cast<int>(i); i2 = static_cast<int>(j); break; }
        }
    if (i1 < 0) return out;  // parallel directions that were not both primitive
    QVec rhs = sub(q.base, p.base);
    Rat det = Rat(p.dir[i1]) * Rat(-q.dir[i2]) - Rat(-q.dir[i1]) * Rat(p.dir[i2]);
    Rat t = (rhs[i1] * Rat(-q.dir[i2]) - Rat(-q.dir[i1]) * rhs[i2]) / det;
    Rat s = (Rat(p.dir[i1]) * rhs[i2] - rhs[i1] * Rat(p.dir[i2])) / det;
    for (size_t i = 0; i < n; ++i)
        if (t * Rat(p.dir[i]) - s * Rat(q.dir[i]) != rhs[i]) return out;  // skew
    if (!param_in_range(p, t) || !param_in_range(q, s)) return out;
    out.kind = PieceMeet::Point;
    out.t1 = t;
    out.t2 = s;
    return out;
}

// t-range where base + t*dir lies in the cone; empty() when disjoint.
struct TInterval {
    Rat lo, hi;
    bool lo_inf = false, hi_inf = false;
    bool empty = false;
};

inline TInterval clip_to_cone(const Cone& c, const QVec& base, const IVec& dir) {
    TInterval iv;
    iv.lo_inf = iv.hi_inf = true;
    auto restrict_ge = [&](const Rat& v) {
        if (iv.lo_inf || v > iv.lo) { iv.lo = v; iv.lo_inf = false; }
    };
    auto restrict_le = [&](const Rat& v) {
        if (iv.hi_inf || v < iv.hi) { iv.hi = v; iv.hi_inf = false; }
    };
    auto handle = [&](const IVec& h, bool equation) {
        Rat hb = dot(h, base);
        Rat hd = dot(h, to_rational(dir));
        if (hd == 0) {
            if (equation ? hb != 0 : hb < 0) iv.empty = true;
            return;
        }
        Rat t0 = -hb / hd;
        if (equation) { restrict_ge(t0); restrict_le(t0); }
        else if (hd > 0) restrict_ge(t0);
        else restrict_le(t0);
    };
    for (const auto& e : c.span_equations) { handle(e, true); if (iv.empty) return iv; }
    for (const auto& h : c.halfspaces) { handle(h, false); if (iv.empty) return iv; }
    if (!iv.lo_inf && !iv.hi_inf && iv.lo > iv.hi) iv.empty = true;
    return iv;
}

// ----- canonical labels and canonical form ---------------------------------

// Minimal cone of the open segment (a, b); the minimal cone is constant on
// the open piece, so the midpoint decides it.
inline int minimal_cone_of_segment(const ConeComplex& sigma, const QVec& a, const QVec& b) {
    QVec mid = scale(Rat(1, 2), add(a, b));
    return minimal_cone_index(sigma, mid);
}

inline int minimal_cone_of_ray(const ConeComplex& sigma, const QVec& base, const IVec& dir) {
    QVec probe = base;
    for (size_t i = 0; i < probe.size(); ++i) probe[i] += Rat(dir[i]);
    return minimal_cone_index(sigma, probe);
}

struct CanonicalMap {
    std::vector<int> vertex;  // old index -> new index
    std::vector<int> edge;
    std::vector<int> ray;
};

// Canonical form: minimal cone labels, vertices sorted by position, edges
// oriented from the smaller vertex index, edges and rays sorted.
inline EmbeddedOneComplex canonicalize(const EmbeddedOneComplex& e, const ConeComplex& sigma,
                                       CanonicalMap* map_out = nullptr) {
    size_t nv = e.positions.size();
    std::vector<int> order(nv);
    for (size_t i = 0; i < nv; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return lex_less(e.positions[x], e.positions[y]); });
    std::vector<int> inv(nv);
    for (size_t i = 0; i < nv; ++i) inv[order[i]] = static_cast<int>(i);

    EmbeddedOneComplex out;
    out.positions.resize(nv);
    out.type.vertices.resize(nv);
    for (size_t i = 0; i < nv; ++i) {
        out.positions[inv[i]] = e.positions[i];
        out.type.vertices[inv[i]].cone = minimal_cone_index(sigma, e.positions[i]);
    }
    std::vector<GraphEdge> edges;
    for (const auto& ed : e.type.edges) {
        GraphEdge g;
        g.a = inv[ed.a];
        g.b = inv[ed.b];
        if (g.a > g.b) std::swap(g.a, g.b);
        g.dir = primitive(sub(out.positions[g.b], out.positions[g.a]));
        g.cone = minimal_cone_of_segment(sigma, out.positions[g.a], out.positions[g.b]);
        edges.push_back(g);
    }
    std::vector<int> eorder(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) eorder[i] = static_cast<int>(i);
    std::sort(eorder.begin(), eorder.end(), [&](int x, int y) {
        if (edges[x].a != edges[y].a) return edges[x].a < edges[y].a;
        if (edges[x].b != edges[y].b) return edges[x].b < edges[y].b;
        return lex_less(edges[x].dir, edges[y].dir);
    });
    std::vector<int> einv(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        einv[eorder[i]] = static_cast<int>(i);
        out.type.edges.push_back(edges[eorder[i]]);
    }
    std::vector<GraphRay> rays;
    for (const auto& r : e.type.rays) {
        GraphRay g;
        g.base = inv[r.base];
        g.dir = r.dir;
        g.cone = minimal_cone_of_ray(sigma, out.positions[g.base], g.dir);
        rays.push_back(g);
    }
    std::vector<int> rorder(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) rorder[i] = static_cast<int>(i);
    std::sort(rorder.begin(), rorder.end(), [&](int x, int y) {
        if (rays[x].base != rays[y].base) return rays[x].base < rays[y].base;
        return lex_less(rays[x].dir, rays[y].dir);
    });
    std::vector<int> rinv(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
        rinv[rorder[i]] = static_cast<int>(i);
        out.type.rays.push_back(rays[rorder[i]]);
    }
    if (map_out) {
        map_out->vertex = inv;
        map_out->edge = einv;
        map_out->ray = rinv;
    }
    return out;
}

// ----- validation -----------------------------------------------------------

struct Violation {
    std::string kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    void add(const std::string& kind, const std::string& detail) {
        violations.push_back({kind, detail});
    }
};

inline std::vector<Piece> geometric_pieces(const EmbeddedOneComplex& e) {
    std::vector<Piece> out;
    for (const auto& ed : e.type.edges) {
        Piece p;
        p.base = e.positions[ed.a];
        QVec d = sub(e.positions[ed.b], e.positions[ed.a]);
        p.dir = primitive(d);
        if (!is_zero(p.dir)) {
            for (size_t i = 0; i < d.size(); ++i)
                if (p.dir[i] != 0) { p.len = d[i] / Rat(p.dir[i]); break; }
        } else {
            p.dir = ed.dir;
            p.len = Rat(0);
        }
        out.push_back(p);
    }
    for (const auto& r : e.type.rays) {
        Piece p;
        p.base = e.positions[r.base];
        p.dir = r.dir;
        out.push_back(p);
    }
    return out;
}

// Checks conditions (1)-(2), the labelling compatibilities, and injectivity
// of the realization. Empty report iff E is a valid embedded 1-complex.
inline ValidationReport validate_embedded(const EmbeddedOneComplex& e, const ConeComplex& sigma) {
    ValidationReport rep;
    size_t nv = e.positions.size();
    size_t n = static_cast<size_t>(sigma.ambient_dim);
    if (e.type.vertices.size() != nv) {
        rep.add("structure", "vertex/position count mismatch");
        return rep;
    }
    auto cone_ok = [&](int i) { return i >= 0 && i < static_cast<int>(sigma.cones.size()); };
    for (size_t v = 0; v < nv; ++v) {
        if (e.positions[v].size() != n) {
            rep.add("structure", "vertex " + std::to_string(v) + " has wrong dimension");
            return rep;
        }
        if (!cone_ok(e.type.vertices[v].cone)) {
            rep.add("structure", "vertex " + std::to_string(v) + " labels a missing cone");
            return rep;
        }
    }
    for (const auto& ed : e.type.edges)
        if (ed.a < 0 || ed.b < 0 || ed.a >= static_cast<int>(nv) || ed.b >= static_cast<int>(nv) ||
            !cone_ok(ed.cone) || ed.dir.size() != n) {
            rep.add("structure", "malformed edge");
            return rep;
        }
    for (const auto& r : e.type.rays)
        if (r.base < 0 || r.base >= static_cast<int>(nv) || !cone_ok(r.cone) || r.dir.size() != n) {
            rep.add("structure", "malformed ray");
            return rep;
        }

    for (size_t v = 0; v < nv; ++v) {
        const Cone& cv = sigma.cones[e.type.vertices[v].cone];
        if (!contains(cv, e.positions[v]))
            rep.add("position", "f(V) of vertex " + std::to_string(v) + " is not in its cone");
    }
    for (size_t i = 0; i < e.type.edges.size(); ++i) {
        const auto& ed = e.type.edges[i];
        std::string name = "edge " + std::to_string(i);
        if (ed.a == ed.b) rep.add("loop", name + " is a loop");
        const Cone& ce = sigma.cones[ed.cone];
        if (!is_primitive(ed.dir)) rep.add("direction", name + " direction is not primitive");
        for (const auto& eq : ce.span_equations)
            if (dot(eq, ed.dir) != 0) {
                rep.add("direction", name + " direction is not in the span of its cone");
                break;
            }
        QVec delta = sub(e.positions[ed.b], e.positions[ed.a]);
        IVec pd = primitive(delta);
        if (is_zero(pd) || pd != ed.dir)
            rep.add("segment", name + " displacement is not a positive multiple of its direction");
        if (!contains(ce, e.positions[ed.a]) || !contains(ce, e.positions[ed.b]))
            rep.add("containment", name + " does not lie in its cone");
        if (!is_face_of(sigma.cones[e.type.vertices[ed.a].cone], ce) ||
            !is_face_of(sigma.cones[e.type.vertices[ed.b].cone], ce))
            rep.add("face", name + ": an endpoint cone is not a face of the edge cone");
    }
    for (size_t i = 0; i < e.type.rays.size(); ++i) {
        const auto& r = e.type.rays[i];
        std::string name = "ray " + std::to_string(i);
        const Cone& ce = sigma.cones[r.cone];
        if (!is_primitive(r.dir)) rep.add("direction", name + " direction is not primitive");
        if (!contains(ce, r.dir)) rep.add("containment", name + " direction leaves its cone");
        if (!contains(ce, e.positions[r.base])) rep.add("containment", name + " base is outside its cone");
        if (!is_face_of(sigma.cones[e.type.vertices[r.base].cone], ce))
            rep.add("face", name + ": base cone is not a face of the ray cone");
    }
    for (size_t i = 0; i < e.type.edges.size(); ++i)
        for (size_t j = i + 1; j < e.type.edges.size(); ++j) {
            const auto& x = e.type.edges[i];
            const auto& y = e.type.edges[j];
            if ((x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a))
                rep.add("parallel", "edges " + std::to_string(i) + "," + std::to_string(j) +
                                        " are parallel edges");
        }
    for (size_t v = 0; v < nv; ++v)
        for (size_t w = v + 1; w < nv; ++w)
            if (e.positions[v] == e.positions[w])
                rep.add("embedding", "vertices " + std::to_string(v) + "," + std::to_string(w) +
                                         " share a position");

    // injectivity of the realization
    auto pieces = geometric_pieces(e);
    size_t ne = e.type.edges.size();
    auto ends_of = [&](size_t p) {
        std::vector<int> ends;
        if (p < ne) { ends.push_back(e.type.edges[p].a); ends.push_back(e.type.edges[p].b); }
        else ends.push_back(e.type.rays[p - ne].base);
        return ends;
    };
    for (size_t p = 0; p < pieces.size(); ++p)
        for (size_t q = p + 1; q < pieces.size(); ++q) {
            PieceMeet m = meet_pieces(pieces[p], pieces[q]);
            if (m.kind == PieceMeet::None) continue;
            if (m.kind == PieceMeet::Overlap) {
                rep.add("embedding", "pieces " + std::to_string(p) + "," + std::to_string(q) +
                                         " overlap along a segment");
                continue;
            }
            QVec x = piece_point(pieces[p], m.t1);
            bool shared_vertex = false;
            for (int va : ends_of(p))
                for (int vb : ends_of(q))
                    if (va == vb && e.positions[va] == x) shared_vertex = true;
            if (!shared_vertex)
                rep.add("embedding", "pieces " + std::to_string(p) + "," + std::to_string(q) +
                                         " cross away from a shared vertex");
        }
    for (size_t v = 0; v < nv; ++v)
        for (size_t p = 0; p < pieces.size(); ++p) {
            auto ends = ends_of(p);
            if (std::find(ends.begin(), ends.end(), static_cast<int>(v)) != ends.end()) continue;
            auto t = param_on_line(pieces[p], e.positions[v]);
            if (t && param_in_range(pieces[p], *t))
                rep.add("embedding", "vertex " + std::to_string(v) + " lies on piece " +
                                         std::to_string(p));
        }
    return rep;
}

// ----- minimal structure ----------------------------------------------------

namespace detail {

struct Incidence {
    bool is_ray = false;
    int index = 0;
    IVec out_dir;
    int other = -1;  // other endpoint for edges
};

inline std::vector<Incidence> incidences(const EmbeddedOneComplex& e, int v) {
    std::vector<Incidence> out;
    for (size_t i = 0; i < e.type.edges.size(); ++i) {
        const auto& ed = e.type.edges[i];
        if (ed.a == v) out.push_back({false, static_cast<int>(i), ed.dir, ed.b});
        if (ed.b == v) out.push_back({false, static_cast<int>(i), negate(ed.dir), ed.a});
    }
    for (size_t i = 0; i < e.type.rays.size(); ++i)
        if (e.type.rays[i].base == v)
            out.push_back({true, static_cast<int>(i), e.type.rays[i].dir, -1});
    return out;
}

}  // namespace detail

// Deletes every inessential 2-valent vertex (neighborhood inside one relative
// interior, locally on one line) and merges its two incident pieces. Output
// carries canonical labels; no further deletion is possible.
inline EmbeddedOneComplex minimal_structure(const EmbeddedOneComplex& input,
                                            const ConeComplex& sigma) {
    auto rep = validate_embedded(input, sigma);
    if (!rep.ok())
        throw Error(ErrorCode::InvalidInput,
                    "not a valid embedded 1-complex: " + rep.violations.front().kind + ", " +
                        rep.violations.front().detail);
    EmbeddedOneComplex e = input;
    while (true) {
        int victim = -1;
        std::vector<detail::Incidence> inc;
        for (size_t v = 0; v < e.positions.size() && victim < 0; ++v) {
            inc = detail::incidences(e, static_cast<int>(v));
            if (inc.size() != 2) continue;
            if (inc[0].out_dir != negate(inc[1].out_dir)) continue;
            int mc = minimal_cone_index(sigma, e.positions[v]);
            const Cone& cx = sigma.cones[mc];
            bool in_span = true;
            for (const auto& eq : cx.span_equations)
                if (dot(eq, inc[0].out_dir) != 0) { in_span = false; break; }
            if (!in_span) continue;
            victim = static_cast<int>(v);
        }
        if (victim < 0) break;
        // merge the two incident pieces
        const auto& i0 = inc[0];
        const auto& i1 = inc[1];
        if (i0.is_ray && i1.is_ray)
            throw Error(ErrorCode::InternalError, "two opposite rays at an interior vertex");
        EmbeddedOneComplex next;
        std::vector<int> vmap(e.positions.size(), -1);
        for (size_t v = 0; v < e.positions.size(); ++v) {
            if (static_cast<int>(v) == victim) continue;
            vmap[v] = static_cast<int>(next.positions.size());
            next.positions.push_back(e.positions[v]);
            next.type.vertices.push_back(e.type.vertices[v]);
        }
        for (size_t i = 0; i < e.type.edges.size(); ++i) {
            if (!i0.is_ray && static_cast<int>(i) == i0.index) continue;
            if (!i1.is_ray && static_cast<int>(i) == i1.index) continue;
            GraphEdge g = e.type.edges[i];
            g.a = vmap[g.a];
            g.b = vmap[g.b];
            next.type.edges.push_back(g);
        }
        for (size_t i = 0; i < e.type.rays.size(); ++i) {
            if (i0.is_ray && static_cast<int>(i) == i0.index) continue;
            if (i1.is_ray && static_cast<int>(i) == i1.index) continue;
            GraphRay g = e.type.rays[i];
            g.base = vmap[g.base];
            next.type.rays.push_back(g);
        }
        if (!i0.is_ray && !i1.is_ray) {
            GraphEdge g;
            g.a = vmap[i0.other];
            g.b = vmap[i1.other];
            g.dir = primitive(sub(next.positions[g.b], next.positions[g.a]));
            g.cone = minimal_cone_of_segment(sigma, next.positions[g.a], next.positions[g.b]);
            next.type.edges.push_back(g);
        } else {
            const auto& ray_inc = i0.is_ray ? i0 : i1;
            const auto& edge_inc = i0.is_ray ? i1 : i0;
            GraphRay g;
            g.base = vmap[edge_inc.other];
            g.dir = ray_inc.out_dir;
            g.cone = minimal_cone_of_ray(sigma, next.positions[g.base], g.dir);
            next.type.rays.push_back(g);
        }
        e = next;
    }
    return canonicalize(e, sigma);
}

// ----- dilation --------------------------------------------------------------

inline EmbeddedOneComplex dilate(const EmbeddedOneComplex& e, const Rat& k) {
    EmbeddedOneComplex out = e;
    for (auto& p : out.positions) p = scale(k, p);
    return out;
}

// Least positive integer b such that every vertex of the b-fold dilation is
// integral in its cone's lattice.
inline Int minimal_dilation(const EmbeddedOneComplex& e, const ConeComplex& sigma) {
    auto rep = validate_embedded(e, sigma);
    if (!rep.ok())
        throw Error(ErrorCode::InvalidInput, "not a valid embedded 1-complex");
    Int b = 1;
    size_t n = static_cast<size_t>(sigma.ambient_dim);
    for (const auto& pos : e.positions) {
        int mc = minimal_cone_index(sigma, pos);
        IMat lat = cone_lattice(sigma.cones[mc]);
        if (lat.empty()) continue;  // the origin
        QMat bt(n, QVec(lat.size()));
        for (size_t i = 0; i < lat.size(); ++i)
            for (size_t j = 0; j < n; ++j) bt[j][i] = Rat(lat[i][j]);
        auto coords = solve(bt, pos, lat.size());
        if (!coords)
            throw Error(ErrorCode::InternalError, "vertex outside its cone's lattice span");
        for (const auto& c : *coords) b = lcm(b, c.get_den());
    }
    return b;
}

// ----- cone over a 1-complex -------------------------------------------------

// The cone complex in Sigma x R_{>=0} whose height-1 slice is E.
inline ConeComplex cone_over(const EmbeddedOneComplex& e, const ConeComplex& sigma) {
    auto rep = validate_embedded(e, sigma);
    if (!rep.ok())
        throw Error(ErrorCode::InvalidInput, "not a valid embedded 1-complex");
    int n = sigma.ambient_dim;
    auto lift = [&](const QVec& p) {
        QVec q = p;
        q.push_back(Rat(1));
        return q;
    };
    std::vector<Cone> cones;
    for (const auto& p : e.positions) cones.push_back(make_cone(n + 1, std::vector<QVec>{lift(p)}));
    for (const auto& ed : e.type.edges)
        cones.push_back(make_cone(
            n + 1, std::vector<QVec>{lift(e.positions[ed.a]), lift(e.positions[ed.b])}));
    for (const auto& r : e.type.rays) {
        QVec d = to_rational(r.dir);
        d.push_back(Rat(0));
        cones.push_back(make_cone(n + 1, std::vector<QVec>{lift(e.positions[r.base]), d}));
    }
    return make_complex(n + 1, cones);
}

// Inverse of cone_over: reconstruct the height-1 slice. Throws
// NotConeOverGraph when the complex is not the cone over a 1-complex.
inline EmbeddedOneComplex height_one_slice(const ConeComplex& c, const ConeComplex& sigma) {
    if (c.ambient_dim != sigma.ambient_dim + 1)
        throw Error(ErrorCode::AmbientMismatch, "slice ambient mismatch");
    size_t n = static_cast<size_t>(sigma.ambient_dim);
    EmbeddedOneComplex e;
    std::map<QVec, int> vertex_at;
    auto slice_point = [&](const IVec& r) {
        QVec p(n);
        for (size_t i = 0; i < n; ++i) p[i] = Rat(r[i]) / Rat(r[n]);
        return p;
    };
    for (const auto& cone : c.cones) {
        if (cone.dim > 2)
            throw Error(ErrorCode::NotConeOverGraph, "cone of dimension > 2");
        if (cone.dim == 1 && cone.rays[0][n] > 0) {
            QVec p = slice_point(cone.rays[0]);
            if (!vertex_at.count(p)) {
                vertex_at[p] = static_cast<int>(e.positions.size());
                e.positions.push_back(p);
                e.type.vertices.push_back({std::max(0, minimal_cone_index(sigma, p))});
            }
        }
    }
    for (const auto& cone : c.cones) {
        if (cone.dim != 2) continue;
        if (cone.rays.size() != 2)
            throw Error(ErrorCode::NotConeOverGraph, "non-simplicial 2-cone");
        const IVec &r1 = cone.rays[0], &r2 = cone.rays[1];
        bool p1 = r1[n] > 0, p2 = r2[n] > 0;
        if (p1 && p2) {
            int a = vertex_at.at(slice_point(r1));
            int b = vertex_at.at(slice_point(r2));
            GraphEdge g;
            g.a = a; g.b = b;
            g.dir = primitive(sub(e.positions[b], e.positions[a]));
            g.cone = 0;
            e.type.edges.push_back(g);
        } else if (p1 || p2) {
            const IVec& vert = p1 ? r1 : r2;
            const IVec& dir = p1 ? r2 : r1;
            GraphRay g;
            g.base = vertex_at.at(slice_point(vert));
            g.dir = IVec(dir.begin(), dir.begin() + n);
            g.cone = 0;
            e.type.rays.push_back(g);
        } else {
            throw Error(ErrorCode::NotConeOverGraph, "2-cone at height zero");
        }
    }
    // height-0 rays must be faces of ray cones, i.e. accounted for above
    for (const auto& cone : c.cones) {
        if (cone.dim != 1 || cone.rays[0][n] != 0) continue;
        IVec d(cone.rays[0].begin(), cone.rays[0].begin() + n);
        bool used = false;
        for (const auto& r : e.type.rays)
            if (r.dir == d) { used = true; break; }
        if (!used)
            throw Error(ErrorCode::NotConeOverGraph, "free height-zero ray");
    }
    EmbeddedOneComplex out = canonicalize(e, sigma);
    if (!(cone_over(out, sigma) == c))
        throw Error(ErrorCode::NotConeOverGraph, "complex is not the cone over its slice");
    return out;
}

// ----- building embedded complexes from raw geometry -------------------------

// Subdivides raw segments/rays at the walls of Sigma and assembles a valid
// embedded 1-complex. The input pieces may share endpoints but must not
// cross in their interiors.
struct RawCurve {
    std::vector<QVec> points;                       // isolated or anchor points
    std::vector<std::pair<QVec, QVec>> segments;    // [p, q]
    std::vector<std::pair<QVec, IVec>> rays;        // (base, primitive dir)
};

inline EmbeddedOneComplex embed_into(const ConeComplex& sigma, const RawCurve& raw) {
    EmbeddedOneComplex e;
    std::map<QVec, int> vid;
    auto vertex = [&](const QVec& p) {
        auto it = vid.find(p);
        if (it != vid.end()) return it->second;
        int id = static_cast<int>(e.positions.size());
        vid[p] = id;
        e.positions.push_back(p);
        e.type.vertices.push_back({std::max(0, minimal_cone_index(sigma, p))});
        return id;
    };
    auto maximal = maximal_cone_indices(sigma);
    auto breakpoints = [&](const QVec& base, const IVec& dir, const std::optional<Rat>& len) {
        std::vector<Rat> ts;
        for (int mi : maximal) {
            TInterval iv = clip_to_cone(sigma.cones[mi], base, dir);
            if (iv.empty) continue;
            for (bool lo : {true, false}) {
                if (lo ? iv.lo_inf : iv.hi_inf) continue;
                Rat t = lo ? iv.lo : iv.hi;
                if (t > 0 && (!len || t < *len)) ts.push_back(t);
            }
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        return ts;
    };
    for (const auto& p : raw.points) vertex(p);
    for (const auto& [p, q] : raw.segments) {
        IVec dir = primitive(sub(q, p));
        if (is_zero(dir)) continue;
        Rat len;
        QVec d = sub(q, p);
        for (size_t i = 0; i < d.size(); ++i)
            if (dir[i] != 0) { len = d[i] / Rat(dir[i]); break; }
        std::vector<Rat> ts = breakpoints(p, dir, len);
        ts.insert(ts.begin(), Rat(0));
        ts.push_back(len);
        for (size_t i = 0; i + 1 < ts.size(); ++i) {
            Piece pc{p, dir, std::nullopt};
            int a = vertex(piece_point(pc, ts[i]));
            int b = vertex(piece_point(pc, ts[i + 1]));
            GraphEdge g;
            g.a = a; g.b = b; g.dir = dir;
            g.cone = 0;
            e.type.edges.push_back(g);
        }
    }
    for (const auto& [p, dir] : raw.rays) {
        std::vector<Rat> ts = breakpoints(p, dir, std::nullopt);
        ts.insert(ts.begin(), Rat(0));
        Piece pc{p, dir, std::nullopt};
        for (size_t i = 0; i + 1 < ts.size(); ++i) {
            int a = vertex(piece_point(pc, ts[i]));
            int b = vertex(piece_point(pc, ts[i + 1]));
            GraphEdge g;
            g.a = a; g.b = b; g.dir = dir;
            g.cone = 0;
            e.type.edges.push_back(g);
        }
        GraphRay g;
        g.base = vertex(piece_point(pc, ts.back()));
        g.dir = dir;
        g.cone = 0;
        e.type.rays.push_back(g);
    }
    return canonicalize(e, sigma);
}

// Splits an edge at an interior point (for round-trip tests and refinements).
inline EmbeddedOneComplex subdivide_edge(const EmbeddedOneComplex& e, int edge, const Rat& t) {
    EmbeddedOneComplex out = e;
    const GraphEdge ed = out.type.edges[edge];
    QVec a = out.positions[ed.a], b = out.positions[ed.b];
    QVec mid(a.size());
    for (size_t i = 0; i < a.size(); ++i) mid[i] = a[i] + t * (b[i] - a[i]);
    int v = static_cast<int>(out.positions.size());
    out.positions.push_back(mid);
    out.type.vertices.push_back({ed.cone});
    out.type.edges.erase(out.type.edges.begin() + edge);
    out.type.edges.push_back({ed.a, v, ed.cone, ed.dir});
    out.type.edges.push_back({v, ed.b, ed.cone, ed.dir});
    return out;
}

// Splits a ray at parameter t > 0 into an edge plus a shorter ray.
inline EmbeddedOneComplex subdivide_ray(const EmbeddedOneComplex& e, int ray, const Rat& t) {
    EmbeddedOneComplex out = e;
    const GraphRay r = out.type.rays[ray];
    QVec p = out.positions[r.base];
    for (size_t i = 0; i < p.size(); ++i) p[i] += t * Rat(r.dir[i]);
    int v = static_cast<int>(out.positions.size());
    out.positions.push_back(p);
    out.type.vertices.push_back({r.cone});
    out.type.rays.erase(out.type.rays.begin() + ray);
    out.type.edges.push_back({r.base, v, r.cone, r.dir});
    out.type.rays.push_back({v, r.cone, r.dir});
    return out;
}

}  // namespace tropex
