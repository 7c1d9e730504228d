#pragma once

#include <functional>
#include <sstream>

#include "tropex/expansion.hpp"

namespace tropex {

// ----- combinatorial graph canonicalization ----------------------------------

inline std::string serialize_graph(const CombinatorialOneComplex& g) {
    std::ostringstream s;
    s << "V:";
    for (const auto& v : g.vertices) s << v.cone << ",";
    s << "|E:";
    for (const auto& e : g.edges) {
        s << "(" << e.a << "," << e.b << "," << e.cone << ",";
        for (const auto& x : e.dir) s << x.get_str() << ":";
        s << ")";
    }
    s << "|R:";
    for (const auto& r : g.rays) {
        s << "(" << r.base << "," << r.cone << ",";
        for (const auto& x : r.dir) s << x.get_str() << ":";
        s << ")";
    }
    return s.str();
}

struct PermutedGraph {
    CombinatorialOneComplex graph;
    std::vector<int> edge_map;  // old edge index -> new
    std::vector<int> ray_map;
    std::vector<bool> edge_flipped;
};

inline PermutedGraph apply_perm(const CombinatorialOneComplex& g, const std::vector<int>& perm) {
    PermutedGraph out;
    out.graph.vertices.resize(g.vertices.size());
    for (size_t v = 0; v < g.vertices.size(); ++v) out.graph.vertices[perm[v]] = g.vertices[v];
    struct Tmp {
        GraphEdge e;
        int old_index;
        bool flipped;
    };
    std::vector<Tmp> edges;
    for (size_t i = 0; i < g.edges.size(); ++i) {
        GraphEdge e = g.edges[i];
        e.a = perm[e.a];
        e.b = perm[e.b];
        bool flip = e.a > e.b;
        if (flip) {
            std::swap(e.a, e.b);
            e.dir = negate(e.dir);
        }
        edges.push_back({e, static_cast<int>(i), flip});
    }
    std::sort(edges.begin(), edges.end(), [](const Tmp& x, const Tmp& y) {
        if (x.e.a != y.e.a) return x.e.a < y.e.a;
        if (x.e.b != y.e.b) return x.e.b < y.e.b;
        if (x.e.cone != y.e.cone) return x.e.cone < y.e.cone;
        return lex_less(x.e.dir, y.e.dir);
    });
    out.edge_map.resize(edges.size());
    out.edge_flipped.resize(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        out.graph.edges.push_back(edges[i].e);
        out.edge_map[edges[i].old_index] = static_cast<int>(i);
        out.edge_flipped[edges[i].old_index] = edges[i].flipped;
    }
    struct TmpR {
        GraphRay r;
        int old_index;
    };
    std::vector<TmpR> rays;
    for (size_t i = 0; i < g.rays.size(); ++i) {
        GraphRay r = g.rays[i];
        r.base = perm[r.base];
        rays.push_back({r, static_cast<int>(i)});
    }
    std::sort(rays.begin(), rays.end(), [](const TmpR& x, const TmpR& y) {
        if (x.r.base != y.r.base) return x.r.base < y.r.base;
        if (x.r.cone != y.r.cone) return x.r.cone < y.r.cone;
        return lex_less(x.r.dir, y.r.dir);
    });
    out.ray_map.resize(rays.size());
    for (size_t i = 0; i < rays.size(); ++i) {
        out.graph.rays.push_back(rays[i].r);
        out.ray_map[rays[i].old_index] = static_cast<int>(i);
    }
    return out;
}

namespace detail {

inline std::vector<std::string> vertex_invariants(const CombinatorialOneComplex& g) {
    std::vector<std::string> inv(g.vertices.size());
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        std::vector<std::string> marks;
        for (const auto& e : g.edges) {
            if (e.a == static_cast<int>(v) || e.b == static_cast<int>(v)) {
                IVec d = e.a == static_cast<int>(v) ? e.dir : negate(e.dir);
                std::string m = "e" + std::to_string(e.cone) + ":";
                for (const auto& x : d) m += x.get_str() + ",";
                marks.push_back(m);
            }
        }
        for (const auto& r : g.rays)
            if (r.base == static_cast<int>(v)) {
                std::string m = "r" + std::to_string(r.cone) + ":";
                for (const auto& x : r.dir) m += x.get_str() + ",";
                marks.push_back(m);
            }
        std::sort(marks.begin(), marks.end());
        std::string s = "c" + std::to_string(g.vertices[v].cone) + "#";
        for (const auto& m : marks) s += m + ";";
        inv[v] = s;
    }
    return inv;
}

// All permutations into the canonical slot layout: slot s expects the s-th
// smallest vertex invariant, so isomorphic graphs explore the same slots.
inline void class_permutations(const std::vector<std::string>& inv,
                               const std::function<void(const std::vector<int>&)>& visit) {
    size_t n = inv.size();
    std::vector<std::string> slots = inv;
    std::sort(slots.begin(), slots.end());
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    std::function<void(size_t)> rec = [&](size_t v) {
        if (v == n) {
            visit(perm);
            return;
        }
        for (size_t s = 0; s < n; ++s) {
            if (used[s] || slots[s] != inv[v]) continue;
            perm[v] = static_cast<int>(s);
            used[s] = true;
            rec(v + 1);
            used[s] = false;
        }
    };
    rec(0);
}

}  // namespace detail

struct GraphCanonical {
    std::vector<int> perm;  // old -> new
    std::string key;
};

inline GraphCanonical canonical_graph(const CombinatorialOneComplex& g) {
    GraphCanonical best;
    detail::class_permutations(detail::vertex_invariants(g), [&](const std::vector<int>& perm) {
        std::string key = serialize_graph(apply_perm(g, perm).graph);
        if (best.key.empty() || key < best.key) {
            best.key = key;
            best.perm = perm;
        }
    });
    if (best.key.empty()) {
        best.key = serialize_graph(g);  // empty graph
        best.perm = {};
    }
    return best;
}

inline std::vector<std::vector<int>> graph_automorphisms(const CombinatorialOneComplex& g) {
    std::vector<std::vector<int>> auts;
    std::string id = serialize_graph(g);
    auto inv = detail::vertex_invariants(g);
    size_t n = inv.size();
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    std::function<void(size_t)> rec = [&](size_t v) {
        if (v == n) {
            if (serialize_graph(apply_perm(g, perm).graph) == id) auts.push_back(perm);
            return;
        }
        for (size_t target = 0; target < n; ++target) {
            if (used[target] || inv[target] != inv[v]) continue;
            perm[v] = static_cast<int>(target);
            used[target] = true;
            rec(v + 1);
            used[target] = false;
        }
    };
    if (n > 0) rec(0);
    else auts.push_back({});
    return auts;
}

// ----- the cone of realizations ----------------------------------------------

struct XGCone {
    CombinatorialOneComplex graph;
    int sigma_ambient = 0;
    Cone cone;        // in the product coordinates, one block per vertex
    IMat constraints;  // edge collinearity equations
    int dim = 0;
};

inline QVec block_of(const QVec& flat, int v, int n) {
    return QVec(flat.begin() + v * n, flat.begin() + (v + 1) * n);
}

inline std::vector<QVec> unflatten(const QVec& flat, int nv, int n) {
    std::vector<QVec> out;
    for (int v = 0; v < nv; ++v) out.push_back(block_of(flat, v, n));
    return out;
}

inline QVec flatten(const std::vector<QVec>& positions) {
    QVec out;
    for (const auto& p : positions) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline EmbeddedOneComplex realization(const CombinatorialOneComplex& g,
                                      const std::vector<QVec>& positions) {
    EmbeddedOneComplex e;
    e.type = g;
    e.positions = positions;
    return e;
}

// Structural validity of a combinatorial 1-complex over Sigma.
inline void validate_combinatorial(const CombinatorialOneComplex& g, const ConeComplex& sigma) {
    auto cone_ok = [&](int i) { return i >= 0 && i < static_cast<int>(sigma.cones.size()); };
    size_t n = static_cast<size_t>(sigma.ambient_dim);
    for (const auto& v : g.vertices)
        if (!cone_ok(v.cone)) throw Error(ErrorCode::InvalidInput, "vertex labels a missing cone");
    for (const auto& e : g.edges) {
        if (e.a == e.b) throw Error(ErrorCode::InvalidInput, "loop edge");
        if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(g.vertices.size()) ||
            e.b >= static_cast<int>(g.vertices.size()) || !cone_ok(e.cone) || e.dir.size() != n)
            throw Error(ErrorCode::InvalidInput, "malformed edge");
        if (!is_primitive(e.dir)) throw Error(ErrorCode::InvalidInput, "edge direction not primitive");
        for (const auto& eq : sigma.cones[e.cone].span_equations)
            if (dot(eq, e.dir) != 0)
                throw Error(ErrorCode::InvalidInput, "edge direction leaves the span of its cone");
        if (!is_face_of(sigma.cones[g.vertices[e.a].cone], sigma.cones[e.cone]) ||
            !is_face_of(sigma.cones[g.vertices[e.b].cone], sigma.cones[e.cone]))
            throw Error(ErrorCode::InvalidInput, "endpoint cone is not a face of the edge cone");
    }
    for (size_t i = 0; i < g.edges.size(); ++i)
        for (size_t j = i + 1; j < g.edges.size(); ++j) {
            const auto &x = g.edges[i], &y = g.edges[j];
            if ((x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a))
                throw Error(ErrorCode::InvalidInput, "parallel edges");
        }
    for (const auto& r : g.rays) {
        if (r.base < 0 || r.base >= static_cast<int>(g.vertices.size()) || !cone_ok(r.cone) ||
            r.dir.size() != n)
            throw Error(ErrorCode::InvalidInput, "malformed ray");
        if (!is_primitive(r.dir)) throw Error(ErrorCode::InvalidInput, "ray direction not primitive");
        if (!contains(sigma.cones[r.cone], r.dir))
            throw Error(ErrorCode::InvalidInput, "ray direction leaves its cone");
        if (!is_face_of(sigma.cones[g.vertices[r.base].cone], sigma.cones[r.cone]))
            throw Error(ErrorCode::InvalidInput, "ray base cone is not a face of the ray cone");
    }
}

struct ImageResult;
ImageResult image_surjection(const CombinatorialOneComplex& g, const std::vector<QVec>& positions,
                             const ConeComplex& sigma);

// Solution cone of the edge-collinearity equations inside the product of the
// vertex cones. EmptyInterior when no point realizes the type faithfully.
inline XGCone build_xg(const CombinatorialOneComplex& g, const ConeComplex& sigma,
                       bool check_interior = true);

// ----- image construction ------------------------------------------------------

struct PathStep {
    bool is_ray = false;
    int index = 0;
    bool reversed = false;  // traversed against the stored orientation
    bool operator==(const PathStep&) const = default;
};

struct Path {
    std::vector<PathStep> steps;
    bool operator==(const Path&) const = default;
};

struct Surjection {
    std::vector<int> tau;          // V(G) -> V(H)
    std::vector<Path> edge_paths;  // per edge of G
    std::vector<Path> ray_paths;   // per ray of G
    bool operator==(const Surjection&) const = default;
};

struct VertexProvenance {
    enum Kind { GVertex, Crossing } kind = GVertex;
    int vertex = -1;               // source vertex (GVertex)
    int piece_a = -1, piece_b = -1;  // crossing pieces (Crossing)
};

struct ImageResult {
    CombinatorialOneComplex graph;  // canonical labels, canonical order
    std::vector<QVec> positions;
    Surjection surj;
    std::vector<VertexProvenance> provenance;  // per image vertex
};

namespace detail {

struct SourcePiece {
    Piece piece;
    bool is_ray = false;
    int index = 0;  // edge or ray index in G
};

struct LineKey {
    IVec dir;  // lex-positive primitive
    QVec foot;
    bool operator<(const LineKey& o) const {
        int c = lex_cmp(dir, o.dir);
        if (c != 0) return c < 0;
        return lex_less(foot, o.foot);
    }
    bool operator==(const LineKey& o) const { return dir == o.dir && foot == o.foot; }
};

inline IVec lex_positive(const IVec& d) {
    for (const auto& x : d) {
        if (x > 0) return d;
        if (x < 0) return negate(d);
    }
    return d;
}

inline LineKey line_key(const Piece& p) {
    LineKey k;
    k.dir = lex_positive(p.dir);
    Rat dd(dot(k.dir, k.dir));
    Rat t = dot(k.dir, p.base) / dd;
    k.foot = p.base;
    for (size_t i = 0; i < k.foot.size(); ++i) k.foot[i] -= t * Rat(k.dir[i]);
    return k;
}

struct LineInterval {
    Rat lo, hi;
    bool lo_inf = false, hi_inf = false;
};

}  // namespace detail

// The image 1-complex of a realization together with the surjection data:
// vertices are the images of G's vertices plus the points where pieces cross,
// edges and rays are the maximal subsegments between them.
inline ImageResult image_surjection(const CombinatorialOneComplex& g,
                                    const std::vector<QVec>& positions,
                                    const ConeComplex& sigma) {
    using detail::LineKey;
    size_t nv = g.vertices.size();

    std::vector<detail::SourcePiece> pieces;
    std::vector<int> edge_piece(g.edges.size(), -1);
    std::vector<int> ray_piece(g.rays.size(), -1);
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        QVec d = sub(positions[e.b], positions[e.a]);
        if (is_zero(d)) continue;  // contracted edge
        detail::SourcePiece sp;
        sp.piece.base = positions[e.a];
        sp.piece.dir = primitive(d);
        for (size_t c = 0; c < d.size(); ++c)
            if (sp.piece.dir[c] != 0) { sp.piece.len = d[c] / Rat(sp.piece.dir[c]); break; }
        sp.is_ray = false;
        sp.index = static_cast<int>(i);
        edge_piece[i] = static_cast<int>(pieces.size());
        pieces.push_back(sp);
    }
    for (size_t i = 0; i < g.rays.size(); ++i) {
        detail::SourcePiece sp;
        sp.piece.base = positions[g.rays[i].base];
        sp.piece.dir = g.rays[i].dir;
        sp.is_ray = true;
        sp.index = static_cast<int>(i);
        ray_piece[i] = static_cast<int>(pieces.size());
        pieces.push_back(sp);
    }

    // group pieces by line
    std::map<LineKey, std::vector<int>> lines;
    for (size_t p = 0; p < pieces.size(); ++p)
        lines[detail::line_key(pieces[p].piece)].push_back(static_cast<int>(p));

    auto line_param = [](const LineKey& k, const QVec& x) -> Rat {
        return dot(k.dir, x) / Rat(dot(k.dir, k.dir));
    };
    auto line_point = [](const LineKey& k, const Rat& t) {
        QVec x = k.foot;
        for (size_t i = 0; i < x.size(); ++i) x[i] += t * Rat(k.dir[i]);
        return x;
    };
    auto on_line = [&](const LineKey& k, const QVec& x) -> bool {
        QVec y = line_point(k, line_param(k, x));
        return y == x;
    };

    // vertex registry for the image
    std::vector<QVec> hpos;
    std::vector<VertexProvenance> hprov;
    std::map<QVec, int> hid;
    auto register_vertex = [&](const QVec& x, const VertexProvenance& pv) {
        auto it = hid.find(x);
        if (it != hid.end()) {
            if (pv.kind == VertexProvenance::GVertex &&
                hprov[it->second].kind == VertexProvenance::Crossing)
                hprov[it->second] = pv;
            return it->second;
        }
        int id = static_cast<int>(hpos.size());
        hid[x] = id;
        hpos.push_back(x);
        hprov.push_back(pv);
        return id;
    };
    std::vector<int> tau(nv);
    for (size_t v = 0; v < nv; ++v)
        tau[v] = register_vertex(positions[v], {VertexProvenance::GVertex, static_cast<int>(v), -1, -1});

    // raw edges/rays of the image, plus per-line tables for path walking
    struct RawEdge {
        int a, b;
        LineKey line;
        Rat t_lo, t_hi;
    };
    struct RawRay {
        int base;
        IVec dir;
        LineKey line;
        Rat t0;
        bool positive;  // towards +infinity in line parameters
    };
    std::vector<RawEdge> raw_edges;
    std::vector<RawRay> raw_rays;

    for (const auto& [key, members] : lines) {
        // union of the piece intervals in line parameters
        std::vector<detail::LineInterval> ivs;
        for (int p : members) {
            const Piece& pc = pieces[p].piece;
            detail::LineInterval iv;
            Rat t0 = line_param(key, pc.base);
            bool positive_dir = pc.dir == key.dir;
            if (pc.len) {
                Rat t1 = positive_dir ? Rat(t0 + *pc.len) : Rat(t0 - *pc.len);
                iv.lo = std::min(t0, t1);
                iv.hi = std::max(t0, t1);
            } else if (positive_dir) {
                iv.lo = t0;
                iv.hi_inf = true;
            } else {
                iv.hi = t0;
                iv.lo_inf = true;
            }
            ivs.push_back(iv);
        }
        std::sort(ivs.begin(), ivs.end(), [](const auto& x, const auto& y) {
            if (x.lo_inf != y.lo_inf) return x.lo_inf;
            if (x.lo_inf) return false;
            return x.lo < y.lo;
        });
        std::vector<detail::LineInterval> merged;
        for (const auto& iv : ivs) {
            if (!merged.empty()) {
                auto& last = merged.back();
                bool overlaps = last.hi_inf || iv.lo_inf || iv.lo <= last.hi;
                if (overlaps) {
                    last.hi_inf = last.hi_inf || iv.hi_inf;
                    if (!last.hi_inf && iv.hi > last.hi) last.hi = iv.hi;
                    continue;
                }
            }
            merged.push_back(iv);
        }

        // events: piece endpoints, images of G vertices on the line, and
        // crossings with pieces on other lines
        std::map<Rat, VertexProvenance> events;
        for (size_t v = 0; v < nv; ++v)
            if (on_line(key, positions[v]))
                events.insert({line_param(key, positions[v]),
                               {VertexProvenance::GVertex, static_cast<int>(v), -1, -1}});
        for (int p : members)
            for (size_t q = 0; q < pieces.size(); ++q) {
                if (detail::line_key(pieces[q].piece) == key) continue;
                PieceMeet m = meet_pieces(pieces[p].piece, pieces[q].piece);
                if (m.kind != PieceMeet::Point) continue;
                QVec x = piece_point(pieces[p].piece, m.t1);
                events.insert({line_param(key, x),
                               {VertexProvenance::Crossing, -1, p, static_cast<int>(q)}});
            }

        for (const auto& iv : merged) {
            std::vector<Rat> ts;
            for (const auto& [t, pv] : events) {
                bool inside = (iv.lo_inf || t >= iv.lo) && (iv.hi_inf || t <= iv.hi);
                if (inside) ts.push_back(t);
            }
            if (!iv.lo_inf && (ts.empty() || ts.front() != iv.lo)) ts.insert(ts.begin(), iv.lo);
            if (!iv.hi_inf && (ts.empty() || ts.back() != iv.hi)) ts.push_back(iv.hi);
            if (ts.empty())
                throw Error(ErrorCode::InternalError, "interval without any event");
            std::vector<int> vids;
            for (const auto& t : ts) {
                auto it = events.find(t);
                VertexProvenance pv = it != events.end()
                                          ? it->second
                                          : VertexProvenance{VertexProvenance::Crossing, -1, -1, -1};
                vids.push_back(register_vertex(line_point(key, t), pv));
            }
            for (size_t i = 0; i + 1 < ts.size(); ++i)
                raw_edges.push_back({vids[i], vids[i + 1], key, ts[i], ts[i + 1]});
            if (iv.lo_inf)
                raw_rays.push_back({vids.front(), negate(key.dir), key, ts.front(), false});
            if (iv.hi_inf) raw_rays.push_back({vids.back(), key.dir, key, ts.back(), true});
        }
    }

    // assemble the embedded image and canonicalize
    EmbeddedOneComplex image;
    image.positions = hpos;
    image.type.vertices.assign(hpos.size(), {0});
    for (const auto& re : raw_edges) {
        GraphEdge e;
        e.a = re.a;
        e.b = re.b;
        e.cone = 0;
        e.dir = primitive(sub(hpos[re.b], hpos[re.a]));
        image.type.edges.push_back(e);
    }
    for (const auto& rr : raw_rays) {
        GraphRay r;
        r.base = rr.base;
        r.cone = 0;
        r.dir = rr.dir;
        image.type.rays.push_back(r);
    }
    CanonicalMap cmap;
    EmbeddedOneComplex canon = canonicalize(image, sigma, &cmap);

    ImageResult out;
    out.graph = canon.type;
    out.positions = canon.positions;
    out.provenance.resize(hpos.size());
    for (size_t v = 0; v < hpos.size(); ++v) out.provenance[cmap.vertex[v]] = hprov[v];
    out.surj.tau.resize(nv);
    for (size_t v = 0; v < nv; ++v) out.surj.tau[v] = cmap.vertex[tau[v]];

    // canonical-index path walking helpers
    auto canon_edge_step = [&](size_t raw_idx, bool travel_positive) {
        const RawEdge& re = raw_edges[raw_idx];
        PathStep st;
        st.is_ray = false;
        st.index = cmap.edge[raw_idx];
        // the raw edge points towards increasing line parameter; the
        // canonical edge is stored from the smaller canonical vertex index
        int canon_a = cmap.vertex[re.a];
        int canon_b = cmap.vertex[re.b];
        st.reversed = (travel_positive != (canon_a < canon_b));
        return st;
    };
    auto walk = [&](const LineKey& key, const Rat& from, const Rat& to) {
        std::vector<PathStep> steps;
        bool forward = to > from;
        std::vector<std::pair<Rat, size_t>> onthis;
        for (size_t i = 0; i < raw_edges.size(); ++i)
            if (!(raw_edges[i].line < key) && !(key < raw_edges[i].line))
                onthis.push_back({raw_edges[i].t_lo, i});
        std::sort(onthis.begin(), onthis.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        Rat lo = std::min(from, to), hi = std::max(from, to);
        for (const auto& [t, i] : onthis)
            if (raw_edges[i].t_lo >= lo && raw_edges[i].t_hi <= hi)
                steps.push_back(canon_edge_step(i, forward));
        if (!forward) std::reverse(steps.begin(), steps.end());
        return steps;
    };

    for (size_t i = 0; i < g.edges.size(); ++i) {
        Path path;
        if (edge_piece[i] >= 0) {
            const Piece& pc = pieces[edge_piece[i]].piece;
            LineKey key = detail::line_key(pc);
            Rat ta = line_param(key, positions[g.edges[i].a]);
            Rat tb = line_param(key, positions[g.edges[i].b]);
            path.steps = walk(key, ta, tb);
        }
        out.surj.edge_paths.push_back(path);
    }
    for (size_t i = 0; i < g.rays.size(); ++i) {
        Path path;
        const Piece& pc = pieces[ray_piece[i]].piece;
        LineKey key = detail::line_key(pc);
        Rat t0 = line_param(key, positions[g.rays[i].base]);
        bool positive = pc.dir == key.dir;
        // finite edge steps beyond t0, then the terminal ray
        std::vector<std::pair<Rat, size_t>> onthis;
        for (size_t j = 0; j < raw_edges.size(); ++j)
            if (!(raw_edges[j].line < key) && !(key < raw_edges[j].line))
                onthis.push_back({raw_edges[j].t_lo, j});
        std::sort(onthis.begin(), onthis.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        if (!positive) std::reverse(onthis.begin(), onthis.end());
        for (const auto& [t, j] : onthis) {
            bool beyond = positive ? raw_edges[j].t_lo >= t0 : raw_edges[j].t_hi <= t0;
            if (beyond) path.steps.push_back(canon_edge_step(j, positive));
        }
        int terminal = -1;
        for (size_t j = 0; j < raw_rays.size(); ++j) {
            if ((raw_rays[j].line < key) || (key < raw_rays[j].line)) continue;
            if (raw_rays[j].positive == positive) terminal = static_cast<int>(j);
        }
        if (terminal < 0) throw Error(ErrorCode::InternalError, "ray without terminal piece");
        PathStep st;
        st.is_ray = true;
        st.index = cmap.ray[terminal];
        st.reversed = false;
        path.steps.push_back(st);
        out.surj.ray_paths.push_back(path);
    }
    return out;
}

// ----- surjection axioms, composition, canonical keys -------------------------

inline bool validate_surjection(const CombinatorialOneComplex& g,
                                const CombinatorialOneComplex& h, const Surjection& s,
                                const ConeComplex& sigma) {
    if (s.tau.size() != g.vertices.size()) return false;
    if (s.edge_paths.size() != g.edges.size() || s.ray_paths.size() != g.rays.size()) return false;
    std::vector<bool> covered_edge(h.edges.size(), false), covered_ray(h.rays.size(), false);
    auto step_endpoints = [&](const PathStep& st) -> std::pair<int, int> {
        if (st.is_ray) return {h.rays[st.index].base, -1};
        const auto& e = h.edges[st.index];
        return st.reversed ? std::make_pair(e.b, e.a) : std::make_pair(e.a, e.b);
    };
    auto step_dir = [&](const PathStep& st) -> IVec {
        if (st.is_ray) return h.rays[st.index].dir;
        return st.reversed ? negate(h.edges[st.index].dir) : h.edges[st.index].dir;
    };
    // (3) the image vertex cone is a face of the source vertex cone
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (!is_face_of(sigma.cones[h.vertices[s.tau[v]].cone],
                        sigma.cones[g.vertices[v].cone]))
            return false;
    // (1)-(2) directions and endpoints along the paths
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& path = s.edge_paths[i];
        int at = s.tau[g.edges[i].a];
        for (const auto& st : path.steps) {
            if (st.is_ray) return false;  // bounded edges map to bounded paths
            if (step_dir(st) != g.edges[i].dir) return false;
            auto [from, to] = step_endpoints(st);
            if (from != at) return false;
            at = to;
            covered_edge[st.index] = true;
        }
        if (at != s.tau[g.edges[i].b]) return false;
    }
    for (size_t i = 0; i < g.rays.size(); ++i) {
        const auto& path = s.ray_paths[i];
        if (path.steps.empty() || !path.steps.back().is_ray) return false;
        int at = s.tau[g.rays[i].base];
        for (const auto& st : path.steps) {
            if (step_dir(st) != g.rays[i].dir) return false;
            auto [from, to] = step_endpoints(st);
            if (from != at) return false;
            at = to;
            if (st.is_ray) covered_ray[st.index] = true;
            else covered_edge[st.index] = true;
        }
    }
    // (4) every edge and ray of H is covered
    for (bool c : covered_edge)
        if (!c) return false;
    for (bool c : covered_ray)
        if (!c) return false;
    return true;
}

inline Path reverse_path(const Path& p) {
    Path out;
    for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) {
        PathStep st = *it;
        st.reversed = !st.reversed;
        out.steps.push_back(st);
    }
    return out;
}

// Composite of G -> H and H -> K.
inline Surjection compose(const Surjection& gh, const Surjection& hk) {
    Surjection out;
    out.tau.resize(gh.tau.size());
    for (size_t v = 0; v < gh.tau.size(); ++v) out.tau[v] = hk.tau[gh.tau[v]];
    auto map_path = [&](const Path& p) {
        Path out_path;
        for (const auto& st : p.steps) {
            Path piece = st.is_ray ? hk.ray_paths[st.index] : hk.edge_paths[st.index];
            if (st.reversed) piece = reverse_path(piece);
            for (const auto& q : piece.steps) out_path.steps.push_back(q);
        }
        return out_path;
    };
    for (const auto& p : gh.edge_paths) out.edge_paths.push_back(map_path(p));
    for (const auto& p : gh.ray_paths) out.ray_paths.push_back(map_path(p));
    return out;
}

inline std::string serialize_surjection(const Surjection& s) {
    std::ostringstream os;
    os << "t:";
    for (int t : s.tau) os << t << ",";
    os << "|e:";
    for (const auto& p : s.edge_paths) {
        for (const auto& st : p.steps)
            os << (st.is_ray ? "r" : "e") << st.index << (st.reversed ? "-" : "+") << ",";
        os << ";";
    }
    os << "|r:";
    for (const auto& p : s.ray_paths) {
        for (const auto& st : p.steps)
            os << (st.is_ray ? "r" : "e") << st.index << (st.reversed ? "-" : "+") << ",";
        os << ";";
    }
    return os.str();
}

// Re-index a surjection G -> H through a permutation of H.
inline Surjection push_through(const Surjection& s, const PermutedGraph& ph,
                               const std::vector<int>& vperm) {
    Surjection out;
    out.tau.resize(s.tau.size());
    for (size_t v = 0; v < s.tau.size(); ++v) out.tau[v] = vperm[s.tau[v]];
    auto map_path = [&](const Path& p) {
        Path q;
        for (PathStep st : p.steps) {
            if (st.is_ray) st.index = ph.ray_map[st.index];
            else {
                if (ph.edge_flipped[st.index]) st.reversed = !st.reversed;
                st.index = ph.edge_map[st.index];
            }
            q.steps.push_back(st);
        }
        return q;
    };
    for (const auto& p : s.edge_paths) out.edge_paths.push_back(map_path(p));
    for (const auto& p : s.ray_paths) out.ray_paths.push_back(map_path(p));
    return out;
}

// Canonical key of the pair (H, s) modulo relabelling of H.
inline std::string surjection_key(const CombinatorialOneComplex& h, const Surjection& s) {
    std::string best;
    detail::class_permutations(detail::vertex_invariants(h), [&](const std::vector<int>& perm) {
        PermutedGraph ph = apply_perm(h, perm);
        std::string key =
            serialize_graph(ph.graph) + "$" + serialize_surjection(push_through(s, ph, perm));
        if (best.empty() || key < best) best = key;
    });
    if (best.empty()) best = serialize_graph(h) + "$" + serialize_surjection(s);
    return best;
}

inline bool is_identity_surjection(const CombinatorialOneComplex& g,
                                   const CombinatorialOneComplex& h, const Surjection& s) {
    if (g.vertices.size() != h.vertices.size()) return false;
    std::vector<bool> hit(h.vertices.size(), false);
    for (int t : s.tau) {
        if (hit[t]) return false;
        hit[t] = true;
    }
    return apply_perm(g, s.tau).graph == h;
}

// ----- degeneracy arrangement -----------------------------------------------------

namespace detail {

// All linear functionals on the product space whose signs pin down the image
// type: vertex-on-facet, edge length, vertex-on-piece, piece-pair meeting
// data, and crossing-on-facet forms.
inline IMat arrangement_functionals(const CombinatorialOneComplex& g, const ConeComplex& sigma) {
    int n = sigma.ambient_dim;
    int nv = static_cast<int>(g.vertices.size());
    size_t N = static_cast<size_t>(n) * nv;
    IMat funcs;
    auto block_cov = [&](const IVec& cov, int v) {
        IVec out(N, 0);
        for (int i = 0; i < n; ++i) out[v * n + i] = cov[i];
        return out;
    };
    auto diff_cov = [&](const IVec& cov, int to, int from) {
        IVec out(N, 0);
        for (int i = 0; i < n; ++i) {
            out[to * n + i] += cov[i];
            out[from * n + i] -= cov[i];
        }
        return out;
    };
    auto add = [&](IVec cov) {
        if (!is_zero(cov)) funcs.push_back(primitive(cov));
    };

    // vertex against the facets of its cone
    for (int v = 0; v < nv; ++v)
        for (const auto& h : sigma.cones[g.vertices[v].cone].halfspaces) add(block_cov(h, v));

    struct Src {
        int base;   // vertex index the piece starts at
        IVec dir;
        bool bounded;
        int end;    // other endpoint for bounded pieces
        int cone;
    };
    std::vector<Src> srcs;
    for (const auto& e : g.edges) srcs.push_back({e.a, e.dir, true, e.b, e.cone});
    for (const auto& r : g.rays) srcs.push_back({r.base, r.dir, false, -1, r.cone});

    // edge lengths
    auto len_cov = [&](const Src& s) {
        IVec cov(N, 0);
        for (int i = 0; i < n; ++i) {
            cov[s.end * n + i] += s.dir[i];
            cov[s.base * n + i] -= s.dir[i];
        }
        return cov;
    };
    for (const auto& s : srcs)
        if (s.bounded) add(len_cov(s));

    // vertex against the line of a piece
    for (int u = 0; u < nv; ++u)
        for (const auto& s : srcs) {
            if (u == s.base || (s.bounded && u == s.end)) continue;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (s.dir[i] == 0 && s.dir[j] == 0) continue;
                    IVec cov(N, 0);
                    cov[u * n + i] += s.dir[j];
                    cov[s.base * n + i] -= s.dir[j];
                    cov[u * n + j] -= s.dir[i];
                    cov[s.base * n + j] += s.dir[i];
                    add(cov);
                }
            // position along the line and against the far end
            IVec along(N, 0);
            for (int i = 0; i < n; ++i) {
                along[u * n + i] += s.dir[i];
                along[s.base * n + i] -= s.dir[i];
            }
            add(along);
            if (s.bounded) {
                IVec past(N, 0);
                for (int i = 0; i < n; ++i) {
                    past[u * n + i] += s.dir[i];
                    past[s.end * n + i] -= s.dir[i];
                }
                add(past);
            }
        }

    // piece pairs
    for (size_t a = 0; a < srcs.size(); ++a)
        for (size_t b = a + 1; b < srcs.size(); ++b) {
            const Src &sa = srcs[a], &sb = srcs[b];
            bool parallel = sa.dir == sb.dir || sa.dir == negate(sb.dir);
            if (parallel) {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        if (sa.dir[i] == 0 && sa.dir[j] == 0) continue;
                        IVec cov(N, 0);
                        cov[sb.base * n + i] += sa.dir[j];
                        cov[sa.base * n + i] -= sa.dir[j];
                        cov[sb.base * n + j] -= sa.dir[i];
                        cov[sa.base * n + j] += sa.dir[i];
                        add(cov);
                    }
                // endpoint orders along the common direction
                std::vector<int> marks{sb.base};
                if (sb.bounded) marks.push_back(sb.end);
                for (int m : marks) {
                    IVec cov(N, 0);
                    for (int i = 0; i < n; ++i) {
                        cov[m * n + i] += sa.dir[i];
                        cov[sa.base * n + i] -= sa.dir[i];
                    }
                    add(cov);
                    if (sa.bounded) {
                        IVec cov2(N, 0);
                        for (int i = 0; i < n; ++i) {
                            cov2[m * n + i] += sa.dir[i];
                            cov2[sa.end * n + i] -= sa.dir[i];
                        }
                        add(cov2);
                    }
                }
                continue;
            }
            // independent directions: solve s*da - t*db = x_{b.base} - x_{a.base}
            // on a coordinate pair with nonzero determinant
            int i1 = -1, i2 = -1;
            Int det = 0;
            for (int i = 0; i < n && i1 < 0; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Int dd = sa.dir[i] * (-sb.dir[j]) + sb.dir[i] * sa.dir[j];
                    if (dd != 0) { i1 = i; i2 = j; det = dd; break; }
                }
            if (i1 < 0) continue;
            auto rhs_cov = [&](int coord) {
                IVec cov(N, 0);
                cov[sb.base * n + coord] += 1;
                cov[sa.base * n + coord] -= 1;
                return cov;
            };
            auto combine = [&](const Int& c1, const IVec& v1, const Int& c2, const IVec& v2) {
                IVec out(N, 0);
                for (size_t k = 0; k < N; ++k) out[k] = c1 * v1[k] + c2 * v2[k];
                return out;
            };
            // s_num = rhs_i*(-db_j) - (-db_i)*rhs_j ; t_num = da_i*rhs_j - rhs_i*da_j
            IVec s_num = combine(-sb.dir[i2], rhs_cov(i1), sb.dir[i1], rhs_cov(i2));
            IVec t_num = combine(-sa.dir[i2], rhs_cov(i1), sa.dir[i1], rhs_cov(i2));
            add(s_num);
            add(t_num);
            // residual coplanarity forms on the remaining coordinates
            for (int k = 0; k < n; ++k) {
                if (k == i1 || k == i2) continue;
                IVec res(N, 0);
                IVec rk = rhs_cov(k);
                for (size_t q = 0; q < N; ++q)
                    res[q] = det * rk[q] - sa.dir[k] * s_num[q] + sb.dir[k] * t_num[q];
                add(res);
            }
            // in-range comparisons against the piece lengths
            if (sa.bounded) {
                Int daa = dot(sa.dir, sa.dir);
                IVec le = len_cov(sa);
                IVec cmp(N, 0);
                for (size_t q = 0; q < N; ++q) cmp[q] = daa * s_num[q] - det * le[q];
                add(cmp);
            }
            if (sb.bounded) {
                Int dbb = dot(sb.dir, sb.dir);
                IVec le = len_cov(sb);
                IVec cmp(N, 0);
                for (size_t q = 0; q < N; ++q) cmp[q] = dbb * t_num[q] - det * le[q];
                add(cmp);
            }
            // the crossing point against the facets of both ambient cones:
            // det * h(X) = det * h(x_{a.base}) + s_num * (h . da)
            for (int host : {sa.cone, sb.cone})
                for (const auto& h : sigma.cones[host].halfspaces) {
                    Int hda = dot(h, sa.dir);
                    IVec hx = block_cov(h, sa.base);
                    IVec cov(N, 0);
                    for (size_t q = 0; q < N; ++q) cov[q] = det * hx[q] + hda * s_num[q];
                    add(cov);
                }
            // order of this crossing against the base points on both lines
            // is covered by s_num and t_num together with the length forms
        }
    // normalize and dedupe
    std::set<IVec> seen;
    IMat out;
    for (auto& f : funcs) {
        IVec p = lex_positive(primitive(f));
        if (seen.insert(p).second) out.push_back(p);
    }
    return out;
}

// Split a cone family by the sign of each functional; keeps cells of the
// given dimension.
inline std::vector<Cone> arrangement_cells(const Cone& ambient, const IMat& funcs,
                                           size_t budget) {
    std::vector<Cone> cells{ambient};
    for (const auto& f : funcs) {
        std::vector<Cone> next;
        for (const auto& c : cells) {
            bool pos = false, neg = false;
            for (const auto& r : c.rays) {
                int s = sgn(dot(f, r));
                pos = pos || s > 0;
                neg = neg || s < 0;
            }
            if (!(pos && neg)) {
                next.push_back(c);
                continue;
            }
            IMat hs = c.halfspaces;
            hs.push_back(f);
            Cone plus = cone_from_inequalities(c.ambient_dim, hs, c.span_equations);
            hs.back() = negate(f);
            Cone minus = cone_from_inequalities(c.ambient_dim, hs, c.span_equations);
            if (plus.dim == ambient.dim) next.push_back(plus);
            if (minus.dim == ambient.dim) next.push_back(minus);
            if (next.size() > budget)
                throw Error(ErrorCode::BudgetExceeded, "arrangement cell budget exceeded");
        }
        cells = std::move(next);
    }
    return cells;
}

}  // namespace detail

// ----- build_xg ------------------------------------------------------------------

inline XGCone build_xg(const CombinatorialOneComplex& g, const ConeComplex& sigma,
                       bool check_interior) {
    validate_combinatorial(g, sigma);
    int n = sigma.ambient_dim;
    int nv = static_cast<int>(g.vertices.size());
    size_t N = static_cast<size_t>(n) * nv;

    auto embed_block = [&](const IVec& cov, int v) {
        IVec out(N, 0);
        for (int i = 0; i < n; ++i) out[v * n + i] = cov[i];
        return out;
    };
    IMat ineqs, eqs;
    for (int v = 0; v < nv; ++v) {
        const Cone& c = sigma.cones[g.vertices[v].cone];
        for (const auto& h : c.halfspaces) ineqs.push_back(embed_block(h, v));
        for (const auto& e : c.span_equations) eqs.push_back(embed_block(e, v));
    }
    IMat constraints;
    for (const auto& e : g.edges) {
        const IVec& d = e.dir;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (d[i] == 0 && d[j] == 0) continue;
                IVec cov(N, 0);
                cov[e.b * n + i] += d[j];
                cov[e.a * n + i] -= d[j];
                cov[e.b * n + j] -= d[i];
                cov[e.a * n + j] += d[i];
                constraints.push_back(cov);
                eqs.push_back(cov);
            }
        IVec sign(N, 0);
        for (int i = 0; i < n; ++i) {
            sign[e.b * n + i] += d[i];
            sign[e.a * n + i] -= d[i];
        }
        ineqs.push_back(sign);
    }

    XGCone out;
    out.graph = g;
    out.sigma_ambient = n;
    out.cone = cone_from_inequalities(static_cast<int>(N), ineqs, eqs);
    out.constraints = constraints;
    out.dim = out.cone.dim;

    if (check_interior) {
        auto faithful_at = [&](const QVec& sample) {
            ImageResult im = image_surjection(g, unflatten(sample, nv, n), sigma);
            return is_identity_surjection(g, im.graph, im.surj);
        };
        bool faithful = false;
        for (long scheme = 1; scheme <= 3 && !faithful; ++scheme) {
            QVec sample(N, Rat(0));
            long w = 1;
            for (const auto& r : out.cone.rays) {
                for (size_t i = 0; i < N; ++i) sample[i] += Rat(w) * Rat(r[i]);
                w = w * scheme + 1;
            }
            if (is_zero(sample) && !out.cone.rays.empty()) continue;
            faithful = faithful_at(sample);
        }
        if (!faithful) {
            // exhaustive pass over the degeneracy arrangement
            IMat funcs = detail::arrangement_functionals(g, sigma);
            for (const auto& cell :
                 detail::arrangement_cells(out.cone, funcs, 100000))
                if (faithful_at(relint_sample(cell))) { faithful = true; break; }
        }
        if (!faithful)
            throw Error(ErrorCode::EmptyInterior, "no point realizes the type faithfully");
    }
    return out;
}

// ----- enumeration of surjection types --------------------------------------------

struct SurjectionType {
    CombinatorialOneComplex graph;  // canonical image type
    Surjection surj;
    Cone sub_cone;                  // X_H embedded in the coordinates of X_G
    QVec witness;                   // a point realizing the type
    std::string key;
};

struct SurjectionEnumeration {
    std::vector<SurjectionType> types;
    bool complete = true;
    size_t cells = 0;
};

// The linear inclusion X_H -> X_G induced by tau.
inline IMat inclusion_matrix(const CombinatorialOneComplex& g,
                             const CombinatorialOneComplex& h, const Surjection& s, int n) {
    size_t ng = g.vertices.size() * n, nh = h.vertices.size() * n;
    IMat m(ng, IVec(nh, 0));
    for (size_t v = 0; v < g.vertices.size(); ++v)
        for (int i = 0; i < n; ++i) m[v * n + i][s.tau[v] * n + i] = 1;
    return m;
}

// All surjection types realized on the relative interior of X_G, found by
// exact arrangement subdivision: the interiors of top cells carry the
// identity type and the interior walls carry the degenerations.
inline SurjectionEnumeration enumerate_surjections(const CombinatorialOneComplex& g,
                                                   const XGCone& x, const ConeComplex& sigma,
                                                   size_t budget = 10000,
                                                   bool include_boundary = false) {
    int n = sigma.ambient_dim;
    int nv = static_cast<int>(g.vertices.size());
    SurjectionEnumeration out;
    IMat funcs = detail::arrangement_functionals(g, sigma);
    std::vector<Cone> cells = detail::arrangement_cells(x.cone, funcs, budget);
    out.cells = cells.size();

    std::set<Cone> faces;
    for (const auto& c : cells)
        for (auto& f : all_faces(c)) faces.insert(f);
    std::set<std::string> seen;
    for (const auto& f : faces) {
        QVec sample = relint_sample(f);
        if (!include_boundary && !in_relative_interior(x.cone, sample)) continue;
        if (f.dim == 0 && x.dim > 0 && !include_boundary) continue;
        ImageResult im = image_surjection(g, unflatten(sample, nv, n), sigma);
        std::string key = surjection_key(im.graph, im.surj);
        if (!seen.insert(key).second) continue;
        SurjectionType t;
        t.graph = im.graph;
        t.surj = im.surj;
        t.witness = sample;
        t.key = key;
        XGCone xh = build_xg(im.graph, sigma, false);
        IMat inc = inclusion_matrix(g, im.graph, im.surj, n);
        IMat mapped;
        for (const auto& r : xh.cone.rays) mapped.push_back(apply_map(inc, r));
        t.sub_cone = make_cone(static_cast<int>(g.vertices.size()) * n, mapped);
        out.types.push_back(std::move(t));
    }
    std::sort(out.types.begin(), out.types.end(),
              [](const SurjectionType& a, const SurjectionType& b) { return a.key < b.key; });
    return out;
}

// Recovers the X_H point over f in X_G for a surjection G -> H: prescribe
// the blocks of the tau-image vertices and solve H's collinearity equations
// for the rest. Returns nullopt when f is not in the embedded X_H.
inline std::optional<QVec> lift_point(const CombinatorialOneComplex& g,
                                      const CombinatorialOneComplex& h, const Surjection& s,
                                      const QVec& f, const XGCone& xh, int n) {
    size_t nh = h.vertices.size() * static_cast<size_t>(n);
    QMat sys;
    QVec rhs;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        for (int i = 0; i < n; ++i) {
            QVec row(nh, Rat(0));
            row[s.tau[v] * n + i] = 1;
            sys.push_back(row);
            rhs.push_back(f[v * n + i]);
        }
    for (const auto& eq : xh.cone.span_equations) {
        sys.push_back(to_rational(eq));
        rhs.push_back(Rat(0));
    }
    auto sol = solve(sys, rhs, nh);
    if (!sol) return std::nullopt;
    if (!contains(xh.cone, *sol)) return std::nullopt;
    // verify the inclusion really maps back to f
    for (size_t v = 0; v < g.vertices.size(); ++v)
        for (int i = 0; i < n; ++i)
            if ((*sol)[s.tau[v] * n + i] != f[v * n + i]) return std::nullopt;
    return sol;
}

// ----- equivariant subdivision ------------------------------------------------------

inline Int determinant(const IMat& m) {
    size_t k = m.size();
    QMat a = to_rational(m);
    Rat det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t piv = c;
        while (piv < k && a[piv][c] == 0) ++piv;
        if (piv == k) return 0;
        if (piv != c) { std::swap(a[piv], a[c]); det = -det; }
        det *= a[c][c];
        for (size_t i = c + 1; i < k; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] / a[c][c];
            for (size_t j = c; j < k; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det.get_num();
}

// Closure of the given integer matrices under multiplication.
inline std::vector<IMat> group_closure(const std::vector<IMat>& gens, size_t n,
                                       size_t bound = 5000) {
    auto mul = [&](const IMat& a, const IMat& b) {
        IMat c(n, IVec(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
        return c;
    };
    std::set<IMat> all;
    all.insert(identity_matrix(n));
    std::vector<IMat> queue{identity_matrix(n)};
    for (size_t i = 0; i < queue.size(); ++i)
        for (const auto& gmat : gens) {
            IMat prod = mul(queue[i], gmat);
            if (all.insert(prod).second) {
                queue.push_back(prod);
                if (all.size() > bound)
                    throw Error(ErrorCode::InvalidInput, "group closure too large");
            }
        }
    return {all.begin(), all.end()};
}

// A Gamma-invariant proper subdivision of C in which every cone of F appears
// as a face, built from the Gamma-orbit of the walls cutting out the F's.
inline ConeComplex equivariant_subdivision(const Cone& c, const std::vector<Cone>& f,
                                           const std::vector<IMat>& gamma_gens,
                                           size_t budget = 20000) {
    size_t n = static_cast<size_t>(c.ambient_dim);
    std::vector<IMat> gamma = group_closure(gamma_gens, n);
    for (const auto& gmat : gamma) {
        Int d = determinant(gmat);
        if (d != 1 && d != -1)
            throw Error(ErrorCode::NotStable, "group element is not a lattice automorphism");
        if (!(apply_linear_map(gmat, c) == c))
            throw Error(ErrorCode::NotStable, "group does not preserve the cone");
    }
    // F must be Gamma-stable as a set
    std::set<Cone> fset(f.begin(), f.end());
    for (const auto& gmat : gamma)
        for (const auto& piece : f)
            if (!fset.count(apply_linear_map(gmat, piece)))
                throw Error(ErrorCode::NotStable, "F is not stable under the group");

    std::set<IVec> hyperplanes;
    for (const auto& piece : f) {
        if (!contains_cone(c, piece))
            throw Error(ErrorCode::InvalidInput, "F is not embedded in the cone");
        for (const auto& gmat : gamma) {
            Cone img = apply_linear_map(gmat, piece);
            for (const auto& h : img.halfspaces) hyperplanes.insert(detail::lex_positive(h));
            for (const auto& e : img.span_equations) hyperplanes.insert(detail::lex_positive(e));
        }
    }
    IMat funcs(hyperplanes.begin(), hyperplanes.end());
    std::vector<Cone> cells = detail::arrangement_cells(c, funcs, budget);
    return make_complex(c.ambient_dim, cells);
}

// ----- cone space fragments -----------------------------------------------------------

struct FragmentArrow {
    int from_type = 0;
    int to_type = 0;
    Surjection surj;
    IMat inclusion;  // X_{to} coordinates -> X_{from} coordinates
};

struct FragmentConeInfo {
    int type = 0;      // which Y_G the cone belongs to
    int cone = 0;      // index into subdivisions[type].cones
    int fiber_type = -1;  // family member matching the generic fiber
    std::vector<int> tube_vertices;  // fiber vertices absent from the minimal fiber
    IMat integral_lattice;  // base points with integral fiber vertices
};

struct ConeSpaceFragment {
    ConeComplex sigma;
    std::vector<CombinatorialOneComplex> types;
    std::vector<std::string> keys;
    std::vector<XGCone> xg;
    std::vector<ConeComplex> subdivisions;  // Y_G, one per type
    std::vector<FragmentArrow> arrows;
    std::vector<std::vector<std::vector<int>>> automorphisms;  // Aut_G per type
    std::vector<FragmentConeInfo> cones;    // all cones with family data
    bool barycentric_realized = false;
};

// Action of a vertex permutation on the product coordinates.
inline IMat perm_action_matrix(const std::vector<int>& perm, int n) {
    size_t nv = perm.size();
    IMat m(nv * n, IVec(nv * n, 0));
    for (size_t v = 0; v < nv; ++v)
        for (int i = 0; i < n; ++i) m[perm[v] * n + i][v * n + i] = 1;
    return m;
}

// Barycentric subdivision: one cone per chain in the face poset.
inline ConeComplex barycentric_subdivision(const ConeComplex& s) {
    std::vector<Cone> out;
    std::vector<int> order(s.cones.size());
    for (size_t i = 0; i < s.cones.size(); ++i) order[i] = static_cast<int>(i);
    std::function<void(std::vector<int>&, int)> grow = [&](std::vector<int>& chain, int last) {
        std::vector<QVec> gens;
        for (int i : chain) gens.push_back(relint_sample(s.cones[i]));
        out.push_back(make_cone(s.ambient_dim, gens));
        for (size_t j = 0; j < s.cones.size(); ++j) {
            if (s.cones[j].dim <= s.cones[last].dim) continue;
            if (!is_face_of(s.cones[last], s.cones[j])) continue;
            chain.push_back(static_cast<int>(j));
            grow(chain, static_cast<int>(j));
            chain.pop_back();
        }
    };
    for (size_t i = 0; i < s.cones.size(); ++i) {
        if (s.cones[i].dim == 0) continue;
        std::vector<int> chain{static_cast<int>(i)};
        grow(chain, static_cast<int>(i));
    }
    if (out.empty()) out.push_back(zero_cone(s.ambient_dim));
    return make_complex(s.ambient_dim, out);
}

struct FragmentInput {
    CombinatorialOneComplex graph;
    std::optional<ConeComplex> subdivision;  // defaults to the plain cone X_G
};

// Lattice of base points whose fiber vertex positions are all integral:
// {f : A f integral} for the stacked rational position maps A.
inline IMat integral_position_lattice(const QMat& a, size_t nvars) {
    if (a.empty()) return identity_matrix(nvars);
    Int q = 1;
    for (const auto& row : a)
        for (const auto& x : row) q = lcm(q, x.get_den());
    IMat c(a.size(), IVec(nvars, 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < nvars; ++j) {
            Rat scaled = a[i][j] * Rat(q);
            c[i][j] = scaled.get_num();
        }
    // solve C f = q z over the integers; project onto f
    size_t m = a.size();
    IMat sys(m, IVec(nvars + m, 0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < nvars; ++j) sys[i][j] = c[i][j];
        sys[i][nvars + i] = -q;
    }
    IMat ker = integer_kernel(sys, nvars + m);
    IMat basis;
    for (const auto& k : ker) {
        IVec fpart(k.begin(), k.begin() + nvars);
        if (!is_zero(fpart)) basis.push_back(fpart);
    }
    return hermite_normal_form(basis);
}

// Position maps of the image vertices as linear functions of the flat base
// coordinates, from the provenance data.
inline QMat fiber_position_maps(const CombinatorialOneComplex& g, const ImageResult& im,
                                const std::vector<QVec>& witness_positions, int n) {
    size_t N = g.vertices.size() * static_cast<size_t>(n);
    QMat rows;
    auto block_row = [&](int v, int coord) {
        QVec r(N, Rat(0));
        r[v * n + coord] = 1;
        return r;
    };
    // recover the source pieces in the order image_surjection builds them
    std::vector<std::pair<int, IVec>> piece_src;  // (base vertex, direction)
    for (const auto& e : g.edges) {
        QVec d = sub(witness_positions[e.b], witness_positions[e.a]);
        if (is_zero(d)) continue;
        piece_src.push_back({e.a, primitive(d)});
    }
    for (const auto& r : g.rays) piece_src.push_back({r.base, r.dir});

    for (size_t v = 0; v < im.graph.vertices.size(); ++v) {
        const auto& pv = im.provenance[v];
        if (pv.kind == VertexProvenance::GVertex) {
            for (int i = 0; i < n; ++i) rows.push_back(block_row(pv.vertex, i));
            continue;
        }
        const auto& [va, da] = piece_src[pv.piece_a];
        const auto& [vb, db] = piece_src[pv.piece_b];
        int i1 = -1, i2 = -1;
        Int det = 0;
        for (int i = 0; i < n && i1 < 0; ++i)
            for (int j = i + 1; j < n; ++j) {
                Int dd = da[i] * (-db[j]) + db[i] * da[j];
                if (dd != 0) { i1 = i; i2 = j; det = dd; break; }
            }
        if (i1 < 0) throw Error(ErrorCode::InternalError, "crossing of parallel pieces");
        // X = x_{va} + s*da with det*s = rhs_{i1}*(-db_{i2}) + db_{i1}*rhs_{i2}
        QVec s_row(N, Rat(0));
        auto add_rhs = [&](int coord, const Int& w) {
            s_row[vb * n + coord] += Rat(w);
            s_row[va * n + coord] -= Rat(w);
        };
        add_rhs(i1, -db[i2]);
        add_rhs(i2, db[i1]);
        for (int i = 0; i < n; ++i) {
            QVec row = block_row(va, i);
            for (size_t q = 0; q < N; ++q) row[q] += Rat(da[i]) * s_row[q] / Rat(det);
            rows.push_back(row);
        }
    }
    return rows;
}

// Assembles a cone-space fragment from a surjection-closed family of graph
// types with equivariant subdivisions of their realization cones.
inline ConeSpaceFragment assemble_fragment(const std::vector<FragmentInput>& family,
                                           const ConeComplex& sigma, bool barycentric = false,
                                           size_t budget = 20000) {
    ConeSpaceFragment frag;
    frag.sigma = sigma;
    int n = sigma.ambient_dim;
    for (const auto& in : family) {
        frag.types.push_back(in.graph);
        frag.keys.push_back(canonical_graph(in.graph).key);
        frag.xg.push_back(build_xg(in.graph, sigma, false));
    }
    for (size_t i = 0; i < frag.keys.size(); ++i)
        for (size_t j = i + 1; j < frag.keys.size(); ++j)
            if (frag.keys[i] == frag.keys[j])
                throw Error(ErrorCode::InvalidInput, "duplicate graph type in the family");
    auto find_type = [&](const CombinatorialOneComplex& h) {
        std::string key = canonical_graph(h).key;
        for (size_t i = 0; i < frag.keys.size(); ++i)
            if (frag.keys[i] == key) return static_cast<int>(i);
        return -1;
    };

    for (size_t i = 0; i < family.size(); ++i) {
        ConeComplex sub = family[i].subdivision
                              ? *family[i].subdivision
                              : make_complex(frag.xg[i].cone.ambient_dim, {frag.xg[i].cone});
        if (barycentric) sub = barycentric_subdivision(sub);
        ConeComplex whole =
            make_complex(frag.xg[i].cone.ambient_dim, {frag.xg[i].cone}, false);
        if (is_subdivision(sub, whole) != SubdivisionKind::Proper)
            throw Error(ErrorCode::FaceMismatch, "Y_G is not a proper subdivision of X_G");
        frag.subdivisions.push_back(std::move(sub));
    }
    frag.barycentric_realized = barycentric;

    // closure under surjections, with arrows and face conditions
    for (size_t i = 0; i < family.size(); ++i) {
        SurjectionEnumeration en =
            enumerate_surjections(frag.types[i], frag.xg[i], sigma, budget, true);
        for (const auto& t : en.types) {
            if (is_identity_surjection(frag.types[i], t.graph, t.surj)) continue;
            int j = find_type(t.graph);
            if (j < 0)
                throw Error(ErrorCode::NotClosed,
                            "family misses an image type of member " + std::to_string(i));
            FragmentArrow arrow;
            arrow.from_type = static_cast<int>(i);
            arrow.to_type = j;
            arrow.surj = t.surj;
            arrow.inclusion = inclusion_matrix(frag.types[i], t.graph, t.surj, n);
            // note: t.graph is canonically isomorphic to types[j]; the
            // inclusion is recorded against t.graph's own ordering
            frag.arrows.push_back(arrow);
            // the embedded X_H must be a union of faces of Y_G
            std::vector<Cone> inside;
            for (const auto& cone : frag.subdivisions[i].cones)
                if (contains_cone(t.sub_cone, cone)) inside.push_back(cone);
            if (!covers(t.sub_cone, inside))
                throw Error(ErrorCode::FaceMismatch,
                            "X_H is not a union of faces of Y_G for member " + std::to_string(i));
        }
        // equivariance of the chosen subdivision
        auto auts = graph_automorphisms(frag.types[i]);
        frag.automorphisms.push_back(auts);
        for (const auto& perm : auts) {
            IMat action = perm_action_matrix(perm, n);
            std::set<Cone> orig(frag.subdivisions[i].cones.begin(),
                                frag.subdivisions[i].cones.end());
            for (const auto& cone : frag.subdivisions[i].cones)
                if (!orig.count(apply_linear_map(action, cone)))
                    throw Error(ErrorCode::NotEquivariant,
                                "Y_G is not equivariant for member " + std::to_string(i));
        }
    }

    // universal family data per cone
    for (size_t i = 0; i < family.size(); ++i) {
        int nv = static_cast<int>(frag.types[i].vertices.size());
        for (size_t ci = 0; ci < frag.subdivisions[i].cones.size(); ++ci) {
            const Cone& cone = frag.subdivisions[i].cones[ci];
            FragmentConeInfo info;
            info.type = static_cast<int>(i);
            info.cone = static_cast<int>(ci);
            QVec sample = relint_sample(cone);
            auto positions = unflatten(sample, nv, n);
            ImageResult im = image_surjection(frag.types[i], positions, sigma);
            info.fiber_type = find_type(im.graph);
            // tube vertices: fiber vertices that the minimal structure drops
            EmbeddedOneComplex fiber = realization(im.graph, im.positions);
            if (validate_embedded(fiber, sigma).ok()) {
                EmbeddedOneComplex minimal = minimal_structure(fiber, sigma);
                std::set<QVec> kept(minimal.positions.begin(), minimal.positions.end());
                for (size_t v = 0; v < im.positions.size(); ++v)
                    if (!kept.count(im.positions[v])) info.tube_vertices.push_back(static_cast<int>(v));
            }
            QMat maps = fiber_position_maps(frag.types[i], im, positions, n);
            info.integral_lattice = integral_position_lattice(maps, frag.types[i].vertices.size() * n);
            frag.cones.push_back(std::move(info));
        }
    }
    return frag;
}

// Cone-wise common refinement of two fragments over the same graph family.
inline ConeSpaceFragment refine_fragments(const ConeSpaceFragment& a, const ConeSpaceFragment& b) {
    if (!(a.sigma == b.sigma) || a.keys.size() != b.keys.size())
        throw Error(ErrorCode::SupportMismatch, "fragments over different data");
    std::vector<FragmentInput> inputs;
    for (size_t i = 0; i < a.types.size(); ++i) {
        int match = -1;
        for (size_t j = 0; j < b.keys.size(); ++j)
            if (b.keys[j] == a.keys[i]) match = static_cast<int>(j);
        if (match < 0) throw Error(ErrorCode::SupportMismatch, "graph families differ");
        if (!(a.xg[i].cone == b.xg[match].cone))
            throw Error(ErrorCode::SupportMismatch, "realization cones differ");
        FragmentInput in;
        in.graph = a.types[i];
        in.subdivision = common_refinement(a.subdivisions[i], b.subdivisions[match]);
        inputs.push_back(std::move(in));
    }
    return assemble_fragment(inputs, a.sigma);
}

// Closes a seed family under image surjections (including the boundary
// degenerations).
inline std::vector<CombinatorialOneComplex> close_family(
    const std::vector<CombinatorialOneComplex>& seeds, const ConeComplex& sigma,
    size_t budget = 20000) {
    std::vector<CombinatorialOneComplex> family;
    std::set<std::string> keys;
    std::vector<CombinatorialOneComplex> queue = seeds;
    while (!queue.empty()) {
        CombinatorialOneComplex g = queue.back();
        queue.pop_back();
        std::string key = canonical_graph(g).key;
        if (!keys.insert(key).second) continue;
        family.push_back(g);
        XGCone x = build_xg(g, sigma, false);
        SurjectionEnumeration en = enumerate_surjections(g, x, sigma, budget, true);
        for (const auto& t : en.types)
            if (!keys.count(canonical_graph(t.graph).key)) queue.push_back(t.graph);
    }
    return family;
}

}  // namespace tropex
