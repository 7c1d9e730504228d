#pragma once

#include "tropex/graphs.hpp"

namespace tropex {

// ----- combinatorial shadow of a target expansion ---------------------------

// A component is a partially compactified torus bundle of rank = dim of its
// stratum cone over the corresponding stratum.
struct ExpComponent {
    QVec position;        // vertex of the height-1 slice
    int stratum_cone = 0; // minimal cone of Sigma containing the vertex
    int bundle_rank = 0;
    bool tube = false;
};

struct ExpansionDualComplex {
    int sigma_ambient = 0;
    std::vector<ExpComponent> components;
    std::vector<std::pair<int, int>> double_divisors;   // bounded edges
    std::vector<std::pair<int, IVec>> relative_divisors; // (component, direction)

    bool operator==(const ExpansionDualComplex& o) const {
        if (sigma_ambient != o.sigma_ambient) return false;
        if (components.size() != o.components.size()) return false;
        for (size_t i = 0; i < components.size(); ++i) {
            const auto &a = components[i], &b = o.components[i];
            if (a.position != b.position || a.stratum_cone != b.stratum_cone ||
                a.bundle_rank != b.bundle_rank || a.tube != b.tube)
                return false;
        }
        return double_divisors == o.double_divisors && relative_divisors == o.relative_divisors;
    }
};

// Dual complex of a cone complex in Sigma x R_{>=0} that is the cone over an
// embedded 1-complex: components <-> vertices of the height-1 slice, double
// divisors <-> bounded edges, relative divisors <-> rays.
inline ExpansionDualComplex dual_complex(const ConeComplex& c, const ConeComplex& sigma) {
    EmbeddedOneComplex slice = height_one_slice(c, sigma);
    ExpansionDualComplex out;
    out.sigma_ambient = sigma.ambient_dim;
    for (size_t v = 0; v < slice.positions.size(); ++v) {
        ExpComponent comp;
        comp.position = slice.positions[v];
        comp.stratum_cone = minimal_cone_index(sigma, comp.position);
        comp.bundle_rank = sigma.cones[comp.stratum_cone].dim;
        out.components.push_back(comp);
    }
    for (const auto& e : slice.type.edges)
        out.double_divisors.push_back({std::min(e.a, e.b), std::max(e.a, e.b)});
    std::sort(out.double_divisors.begin(), out.double_divisors.end());
    for (const auto& r : slice.type.rays) out.relative_divisors.push_back({r.base, r.dir});
    std::sort(out.relative_divisors.begin(), out.relative_divisors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return lex_less(a.second, b.second);
              });
    return out;
}

// Structural check on tube flags: tube components are 2-valent with
// collinear incident directions.
inline ValidationReport validate_expansion(const ExpansionDualComplex& e,
                                           const ConeComplex& sigma) {
    ValidationReport rep;
    for (size_t i = 0; i < e.components.size(); ++i) {
        const auto& comp = e.components[i];
        if (comp.stratum_cone < 0 || comp.stratum_cone >= static_cast<int>(sigma.cones.size())) {
            rep.add("structure", "component labels a missing cone");
            continue;
        }
        if (comp.bundle_rank != sigma.cones[comp.stratum_cone].dim)
            rep.add("rank", "component " + std::to_string(i) +
                                " rank differs from its stratum dimension");
        if (!comp.tube) continue;
        std::vector<IVec> dirs;
        for (const auto& [a, b] : e.double_divisors) {
            if (a == static_cast<int>(i))
                dirs.push_back(primitive(sub(e.components[b].position, comp.position)));
            if (b == static_cast<int>(i))
                dirs.push_back(primitive(sub(e.components[a].position, comp.position)));
        }
        for (const auto& [base, d] : e.relative_divisors)
            if (base == static_cast<int>(i)) dirs.push_back(d);
        if (dirs.size() != 2 || dirs[0] != negate(dirs[1]))
            rep.add("tube", "tube component " + std::to_string(i) +
                                " is not 2-valent with collinear directions");
    }
    return rep;
}

// ----- tube vertices ---------------------------------------------------------

// The vertices of upsilon that were inserted into gp: upsilon must refine gp
// by 2-valent collinear vertices on its support.
inline std::vector<int> tube_vertices(const EmbeddedOneComplex& upsilon,
                                      const EmbeddedOneComplex& gp, const ConeComplex& sigma) {
    auto rep_u = validate_embedded(upsilon, sigma);
    auto rep_g = validate_embedded(gp, sigma);
    if (!rep_u.ok() || !rep_g.ok())
        throw Error(ErrorCode::InvalidInput, "tube_vertices needs valid embedded complexes");
    EmbeddedOneComplex u = canonicalize(upsilon, sigma);
    EmbeddedOneComplex g = canonicalize(gp, sigma);
    std::set<QVec> g_positions(g.positions.begin(), g.positions.end());
    std::vector<int> extras;
    for (size_t v = 0; v < u.positions.size(); ++v) {
        if (g_positions.count(u.positions[v])) continue;
        auto inc = detail::incidences(u, static_cast<int>(v));
        if (inc.size() != 2 || inc[0].out_dir != negate(inc[1].out_dir))
            throw Error(ErrorCode::NotARefinement,
                        "extra vertex " + std::to_string(v) + " is not 2-valent collinear");
        bool on_support = false;
        for (const auto& piece : geometric_pieces(g)) {
            auto t = param_on_line(piece, u.positions[v]);
            if (t && param_in_range(piece, *t)) { on_support = true; break; }
        }
        if (!on_support)
            throw Error(ErrorCode::NotARefinement,
                        "extra vertex " + std::to_string(v) + " is off the coarse support");
        extras.push_back(static_cast<int>(v));
    }
    // removing the extras must give back gp exactly
    EmbeddedOneComplex merged = u;
    std::set<QVec> extra_pos;
    for (int v : extras) extra_pos.insert(u.positions[v]);
    while (true) {
        int victim = -1;
        for (size_t v = 0; v < merged.positions.size() && victim < 0; ++v)
            if (extra_pos.count(merged.positions[v])) victim = static_cast<int>(v);
        if (victim < 0) break;
        auto inc = detail::incidences(merged, victim);
        if (inc.size() != 2) throw Error(ErrorCode::NotARefinement, "merge failed");
        EmbeddedOneComplex next;
        std::vector<int> vmap(merged.positions.size(), -1);
        for (size_t v = 0; v < merged.positions.size(); ++v) {
            if (static_cast<int>(v) == victim) continue;
            vmap[v] = static_cast<int>(next.positions.size());
            next.positions.push_back(merged.positions[v]);
            next.type.vertices.push_back(merged.type.vertices[v]);
        }
        for (size_t i = 0; i < merged.type.edges.size(); ++i) {
            bool drop = (!inc[0].is_ray && static_cast<int>(i) == inc[0].index) ||
                        (!inc[1].is_ray && static_cast<int>(i) == inc[1].index);
            if (drop) continue;
            GraphEdge ge = merged.type.edges[i];
            ge.a = vmap[ge.a];
            ge.b = vmap[ge.b];
            next.type.edges.push_back(ge);
        }
        for (size_t i = 0; i < merged.type.rays.size(); ++i) {
            bool drop = (inc[0].is_ray && static_cast<int>(i) == inc[0].index) ||
                        (inc[1].is_ray && static_cast<int>(i) == inc[1].index);
            if (drop) continue;
            GraphRay gr = merged.type.rays[i];
            gr.base = vmap[gr.base];
            next.type.rays.push_back(gr);
        }
        if (!inc[0].is_ray && !inc[1].is_ray) {
            GraphEdge ge;
            ge.a = vmap[inc[0].other];
            ge.b = vmap[inc[1].other];
            ge.dir = primitive(sub(next.positions[ge.b], next.positions[ge.a]));
            ge.cone = minimal_cone_of_segment(sigma, next.positions[ge.a], next.positions[ge.b]);
            next.type.edges.push_back(ge);
        } else if (inc[0].is_ray != inc[1].is_ray) {
            const auto& ray_inc = inc[0].is_ray ? inc[0] : inc[1];
            const auto& edge_inc = inc[0].is_ray ? inc[1] : inc[0];
            GraphRay gr;
            gr.base = vmap[edge_inc.other];
            gr.dir = ray_inc.out_dir;
            gr.cone = minimal_cone_of_ray(sigma, next.positions[gr.base], gr.dir);
            next.type.rays.push_back(gr);
        } else {
            throw Error(ErrorCode::NotARefinement, "opposite rays at an inserted vertex");
        }
        merged = next;
    }
    if (!(canonicalize(merged, sigma) == g))
        throw Error(ErrorCode::NotARefinement, "removing the inserted vertices does not recover the coarse complex");
    return extras;
}

// ----- DT stability -----------------------------------------------------------

// Per-component subscheme flags plus contact lengths along divisors.
struct SubschemeShadow {
    std::vector<bool> is_tube;          // indexed like components
    std::vector<Int> double_contacts;   // indexed like double_divisors
    std::vector<Int> relative_contacts; // indexed like relative_divisors
};

struct DtStabilityResult {
    bool stable = false;
    std::vector<int> witness;  // symmetric difference of flag sets
};

// Stable iff the tube subschemes sit precisely on the tube components.
inline DtStabilityResult dt_stability(const ExpansionDualComplex& e, const SubschemeShadow& s) {
    if (s.is_tube.size() != e.components.size())
        throw Error(ErrorCode::ShapeMismatch, "shadow does not match the component set");
    DtStabilityResult out;
    for (size_t i = 0; i < e.components.size(); ++i)
        if (e.components[i].tube != s.is_tube[i]) out.witness.push_back(static_cast<int>(i));
    out.stable = out.witness.empty();
    return out;
}

}  // namespace tropex
