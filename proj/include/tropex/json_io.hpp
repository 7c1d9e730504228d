#pragma once

#include <json.hpp>

#include "tropex/moduli.hpp"
#include "tropex/secondary.hpp"

namespace tropex {

using json = nlohmann::json;

// ----- numbers: arbitrary precision, decimal strings past 64 bits -------------

inline json to_json(const Int& z) {
    if (fits_int64(z)) return json(z.get_si());
    return json(z.get_str());
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw Error(ErrorCode::ParseError, "expected an integer or a decimal string");
}

inline json to_json(const Rat& r) {
    if (r.get_den() == 1 && fits_int64(r.get_num())) return json(r.get_num().get_si());
    return json(to_string(r));
}

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw Error(ErrorCode::ParseError, "expected a rational as \"p/q\" or an integer");
}

inline json to_json(const IVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline json to_json(const QVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline IVec ivec_from_json(const json& j) {
    IVec v;
    for (const auto& x : j) v.push_back(int_from_json(x));
    return v;
}

inline QVec qvec_from_json(const json& j) {
    QVec v;
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
}

inline json to_json(const IMat& m) {
    json a = json::array();
    for (const auto& r : m) a.push_back(to_json(r));
    return a;
}

inline IMat imat_from_json(const json& j) {
    IMat m;
    for (const auto& r : j) m.push_back(ivec_from_json(r));
    return m;
}

// ----- fans ---------------------------------------------------------------------

inline json to_json(const ConeComplex& s) {
    json out;
    out["$schema"] = "tropex/fan.schema.json";
    out["ambient_dim"] = s.ambient_dim;
    json cones = json::array();
    for (int i : maximal_cone_indices(s)) {
        json c;
        c["rays"] = to_json(s.cones[i].rays);
        if (s.cones[i].lattice) c["lattice"] = to_json(*s.cones[i].lattice);
        cones.push_back(c);
    }
    out["cones"] = cones;
    if (!s.ray_names.empty()) {
        json names;
        for (const auto& [name, ray] : s.ray_names) names[name] = to_json(ray);
        out["ray_names"] = names;
    }
    return out;
}

inline ConeComplex complex_from_json(const json& j) {
    if (!j.contains("ambient_dim") || !j.contains("cones"))
        throw Error(ErrorCode::ParseError, "fan needs ambient_dim and cones");
    int n = j.at("ambient_dim").get<int>();
    std::vector<Cone> cones;
    for (const auto& c : j.at("cones")) {
        std::optional<IMat> lattice;
        if (c.contains("lattice")) lattice = imat_from_json(c.at("lattice"));
        cones.push_back(make_cone(n, imat_from_json(c.at("rays")), std::move(lattice)));
    }
    std::map<std::string, IVec> names;
    if (j.contains("ray_names"))
        for (auto it = j.at("ray_names").begin(); it != j.at("ray_names").end(); ++it)
            names[it.key()] = ivec_from_json(it.value());
    return make_complex(n, cones, true, std::move(names));
}

// ----- graphs --------------------------------------------------------------------

inline json to_json(const EmbeddedOneComplex& e) {
    json out;
    out["$schema"] = "tropex/graph.schema.json";
    json vs = json::array();
    for (size_t v = 0; v < e.type.vertices.size(); ++v) {
        json jv;
        jv["cone"] = e.type.vertices[v].cone;
        if (v < e.positions.size()) jv["pos"] = to_json(e.positions[v]);
        vs.push_back(jv);
    }
    out["vertices"] = vs;
    json es = json::array();
    for (const auto& ed : e.type.edges) {
        json je;
        je["ends"] = json::array({ed.a, ed.b});
        je["cone"] = ed.cone;
        je["dir"] = to_json(ed.dir);
        es.push_back(je);
    }
    out["edges"] = es;
    json rs = json::array();
    for (const auto& r : e.type.rays) {
        json jr;
        jr["base"] = r.base;
        jr["cone"] = r.cone;
        jr["dir"] = to_json(r.dir);
        rs.push_back(jr);
    }
    out["rays"] = rs;
    return out;
}

inline EmbeddedOneComplex embedded_from_json(const json& j) {
    EmbeddedOneComplex e;
    if (!j.contains("vertices")) throw Error(ErrorCode::ParseError, "graph needs vertices");
    for (const auto& v : j.at("vertices")) {
        e.type.vertices.push_back({v.at("cone").get<int>()});
        if (v.contains("pos")) e.positions.push_back(qvec_from_json(v.at("pos")));
    }
    if (!e.positions.empty() && e.positions.size() != e.type.vertices.size())
        throw Error(ErrorCode::ParseError, "either all or no vertices carry positions");
    if (j.contains("edges"))
        for (const auto& ed : j.at("edges")) {
            GraphEdge g;
            g.a = ed.at("ends").at(0).get<int>();
            g.b = ed.at("ends").at(1).get<int>();
            g.cone = ed.at("cone").get<int>();
            g.dir = ivec_from_json(ed.at("dir"));
            e.type.edges.push_back(g);
        }
    if (j.contains("rays"))
        for (const auto& r : j.at("rays")) {
            GraphRay g;
            g.base = r.at("base").get<int>();
            g.cone = r.at("cone").get<int>();
            g.dir = ivec_from_json(r.at("dir"));
            e.type.rays.push_back(g);
        }
    return e;
}

inline json to_json(const WeightedOneComplex& w) {
    json out = to_json(w.base);
    out["$schema"] = "tropex/curve.schema.json";
    json ew = json::array();
    for (const auto& x : w.edge_weights) ew.push_back(to_json(x));
    out["edge_weights"] = ew;
    json rw = json::array();
    for (const auto& x : w.ray_weights) rw.push_back(to_json(x));
    out["ray_weights"] = rw;
    return out;
}

inline WeightedOneComplex weighted_from_json(const json& j) {
    WeightedOneComplex w;
    w.base = embedded_from_json(j);
    if (j.contains("edge_weights"))
        for (const auto& x : j.at("edge_weights")) w.edge_weights.push_back(int_from_json(x));
    else
        w.edge_weights.assign(w.base.type.edges.size(), 1);
    if (j.contains("ray_weights"))
        for (const auto& x : j.at("ray_weights")) w.ray_weights.push_back(int_from_json(x));
    else
        w.ray_weights.assign(w.base.type.rays.size(), 1);
    if (w.edge_weights.size() != w.base.type.edges.size() ||
        w.ray_weights.size() != w.base.type.rays.size())
        throw Error(ErrorCode::ParseError, "weight counts do not match the graph");
    return w;
}

// ----- polynomials ------------------------------------------------------------------

inline json to_json(const TropicalPolynomial& p) {
    json out;
    out["$schema"] = "tropex/poly.schema.json";
    out["dim"] = p.ambient_dim;
    json terms = json::array();
    for (const auto& [e, v] : p.terms) {
        json t;
        t["exp"] = to_json(e);
        t["val"] = to_json(v);
        terms.push_back(t);
    }
    out["terms"] = terms;
    return out;
}

inline TropicalPolynomial poly_from_json(const json& j) {
    TropicalPolynomial p;
    p.ambient_dim = j.at("dim").get<int>();
    for (const auto& t : j.at("terms"))
        p.terms.push_back({ivec_from_json(t.at("exp")), rat_from_json(t.at("val"))});
    return p;
}

// ----- expansions -------------------------------------------------------------------

inline json to_json(const ExpansionDualComplex& e) {
    json out;
    out["$schema"] = "tropex/expansion.schema.json";
    out["sigma_ambient"] = e.sigma_ambient;
    json comps = json::array();
    for (const auto& c : e.components) {
        json jc;
        jc["pos"] = to_json(c.position);
        jc["cone"] = c.stratum_cone;
        jc["rank"] = c.bundle_rank;
        jc["tube"] = c.tube;
        comps.push_back(jc);
    }
    out["components"] = comps;
    json dd = json::array();
    for (const auto& [a, b] : e.double_divisors) dd.push_back(json::array({a, b}));
    out["double_divisors"] = dd;
    json rd = json::array();
    for (const auto& [c, d] : e.relative_divisors) {
        json jr;
        jr["component"] = c;
        jr["dir"] = to_json(d);
        rd.push_back(jr);
    }
    out["relative_divisors"] = rd;
    return out;
}

inline ExpansionDualComplex expansion_from_json(const json& j) {
    ExpansionDualComplex e;
    e.sigma_ambient = j.at("sigma_ambient").get<int>();
    for (const auto& c : j.at("components")) {
        ExpComponent comp;
        comp.position = qvec_from_json(c.at("pos"));
        comp.stratum_cone = c.at("cone").get<int>();
        comp.bundle_rank = c.at("rank").get<int>();
        comp.tube = c.value("tube", false);
        e.components.push_back(comp);
    }
    for (const auto& d : j.at("double_divisors"))
        e.double_divisors.push_back({d.at(0).get<int>(), d.at(1).get<int>()});
    for (const auto& r : j.at("relative_divisors"))
        e.relative_divisors.push_back({r.at("component").get<int>(), ivec_from_json(r.at("dir"))});
    return e;
}

inline json to_json(const LimitResult& lr) {
    json out;
    out["$schema"] = "tropex/limit.schema.json";
    out["minimal_complex"] = to_json(lr.minimal_complex);
    out["base_change_order"] = to_json(lr.base_change_order);
    out["cone"] = to_json(lr.cone);
    out["expansion"] = to_json(lr.expansion);
    return out;
}

// ----- moduli -------------------------------------------------------------------------

inline json to_json(const Cone& c) {
    json out;
    out["ambient_dim"] = c.ambient_dim;
    out["dim"] = c.dim;
    out["rays"] = to_json(c.rays);
    if (c.lattice) out["lattice"] = to_json(*c.lattice);
    return out;
}

inline json to_json(const XGCone& x) {
    json out;
    out["$schema"] = "tropex/xg.schema.json";
    out["graph"] = to_json(EmbeddedOneComplex{x.graph, {}});
    out["sigma_ambient"] = x.sigma_ambient;
    out["cone"] = to_json(x.cone);
    out["constraints"] = to_json(x.constraints);
    out["dim"] = x.dim;
    return out;
}

inline json to_json(const Surjection& s) {
    json out;
    out["tau"] = s.tau;
    auto paths = [](const std::vector<Path>& ps) {
        json a = json::array();
        for (const auto& p : ps) {
            json steps = json::array();
            for (const auto& st : p.steps) {
                json q;
                q["kind"] = st.is_ray ? "ray" : "edge";
                q["index"] = st.index;
                q["reversed"] = st.reversed;
                steps.push_back(q);
            }
            a.push_back(steps);
        }
        return a;
    };
    out["edge_paths"] = paths(s.edge_paths);
    out["ray_paths"] = paths(s.ray_paths);
    return out;
}

inline json to_json(const SurjectionEnumeration& en) {
    json out;
    out["$schema"] = "tropex/surjections.schema.json";
    out["complete"] = en.complete;
    out["cells"] = en.cells;
    json types = json::array();
    for (const auto& t : en.types) {
        json jt;
        jt["graph"] = to_json(EmbeddedOneComplex{t.graph, {}});
        jt["surjection"] = to_json(t.surj);
        jt["cone"] = to_json(t.sub_cone);
        jt["witness"] = to_json(t.witness);
        types.push_back(jt);
    }
    out["types"] = types;
    return out;
}

inline json to_json(const ConeSpaceFragment& frag) {
    json out;
    out["$schema"] = "tropex/fragment.schema.json";
    out["sigma"] = to_json(frag.sigma);
    json types = json::array();
    for (const auto& t : frag.types) types.push_back(to_json(EmbeddedOneComplex{t, {}}));
    out["types"] = types;
    json subs = json::array();
    for (const auto& s : frag.subdivisions) subs.push_back(to_json(s));
    out["subdivisions"] = subs;
    json arrows = json::array();
    for (const auto& a : frag.arrows) {
        json ja;
        ja["from"] = a.from_type;
        ja["to"] = a.to_type;
        ja["surjection"] = to_json(a.surj);
        arrows.push_back(ja);
    }
    out["arrows"] = arrows;
    json auts = json::array();
    for (const auto& per_type : frag.automorphisms) {
        json a = json::array();
        for (const auto& perm : per_type) a.push_back(perm);
        auts.push_back(a);
    }
    out["automorphisms"] = auts;
    json cones = json::array();
    for (const auto& info : frag.cones) {
        json jc;
        jc["type"] = info.type;
        jc["cone"] = info.cone;
        jc["fiber_type"] = info.fiber_type;
        jc["tube_vertices"] = info.tube_vertices;
        jc["integral_lattice"] = to_json(info.integral_lattice);
        cones.push_back(jc);
    }
    out["cones"] = cones;
    out["barycentric_realized"] = frag.barycentric_realized;
    return out;
}

// ----- secondary fans --------------------------------------------------------------------

inline json to_json(const RegularSubdivision& s) {
    json out;
    out["$schema"] = "tropex/subdivision.schema.json";
    out["d"] = s.d;
    json cells = json::array();
    for (const auto& c : s.cells) cells.push_back(c);
    out["cells"] = cells;
    out["heights"] = to_json(s.witness_heights);
    return out;
}

inline json to_json(const SecondaryFanReport& rep, int d) {
    json out;
    out["$schema"] = "tropex/secondary.schema.json";
    out["d"] = d;
    out["count"] = rep.count;
    out["covers"] = rep.covers;
    out["pairwise_faces"] = rep.pairwise_faces;
    out["all_triangulations"] = rep.all_triangulations;
    out["all_unimodular"] = rep.all_unimodular;
    json maximal = json::array();
    for (const auto& sc : rep.maximal) {
        json jm;
        json cells = json::array();
        for (const auto& c : sc.subdivision.cells) cells.push_back(c);
        jm["cells"] = cells;
        jm["cone"] = to_json(sc.cone);
        maximal.push_back(jm);
    }
    out["maximal"] = maximal;
    return out;
}

}  // namespace tropex
