#pragma once

#include <map>
#include <string>

#include "tropex/cone.hpp"

namespace tropex {

struct FaceMap {
    int child = 0;
    int parent = 0;
    bool operator==(const FaceMap&) const = default;
};

// Cones embedded in a common ambient space, closed under taking faces, with
// pairwise intersections required to be common faces. `single_face_regime`
// records which intersection regime the complex satisfies; embedded
// complexes always land in the single-face case when valid.
struct ConeComplex {
    int ambient_dim = 0;
    std::vector<Cone> cones;  // canonically sorted, faces included
    std::vector<FaceMap> face_maps;
    std::map<std::string, IVec> ray_names;
    bool single_face_regime = true;

    bool operator==(const ConeComplex& o) const {
        return ambient_dim == o.ambient_dim && cones == o.cones;
    }
};

inline ConeComplex make_complex(int ambient_dim, const std::vector<Cone>& input,
                                bool validate = true,
                                std::map<std::string, IVec> ray_names = {}) {
    std::set<Cone> closed;
    for (const auto& c : input) {
        if (c.ambient_dim != ambient_dim)
            throw Error(ErrorCode::AmbientMismatch, "cone in wrong ambient space");
        for (auto& f : all_faces(c)) closed.insert(f);
    }
    if (closed.empty()) closed.insert(zero_cone(ambient_dim));
    ConeComplex s;
    s.ambient_dim = ambient_dim;
    s.cones.assign(closed.begin(), closed.end());
    s.ray_names = std::move(ray_names);
    for (size_t i = 0; i < s.cones.size(); ++i)
        for (size_t j = 0; j < s.cones.size(); ++j)
            if (i != j && is_face_of(s.cones[i], s.cones[j]))
                s.face_maps.push_back({static_cast<int>(i), static_cast<int>(j)});
    if (validate) {
        for (size_t i = 0; i < s.cones.size(); ++i)
            for (size_t j = i + 1; j < s.cones.size(); ++j) {
                Cone m = intersect(s.cones[i], s.cones[j]);
                if (!is_face_of(m, s.cones[i]) || !is_face_of(m, s.cones[j]))
                    throw Error(ErrorCode::InvalidInput,
                                "cones " + std::to_string(i) + " and " + std::to_string(j) +
                                    " do not intersect in a common face");
            }
    }
    return s;
}

inline std::vector<int> maximal_cone_indices(const ConeComplex& s) {
    std::vector<bool> is_face(s.cones.size(), false);
    for (const auto& fm : s.face_maps) is_face[fm.child] = true;
    std::vector<int> out;
    for (size_t i = 0; i < s.cones.size(); ++i)
        if (!is_face[i]) out.push_back(static_cast<int>(i));
    return out;
}

// Primitive generators of the 1-dimensional cones, lex-sorted.
inline IMat complex_rays(const ConeComplex& s) {
    IMat out;
    for (const auto& c : s.cones)
        if (c.dim == 1) out.push_back(c.rays[0]);
    return out;
}

inline bool support_contains(const ConeComplex& s, const QVec& x) {
    for (const auto& c : s.cones)
        if (contains(c, x)) return true;
    return false;
}

// The unique cone whose relative interior contains x; -1 if x is outside
// the support.
inline int minimal_cone_index(const ConeComplex& s, const QVec& x) {
    int best = -1;
    for (size_t i = 0; i < s.cones.size(); ++i) {
        if (!contains(s.cones[i], x)) continue;
        if (best < 0 || s.cones[i].dim < s.cones[best].dim) best = static_cast<int>(i);
    }
    return best;
}

inline int cone_index_of(const ConeComplex& s, const Cone& c) {
    for (size_t i = 0; i < s.cones.size(); ++i)
        if (s.cones[i] == c) return static_cast<int>(i);
    return -1;
}

inline bool is_smooth(const ConeComplex& s) {
    for (const auto& c : s.cones)
        if (!is_smooth(c)) return false;
    return true;
}

// ----- star of a ray -------------------------------------------------------

// Quotient of the cones containing the given ray by its span, with the
// induced integral structure. `ray_index` indexes complex_rays(s).
inline ConeComplex star_of_ray(const ConeComplex& s, int ray_index) {
    IMat rays = complex_rays(s);
    if (ray_index < 0 || ray_index >= static_cast<int>(rays.size()))
        throw Error(ErrorCode::RayNotInComplex, "ray index out of range");
    const IVec& rho = rays[ray_index];
    IMat q = lattice_quotient_map({rho}, static_cast<size_t>(s.ambient_dim));
    std::vector<Cone> images;
    for (const auto& c : s.cones) {
        if (!contains(c, rho)) continue;
        bool has_rho = false;
        for (const auto& r : c.rays)
            if (r == rho) { has_rho = true; break; }
        if (!has_rho) continue;
        images.push_back(apply_linear_map(q, c));
    }
    return make_complex(s.ambient_dim - 1, images);
}

inline ConeComplex star_of_ray(const ConeComplex& s, const IVec& rho) {
    IMat rays = complex_rays(s);
    for (size_t i = 0; i < rays.size(); ++i)
        if (rays[i] == rho) return star_of_ray(s, static_cast<int>(i));
    throw Error(ErrorCode::RayNotInComplex, "no such ray in the complex");
}

// ----- common refinement ---------------------------------------------------

inline ConeComplex common_refinement(const ConeComplex& a, const ConeComplex& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw Error(ErrorCode::AmbientMismatch, "refinement across ambient spaces");
    std::vector<Cone> pieces;
    std::vector<int> amax = maximal_cone_indices(a), bmax = maximal_cone_indices(b);
    for (int i : amax)
        for (int j : bmax) {
            Cone m = intersect(a.cones[i], b.cones[j]);
            // propagate explicit sublattices where present
            if (a.cones[i].lattice || b.cones[j].lattice) {
                IMat la = cone_lattice(a.cones[i]);
                IMat lb = cone_lattice(b.cones[j]);
                IMat meet = lattice_intersection(la, lb, static_cast<size_t>(a.ambient_dim));
                IMat span_m = saturation_basis(m.rays, static_cast<size_t>(a.ambient_dim));
                m.lattice = hermite_normal_form(
                    lattice_intersection(meet, span_m, static_cast<size_t>(a.ambient_dim)));
            }
            pieces.push_back(m);
        }
    return make_complex(a.ambient_dim, pieces);
}

// ----- coverage and subdivision tests --------------------------------------

// Does the union of the given cones equal `sigma`? The cones must lie inside
// sigma and pairwise intersect in faces (complex pieces). Facet-matching
// argument: every facet of a top piece is either on the boundary of sigma or
// shared with exactly one other top piece.
inline bool covers(const Cone& sigma, const std::vector<Cone>& pieces) {
    std::vector<const Cone*> top;
    for (const auto& p : pieces)
        if (p.dim == sigma.dim) top.push_back(&p);
    if (sigma.dim == 0) return !pieces.empty();
    if (top.empty()) return false;
    std::map<Cone, int> facet_count;
    for (const auto* t : top)
        for (auto& f : facets(*t)) facet_count[f] += 1;
    for (const auto& [f, count] : facet_count) {
        if (count == 2) continue;
        if (count > 2) return false;
        bool on_boundary = false;
        for (const auto& h : sigma.halfspaces) {
            bool tight = true;
            for (const auto& r : f.rays)
                if (dot(h, r) != 0) { tight = false; break; }
            if (tight && !f.rays.empty()) { on_boundary = true; break; }
            if (f.rays.empty()) { on_boundary = true; break; }  // origin facet
        }
        if (!on_boundary) return false;
    }
    return true;
}

enum class SubdivisionKind { Proper, Partial, No };

inline const char* to_string(SubdivisionKind k) {
    switch (k) {
        case SubdivisionKind::Proper: return "proper";
        case SubdivisionKind::Partial: return "partial";
        case SubdivisionKind::No: return "no";
    }
    return "?";
}

// Three-valued subdivision test: "proper" when |D| = |S| and every cone of D
// sits in a cone of S with saturated integral points, "partial" when the
// support is strictly smaller, "no" otherwise.
inline SubdivisionKind is_subdivision(const ConeComplex& d, const ConeComplex& s,
                                      bool check_lattice = true) {
    if (d.ambient_dim != s.ambient_dim) return SubdivisionKind::No;
    size_t n = static_cast<size_t>(d.ambient_dim);
    for (const auto& tau : d.cones) {
        int host = -1;
        for (size_t i = 0; i < s.cones.size(); ++i) {
            if (!contains_cone(s.cones[i], tau)) continue;
            if (host < 0 || s.cones[i].dim < s.cones[host].dim) host = static_cast<int>(i);
        }
        if (host < 0) return SubdivisionKind::No;
        if (check_lattice) {
            IMat span_tau = saturation_basis(tau.rays, n);
            IMat induced = lattice_intersection(cone_lattice(s.cones[host]), span_tau, n);
            if (span_tau.empty()) induced.clear();
            if (!lattice_equal(cone_lattice(tau), induced, n)) return SubdivisionKind::No;
        }
    }
    bool full = true;
    for (int i : maximal_cone_indices(s)) {
        std::vector<Cone> inside;
        for (const auto& tau : d.cones)
            if (contains_cone(s.cones[i], tau)) inside.push_back(tau);
        if (!covers(s.cones[i], inside)) { full = false; break; }
    }
    return full ? SubdivisionKind::Proper : SubdivisionKind::Partial;
}

// Complete fan test: every maximal cone is top-dimensional and every facet
// of a maximal cone is shared by exactly two of them.
inline bool is_complete(const ConeComplex& s) {
    auto mx = maximal_cone_indices(s);
    if (mx.empty()) return false;
    std::map<Cone, int> facet_count;
    for (int i : mx) {
        if (s.cones[i].dim != s.ambient_dim) return false;
        for (auto& f : facets(s.cones[i])) facet_count[f] += 1;
    }
    for (const auto& [f, count] : facet_count)
        if (count != 2) return false;
    return s.ambient_dim > 0 || !s.cones.empty();
}

}  // namespace tropex
