#pragma once

#include <map>
#include <optional>
#include <set>

#include "tropex/errors.hpp"
#include "tropex/linalg.hpp"

namespace tropex {

// Output of the double description pass: extreme rays plus a lineality basis.
struct DDResult {
    IMat rays;
    IMat lineality;
};

namespace detail {

// Double description for { x in R^k : a·x >= 0 for all a }, maintaining the
// set of tight constraints per ray for the combinatorial adjacency test.
inline DDResult dd_inequalities(const IMat& ineqs, size_t k) {
    IMat lin = identity_matrix(k);
    IMat rays;
    std::vector<std::set<size_t>> tight;

    for (size_t idx = 0; idx < ineqs.size(); ++idx) {
        const IVec& a = ineqs[idx];
        if (is_zero(a)) continue;

        // case 1: the constraint is nonzero on the lineality space
        size_t l0 = lin.size();
        for (size_t i = 0; i < lin.size(); ++i)
            if (dot(a, lin[i]) != 0) { l0 = i; break; }
        if (l0 < lin.size()) {
            IVec pivot = lin[l0];
            Int ap = dot(a, pivot);
            if (ap < 0) { pivot = negate(pivot); ap = -ap; }
            IMat new_lin;
            for (size_t i = 0; i < lin.size(); ++i) {
                if (i == l0) continue;
                Int ai = dot(a, lin[i]);
                IVec w(k);
                for (size_t j = 0; j < k; ++j) w[j] = ap * lin[i][j] - ai * pivot[j];
                new_lin.push_back(primitive(w));
            }
            for (size_t i = 0; i < rays.size(); ++i) {
                Int ar = dot(a, rays[i]);
                if (ar != 0) {
                    IVec w(k);
                    for (size_t j = 0; j < k; ++j) w[j] = ap * rays[i][j] - ar * pivot[j];
                    rays[i] = primitive(w);
                }
                tight[i].insert(idx);
            }
            rays.push_back(pivot);
            std::set<size_t> z;
            for (size_t pidx = 0; pidx < idx; ++pidx) z.insert(pidx);
            tight.push_back(z);
            lin = new_lin;
            continue;
        }

        // case 2: split rays by sign
        std::vector<int> sign(rays.size());
        bool has_neg = false;
        for (size_t i = 0; i < rays.size(); ++i) {
            sign[i] = sgn(dot(a, rays[i]));
            if (sign[i] < 0) has_neg = true;
        }
        if (!has_neg) {
            for (size_t i = 0; i < rays.size(); ++i)
                if (sign[i] == 0) tight[i].insert(idx);
            continue;
        }
        IMat new_rays;
        std::vector<std::set<size_t>> new_tight;
        for (size_t i = 0; i < rays.size(); ++i) {
            if (sign[i] < 0) continue;
            new_rays.push_back(rays[i]);
            auto z = tight[i];
            if (sign[i] == 0) z.insert(idx);
            new_tight.push_back(z);
        }
        for (size_t p = 0; p < rays.size(); ++p) {
            if (sign[p] <= 0) continue;
            for (size_t n = 0; n < rays.size(); ++n) {
                if (sign[n] >= 0) continue;
                std::set<size_t> common;
                for (size_t c : tight[p])
                    if (tight[n].count(c)) common.insert(c);
                bool adjacent = true;
                for (size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == n) continue;
                    bool subset = true;
                    for (size_t c : common)
                        if (!tight[r].count(c)) { subset = false; break; }
                    if (subset) adjacent = false;
                }
                if (!adjacent) continue;
                Int ap = dot(a, rays[p]), an = dot(a, rays[n]);
                IVec w(k);
                for (size_t j = 0; j < k; ++j) w[j] = ap * rays[n][j] - an * rays[p][j];
                common.insert(idx);
                new_rays.push_back(primitive(w));
                new_tight.push_back(common);
            }
        }
        rays = new_rays;
        tight = new_tight;
    }

    // dedupe (possible when the input system is degenerate)
    std::set<IVec, bool (*)(const IVec&, const IVec&)> seen(
        +[](const IVec& a, const IVec& b) { return lex_less(a, b); });
    IMat out;
    for (auto& r : rays)
        if (!is_zero(r) && seen.insert(r).second) out.push_back(r);
    std::sort(out.begin(), out.end(), [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    return {out, lin};
}

}  // namespace detail

// Rays and lineality of { x : ineq·x >= 0, eq·x = 0 } in R^n. Works inside
// the saturated solution subspace of the equations, so emitted rays are
// primitive in the ambient lattice.
inline DDResult dd_solve(const IMat& ineqs, const IMat& eqs, size_t n) {
    IMat basis = eqs.empty() ? identity_matrix(n) : integer_kernel(eqs, n);
    size_t k = basis.size();
    if (k == 0) return {{}, {}};
    IMat sub_ineqs;
    sub_ineqs.reserve(ineqs.size());
    for (const auto& a : ineqs) {
        IVec a2(k);
        for (size_t j = 0; j < k; ++j) a2[j] = dot(a, basis[j]);
        sub_ineqs.push_back(a2);
    }
    DDResult sub = detail::dd_inequalities(sub_ineqs, k);
    auto lift = [&](const IMat& vs) {
        IMat out;
        for (const auto& v : vs) {
            IVec w(n, 0);
            for (size_t j = 0; j < k; ++j)
                for (size_t c = 0; c < n; ++c) w[c] += v[j] * basis[j][c];
            out.push_back(w);
        }
        return out;
    };
    return {lift(sub.rays), lift(sub.lineality)};
}

// Rational polyhedral cone, strongly convex, with V- and H-descriptions and
// the integral structure induced from the ambient lattice unless an explicit
// sublattice is attached.
struct Cone {
    int ambient_dim = 0;
    IMat rays;               // primitive, lex-sorted, pairwise distinct
    IMat halfspaces;         // irredundant facet normals
    IMat span_equations;     // covectors cutting out the linear span
    std::optional<IMat> lattice;  // explicit sublattice basis (rows), HNF
    int dim = 0;

    bool operator==(const Cone& o) const {
        return ambient_dim == o.ambient_dim && rays == o.rays && lattice == o.lattice;
    }
    bool operator<(const Cone& o) const {
        if (ambient_dim != o.ambient_dim) return ambient_dim < o.ambient_dim;
        if (dim != o.dim) return dim < o.dim;
        if (rays.size() != o.rays.size()) return rays.size() < o.rays.size();
        for (size_t i = 0; i < rays.size(); ++i) {
            int c = lex_cmp(rays[i], o.rays[i]);
            if (c != 0) return c < 0;
        }
        if (lattice.has_value() != o.lattice.has_value()) return !lattice.has_value();
        if (lattice && *lattice != *o.lattice) return *lattice < *o.lattice;
        return false;
    }
};

inline Cone make_cone(int ambient_dim, const std::vector<QVec>& generators,
                      std::optional<IMat> sublattice = std::nullopt) {
    if (ambient_dim < 0) throw Error(ErrorCode::DimensionMismatch, "negative ambient dimension");
    size_t n = static_cast<size_t>(ambient_dim);
    IMat gens;
    for (const auto& g : generators) {
        if (g.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "generator has wrong length");
        IVec p = primitive(g);
        if (!is_zero(p)) gens.push_back(p);
    }

    // V -> H: generators of the dual cone are the facet normals; the dual
    // lineality cuts out the span.
    DDResult dual = dd_solve(gens, {}, n);
    Cone c;
    c.ambient_dim = ambient_dim;
    c.halfspaces = dual.rays;
    c.span_equations = hermite_normal_form(dual.lineality);

    // strong convexity: the dual must span the ambient space
    IMat dual_all = dual.rays;
    for (const auto& v : dual.lineality) dual_all.push_back(v);
    IMat line = integer_kernel(dual_all, n);
    if (!line.empty())
        throw Error(ErrorCode::NotStronglyConvex,
                    "cone contains the line through " + [&] {
                        std::string s = "(";
                        for (size_t i = 0; i < line[0].size(); ++i)
                            s += (i ? "," : "") + line[0][i].get_str();
                        return s + ")";
                    }());

    // H -> V: recover the extreme rays from the computed facets
    DDResult primal = dd_solve(c.halfspaces, c.span_equations, n);
    c.rays = primal.rays;
    std::sort(c.rays.begin(), c.rays.end(),
              [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    std::sort(c.halfspaces.begin(), c.halfspaces.end(),
              [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    c.dim = ambient_dim - static_cast<int>(c.span_equations.size());
    if (sublattice) c.lattice = hermite_normal_form(*sublattice);
    return c;
}

inline Cone make_cone(int ambient_dim, const IMat& generators,
                      std::optional<IMat> sublattice = std::nullopt) {
    std::vector<QVec> g;
    g.reserve(generators.size());
    for (const auto& v : generators) g.push_back(to_rational(v));
    return make_cone(ambient_dim, g, std::move(sublattice));
}

inline Cone zero_cone(int ambient_dim) { return make_cone(ambient_dim, IMat{}); }

// Cone cut out by inequalities and equations; NotStronglyConvex if the
// solution set contains a line.
inline Cone cone_from_inequalities(int ambient_dim, const IMat& ineqs, const IMat& eqs) {
    DDResult r = dd_solve(ineqs, eqs, static_cast<size_t>(ambient_dim));
    if (!r.lineality.empty())
        throw Error(ErrorCode::NotStronglyConvex, "inequality system admits a line");
    return make_cone(ambient_dim, r.rays);
}

inline bool contains(const Cone& c, const QVec& x) {
    for (const auto& e : c.span_equations)
        if (dot(e, x) != 0) return false;
    for (const auto& h : c.halfspaces)
        if (dot(h, x) < 0) return false;
    return true;
}

inline bool contains(const Cone& c, const IVec& x) { return contains(c, to_rational(x)); }

inline bool in_relative_interior(const Cone& c, const QVec& x) {
    for (const auto& e : c.span_equations)
        if (dot(e, x) != 0) return false;
    for (const auto& h : c.halfspaces)
        if (dot(h, x) <= 0) return false;
    return true;
}

inline bool contains_cone(const Cone& outer, const Cone& inner) {
    if (outer.ambient_dim != inner.ambient_dim) return false;
    if (inner.rays.empty()) return true;
    for (const auto& r : inner.rays)
        if (!contains(outer, r)) return false;
    return true;
}

inline QVec relint_sample(const Cone& c) {
    QVec x(c.ambient_dim, Rat(0));
    for (const auto& r : c.rays)
        for (int j = 0; j < c.ambient_dim; ++j) x[j] += Rat(r[j]);
    return x;
}

inline Cone intersect(const Cone& a, const Cone& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw Error(ErrorCode::AmbientMismatch, "cone intersection across ambient spaces");
    IMat ineqs = a.halfspaces;
    for (const auto& h : b.halfspaces) ineqs.push_back(h);
    IMat eqs = a.span_equations;
    for (const auto& e : b.span_equations) eqs.push_back(e);
    return cone_from_inequalities(a.ambient_dim, ineqs, eqs);
}

// The lattice of the cone: explicit sublattice when attached, otherwise the
// saturation span(c) ∩ Z^n.
inline IMat cone_lattice(const Cone& c) {
    if (c.lattice) return *c.lattice;
    return saturation_basis(c.rays, static_cast<size_t>(c.ambient_dim));
}

inline std::vector<Cone> facets(const Cone& c) {
    std::vector<Cone> out;
    for (const auto& h : c.halfspaces) {
        IMat sub;
        for (const auto& r : c.rays)
            if (dot(h, r) == 0) sub.push_back(r);
        out.push_back(make_cone(c.ambient_dim, sub, c.lattice));
    }
    return out;
}

inline std::vector<Cone> all_faces(const Cone& c) {
    std::set<Cone> seen;
    std::vector<Cone> queue{c};
    seen.insert(c);
    for (size_t i = 0; i < queue.size(); ++i) {
        for (auto& f : facets(queue[i]))
            if (seen.insert(f).second) queue.push_back(f);
    }
    return {queue.begin(), queue.end()};
}

inline bool is_face_of(const Cone& f, const Cone& c) {
    if (f.ambient_dim != c.ambient_dim) return false;
    if (!contains_cone(c, f)) return false;
    if (f == c) return true;
    // rays of c on which every c-halfspace vanishing on f also vanishes
    IMat active;
    for (const auto& h : c.halfspaces) {
        bool on_f = true;
        for (const auto& r : f.rays)
            if (dot(h, r) != 0) { on_f = false; break; }
        if (on_f) active.push_back(h);
    }
    IMat sub;
    for (const auto& r : c.rays) {
        bool keep = true;
        for (const auto& h : active)
            if (dot(h, r) != 0) { keep = false; break; }
        if (keep) sub.push_back(r);
    }
    return sub == f.rays;
}

// True when the rays extend to a basis of the cone's lattice: simplicial and
// unimodular. The zero cone is vacuously smooth.
inline bool is_smooth(const Cone& c) {
    if (c.rays.empty()) return true;
    if (static_cast<int>(c.rays.size()) != c.dim) return false;
    IMat lat = cone_lattice(c);
    Int idx = lattice_index(lat, c.rays, static_cast<size_t>(c.ambient_dim));
    return idx == 1;
}

// Multiplicity of a simplicial cone: the index of the ray lattice in the
// cone's lattice. Returns 0 for non-simplicial cones.
inline Int smoothness_index(const Cone& c) {
    if (c.rays.empty()) return 1;
    if (static_cast<int>(c.rays.size()) != c.dim) return 0;
    return lattice_index(cone_lattice(c), c.rays, static_cast<size_t>(c.ambient_dim));
}

inline Cone apply_linear_map(const IMat& map_rows, const Cone& c) {
    IMat imgs;
    for (const auto& r : c.rays) imgs.push_back(apply_map(map_rows, r));
    return make_cone(static_cast<int>(map_rows.size()), imgs);
}

}  // namespace tropex
