#pragma once

#include "tropex/linalg.hpp"
#include "tropex/errors.hpp"

namespace tropex {

// Convex hull of planar points, counterclockwise corner indices (monotone
// chain); collinear boundary points are dropped.
inline std::vector<int> convex_hull_2d(const std::vector<IVec>& pts) {
    std::vector<int> idx(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](int a, int b) { return pts[a] == pts[b]; }),
              idx.end());
    if (idx.size() <= 2) return idx;
    auto cross = [&](int o, int a, int b) -> Int {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<int> h(2 * idx.size());
    size_t k = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
        h[k++] = idx[i];
    }
    size_t lower = k + 1;
    for (size_t i = idx.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
        h[k++] = idx[i];
    }
    h.resize(k - 1);
    return h;
}

// Cells of the regular subdivision of a planar point configuration induced
// by lifting to the given heights and projecting the lower hull. Each cell
// is the full tied set, as sorted point indices. Requires an affinely
// 2-dimensional configuration.
inline std::vector<std::vector<int>> regular_subdivision_2d(const std::vector<IVec>& pts,
                                                            const QVec& heights) {
    size_t n = pts.size();
    if (heights.size() != n)
        throw Error(ErrorCode::BadIndex, "height vector length mismatch");
    std::set<std::vector<int>> cells;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                // affine function a*x + b*y + c matching the lift on i, j, k
                QMat m{{Rat(pts[i][0]), Rat(pts[i][1]), Rat(1)},
                       {Rat(pts[j][0]), Rat(pts[j][1]), Rat(1)},
                       {Rat(pts[k][0]), Rat(pts[k][1]), Rat(1)}};
                auto sol = solve(m, {heights[i], heights[j], heights[k]}, 3);
                if (!sol) continue;
                Rat det = m[0][0] * (m[1][1] - m[2][1]) - m[0][1] * (m[1][0] - m[2][0]) +
                          (m[1][0] * m[2][1] - m[2][0] * m[1][1]);
                if (det == 0) continue;  // collinear triple
                std::vector<int> cell;
                bool lower = true;
                for (size_t q = 0; q < n && lower; ++q) {
                    Rat val = (*sol)[0] * Rat(pts[q][0]) + (*sol)[1] * Rat(pts[q][1]) + (*sol)[2];
                    if (heights[q] < val) lower = false;
                    else if (heights[q] == val) cell.push_back(static_cast<int>(q));
                }
                if (lower) cells.insert(cell);
            }
    if (cells.empty())
        throw Error(ErrorCode::InternalError, "no lower facet found");
    return {cells.begin(), cells.end()};
}

// A wall of a planar subdivision: a maximal boundary segment of a cell,
// described by its extreme points, with the cells on its sides.
struct SubdivisionWall {
    IVec from, to;     // endpoints, lex-ordered
    int cell_a = -1;   // incident cells
    int cell_b = -1;   // -1 when the wall lies on the hull boundary
    Int lattice_length() const {
        IVec d(from.size());
        for (size_t i = 0; i < from.size(); ++i) d[i] = to[i] - from[i];
        Int g = 0;
        for (const auto& x : d) g = gcd(g, x);
        return g;
    }
};

inline std::vector<SubdivisionWall> subdivision_walls(const std::vector<IVec>& pts,
                                                      const std::vector<std::vector<int>>& cells) {
    std::map<std::pair<IVec, IVec>, std::vector<int>> edge_cells;
    for (size_t c = 0; c < cells.size(); ++c) {
        std::vector<IVec> sub;
        for (int i : cells[c]) sub.push_back(pts[i]);
        std::vector<int> hull = convex_hull_2d(sub);
        for (size_t i = 0; i < hull.size(); ++i) {
            IVec a = sub[hull[i]];
            IVec b = sub[hull[(i + 1) % hull.size()]];
            if (lex_less(b, a)) std::swap(a, b);
            edge_cells[{a, b}].push_back(static_cast<int>(c));
        }
    }
    std::vector<SubdivisionWall> walls;
    for (const auto& [e, cs] : edge_cells) {
        SubdivisionWall w;
        w.from = e.first;
        w.to = e.second;
        w.cell_a = cs[0];
        if (cs.size() == 2) w.cell_b = cs[1];
        else if (cs.size() > 2)
            throw Error(ErrorCode::InternalError, "wall shared by more than two cells");
        walls.push_back(w);
    }
    return walls;
}

}  // namespace tropex
