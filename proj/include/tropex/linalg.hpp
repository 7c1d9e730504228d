#pragma once

#include <algorithm>
#include <cassert>
#include <optional>

#include "tropex/rational.hpp"

namespace tropex {

using QMat = std::vector<QVec>;  // rows
using IMat = std::vector<IVec>;

inline QMat to_rational(const IMat& m) {
    QMat r;
    r.reserve(m.size());
    for (const auto& v : m) r.push_back(to_rational(v));
    return r;
}

inline IMat identity_matrix(size_t n) {
    IMat id(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

inline size_t rank(QMat m) {
    size_t rows = m.size();
    if (rows == 0) return 0;
    size_t cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

inline size_t rank(const IMat& m) { return rank(to_rational(m)); }

// Unique solution of M x = b (column-vector x); nullopt when inconsistent.
// Free variables are set to 0.
inline std::optional<QVec> solve(const QMat& m, const QVec& b, size_t cols) {
    QMat a = m;
    QVec rhs = b;
    size_t rows = a.size();
    std::vector<std::pair<size_t, size_t>> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        std::swap(rhs[r], rhs[piv]);
        Rat p = a[r][c];
        for (size_t j = 0; j < cols; ++j) a[r][j] /= p;
        rhs[r] /= p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivots.emplace_back(r, c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    QVec x(cols, Rat(0));
    for (auto [row, col] : pivots) x[col] = rhs[row];
    return x;
}

// Smith normal form: returns diagonal entries of D where U * A * V = D,
// U and V unimodular, d_1 | d_2 | ... Optional transform outputs.
inline IVec smith_normal_form(IMat a, IMat* u_out = nullptr, IMat* v_out = nullptr) {
    size_t rows = a.size();
    size_t cols = rows == 0 ? 0 : a[0].size();
    IMat u = identity_matrix(rows), v = identity_matrix(cols);

    auto swap_rows = [&](size_t i, size_t j) { std::swap(a[i], a[j]); std::swap(u[i], u[j]); };
    auto swap_cols = [&](size_t i, size_t j) {
        for (size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
        for (size_t r = 0; r < cols; ++r) std::swap(v[r][i], v[r][j]);
    };
    auto add_row = [&](size_t dst, size_t src, const Int& f) {
        for (size_t c = 0; c < cols; ++c) a[dst][c] += f * a[src][c];
        for (size_t c = 0; c < rows; ++c) u[dst][c] += f * u[src][c];
    };
    auto add_col = [&](size_t dst, size_t src, const Int& f) {
        for (size_t r = 0; r < rows; ++r) a[r][dst] += f * a[r][src];
        for (size_t r = 0; r < cols; ++r) v[r][dst] += f * v[r][src];
    };
    auto negate_row = [&](size_t i) {
        for (size_t c = 0; c < cols; ++c) a[i][c] = -a[i][c];
        for (size_t c = 0; c < rows; ++c) u[i][c] = -u[i][c];
    };

    size_t t = 0;
    while (t < rows && t < cols) {
    restart:
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pi][pj]))) {
                    pi = i; pj = j; found = true;
                }
        if (!found) break;
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);
        for (size_t i = t + 1; i < rows; ++i)
            if (a[i][t] != 0) {
                Int q = a[i][t] / a[t][t];
                add_row(i, t, -q);
                if (a[i][t] != 0) goto restart;  // remainder smaller than pivot
            }
        for (size_t j = t + 1; j < cols; ++j)
            if (a[t][j] != 0) {
                Int q = a[t][j] / a[t][t];
                add_col(j, t, -q);
                if (a[t][j] != 0) goto restart;
            }
        for (size_t i = t + 1; i < rows; ++i)
            for (size_t j = t + 1; j < cols; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    add_row(t, i, 1);
                    goto restart;
                }
        if (a[t][t] < 0) negate_row(t);
        ++t;
    }
    IVec d(std::min(rows, cols), 0);
    for (size_t i = 0; i < d.size(); ++i) d[i] = a[i][i];
    if (u_out) *u_out = u;
    if (v_out) *v_out = v;
    return d;
}

// Basis of the full integer solution lattice {x in Z^cols : M x = 0}
// (row-of-M dot x = 0 for every row). The returned rows generate a
// saturated lattice.
inline IMat integer_kernel(const IMat& m, size_t cols) {
    if (m.empty()) return identity_matrix(cols);
    IMat v;
    IVec d = smith_normal_form(m, nullptr, &v);
    size_t r = 0;
    for (const auto& x : d)
        if (x != 0) ++r;
    IMat basis;
    for (size_t j = r; j < cols; ++j) {
        IVec col(cols);
        for (size_t i = 0; i < cols; ++i) col[i] = v[i][j];
        basis.push_back(primitive(col));
    }
    return basis;
}

inline IMat integerize_rows(const QMat& m) {
    IMat r;
    r.reserve(m.size());
    for (const auto& row : m) r.push_back(primitive(row));
    return r;
}

inline IMat integer_kernel(const QMat& m, size_t cols) {
    return integer_kernel(integerize_rows(m), cols);
}

// Basis of the saturation span_Q(rows) ∩ Z^n.
inline IMat saturation_basis(const IMat& m, size_t cols) {
    if (m.empty()) return {};
    IMat ker = integer_kernel(m, cols);
    if (ker.empty()) return identity_matrix(cols);
    return integer_kernel(ker, cols);
}

// Row-style Hermite normal form; dependent rows dropped.
inline IMat hermite_normal_form(IMat a) {
    size_t rows = a.size();
    if (rows == 0) return a;
    size_t cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            size_t piv = rows;
            for (size_t i = r; i < rows; ++i)
                if (a[i][c] != 0 && (piv == rows || abs(a[i][c]) < abs(a[piv][c]))) piv = i;
            if (piv == rows) break;
            std::swap(a[r], a[piv]);
            bool done = true;
            for (size_t i = r + 1; i < rows; ++i)
                if (a[i][c] != 0) {
                    Int q = a[i][c] / a[r][c];
                    for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                    if (a[i][c] != 0) done = false;
                }
            if (done) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) a[r][j] = -a[r][j];
        for (size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

// Does v lie in the lattice generated by the rows of basis?
inline bool lattice_contains(const IMat& basis, const IVec& v, size_t cols) {
    if (is_zero(v)) return true;
    if (basis.empty()) return false;
    QMat bt(cols, QVec(basis.size()));
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < cols; ++j) bt[j][i] = Rat(basis[i][j]);
    auto x = solve(bt, to_rational(v), basis.size());
    if (!x) return false;
    for (const auto& c : *x)
        if (!is_integer(c)) return false;
    QVec chk(cols, Rat(0));
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < cols; ++j) chk[j] += (*x)[i] * Rat(basis[i][j]);
    for (size_t j = 0; j < cols; ++j)
        if (chk[j] != Rat(v[j])) return false;
    return true;
}

inline bool lattice_equal(const IMat& a, const IMat& b, size_t cols) {
    for (const auto& v : a)
        if (!lattice_contains(b, v, cols)) return false;
    for (const auto& v : b)
        if (!lattice_contains(a, v, cols)) return false;
    return true;
}

// Index [big : small] for small ⊆ big of equal rank; 0 when not nested or
// ranks differ.
inline Int lattice_index(const IMat& big, const IMat& small, size_t cols) {
    for (const auto& v : small)
        if (!lattice_contains(big, v, cols)) return 0;
    IMat hb = hermite_normal_form(big), hs = hermite_normal_form(small);
    if (hb.size() != hs.size()) return 0;
    size_t k = hb.size();
    if (k == 0) return 1;
    QMat bt(cols, QVec(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < cols; ++j) bt[j][i] = Rat(hb[i][j]);
    QMat coords(k, QVec(k));
    for (size_t i = 0; i < k; ++i) {
        auto x = solve(bt, to_rational(hs[i]), k);
        if (!x) return 0;
        coords[i] = *x;
    }
    Rat det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t piv = c;
        while (piv < k && coords[piv][c] == 0) ++piv;
        if (piv == k) return 0;
        if (piv != c) { std::swap(coords[piv], coords[c]); det = -det; }
        det *= coords[c][c];
        for (size_t i = c + 1; i < k; ++i) {
            if (coords[i][c] == 0) continue;
            Rat f = coords[i][c] / coords[c][c];
            for (size_t j = c; j < k; ++j) coords[i][j] -= f * coords[c][j];
        }
    }
    Rat a = abs(det);
    if (!is_integer(a)) return 0;
    return a.get_num();
}

// Integer projection Z^n -> Z^{n-k} whose kernel is the saturation of the
// row span of `sub`. Rows of the result are the quotient coordinates.
inline IMat lattice_quotient_map(const IMat& sub, size_t cols) {
    IMat sat = saturation_basis(sub, cols);
    size_t k = sat.size();
    if (k == 0) return identity_matrix(cols);
    IMat v;
    smith_normal_form(sat, nullptr, &v);
    // sat * V is supported in the first k coordinates, so x -> last n-k
    // coordinates of x * V kills exactly the saturation.
    IMat q;
    for (size_t j = k; j < cols; ++j) {
        IVec row(cols);
        for (size_t i = 0; i < cols; ++i) row[i] = v[i][j];
        q.push_back(row);
    }
    return q;
}

inline IVec apply_map(const IMat& rows, const IVec& x) {
    IVec y(rows.size(), 0);
    for (size_t i = 0; i < rows.size(); ++i) y[i] = dot(rows[i], x);
    return y;
}

inline QVec apply_map(const IMat& rows, const QVec& x) {
    QVec y(rows.size(), Rat(0));
    for (size_t i = 0; i < rows.size(); ++i) y[i] = dot(rows[i], x);
    return y;
}

inline QVec apply_map(const QMat& rows, const QVec& x) {
    QVec y(rows.size(), Rat(0));
    for (size_t i = 0; i < rows.size(); ++i) y[i] = dot(rows[i], x);
    return y;
}

// Intersection of the lattices generated by the rows of a and b.
inline IMat lattice_intersection(const IMat& a, const IMat& b, size_t cols) {
    if (a.empty() || b.empty()) return {};
    size_t ra = a.size(), rb = b.size();
    // x = s*a = t*b; integer solutions (s,t) of s*a - t*b = 0
    IMat sys(cols, IVec(ra + rb, 0));
    for (size_t j = 0; j < cols; ++j) {
        for (size_t i = 0; i < ra; ++i) sys[j][i] = a[i][j];
        for (size_t i = 0; i < rb; ++i) sys[j][ra + i] = -b[i][j];
    }
    IMat ker = integer_kernel(sys, ra + rb);
    IMat gens;
    for (const auto& st : ker) {
        IVec x(cols, 0);
        for (size_t i = 0; i < ra; ++i)
            for (size_t j = 0; j < cols; ++j) x[j] += st[i] * a[i][j];
        if (!is_zero(x)) gens.push_back(x);
    }
    return hermite_normal_form(gens);
}

}  // namespace tropex
