#pragma once

// Right nullspace over Q(m) of a matrix with entries in Q[m].

#include <vector>

#include "poly.hpp"

namespace rf {

using PolyMatrix = std::vector<std::vector<Poly>>;
using PolyVector = std::vector<Poly>;

namespace detail {

inline Poly row_content(const std::vector<Poly>& row) {
    Poly g;
    for (const auto& p : row) {
        if (p.is_zero()) continue;
        g = g.is_zero() ? p.monic() : poly_gcd(g, p);
        if (g.degree() == 0) break;
    }
    return g;
}

// Divide by the polynomial gcd and make the coefficients coprime integers.
inline void make_primitive(std::vector<Poly>& row) {
    Poly g = row_content(row);
    if (g.is_zero()) return;
    mpz_class num = 0, den = 1;
    for (auto& p : row) {
        if (p.is_zero()) continue;
        if (g.degree() > 0) p = Poly::exact_div(p, g);
        Rational c = p.content();
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rational s = make_rational(den, num);
    for (auto& p : row) p = s * p;
}

}  // namespace detail

// Fraction-free Gauss-Jordan: row ops are cross-multiplications followed by
// content removal, so entries never leave Q[m]. Each returned vector is
// primitive and its last nonzero entry has a positive leading coefficient.
inline std::vector<PolyVector> solve_nullspace(PolyMatrix M) {
    if (M.empty()) return {};
    size_t rows = M.size(), cols = M[0].size();
    for (auto& r : M) {
        if (r.size() != cols) throw ValidationError("ragged matrix");
        detail::make_primitive(r);
    }
    std::vector<int> pivot_col;
    size_t prow = 0;
    for (size_t c = 0; c < cols && prow < rows; ++c) {
        // smallest-degree nonzero pivot keeps products short
        size_t best = rows;
        for (size_t r = prow; r < rows; ++r) {
            if (M[r][c].is_zero()) continue;
            if (best == rows || M[r][c].degree() < M[best][c].degree()) best = r;
        }
        if (best == rows) continue;
        std::swap(M[prow], M[best]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == prow || M[r][c].is_zero()) continue;
            Poly g = poly_gcd(M[prow][c], M[r][c]);
            Poly a = Poly::exact_div(M[prow][c], g), b = Poly::exact_div(M[r][c], g);
            for (size_t j = 0; j < cols; ++j) M[r][j] = a * M[r][j] - b * M[prow][j];
            detail::make_primitive(M[r]);
        }
        pivot_col.push_back(static_cast<int>(c));
        ++prow;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;

    std::vector<PolyVector> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        // x_f = L, x_pivot(i) = -M[i][f] * L / d_i with L = lcm of pivots
        Poly L(1);
        for (size_t i = 0; i < pivot_col.size(); ++i) {
            if (!M[i][f].is_zero()) L = poly_lcm(L, M[i][static_cast<size_t>(pivot_col[i])]);
        }
        PolyVector v(cols);
        v[f] = L;
        for (size_t i = 0; i < pivot_col.size(); ++i) {
            if (M[i][f].is_zero()) continue;
            const Poly& d = M[i][static_cast<size_t>(pivot_col[i])];
            v[static_cast<size_t>(pivot_col[i])] = -(Poly::exact_div(L, d) * M[i][f]);
        }
        detail::make_primitive(v);
        for (size_t j = cols; j-- > 0;) {
            if (v[j].is_zero()) continue;
            if (v[j].lead() < 0)
                for (auto& p : v) p = -p;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace rf
