#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gkzlab/matrix.hpp"

namespace gkzlab {

/// Smith decomposition U*M*V = S with U, V unimodular and S diagonal with
/// s1 | s2 | ... (nonnegative diagonal).
struct SmithResult {
    IntMat U, S, V;

    std::vector<Int> invariants() const {
        std::vector<Int> d;
        std::size_t n = std::min(S.rows(), S.cols());
        for (std::size_t i = 0; i < n; ++i)
            if (S(i, i) != 0) d.push_back(S(i, i));
        return d;
    }
    std::size_t rank() const { return invariants().size(); }
};

namespace detail {

inline void row_swap(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
inline void col_swap(IntMat& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row a += c * row b
inline void row_addmul(IntMat& m, std::size_t a, std::size_t b, const Int& c) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += c * m(b, j);
}
inline void col_addmul(IntMat& m, std::size_t a, std::size_t b, const Int& c) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += c * m(i, b);
}
inline void row_negate(IntMat& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}
inline void col_negate(IntMat& m, std::size_t a) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) = -m(i, a);
}

}  // namespace detail

inline SmithResult smith_normal_form(const IntMat& m) {
    using namespace detail;
    std::size_t R = m.rows(), C = m.cols();
    SmithResult res{IntMat::identity(R), m, IntMat::identity(C)};
    IntMat& S = res.S;
    IntMat& U = res.U;
    IntMat& V = res.V;

    std::size_t t = 0;
    std::size_t nmin = std::min(R, C);
    while (t < nmin) {
        // pivot: smallest nonzero |entry| in the remaining block
        std::size_t pi = t, pj = t;
        Int best = 0;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j) {
                Int a = abs(S(i, j));
                if (a != 0 && (best == 0 || a < best)) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0) break;  // remaining block is zero
        if (pi != t) {
            row_swap(S, t, pi);
            row_swap(U, t, pi);
        }
        if (pj != t) {
            col_swap(S, t, pj);
            col_swap(V, t, pj);
        }
        if (S(t, t) < 0) {
            row_negate(S, t);
            row_negate(U, t);
        }

        // Clear the pivot column to completion before touching the row (and
        // vice versa): interleaving the two lets remainder swaps feed partial
        // state into the other side's eliminations and entries explode.
        auto clear_column = [&] {
            bool swapped = true;
            while (swapped) {
                swapped = false;
                for (std::size_t i = t + 1; i < R; ++i) {
                    if (S(i, t) == 0) continue;
                    Int q = floor_div(S(i, t), S(t, t));
                    row_addmul(S, i, t, -q);
                    row_addmul(U, i, t, -q);
                    if (S(i, t) != 0) {  // remainder becomes the new, smaller pivot
                        row_swap(S, t, i);
                        row_swap(U, t, i);
                        swapped = true;
                    }
                }
            }
        };
        auto clear_row = [&] {
            bool swapped = true;
            while (swapped) {
                swapped = false;
                for (std::size_t j = t + 1; j < C; ++j) {
                    if (S(t, j) == 0) continue;
                    Int q = floor_div(S(t, j), S(t, t));
                    col_addmul(S, j, t, -q);
                    col_addmul(V, j, t, -q);
                    if (S(t, j) != 0) {
                        col_swap(S, t, j);
                        col_swap(V, t, j);
                        swapped = true;
                    }
                }
            }
        };
        auto column_clean = [&] {
            for (std::size_t i = t + 1; i < R; ++i)
                if (S(i, t) != 0) return false;
            return true;
        };
        auto row_clean = [&] {
            for (std::size_t j = t + 1; j < C; ++j)
                if (S(t, j) != 0) return false;
            return true;
        };

        while (true) {
            clear_column();
            if (!row_clean()) clear_row();
            if (!column_clean() || !row_clean()) continue;
            // the divisibility chain holds by construction: absorb any block
            // entry the pivot does not divide and re-reduce (the pivot then
            // strictly shrinks to a gcd, so this terminates)
            std::size_t bi = R;
            for (std::size_t i = t + 1; i < R && bi == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        bi = i;
                        break;
                    }
            if (bi == R) break;
            row_addmul(S, t, bi, 1);
            row_addmul(U, t, bi, 1);
        }
        ++t;
    }
    // contract: verify the factorization by exact re-multiplication
    if (res.U * m * res.V != S) throw std::logic_error("Smith factorization failed to verify");
    return res;
}

/// Row-style Hermite normal form: row echelon over Z, positive pivots, entries
/// above a pivot reduced into [0, pivot). Zero rows are dropped. The result is
/// the canonical basis of the row lattice.
inline IntMat hermite_normal_form(const IntMat& m) {
    using namespace detail;
    IntMat h = m;
    std::size_t R = h.rows(), C = h.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        // gcd-reduce column c below row r
        while (true) {
            std::size_t p = R;
            Int best = 0;
            for (std::size_t i = r; i < R; ++i) {
                Int a = abs(h(i, c));
                if (a != 0 && (best == 0 || a < best)) {
                    best = a;
                    p = i;
                }
            }
            if (p == R) break;
            if (p != r) row_swap(h, r, p);
            if (h(r, c) < 0) row_negate(h, r);
            bool done = true;
            for (std::size_t i = r + 1; i < R; ++i) {
                if (h(i, c) == 0) continue;
                Int q = floor_div(h(i, c), h(r, c));
                row_addmul(h, i, r, -q);
                if (h(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (h(r, c) != 0) {
            for (std::size_t i = 0; i < r; ++i) {
                Int q = floor_div(h(i, c), h(r, c));
                row_addmul(h, i, r, -q);
            }
            ++r;
        }
    }
    IntMat out(r, C);
    for (std::size_t i = 0; i < r; ++i) out.set_row(i, h.row(i));
    return out;
}

/// True iff the two row sets span the same lattice.
inline bool same_row_lattice(const IntMat& a, const IntMat& b) {
    return hermite_normal_form(a) == hermite_normal_form(b);
}

/// One integer solution x of M x = rhs, or nullopt if none exists.
inline std::optional<std::vector<Int>> solve_integer(const IntMat& m, const std::vector<Int>& rhs) {
    SmithResult sm = smith_normal_form(m);
    std::size_t R = m.rows(), C = m.cols();
    std::vector<Int> z(R, 0);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < R; ++j) z[i] += sm.U(i, j) * rhs[j];
    std::vector<Int> y(C, 0);
    std::size_t nmin = std::min(R, C);
    for (std::size_t i = 0; i < R; ++i) {
        Int s = (i < nmin) ? sm.S(i, i) : Int(0);
        if (s == 0) {
            if (z[i] != 0) return std::nullopt;
        } else {
            if (z[i] % s != 0) return std::nullopt;
            y[i] = z[i] / s;
        }
    }
    std::vector<Int> x(C, 0);
    for (std::size_t i = 0; i < C; ++i)
        for (std::size_t j = 0; j < C; ++j) x[i] += sm.V(i, j) * y[j];
    return x;
}

}  // namespace gkzlab
