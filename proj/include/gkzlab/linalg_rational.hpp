#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "gkzlab/matrix.hpp"

namespace gkzlab {

namespace detail {

inline void subsets_of_size(std::size_t n, std::size_t k, std::size_t start,
                            std::vector<std::size_t>& cur,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (cur.size() == k) {
        fn(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets_of_size(n, k, i + 1, cur, fn);
        cur.pop_back();
    }
}

}  // namespace detail

/// In-place reduced row echelon form; returns the pivot column indices.
inline std::vector<std::size_t> rref(RatMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
        Rat inv = m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }

inline std::size_t rank_int_rows(const std::vector<std::vector<Int>>& rows, std::size_t cols) {
    RatMat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rat(rows[i][j]);
    return rank(std::move(m));
}

/// One rational solution of A x = b, or nullopt if inconsistent.
inline std::optional<std::vector<Rat>> solve_rational(const RatMat& a, const std::vector<Rat>& b) {
    RatMat aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rat> x(a.cols(), Rat(0));
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug(k, a.cols());
    return x;
}

/// Basis of the rational nullspace {x : A x = 0}.
inline std::vector<std::vector<Rat>> nullspace(RatMat a) {
    std::size_t nc = a.cols();
    auto pivots = rref(a);
    std::vector<bool> is_pivot(nc, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free = 0; free < nc; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(nc, Rat(0));
        v[free] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Clears denominators and makes the vector primitive with canonical sign.
inline std::vector<Int> to_primitive_int(const std::vector<Rat>& v) {
    Int scale = 1;
    for (const auto& q : v) scale = scale / gcd(scale, den(q)) * den(q);
    std::vector<Int> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = num(v[i]) * (scale / den(v[i]));
    return primitive(std::move(w));
}

// ---------------------------------------------------------------------------
// Exact feasibility for systems of linear equalities and *strict* inequalities
// (Fourier-Motzkin with witness reconstruction by back-substitution).
// ---------------------------------------------------------------------------

struct LinConstraint {
    std::vector<Rat> a;
    Rat c;
    bool equality;  // a.x == c if set, else a.x < c
};

inline LinConstraint eq_constraint(std::vector<Rat> a, Rat c) { return {std::move(a), std::move(c), true}; }
inline LinConstraint lt_constraint(std::vector<Rat> a, Rat c) { return {std::move(a), std::move(c), false}; }
inline LinConstraint gt_constraint(std::vector<Rat> a, Rat c) {
    for (auto& x : a) x = -x;
    return {std::move(a), -c, false};
}

namespace detail {

struct Elimination {
    std::size_t var;
    bool from_equality;
    // equality: var = sum(coef[j] * x_j) + shift
    std::vector<Rat> coef;
    Rat shift;
    // inequality bounds referencing original variable indices (evaluated late)
    std::vector<std::pair<std::vector<Rat>, Rat>> lowers, uppers;  // var > a.x + c / var < a.x + c
};

inline void dedupe_strict(std::vector<LinConstraint>& cons) {
    std::set<std::pair<std::vector<Rat>, Rat>> seen;
    std::vector<LinConstraint> out;
    for (auto& c : cons) {
        // scale so the first nonzero coefficient is +-1 (canonical up to positives)
        Rat s(0);
        for (const auto& x : c.a)
            if (x != 0) {
                s = abs(x);
                break;
            }
        if (s == 0) {
            if (c.c > 0) continue;  // 0 < positive: trivially true
            out.push_back(std::move(c));
            continue;
        }
        auto key_a = c.a;
        for (auto& x : key_a) x /= s;
        Rat key_c = c.c / s;
        if (seen.insert({key_a, key_c}).second) out.push_back(std::move(c));
    }
    cons = std::move(out);
}

}  // namespace detail

/// Witness of {x : equality and strict-inequality constraints all hold}, or
/// nullopt when the open polyhedron is empty. Exact over the rationals.
inline std::optional<std::vector<Rat>> solve_strict(std::size_t nvars,
                                                    std::vector<LinConstraint> cons) {
    std::vector<detail::Elimination> stack;
    std::vector<bool> eliminated(nvars, false);

    // substitute out equalities first
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t ci = 0; ci < cons.size(); ++ci) {
            if (!cons[ci].equality) continue;
            std::size_t var = nvars;
            for (std::size_t j = 0; j < nvars; ++j)
                if (cons[ci].a[j] != 0) {
                    var = j;
                    break;
                }
            if (var == nvars) {
                if (cons[ci].c != 0) return std::nullopt;  // 0 == nonzero
                cons.erase(cons.begin() + ci);
                --ci;
                continue;
            }
            // var = (c - rest)/pivot
            detail::Elimination e;
            e.var = var;
            e.from_equality = true;
            Rat piv = cons[ci].a[var];
            e.coef.assign(nvars, Rat(0));
            for (std::size_t j = 0; j < nvars; ++j)
                if (j != var) e.coef[j] = -cons[ci].a[j] / piv;
            e.shift = cons[ci].c / piv;
            cons.erase(cons.begin() + ci);
            for (auto& other : cons) {
                Rat f = other.a[var];
                if (f == 0) continue;
                other.a[var] = 0;
                for (std::size_t j = 0; j < nvars; ++j) other.a[j] += f * e.coef[j];
                other.c -= f * e.shift;
            }
            eliminated[var] = true;
            stack.push_back(std::move(e));
            progress = true;
            break;
        }
    }

    // Fourier-Motzkin on the strict inequalities
    for (std::size_t var = 0; var < nvars; ++var) {
        if (eliminated[var]) continue;
        detail::dedupe_strict(cons);
        detail::Elimination e;
        e.var = var;
        e.from_equality = false;
        std::vector<LinConstraint> rest;
        for (auto& c : cons) {
            Rat f = c.a[var];
            if (f == 0) {
                rest.push_back(std::move(c));
                continue;
            }
            // a.x < c  with  f*var + rest(x) < c
            std::vector<Rat> g(nvars, Rat(0));
            for (std::size_t j = 0; j < nvars; ++j)
                if (j != var) g[j] = -c.a[j] / f;
            Rat h = c.c / f;
            if (f > 0)
                e.uppers.push_back({std::move(g), std::move(h)});  // var < g.x + h
            else
                e.lowers.push_back({std::move(g), std::move(h)});  // var > g.x + h
        }
        for (const auto& lo : e.lowers)
            for (const auto& up : e.uppers) {
                // lo.x + lc < var < up.x + uc  =>  (lo-up).x < uc - lc
                std::vector<Rat> a(nvars, Rat(0));
                for (std::size_t j = 0; j < nvars; ++j) a[j] = lo.first[j] - up.first[j];
                rest.push_back(lt_constraint(std::move(a), up.second - lo.second));
            }
        cons = std::move(rest);
        eliminated[var] = true;
        stack.push_back(std::move(e));
    }

    // only constant constraints remain
    for (const auto& c : cons)
        if (!(Rat(0) < c.c)) return std::nullopt;

    // back-substitute a witness
    std::vector<Rat> x(nvars, Rat(0));
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        const auto& e = *it;
        auto eval = [&](const std::pair<std::vector<Rat>, Rat>& expr) {
            Rat v = expr.second;
            for (std::size_t j = 0; j < nvars; ++j)
                if (expr.first[j] != 0) v += expr.first[j] * x[j];
            return v;
        };
        if (e.from_equality) {
            Rat v = e.shift;
            for (std::size_t j = 0; j < nvars; ++j)
                if (e.coef[j] != 0) v += e.coef[j] * x[j];
            x[e.var] = v;
            continue;
        }
        bool has_lo = false, has_up = false;
        Rat lo, up;
        for (const auto& b : e.lowers) {
            Rat v = eval(b);
            if (!has_lo || v > lo) lo = v;
            has_lo = true;
        }
        for (const auto& b : e.uppers) {
            Rat v = eval(b);
            if (!has_up || v < up) up = v;
            has_up = true;
        }
        if (has_lo && has_up)
            x[e.var] = (lo + up) / 2;
        else if (has_lo)
            x[e.var] = lo + 1;
        else if (has_up)
            x[e.var] = up - 1;
        else
            x[e.var] = 0;
    }
    return x;
}

}  // namespace gkzlab
