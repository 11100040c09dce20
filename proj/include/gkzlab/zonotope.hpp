#pragma once

#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "gkzlab/linalg_rational.hpp"
#include "gkzlab/toric.hpp"

namespace gkzlab {

/// Affine hyperplane {x : <normal, x> = offset} with primitive integer normal.
/// (u, c) and (-u, -c) describe the same set; the canonical representative has
/// the first nonzero entry of u positive.
struct Hyperplane {
    std::vector<Int> normal;
    Rat offset;

    static Hyperplane canonical(std::vector<Int> u, Rat c) {
        Int g = vec_gcd(u);
        if (g == 0) throw DimensionMismatch("hyperplane normal must be nonzero");
        if (g != 1) {
            for (auto& x : u) x /= g;
            c /= Rat(g);
        }
        for (const auto& x : u) {
            if (x == 0) continue;
            if (x < 0) {
                for (auto& y : u) y = -y;
                c = -c;
            }
            break;
        }
        return {std::move(u), std::move(c)};
    }

    /// <u, x> - c; zero on the hyperplane.
    Rat eval(const std::vector<Rat>& x) const {
        Rat s = -offset;
        for (std::size_t i = 0; i < normal.size(); ++i) s += Rat(normal[i]) * x[i];
        return s;
    }

    /// The pointwise negation -H = {-x : x in H}.
    Hyperplane negated() const {
        return canonical(normal, -offset);
    }

    /// H translated by tau: {x + tau : x in H}.
    Hyperplane translated(const std::vector<Rat>& tau) const {
        Rat shift = offset;
        for (std::size_t i = 0; i < normal.size(); ++i) shift += Rat(normal[i]) * tau[i];
        return {normal, shift};
    }

    friend bool operator<(const Hyperplane& a, const Hyperplane& b) {
        if (a.normal != b.normal) return a.normal < b.normal;
        return a.offset < b.offset;
    }
    friend bool operator==(const Hyperplane& a, const Hyperplane& b) {
        return a.normal == b.normal && a.offset == b.offset;
    }
};

/// Minkowski sum of the segments [0, generator_i]; generators are the weight
/// columns scaled by 1/2.
struct Zonotope {
    std::size_t ambient;
    std::vector<std::vector<Rat>> generators;

    static Zonotope from_weights(const ToricInput& input) {
        Zonotope z;
        z.ambient = input.n();
        for (std::size_t j = 0; j < input.d(); ++j) {
            std::vector<Rat> g(input.n());
            for (std::size_t i = 0; i < input.n(); ++i) g[i] = Rat(input.B(i, j)) / 2;
            z.generators.push_back(std::move(g));
        }
        return z;
    }

    bool full_dimensional() const {
        RatMat m(generators.size(), ambient);
        for (std::size_t i = 0; i < generators.size(); ++i) m.set_row(i, generators[i]);
        return rank(std::move(m)) == ambient;
    }

    /// Support interval [min, max] of <u, .> over the zonotope.
    std::pair<Rat, Rat> support(const std::vector<Int>& u) const {
        Rat lo(0), hi(0);
        for (const auto& g : generators) {
            Rat s(0);
            for (std::size_t i = 0; i < ambient; ++i) s += Rat(u[i]) * g[i];
            if (s > 0)
                hi += s;
            else
                lo += s;
        }
        return {lo, hi};
    }
};

/// Facet normals of the zonotope: primitive vectors orthogonal to spanning
/// (n-1)-subsets of generators.
inline std::vector<std::vector<Int>> facet_normals(const Zonotope& z) {
    if (!z.full_dimensional()) throw DegenerateZonotope("zonotope generators do not span");
    std::size_t n = z.ambient;
    std::set<std::vector<Int>> normals;
    std::vector<std::size_t> cur;
    detail::subsets_of_size(z.generators.size(), n - 1, 0, cur, [&](const std::vector<std::size_t>& s) {
        RatMat m(s.size(), n);
        for (std::size_t i = 0; i < s.size(); ++i) m.set_row(i, z.generators[s[i]]);
        auto ns = nullspace(std::move(m));
        if (ns.size() != 1) return;  // subset does not span a hyperplane
        normals.insert(to_primitive_int(ns[0]));
    });
    return {normals.begin(), normals.end()};
}

/// The facet-supporting hyperplanes of the zonotope (both support values per
/// facet normal), deduplicated and in canonical form.
inline std::vector<Hyperplane> supporting_hyperplanes(const Zonotope& z) {
    std::set<Hyperplane> out;
    for (const auto& u : facet_normals(z)) {
        auto [lo, hi] = z.support(u);
        out.insert(Hyperplane::canonical(u, hi));
        out.insert(Hyperplane::canonical(u, lo));
    }
    return {out.begin(), out.end()};
}

/// H-description {(u, lo, hi)}: x in zonotope iff lo <= <u,x> <= hi for all
/// facet normals u. Valid for full-dimensional zonotopes.
struct ZonotopeFacets {
    std::vector<std::tuple<std::vector<Int>, Rat, Rat>> bounds;

    static ZonotopeFacets of(const Zonotope& z) {
        ZonotopeFacets f;
        for (const auto& u : facet_normals(z)) {
            auto [lo, hi] = z.support(u);
            f.bounds.emplace_back(u, lo, hi);
        }
        return f;
    }

    bool contains(const std::vector<Rat>& x) const {
        for (const auto& [u, lo, hi] : bounds) {
            Rat s(0);
            for (std::size_t i = 0; i < x.size(); ++i) s += Rat(u[i]) * x[i];
            if (s < lo || s > hi) return false;
        }
        return true;
    }
    bool on_boundary(const std::vector<Rat>& x) const {
        if (!contains(x)) return false;
        for (const auto& [u, lo, hi] : bounds) {
            Rat s(0);
            for (std::size_t i = 0; i < x.size(); ++i) s += Rat(u[i]) * x[i];
            if (s == lo || s == hi) return true;
        }
        return false;
    }
};

}  // namespace gkzlab
