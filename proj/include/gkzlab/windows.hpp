#pragma once

#include <algorithm>
#include <vector>

#include "gkzlab/zonotope.hpp"

namespace gkzlab {

/// Window characters: the lattice points of nu + Delta for generic nu.
struct WindowSet {
    std::vector<Rat> nu;
    std::vector<std::vector<Int>> characters;
};

/// A character together with an integer preimage under the weight map.
struct CharacterLift {
    std::vector<Int> mu;      // in Z^n
    std::vector<Int> mu_hat;  // in Z^d, B mu_hat = mu
};

namespace detail {

// integer points of the axis-aligned bounding box of nu + Delta
template <class Fn>
void lattice_points_in_bbox(const Zonotope& z, const std::vector<Rat>& nu, Fn&& fn) {
    std::size_t n = z.ambient;
    std::vector<Int> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat a(0), b(0);
        for (const auto& g : z.generators) {
            if (g[i] > 0)
                b += g[i];
            else
                a += g[i];
        }
        lo[i] = ceil_rat(a + nu[i]);
        hi[i] = floor_rat(b + nu[i]);
    }
    std::vector<Int> mu(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            fn(mu);
            return;
        }
        for (Int v = lo[i]; v <= hi[i]; ++v) {
            mu[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace detail

/// True iff no lattice point lies on nu + boundary(Delta). This is the
/// operative form of "nu not parallel to any face of Delta": the two coincide
/// for full-dimensional Delta, and it is the condition the window count needs.
inline bool check_nu_generic(const std::vector<Rat>& nu, const Zonotope& delta) {
    if (!delta.full_dimensional())
        throw DegenerateZonotope("genericity test requires a full-dimensional zonotope");
    auto facets = ZonotopeFacets::of(delta);
    bool generic = true;
    detail::lattice_points_in_bbox(delta, nu, [&](const std::vector<Int>& mu) {
        std::vector<Rat> x(nu.size());
        for (std::size_t i = 0; i < nu.size(); ++i) x[i] = Rat(mu[i]) - nu[i];
        if (facets.on_boundary(x)) generic = false;
    });
    return generic;
}

/// Exact list of lattice points in nu + Delta, sorted lexicographically.
inline WindowSet enumerate_window(const std::vector<Rat>& nu, const Zonotope& delta) {
    if (!check_nu_generic(nu, delta))
        throw NonGenericNu("a lattice point lies on nu + boundary(Delta)");
    auto facets = ZonotopeFacets::of(delta);
    WindowSet w{nu, {}};
    detail::lattice_points_in_bbox(delta, nu, [&](const std::vector<Int>& mu) {
        std::vector<Rat> x(nu.size());
        for (std::size_t i = 0; i < nu.size(); ++i) x[i] = Rat(mu[i]) - nu[i];
        if (facets.contains(x)) w.characters.push_back(mu);
    });
    std::sort(w.characters.begin(), w.characters.end());
    return w;
}

/// One canonical lift per window character: a Smith-decomposition solution of
/// B mu_hat = mu, size-reduced against the kernel lattice (greedy nearest-plane
/// passes; deterministic).
inline std::vector<CharacterLift> lift_characters(const WindowSet& w, const ToricInput& input) {
    auto kb = kernel_basis(input);
    std::vector<std::pair<std::vector<Int>, Int>> kernel_rows;  // (row, <row,row>)
    for (std::size_t i = 0; i < kb.rows(); ++i) {
        auto r = kb.A.row(i);
        Int nn = 0;
        for (const auto& x : r) nn += x * x;
        kernel_rows.push_back({r, nn});
    }
    std::vector<CharacterLift> lifts;
    for (const auto& mu : w.characters) {
        auto x = solve_integer(input.B, mu);
        if (!x) throw NotSurjective("character has no integer preimage");
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [row, nn] : kernel_rows) {
                Int dot = 0;
                for (std::size_t j = 0; j < row.size(); ++j) dot += (*x)[j] * row[j];
                Int t = round_half_down(Rat(dot, nn));
                if (t != 0) {
                    for (std::size_t j = 0; j < row.size(); ++j) (*x)[j] -= t * row[j];
                    changed = true;
                }
            }
        }
        lifts.push_back({mu, *x});
    }
    return lifts;
}

}  // namespace gkzlab
