#pragma once

#include <algorithm>
#include <future>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gkzlab/continuation.hpp"
#include "gkzlab/laurent.hpp"

namespace gkzlab {

/// Generator matrices of a fundamental-group representation, stored in the
/// time order of a contractible composite loop. Transport matrices compose
/// anti-homomorphically, so ordered_product multiplies right to left over the
/// stored order; its defect from the identity is the rep's consistency check.
/// Different loop conventions store different orders; lookups go by label.
struct MonodromyRep {
    Cplx base;
    std::vector<std::string> labels;
    std::vector<CMat> generators;

    std::size_t rank() const { return generators.empty() ? 0 : generators[0].rows(); }

    const CMat& generator(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return generators[i];
        throw DimensionMismatch("no generator labeled " + label);
    }

    /// g_last * ... * g_first over the stored order.
    CMat ordered_product() const {
        if (generators.empty()) return CMat();
        CMat p = CMat::identity(rank());
        for (const auto& g : generators) p = g * p;
        return p;
    }

    double product_defect() const {
        if (generators.empty()) return 0;
        return max_abs(ordered_product() - CMat::identity(rank()));
    }
};

inline std::string singular_point_label(Cplx a) {
    if (a.imag() == 0 && a.real() == std::round(a.real())) {
        std::ostringstream os;
        os << static_cast<long long>(std::llround(a.real()));
        return os.str();
    }
    std::ostringstream os;
    os.precision(6);
    os << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i";
    return os.str();
}

struct MonodromyOptions {
    ContinuationOptions continuation{};
    int circle_segments = 32;
    unsigned threads = 1;
};

/// One generator per finite singular point plus one for infinity when the
/// system is declared singular there. Loops are straight polygonal lassos with
/// counterclockwise circles; concatenating them by ascending argument of the
/// singular point (as seen from the base) and closing with the clockwise
/// circle around infinity is contractible, so the generators are stored in
/// that time order and ordered_product lands on the identity.
inline MonodromyRep monodromy_rep(const FuchsianSystem& sys, Cplx base,
                                  const MonodromyOptions& opts = {}) {
    for (const auto& a : sys.finite_singular)
        if (std::abs(base - a) < 1e-12)
            throw ClearanceTooSmall("base point collides with a singular point");

    std::vector<std::size_t> order(sys.finite_singular.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        double ai = std::arg(sys.finite_singular[i] - base);
        double aj = std::arg(sys.finite_singular[j] - base);
        if (ai != aj) return ai < aj;  // ascending argument
        return std::abs(sys.finite_singular[i] - base) < std::abs(sys.finite_singular[j] - base);
    });

    MonodromyRep rep;
    rep.base = base;
    std::vector<Loop> loops;
    for (std::size_t idx : order) {
        Cplx a = sys.finite_singular[idx];
        double r = std::abs(base - a);
        for (std::size_t k = 0; k < sys.finite_singular.size(); ++k)
            if (k != idx) r = std::min(r, std::abs(sys.finite_singular[k] - a));
        r *= 0.25;
        loops.push_back(Loop::lasso(base, a, r, opts.circle_segments, sys.finite_singular, +1));
        rep.labels.push_back(singular_point_label(a));
    }
    if (sys.infinity_singular) {
        double rinf = 2.0 * std::abs(base) + 1.0;
        for (const auto& a : sys.finite_singular)
            rinf = std::max(rinf, 2.0 * std::abs(a) + 1.0);
        // clockwise big circle = counterclockwise around infinity
        loops.push_back(Loop::lasso(base, Cplx(0.0), rinf, opts.circle_segments,
                                    sys.finite_singular, -1));
        rep.labels.push_back("inf");
    }

    rep.generators.resize(loops.size());
    if (opts.threads > 1 && loops.size() > 1) {
        std::vector<std::future<CMat>> futs;
        for (const auto& loop : loops)
            futs.push_back(std::async(std::launch::async, [&sys, &opts, lp = &loop] {
                return continue_along(sys, *lp, opts.continuation);
            }));
        for (std::size_t i = 0; i < futs.size(); ++i) rep.generators[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < loops.size(); ++i)
            rep.generators[i] = continue_along(sys, loops[i], opts.continuation);
    }
    return rep;
}

struct GaussParams {
    Cplx a, b, c;
};

inline Cplx unit_phase(Cplx x) {  // e^{2 pi i x}
    return std::exp(Cplx(0.0, 2.0 * M_PI) * x);
}

/// The closed-form monodromy matrices of the Gauss equation around 0, 1 and
/// infinity, verbatim. They satisfy g_inf g_1 g_0 = I, i.e. their loop
/// convention takes the loop at 0 first; the rep stores that time order
/// [g0, g1, g_inf] so ordered_product vanishes identically. (The numeric
/// lassos of monodromy_rep realize the braid-equivalent relation with the
/// loop at 1 first; trace invariants agree between the two conventions.)
inline MonodromyRep gauss_closed_form(const GaussParams& p) {
    Cplx one(1.0), zero(0.0);
    CMat g1{{one, -unit_phase(p.c - p.b) - unit_phase(p.c - p.a) + unit_phase(p.c) + one},
            {zero, unit_phase(p.c - p.a - p.b)}};
    CMat g0{{one + unit_phase(-p.c), one}, {-unit_phase(-p.c), zero}};
    CMat gi{{zero, -unit_phase(p.a + p.b)}, {one, unit_phase(p.a) + unit_phase(p.b)}};
    MonodromyRep rep;
    rep.base = Cplx(0.5, -0.5);
    rep.labels = {"0", "1", "inf"};
    rep.generators = {g0, g1, gi};
    return rep;
}

/// Trace-invariant comparison of rank-2 representations: (tr M0, tr M1,
/// tr M0 M1, det M0, det M1) determine an irreducible rank-2 pair up to
/// simultaneous conjugacy.
struct ConjugacyReport {
    bool pass = false;
    double max_delta = 0;
    std::vector<std::pair<std::string, double>> deltas;
    bool irreducible_caveat = false;  // set when either pair is close to reducible
    std::string note;
};

namespace detail {

inline Cplx tr(const CMat& m) {
    Cplx t(0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}
inline Cplx det2(const CMat& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace detail

inline ConjugacyReport compare_up_to_conjugacy(const MonodromyRep& r1, const MonodromyRep& r2,
                                               double tol) {
    if (r1.rank() != 2 || r2.rank() != 2)
        throw RankUnsupported("conjugacy comparison implemented for rank 2 only");
    auto sorted_labels = [](const MonodromyRep& r) {
        auto l = r.labels;
        std::sort(l.begin(), l.end());
        return l;
    };
    std::vector<std::string> labels = sorted_labels(r1);
    if (labels != sorted_labels(r2)) throw DimensionMismatch("generator labels disagree");
    if (labels.size() < 2) throw DimensionMismatch("need at least two generators");

    // generators are matched by label (stored time orders may differ)
    const CMat& m0 = r1.generator(labels[0]);
    const CMat& m1 = r1.generator(labels[1]);
    const CMat& n0 = r2.generator(labels[0]);
    const CMat& n1 = r2.generator(labels[1]);

    ConjugacyReport rep;
    auto push = [&](const std::string& name, Cplx x, Cplx y) {
        double d = std::abs(x - y);
        rep.deltas.push_back({name, d});
        rep.max_delta = std::max(rep.max_delta, d);
    };
    push("tr g[" + labels[0] + "]", detail::tr(m0), detail::tr(n0));
    push("tr g[" + labels[1] + "]", detail::tr(m1), detail::tr(n1));
    push("tr product", detail::tr(m0 * m1), detail::tr(n0 * n1));
    push("det g[" + labels[0] + "]", detail::det2(m0), detail::det2(n0));
    push("det g[" + labels[1] + "]", detail::det2(m1), detail::det2(n1));
    rep.pass = rep.max_delta <= tol;

    // The trace triple classifies only irreducible pairs; flag the boundary.
    // Fricke: for SL2-normalized a, b, tr[a,b] = ta^2 + tb^2 + tab^2 -
    // ta tb tab - 2, and the pair is reducible iff tr[a,b] = 2.
    auto fricke = [](const CMat& a, const CMat& b) {
        Cplx ta = detail::tr(a), tb = detail::tr(b), tab = detail::tr(a * b);
        Cplx sa = std::sqrt(detail::det2(a)), sb = std::sqrt(detail::det2(b));
        ta /= sa;
        tb /= sb;
        tab /= sa * sb;
        Cplx kappa = ta * ta + tb * tb + tab * tab - ta * tb * tab - Cplx(2.0);
        return std::abs(kappa - Cplx(2.0));
    };
    double f1 = fricke(m0, m1), f2 = fricke(n0, n1);
    if (std::min(f1, f2) < 1e-6) {
        rep.irreducible_caveat = true;
        rep.note = "pair is (near-)reducible: trace invariants determine the class only up to "
                   "semisimplification";
    }
    return rep;
}

/// The conifold K0 representation over the Laurent ring of the complement
/// torus, in the variables (v_a, v_b, v_c) = (e^{2 pi i a}, e^{2 pi i b},
/// e^{2 pi i c}); specializing at (1,1,1) gives the integer matrices of the
/// parameterless action. The theorem's evaluation point e^{-2 pi i alpha}
/// with alpha = (c-1, -a, -b) is expressed in these coordinates by
/// specialization_from_alpha.
struct ConifoldK0Rep {
    std::vector<std::string> labels{"0", "1", "inf"};
    LaurentMatrix g0, g1, gi;

    MonodromyRep specialize_at(const std::vector<Cplx>& h) const {
        MonodromyRep rep;
        rep.base = Cplx(0.5, -0.5);
        rep.labels = labels;
        rep.generators = {gkzlab::specialize(g0, h), gkzlab::specialize(g1, h),
                          gkzlab::specialize(gi, h)};
        return rep;
    }
};

inline ConifoldK0Rep conifold_k0_rep() {
    auto mono = [](long ea, long eb, long ec, Cplx coeff = Cplx(1.0)) {
        return LaurentPoly::monomial(3, {ea, eb, ec}, coeff);
    };
    LaurentPoly zero(3);
    ConifoldK0Rep rep;

    // gamma_0 = [[1 + v_c^{-1}, 1], [-v_c^{-1}, 0]]
    rep.g0 = LaurentMatrix(2, 2, zero);
    rep.g0(0, 0) = mono(0, 0, 0) + mono(0, 0, -1);
    rep.g0(0, 1) = mono(0, 0, 0);
    rep.g0(1, 0) = mono(0, 0, -1, Cplx(-1.0));
    rep.g0(1, 1) = zero;

    // gamma_1 = [[1, -v_c v_b^{-1} - v_c v_a^{-1} + v_c + 1], [0, v_c v_a^{-1} v_b^{-1}]]
    rep.g1 = LaurentMatrix(2, 2, zero);
    rep.g1(0, 0) = mono(0, 0, 0);
    rep.g1(0, 1) = mono(0, -1, 1, Cplx(-1.0)) + mono(-1, 0, 1, Cplx(-1.0)) + mono(0, 0, 1) +
                   mono(0, 0, 0);
    rep.g1(1, 0) = zero;
    rep.g1(1, 1) = mono(-1, -1, 1);

    // gamma_inf = [[0, -v_a v_b], [1, v_a + v_b]]
    rep.gi = LaurentMatrix(2, 2, zero);
    rep.gi(0, 0) = zero;
    rep.gi(0, 1) = mono(1, 1, 0, Cplx(-1.0));
    rep.gi(1, 0) = mono(0, 0, 0);
    rep.gi(1, 1) = mono(1, 0, 0) + mono(0, 1, 0);
    return rep;
}

/// The point e^{-2 pi i alpha} of the complement torus, written in the
/// (v_a, v_b, v_c) coordinate order used by conifold_k0_rep: under
/// alpha = (c-1, -a, -b) one has v_a = e^{-2 pi i alpha_2},
/// v_b = e^{-2 pi i alpha_3}, v_c = e^{2 pi i alpha_1}.
inline std::vector<Cplx> specialization_from_alpha(const std::vector<Cplx>& alpha) {
    if (alpha.size() != 3) throw DimensionMismatch("conifold alpha has three components");
    return {unit_phase(-alpha[1]), unit_phase(-alpha[2]), unit_phase(alpha[0])};
}

}  // namespace gkzlab
