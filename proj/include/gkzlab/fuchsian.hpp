#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "gkzlab/matrix.hpp"

namespace gkzlab {

// Dense complex polynomials, ascending coefficients.
using Poly = std::vector<Cplx>;

inline void poly_trim(Poly& p, double eps = 1e-13) {
    double scale = 0;
    for (const auto& c : p) scale = std::max(scale, std::abs(c));
    double cut = scale * eps;
    while (!p.empty() && std::abs(p.back()) <= cut) p.pop_back();
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Cplx poly_eval(const Poly& p, Cplx z) {
    Cplx v(0.0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
    return v;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, Cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Cplx(double(i)));
    return d;
}

/// Synthetic division by (z - a): p = (z - a) q + rem.
inline std::pair<Poly, Cplx> poly_deflate(const Poly& p, Cplx a) {
    if (p.empty()) return {{}, Cplx(0.0)};
    Poly q(p.size() > 1 ? p.size() - 1 : 0);
    Cplx carry(0.0);
    for (std::size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * a;
        q[i - 1] = carry;
    }
    return {q, p[0] + carry * a};
}

inline int poly_root_multiplicity(Poly p, Cplx a, double eps = 1e-10) {
    poly_trim(p);
    double scale = 0;
    for (const auto& c : p) scale = std::max(scale, std::abs(c));
    if (p.empty()) return 0;
    int mult = 0;
    while (!p.empty()) {
        auto [q, rem] = poly_deflate(p, a);
        if (std::abs(rem) > eps * std::max(1.0, scale)) break;
        ++mult;
        p = q;
    }
    return mult;
}

/// num/den with complex polynomial parts; den nonzero.
struct RatFun {
    Poly num, den;

    static RatFun constant(Cplx c) {
        if (c == Cplx(0.0)) return {{}, {Cplx(1.0)}};
        return {{c}, {Cplx(1.0)}};
    }
    static RatFun of(Poly n, Poly d) {
        poly_trim(n);
        poly_trim(d);
        if (d.empty()) throw DimensionMismatch("rational function with zero denominator");
        return {std::move(n), std::move(d)};
    }

    bool is_zero() const { return num.empty(); }
    Cplx eval(Cplx z) const { return poly_eval(num, z) / poly_eval(den, z); }

    int pole_order_at(Cplx a) const {
        if (is_zero()) return 0;
        return poly_root_multiplicity(den, a) - poly_root_multiplicity(num, a);
    }
    /// q(z) z^k bounded at infinity iff deg num + k <= deg den.
    bool bounded_at_infinity(int k = 0) const {
        if (is_zero()) return true;
        return poly_degree(num) + k <= poly_degree(den);
    }
};

/// Scalar equation y^(n) + q_1 y^(n-1) + ... + q_n y = 0 (monic leading
/// coefficient), with declared singular points.
struct ScalarFuchsianODE {
    std::size_t order = 0;
    std::vector<RatFun> coeffs;  // q_1 .. q_n
    std::vector<Cplx> finite_singular;
    bool infinity_singular = false;

    /// Validates the Fuchsian growth conditions: q_i (z-a)^i holomorphic at
    /// every declared finite a, q_i z^i holomorphic at infinity, and no poles
    /// outside the declared set.
    static ScalarFuchsianODE checked(std::size_t order, std::vector<RatFun> coeffs,
                                     std::vector<Cplx> finite_singular, bool infinity_singular) {
        if (coeffs.size() != order) throw DimensionMismatch("need exactly n coefficient functions");
        ScalarFuchsianODE ode{order, std::move(coeffs), std::move(finite_singular),
                              infinity_singular};
        for (std::size_t i = 0; i < ode.order; ++i) {
            const RatFun& q = ode.coeffs[i];
            int power = static_cast<int>(i) + 1;
            for (const auto& a : ode.finite_singular) {
                if (q.pole_order_at(a) > power) {
                    std::ostringstream os;
                    os << "coefficient q_" << power << " violates the Fuchsian condition at z = ("
                       << a.real() << ", " << a.imag() << ")";
                    throw NotFuchsian(os.str());
                }
            }
            if (!q.bounded_at_infinity(power)) {
                std::ostringstream os;
                os << "coefficient q_" << power << " violates the Fuchsian condition at infinity";
                throw NotFuchsian(os.str());
            }
            // poles confined to the declared set
            if (!q.is_zero()) {
                Poly rem = q.den;
                for (const auto& a : ode.finite_singular) {
                    int mult = poly_root_multiplicity(rem, a);
                    for (int k = 0; k < mult; ++k) rem = poly_deflate(rem, a).first;
                }
                poly_trim(rem);
                if (poly_degree(rem) > 0) {
                    std::ostringstream os;
                    os << "coefficient q_" << (i + 1) << " has a pole outside the declared set";
                    throw NotFuchsian(os.str());
                }
            }
        }
        return ode;
    }
};

/// The Gauss hypergeometric equation z(1-z) y'' + (c - (a+b+1) z) y' - ab y = 0
/// in monic form, singular at {0, 1, infinity}.
inline ScalarFuchsianODE gauss_ode(Cplx a, Cplx b, Cplx c) {
    Poly den{Cplx(0.0), Cplx(1.0), Cplx(-1.0)};  // z (1 - z)
    RatFun q1 = RatFun::of({c, -(a + b + Cplx(1.0))}, den);
    RatFun q2 = RatFun::of({-a * b}, den);
    return ScalarFuchsianODE::checked(2, {q1, q2}, {Cplx(0.0), Cplx(1.0)}, true);
}

/// z y' - alpha y = 0 in monic form: y' - (alpha/z) y = 0.
inline ScalarFuchsianODE euler_ode(Cplx alpha) {
    RatFun q1 = RatFun::of({-alpha}, {Cplx(0.0), Cplx(1.0)});
    return ScalarFuchsianODE::checked(1, {q1}, {Cplx(0.0)}, true);
}

/// First-order system y' = A(z) y with A(z) = A0 + sum R_j / (z - a_j):
/// entries holomorphic away from simple poles at the declared points.
struct FuchsianSystem {
    std::size_t dim = 0;
    CMat constant_part;
    std::vector<std::pair<Cplx, CMat>> residues;
    std::vector<Cplx> finite_singular;
    bool infinity_singular = false;

    CMat eval(Cplx z) const {
        CMat a = constant_part;
        for (const auto& [pole, rmat] : residues) {
            Cplx f = Cplx(1.0) / (z - pole);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) a(i, j) += f * rmat(i, j);
        }
        return a;
    }

    Cplx trace(Cplx z) const {
        Cplx t(0.0);
        CMat a = eval(z);
        for (std::size_t i = 0; i < dim; ++i) t += a(i, i);
        return t;
    }

    double distance_to_singular(Cplx z) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& a : finite_singular) d = std::min(d, std::abs(z - a));
        return d;
    }
};

/// Companion system of the scalar equation: y_vec = (y, y', ..., y^(n-1)),
/// last row -q_n, ..., -q_1. First components of system solutions are exactly
/// the scalar solutions. Every entry must have at most simple poles, all in
/// the declared singular set.
inline FuchsianSystem companion_system(const ScalarFuchsianODE& ode) {
    std::size_t n = ode.order;
    FuchsianSystem sys;
    sys.dim = n;
    sys.constant_part = CMat(n, n);
    sys.finite_singular = ode.finite_singular;
    sys.infinity_singular = ode.infinity_singular;
    for (std::size_t i = 0; i + 1 < n; ++i) sys.constant_part(i, i + 1) = 1.0;

    std::vector<CMat> res(ode.finite_singular.size(), CMat(n, n));
    for (std::size_t j = 0; j < n; ++j) {
        const RatFun& q = ode.coeffs[n - 1 - j];  // entry (n-1, j) = -q_{n-j}
        if (q.is_zero()) continue;
        for (std::size_t k = 0; k < ode.finite_singular.size(); ++k) {
            Cplx a = ode.finite_singular[k];
            int ord = q.pole_order_at(a);
            if (ord > 1) {
                std::ostringstream os;
                os << "companion entry -q_" << (n - j)
                   << " has a pole of order " << ord << "; only simple poles are representable";
                throw NotFuchsian(os.str());
            }
            if (ord == 1) {
                // residue of -num/den at the simple root a of den
                Cplx r = -poly_eval(q.num, a) / poly_eval(poly_derivative(q.den), a);
                res[k](n - 1, j) = r;
            }
        }
        // constant part at infinity
        if (poly_degree(q.num) == poly_degree(q.den))
            sys.constant_part(n - 1, j) = -q.num.back() / q.den.back();
        else if (poly_degree(q.num) > poly_degree(q.den))
            throw NotFuchsian("companion entry unbounded at infinity");
    }
    for (std::size_t k = 0; k < ode.finite_singular.size(); ++k) {
        bool nonzero = false;
        for (std::size_t i = 0; i < n && !nonzero; ++i)
            for (std::size_t j = 0; j < n && !nonzero; ++j)
                nonzero = res[k](i, j) != Cplx(0.0);
        if (nonzero) sys.residues.push_back({ode.finite_singular[k], res[k]});
    }

    // cross-check the partial-fraction reconstruction at a sample point
    Cplx z0(0.31582, 0.77031);
    CMat direct(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) direct(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        if (!ode.coeffs[n - 1 - j].is_zero()) direct(n - 1, j) = -ode.coeffs[n - 1 - j].eval(z0);
    if (max_abs(direct - sys.eval(z0)) > 1e-8)
        throw NotFuchsian("companion entries are not partial-fraction representable");
    return sys;
}

}  // namespace gkzlab
