#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "gkzlab/linalg_rational.hpp"
#include "gkzlab/toric.hpp"

namespace gkzlab {

// Scalar field abstraction: the GKZ layer runs over exact complex rationals
// (CRat) for exact-zero residual checks, or complex doubles for numeric work.
template <class K>
struct scalar_traits;

template <>
struct scalar_traits<Cplx> {
    static Cplx zero() { return {0.0, 0.0}; }
    static Cplx one() { return {1.0, 0.0}; }
    static Cplx from_int(const Int& n) { return {to_double(n), 0.0}; }
    static bool is_zero(const Cplx& z) { return z == Cplx(0.0); }
    static double abs(const Cplx& z) { return std::abs(z); }
    // tolerance-based integer detection for the numeric path
    static std::optional<Int> as_integer(const Cplx& z) {
        if (std::abs(z.imag()) > 1e-9) return std::nullopt;
        double r = std::round(z.real());
        if (std::abs(z.real() - r) > 1e-9) return std::nullopt;
        return Int(static_cast<long long>(r));
    }
};

template <>
struct scalar_traits<CRat> {
    static CRat zero() { return CRat(Rat(0)); }
    static CRat one() { return CRat(Rat(1)); }
    static CRat from_int(const Int& n) { return CRat(Rat(n)); }
    static bool is_zero(const CRat& z) { return z.is_zero(); }
    static double abs(const CRat& z) { return std::abs(z.to_complex()); }
    static std::optional<Int> as_integer(const CRat& z) {
        if (z.im != 0 || den(z.re) != 1) return std::nullopt;
        return num(z.re);
    }
};

/// Sum of terms coeff * x^xexp * d^dexp acting on Laurent monomials in d
/// variables; xexp may be negative, dexp may not.
template <class K>
struct DiffOp {
    struct Term {
        std::vector<long> xexp, dexp;
        K coeff;
    };
    std::size_t nvars = 0;
    std::vector<Term> terms;

    void add(std::vector<long> xe, std::vector<long> de, K c) {
        terms.push_back({std::move(xe), std::move(de), std::move(c)});
    }

    /// Sorted unique (x, d) keys, zero coefficients dropped.
    void canonicalize() {
        std::map<std::pair<std::vector<long>, std::vector<long>>, K> merged;
        for (auto& t : terms) {
            auto key = std::make_pair(t.xexp, t.dexp);
            auto it = merged.find(key);
            if (it == merged.end())
                merged.emplace(std::move(key), t.coeff);
            else
                it->second += t.coeff;
        }
        terms.clear();
        for (auto& [key, c] : merged)
            if (!scalar_traits<K>::is_zero(c)) terms.push_back({key.first, key.second, c});
    }

    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        if (a.nvars != b.nvars || a.terms.size() != b.terms.size()) return false;
        for (std::size_t i = 0; i < a.terms.size(); ++i)
            if (a.terms[i].xexp != b.terms[i].xexp || a.terms[i].dexp != b.terms[i].dexp ||
                !(a.terms[i].coeff == b.terms[i].coeff))
                return false;
        return true;
    }

    DiffOp negated() const {
        DiffOp o = *this;
        for (auto& t : o.terms) t.coeff = scalar_traits<K>::zero() - t.coeff;
        return o;
    }
};

template <class K>
bool equal_up_to_sign(const DiffOp<K>& a, const DiffOp<K>& b) {
    return a == b || a == b.negated();
}

/// sum_j a_j x_j d_j - alpha
template <class K>
DiffOp<K> homogeneity_operator(const std::vector<Int>& a_row, const K& alpha) {
    std::size_t d = a_row.size();
    DiffOp<K> op;
    op.nvars = d;
    for (std::size_t j = 0; j < d; ++j) {
        if (a_row[j] == 0) continue;
        std::vector<long> e(d, 0);
        e[j] = 1;
        op.add(e, e, scalar_traits<K>::from_int(a_row[j]));
    }
    if (!scalar_traits<K>::is_zero(alpha))
        op.add(std::vector<long>(d, 0), std::vector<long>(d, 0), scalar_traits<K>::zero() - alpha);
    op.canonicalize();
    return op;
}

/// box_l = prod_{l_i > 0} d_i^{l_i} - prod_{l_i < 0} d_i^{-l_i}
template <class K>
DiffOp<K> box_operator(const std::vector<Int>& l) {
    std::size_t d = l.size();
    std::vector<long> plus(d, 0), minus(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (l[i] > 0) plus[i] = l[i].template convert_to<long>();
        if (l[i] < 0) minus[i] = (-l[i]).template convert_to<long>();
    }
    DiffOp<K> op;
    op.nvars = d;
    op.add(std::vector<long>(d, 0), std::move(plus), scalar_traits<K>::one());
    op.add(std::vector<long>(d, 0), std::move(minus), scalar_traits<K>::zero() - scalar_traits<K>::one());
    op.canonicalize();
    return op;
}

/// Homogeneity operators indexed by the rows of A plus box operators for a
/// generating set of B* Z^n completed to every image-lattice vector of
/// sup-norm <= L.
template <class K>
struct GkzSystem {
    IntMat B;              // n x d weight matrix
    IntMat A;              // (d-n) x d homogeneity matrix
    std::vector<K> alpha;  // length d-n
    long L = 2;
    std::vector<DiffOp<K>> homogeneity;
    std::vector<std::pair<std::vector<Int>, DiffOp<K>>> box_ops;  // (canonical l, op)
};

namespace detail {

// rational left inverse P of B^T (P B^T = I_n); requires full row rank
inline RatMat left_inverse_bt(const IntMat& b) {
    std::size_t n = b.rows(), d = b.cols();
    RatMat g(n, n);  // B B^T
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < d; ++k) s += b(i, k) * b(j, k);
            g(i, j) = Rat(s);
        }
    // P = (B B^T)^{-1} B, computed by solving g x = e_c row by row
    RatMat p(n, d);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Rat> e(n, Rat(0));
        e[c] = 1;
        auto x = solve_rational(g, e);
        if (!x) throw DegenerateCone("weight matrix lacks full row rank");
        for (std::size_t k = 0; k < d; ++k) {
            Rat s(0);
            for (std::size_t i = 0; i < n; ++i) s += (*x)[i] * Rat(b(i, k));
            p(c, k) = s;
        }
    }
    return p;
}

// canonical representative of +-l with the first nonzero entry positive
inline std::vector<Int> canonical_sign(std::vector<Int> l) {
    for (const auto& x : l) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : l) y = -y;
        break;
    }
    return l;
}

}  // namespace detail

/// Image-lattice vectors l = B^T m with 0 < |l|_inf <= L, one per +-pair,
/// united with the generating set {B^T e_k}. One-sided vectors (all nonzero
/// entries of equal sign) give degenerate binomials and are skipped; for
/// weights summing to zero every image vector is two-sided anyway.
inline std::vector<std::vector<Int>> box_lattice_vectors(const IntMat& b, long L) {
    std::size_t n = b.rows(), d = b.cols();
    RatMat p = detail::left_inverse_bt(b);
    std::vector<Int> bound(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat s(0);
        for (std::size_t k = 0; k < d; ++k) s += abs(p(i, k));
        bound[i] = floor_rat(s * Rat(L));
    }
    auto two_sided = [](const std::vector<Int>& l) {
        bool pos = false, neg = false;
        for (const auto& x : l) {
            if (x > 0) pos = true;
            if (x < 0) neg = true;
        }
        return pos && neg;
    };
    std::set<std::vector<Int>> out;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Int> l(d);
        for (std::size_t j = 0; j < d; ++j) l[j] = b(k, j);
        if (two_sided(l)) out.insert(detail::canonical_sign(std::move(l)));
    }
    std::vector<Int> m(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            std::vector<Int> l(d, 0);
            bool small = true;
            for (std::size_t j = 0; j < d && small; ++j) {
                for (std::size_t k = 0; k < n; ++k) l[j] += b(k, j) * m[k];
                if (abs(l[j]) > L) small = false;
            }
            if (small && two_sided(l)) out.insert(detail::canonical_sign(std::move(l)));
            return;
        }
        for (Int v = -bound[i]; v <= bound[i]; ++v) {
            m[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return {out.begin(), out.end()};
}

template <class K>
GkzSystem<K> build_gkz(const ToricInput& input, const KernelBasis& kernel,
                       std::vector<K> alpha, long L = 2) {
    if (L < 1) throw DimensionMismatch("box completion bound L must be >= 1");
    std::size_t d = input.d(), n = input.n();
    if (kernel.rows() != d - n || kernel.cols() != d)
        throw DimensionMismatch("kernel basis shape does not match the weight matrix");
    if (alpha.size() != d - n)
        throw DimensionMismatch("alpha must have length d - n");

    GkzSystem<K> sys;
    sys.B = input.B;
    sys.A = kernel.A;
    sys.alpha = std::move(alpha);
    sys.L = L;
    for (std::size_t i = 0; i < d - n; ++i)
        sys.homogeneity.push_back(homogeneity_operator<K>(kernel.A.row(i), sys.alpha[i]));
    for (auto& l : box_lattice_vectors(input.B, L))
        sys.box_ops.push_back({l, box_operator<K>(l)});
    return sys;
}

/// Truncated Gamma-series: coefficient of x^{B^T l + gamma} for |l|_inf <= N.
/// Coefficients are finite products of linear factors relative to a nonzero
/// base coefficient (reciprocal Gamma at nonpositive integers is zero).
template <class K>
struct GammaSeries {
    IntMat B;
    std::vector<K> gamma;
    long N = 0;
    std::vector<long> base;                 // site of the normalized coefficient
    std::map<std::vector<long>, K> coeff;   // every site with |l|_inf <= N

    std::vector<Int> site_shift(const std::vector<long>& l) const {
        std::size_t n = B.rows(), d = B.cols();
        std::vector<Int> m(d, 0);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < n; ++k) m[j] += B(k, j) * Int(l[k]);
        return m;
    }
};

namespace detail {

template <class K>
bool gamma_coeff_nonzero(const std::vector<K>& gamma, const std::vector<Int>& m) {
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        auto g = scalar_traits<K>::as_integer(gamma[j]);
        if (g && *g + m[j] <= -1) return false;
    }
    return true;
}

// Gamma(b+1) / Gamma(b+1+delta) as a finite product of linear factors
template <class K>
K gamma_ratio(const K& b, const Int& delta) {
    K r = scalar_traits<K>::one();
    if (delta >= 0) {
        for (Int i = 1; i <= delta; ++i) r = r / (b + scalar_traits<K>::from_int(i));
    } else {
        for (Int i = 0; i < -delta; ++i) r = r * (b - scalar_traits<K>::from_int(i));
    }
    return r;
}

inline std::vector<std::vector<long>> sites_in_box(std::size_t n, long N) {
    std::vector<std::vector<long>> out;
    std::vector<long> l(n, -N);
    while (true) {
        out.push_back(l);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (l[i] < N) {
                ++l[i];
                std::fill(l.begin() + i + 1, l.end(), -N);
                break;
            }
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

}  // namespace detail

template <class K>
GammaSeries<K> series_solution(const GkzSystem<K>& sys, std::vector<K> gamma, long N) {
    std::size_t d = sys.B.cols(), n = sys.B.rows();
    if (gamma.size() != d) throw DimensionMismatch("gamma must have length d");
    if (N < 0) throw DimensionMismatch("truncation order must be >= 0");
    // pre: A gamma = alpha
    for (std::size_t i = 0; i < sys.A.rows(); ++i) {
        K s = scalar_traits<K>::zero() - sys.alpha[i];
        for (std::size_t j = 0; j < d; ++j)
            s += scalar_traits<K>::from_int(sys.A(i, j)) * gamma[j];
        if (scalar_traits<K>::abs(s) > 1e-12)
            throw DimensionMismatch("gamma does not satisfy A gamma = alpha");
    }

    GammaSeries<K> series;
    series.B = sys.B;
    series.gamma = std::move(gamma);
    series.N = N;

    auto sites = detail::sites_in_box(n, N);
    std::optional<std::vector<long>> base;
    for (const auto& l : sites) {
        if (detail::gamma_coeff_nonzero(series.gamma, series.site_shift(l))) {
            base = l;
            break;
        }
    }
    if (!base) {
        std::ostringstream os;
        os << "every coefficient with |l|_inf <= " << N << " sits at a Gamma pole";
        throw GammaNormalizationUndefined(os.str());
    }
    // prefer l = 0 when it is nonzero (the natural normalization)
    std::vector<long> zero(n, 0);
    if (detail::gamma_coeff_nonzero(series.gamma, series.site_shift(zero))) base = zero;
    series.base = *base;

    auto mstar = series.site_shift(series.base);
    std::vector<K> b(d);
    for (std::size_t j = 0; j < d; ++j)
        b[j] = series.gamma[j] + scalar_traits<K>::from_int(mstar[j]);

    for (const auto& l : sites) {
        auto m = series.site_shift(l);
        if (!detail::gamma_coeff_nonzero(series.gamma, m)) {
            series.coeff[l] = scalar_traits<K>::zero();
            continue;
        }
        K c = scalar_traits<K>::one();
        for (std::size_t j = 0; j < d; ++j) c = c * detail::gamma_ratio(b[j], m[j] - mstar[j]);
        series.coeff[l] = c;
    }
    return series;
}

/// Formal term-wise action of an operator on a truncated series, collected on
/// shifted copies of the exponent lattice. Buckets whose full set of source
/// sites lies inside the truncation window are "interior": for an annihilating
/// operator they vanish identically; everything else is truncation boundary.
template <class K>
struct ResidualSeries {
    long N = 0;
    // per operator term: canonical residual lattice shift and site displacement
    std::vector<std::pair<std::vector<Int>, std::vector<long>>> term_keys;
    std::map<std::vector<Int>, std::map<std::vector<long>, K>> families;
    double interior_max = 0, boundary_max = 0;
    bool interior_zero = true;  // exact for K = CRat

    double max_abs() const { return std::max(interior_max, boundary_max); }

    bool is_interior(const std::vector<Int>& shift, const std::vector<long>& site, long trunc) const {
        for (const auto& [tshift, disp] : term_keys) {
            if (tshift != shift) continue;
            for (std::size_t i = 0; i < site.size(); ++i) {
                long src = site[i] - disp[i];
                if (src > trunc || src < -trunc) return false;
            }
        }
        return true;
    }

    /// Max residual magnitude weighted by |x|^Re(exponent) at a reference
    /// point of (C*)^d: the form in which truncation-boundary terms decay
    /// inside the convergence region.
    std::pair<double, double> weighted_max(const GammaSeries<K>& s,
                                           const std::vector<double>& absx) const {
        std::size_t d = s.B.cols();
        double wi = 0, wb = 0;
        for (const auto& [shift, sites] : families)
            for (const auto& [site, val] : sites) {
                auto m = s.site_shift(site);
                double w = 1;
                for (std::size_t j = 0; j < d; ++j) {
                    double re = to_double(m[j]) + to_double(shift[j]) +
                                std::real(to_complex(s.gamma[j]));
                    w *= std::pow(absx[j], re);
                }
                double a = scalar_traits<K>::abs(val) * w;
                if (is_interior(shift, site, N))
                    wi = std::max(wi, a);
                else
                    wb = std::max(wb, a);
            }
        return {wi, wb};
    }
};

template <class K>
ResidualSeries<K> apply_operator(const DiffOp<K>& op, const GammaSeries<K>& s) {
    std::size_t d = s.B.cols(), n = s.B.rows();
    ResidualSeries<K> res;
    res.N = s.N;
    RatMat p = detail::left_inverse_bt(s.B);

    // canonical (shift, displacement) per operator term
    for (const auto& t : op.terms) {
        std::vector<Rat> ps(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) ps[i] += p(i, j) * Rat(t.xexp[j] - t.dexp[j]);
        std::vector<long> mfold(n);
        std::vector<Int> scan(d);
        for (std::size_t i = 0; i < n; ++i) mfold[i] = round_half_down(ps[i]).template convert_to<long>();
        for (std::size_t j = 0; j < d; ++j) {
            Int bm = 0;
            for (std::size_t i = 0; i < n; ++i) bm += s.B(i, j) * Int(mfold[i]);
            scan[j] = Int(t.xexp[j] - t.dexp[j]) - bm;
        }
        res.term_keys.push_back({scan, mfold});
    }

    for (const auto& [l, c] : s.coeff) {
        if (scalar_traits<K>::is_zero(c)) continue;
        auto m = s.site_shift(l);
        for (std::size_t ti = 0; ti < op.terms.size(); ++ti) {
            const auto& t = op.terms[ti];
            // falling factorials of the exponent under the derivatives
            K f = t.coeff;
            for (std::size_t j = 0; j < d; ++j) {
                K e = s.gamma[j] + scalar_traits<K>::from_int(m[j]);
                for (long k = 0; k < t.dexp[j]; ++k)
                    f = f * (e - scalar_traits<K>::from_int(Int(k)));
            }
            std::vector<long> site(n);
            for (std::size_t i = 0; i < n; ++i) site[i] = l[i] + res.term_keys[ti].second[i];
            auto& bucket = res.families[res.term_keys[ti].first][site];
            bucket += f * c;
        }
    }

    for (auto& [shift, sites] : res.families) {
        for (auto& [site, val] : sites) {
            double a = scalar_traits<K>::abs(val);
            if (res.is_interior(shift, site, s.N)) {
                res.interior_max = std::max(res.interior_max, a);
                if (!scalar_traits<K>::is_zero(val)) res.interior_zero = false;
            } else {
                res.boundary_max = std::max(res.boundary_max, a);
            }
        }
    }
    return res;
}

/// Facet normals (primitive, inward) of the cone spanned by the columns of A.
inline std::vector<std::vector<Int>> cone_facet_normals(const IntMat& a) {
    std::size_t dn = a.rows(), d = a.cols();
    std::vector<std::vector<Rat>> cols(d, std::vector<Rat>(dn));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < dn; ++i) cols[j][i] = Rat(a(i, j));
    {
        RatMat m(d, dn);
        for (std::size_t j = 0; j < d; ++j) m.set_row(j, cols[j]);
        if (rank(std::move(m)) != dn)
            throw DegenerateCone("cone of the kernel columns is not full-dimensional");
    }
    std::set<std::vector<Int>> normals;
    std::vector<std::size_t> cur;
    detail::subsets_of_size(d, dn - 1, 0, cur, [&](const std::vector<std::size_t>& sub) {
        RatMat m(sub.size(), dn);
        for (std::size_t i = 0; i < sub.size(); ++i) m.set_row(i, cols[sub[i]]);
        auto ns = nullspace(std::move(m));
        if (ns.size() != 1) return;
        auto u = to_primitive_int(ns[0]);
        // supporting test: all columns weakly on one side
        int pos = 0, neg = 0;
        for (std::size_t j = 0; j < d; ++j) {
            Rat sgn(0);
            for (std::size_t i = 0; i < dn; ++i) sgn += Rat(u[i]) * cols[j][i];
            if (sgn > 0) ++pos;
            if (sgn < 0) ++neg;
        }
        if (pos && neg) return;
        normals.insert(std::move(u));
    });
    return {normals.begin(), normals.end()};
}

/// Non-resonance of alpha: alpha avoids every Z^{d-n}-translate of the
/// facet-supporting hyperplanes of the cone R+ A. With primitive normals the
/// translate offsets of {<u,x> = 0} are exactly the integers, so the test is
/// exact integrality of <u, alpha>.
inline bool check_nonresonant(const KernelBasis& kernel, const std::vector<Rat>& alpha) {
    if (alpha.size() != kernel.rows()) throw DimensionMismatch("alpha size must equal d - n");
    for (const auto& u : cone_facet_normals(kernel.A)) {
        Rat s(0);
        for (std::size_t i = 0; i < u.size(); ++i) s += Rat(u[i]) * alpha[i];
        if (den(s) == 1) return false;
    }
    return true;
}

inline bool check_nonresonant(const KernelBasis& kernel, const std::vector<CRat>& alpha) {
    if (alpha.size() != kernel.rows()) throw DimensionMismatch("alpha size must equal d - n");
    for (const auto& u : cone_facet_normals(kernel.A)) {
        CRat s;
        for (std::size_t i = 0; i < u.size(); ++i) s += CRat(Rat(u[i])) * alpha[i];
        if (s.im == 0 && den(s.re) == 1) return false;
    }
    return true;
}

}  // namespace gkzlab
