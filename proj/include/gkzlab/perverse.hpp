#pragma once

#include <array>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gkzlab/arrangement.hpp"
#include "gkzlab/matrix.hpp"

namespace gkzlab {

/// Diagram data over a face poset: a vector space dimension per face and, for
/// every comparable pair C' <= C, an upward map gamma[C'->C] : E_{C'} -> E_C
/// and a downward map delta[C->C'] : E_C -> E_{C'}. Equal faces carry
/// identities.
struct PerverseDatum {
    std::vector<std::size_t> dims;                     // by face index
    std::map<std::pair<std::size_t, std::size_t>, CMat> gamma;  // key (from, to), from <= to
    std::map<std::pair<std::size_t, std::size_t>, CMat> delta;  // key (from, to), to <= from

    const CMat& gamma_map(std::size_t from, std::size_t to) const {
        auto it = gamma.find({from, to});
        if (it == gamma.end()) {
            std::ostringstream os;
            os << "missing gamma[" << from << " -> " << to << "]";
            throw ShapeMismatch(os.str());
        }
        return it->second;
    }
    const CMat& delta_map(std::size_t from, std::size_t to) const {
        auto it = delta.find({from, to});
        if (it == delta.end()) {
            std::ostringstream os;
            os << "missing delta[" << from << " -> " << to << "]";
            throw ShapeMismatch(os.str());
        }
        return it->second;
    }

    /// Identity datum: every face carries C^k with identity maps.
    static PerverseDatum identity(const FacePoset& p, std::size_t k = 1) {
        PerverseDatum d;
        d.dims.assign(p.size(), k);
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b)
                if (p.leq(a, b)) {
                    d.gamma[{a, b}] = CMat::identity(k);
                    d.delta[{b, a}] = CMat::identity(k);
                }
        return d;
    }
};

struct Violation {
    std::string axiom;                // one of the validator's class ids
    std::vector<std::size_t> faces;   // faces involved
    double defect;                    // matrix-norm defect
};

struct ValidationReport {
    bool pass = false;
    std::vector<Violation> violations;
    // collinearity queries that hit the grid limit: re-reported, never assumed
    std::vector<std::array<std::size_t, 3>> unchecked;

    /// distinct axiom ids among the violations
    std::vector<std::string> violation_classes() const {
        std::vector<std::string> out;
        for (const auto& v : violations)
            if (std::find(out.begin(), out.end(), v.axiom) == out.end()) out.push_back(v.axiom);
        return out;
    }
};

namespace detail {

// Smallest singular value: Jacobi eigen-iteration on the real embedding
// [[Re H, -Im H], [Im H, Re H]] of the Hermitian Gram matrix H = M^H M (its
// spectrum is that of H, doubled).
inline double smallest_singular_value(const CMat& m) {
    std::size_t n = m.cols();
    if (n == 0 || m.rows() == 0) return 0;
    CMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Cplx s(0.0);
            for (std::size_t k = 0; k < m.rows(); ++k) s += std::conj(m(k, i)) * m(k, j);
            h(i, j) = s;
        }
    std::size_t nn = 2 * n;
    std::vector<double> a(nn * nn);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * nn + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            at(i, j) = h(i, j).real();
            at(i, j + n) = -h(i, j).imag();
            at(i + n, j) = h(i, j).imag();
            at(i + n, j + n) = h(i, j).real();
        }
    double scale = 1.0;
    for (std::size_t i = 0; i < nn * nn; ++i) scale = std::max(scale, std::abs(a[i]));
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < nn; ++p)
            for (std::size_t q = p + 1; q < nn; ++q) off = std::max(off, std::abs(at(p, q)));
        if (off < 1e-16 * scale) break;
        for (std::size_t p = 0; p < nn; ++p)
            for (std::size_t q = p + 1; q < nn; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) < 1e-18 * scale) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < nn; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < nn; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nn; ++i) mn = std::min(mn, std::max(0.0, at(i, i)));
    return std::sqrt(mn);
}

}  // namespace detail

/// phi_{C1 C2} = gamma[C' -> C2] delta[C1 -> C'] over a common lower bound C';
/// computed for every common lower bound and required to agree.
inline CMat phi(const PerverseDatum& d, const FacePoset& p, std::size_t c1, std::size_t c2,
                double tol = 1e-10) {
    bool found = false;
    CMat result;
    for (std::size_t f = 0; f < p.size(); ++f) {
        if (!(p.leq(f, c1) && p.leq(f, c2))) continue;
        CMat cand = d.gamma_map(f, c2) * d.delta_map(c1, f);
        if (!found) {
            result = cand;
            found = true;
        } else if (max_abs(cand - result) > tol) {
            std::ostringstream os;
            os << "phi(" << c1 << ", " << c2 << ") depends on the lower bound (defect "
               << max_abs(cand - result) << ")";
            throw IllDefinedPhi(os.str());
        }
    }
    if (!found) throw NoCommonFace("no common lower bound for the phi pair");
    return result;
}

/// Checks the diagram axioms in dependency order and stops at the first class
/// with violations (later axioms presuppose the earlier ones): gamma
/// functoriality, delta functoriality, gamma delta = id together with
/// well-definedness of phi, invertibility of phi between same-dimension
/// facet-sharing faces, and phi composition along collinear triples. The
/// report lists every violation of the failing class.
inline ValidationReport validate(const FacePoset& p, const PerverseDatum& d, double tol = 1e-10,
                                 unsigned collinear_max_denominator = 16) {
    ValidationReport report;
    std::size_t m = p.size();
    if (d.dims.size() != m) throw ShapeMismatch("datum has the wrong number of faces");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (p.leq(a, b)) {
                const CMat& g = d.gamma_map(a, b);
                const CMat& dl = d.delta_map(b, a);
                if (g.rows() != d.dims[b] || g.cols() != d.dims[a])
                    throw ShapeMismatch("gamma map with wrong shape");
                if (dl.rows() != d.dims[a] || dl.cols() != d.dims[b])
                    throw ShapeMismatch("delta map with wrong shape");
            }

    auto add = [&](const char* axiom, std::initializer_list<std::size_t> faces, double defect) {
        report.violations.push_back({axiom, std::vector<std::size_t>(faces), defect});
    };

    // gamma functoriality over chains a <= b <= c (identity on equal faces
    // is the chain case a = b or b = c)
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (!p.leq(a, b)) continue;
            for (std::size_t c = 0; c < m; ++c) {
                if (!p.leq(b, c)) continue;
                double defect =
                    max_abs(d.gamma_map(a, c) - d.gamma_map(b, c) * d.gamma_map(a, b));
                if (defect > tol) add("gamma-functoriality", {a, b, c}, defect);
            }
        }
    if (!report.violations.empty()) return report;

    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (!p.leq(b, a)) continue;
            for (std::size_t c = 0; c < m; ++c) {
                if (!p.leq(c, b)) continue;
                double defect =
                    max_abs(d.delta_map(a, c) - d.delta_map(b, c) * d.delta_map(a, b));
                if (defect > tol) add("delta-functoriality", {a, b, c}, defect);
            }
        }
    if (!report.violations.empty()) return report;

    // gamma delta = id, and phi well-defined across all common lower bounds
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (!p.leq(a, b)) continue;
            double defect = max_abs(d.gamma_map(a, b) * d.delta_map(b, a) -
                                    CMat::identity(d.dims[b]));
            if (defect > tol) add("gamma-delta-identity", {a, b}, defect);
        }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            try {
                phi(d, p, a, b, tol);
            } catch (const NoCommonFace&) {
            } catch (const IllDefinedPhi&) {
                add("gamma-delta-identity", {a, b}, 0.0);
            }
        }
    if (!report.violations.empty()) return report;

    // invertibility of phi between adjacent same-dimension faces
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (!same_dim_adjacent(p, a, b)) continue;
            CMat f = phi(d, p, a, b, tol);
            double sv = (f.rows() == f.cols()) ? detail::smallest_singular_value(f) : 0.0;
            if (!(sv > tol)) add("phi-invertibility", {a, b}, sv);
        }
    if (!report.violations.empty()) return report;

    // phi composition along collinear triples
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
                auto r = collinear_check(p, a, b, c, collinear_max_denominator);
                if (r.status == CollinearStatus::incomplete) {
                    report.unchecked.push_back({a, b, c});
                    continue;
                }
                if (r.status != CollinearStatus::yes) continue;
                double defect =
                    max_abs(phi(d, p, a, c, tol) - phi(d, p, b, c, tol) * phi(d, p, a, b, tol));
                if (defect > tol) add("phi-composition", {a, b, c}, defect);
            }

    report.pass = report.violations.empty();
    return report;
}

/// The one-point-line fixture: faces {C-, C0, C+} with E0 = C^2, E+- = C,
/// delta_+ = (1,0)^T, delta_- = (0,1)^T, gamma_+ = (1, a), gamma_- = (b, 1).
/// Satisfies the axioms iff a != 0 and b != 0 (phi_{-,+} = a, phi_{+,-} = b).
struct Rank1Fixture {
    FacePoset poset;
    PerverseDatum datum;
    std::size_t minus, zero, plus;  // face indices
};

inline Rank1Fixture example_datum_rank1(Cplx a, Cplx b) {
    std::vector<Hyperplane> base{Hyperplane::canonical({Int(1)}, Rat(0))};
    Box box = Box::make({Rat(-3, 4)}, {Rat(3, 4)});
    FacePoset poset = stratify(clip_periodic(base, box));
    if (poset.size() != 3) throw std::logic_error("one-point-line fixture must have 3 faces");
    std::size_t minus = *poset.index_of("-");
    std::size_t zero = *poset.index_of("0");
    std::size_t plus = *poset.index_of("+");

    PerverseDatum d;
    d.dims.assign(3, 1);
    d.dims[zero] = 2;
    auto ident = [&](std::size_t f) {
        d.gamma[{f, f}] = CMat::identity(d.dims[f]);
        d.delta[{f, f}] = CMat::identity(d.dims[f]);
    };
    ident(minus);
    ident(zero);
    ident(plus);
    d.gamma[{zero, plus}] = CMat{{Cplx(1.0), a}};
    d.delta[{plus, zero}] = CMat{{Cplx(1.0)}, {Cplx(0.0)}};
    d.gamma[{zero, minus}] = CMat{{b, Cplx(1.0)}};
    d.delta[{minus, zero}] = CMat{{Cplx(0.0)}, {Cplx(1.0)}};
    return {std::move(poset), std::move(d), minus, zero, plus};
}

}  // namespace gkzlab
