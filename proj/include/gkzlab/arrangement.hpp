#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gkzlab/zonotope.hpp"

namespace gkzlab {

/// Open axis-aligned clipping box.
struct Box {
    std::vector<Rat> lo, hi;

    std::size_t dim() const { return lo.size(); }

    static Box make(std::vector<Rat> lo, std::vector<Rat> hi) {
        if (lo.size() != hi.size()) throw DimensionMismatch("box lo/hi size mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw DimensionMismatch("box must have nonempty interior");
        return {std::move(lo), std::move(hi)};
    }

    /// Twice the fundamental domain [0,1)^n, centered: [-1/2, 3/2]^n.
    static Box standard(std::size_t n) {
        return {std::vector<Rat>(n, Rat(-1, 2)), std::vector<Rat>(n, Rat(3, 2))};
    }

    bool contains_open(const std::vector<Rat>& x) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (!(lo[i] < x[i] && x[i] < hi[i])) return false;
        return true;
    }

    std::vector<Rat> center() const {
        std::vector<Rat> c(dim());
        for (std::size_t i = 0; i < dim(); ++i) c[i] = (lo[i] + hi[i]) / 2;
        return c;
    }
};

/// The finite window of a Z^n-periodic arrangement: all integer translates of
/// the base hyperplanes meeting the closed box.
struct ClippedArrangement {
    std::vector<Hyperplane> base;
    Box box;
    std::vector<Hyperplane> active;

    std::size_t dim() const { return box.dim(); }
};

/// All Z^n-translates of the base hyperplanes that meet the closed box.
/// Since base normals are primitive, <u, Z^n> = Z and the translate offsets of
/// (u, c) are exactly c + Z; completeness reduces to an exact range bound.
inline ClippedArrangement clip_periodic(const std::vector<Hyperplane>& base, const Box& box) {
    ClippedArrangement arr{base, box, {}};
    std::set<Hyperplane> active;
    for (const auto& h : base) {
        // support interval of <u, .> over the closed box
        Rat lo(0), hi(0);
        for (std::size_t i = 0; i < box.dim(); ++i) {
            Rat a = Rat(h.normal[i]) * box.lo[i];
            Rat b = Rat(h.normal[i]) * box.hi[i];
            lo += std::min(a, b);
            hi += std::max(a, b);
        }
        for (Int k = ceil_rat(lo - h.offset); k <= floor_rat(hi - h.offset); ++k)
            active.insert(Hyperplane::canonical(h.normal, h.offset + Rat(k)));
    }
    arr.active.assign(active.begin(), active.end());
    return arr;
}

/// The SKMS wall system of a toric input: negated supporting hyperplanes of
/// the weight zonotope, optionally translated, then clipped periodically.
inline ClippedArrangement skms_arrangement(const ToricInput& input, const Box& box,
                                           const std::vector<Rat>* translation = nullptr) {
    auto z = Zonotope::from_weights(input);
    std::vector<Hyperplane> base;
    for (const auto& h : supporting_hyperplanes(z)) {
        Hyperplane g = h.negated();
        if (translation) g = g.translated(*translation);
        base.push_back(g);
    }
    return clip_periodic(base, box);
}

enum class Sign : int { minus = -1, zero = 0, plus = 1 };

inline char sign_char(Sign s) { return s == Sign::zero ? '0' : (s == Sign::plus ? '+' : '-'); }

inline Sign sign_of(const Rat& v) {
    if (v == 0) return Sign::zero;
    return v > 0 ? Sign::plus : Sign::minus;
}

/// One stratum: the set of box-interior points realizing a fixed sign vector
/// over the active hyperplanes. Strata are convex and relatively open.
struct Face {
    std::vector<Sign> signs;
    std::size_t dim;
    std::vector<Rat> witness;

    std::string sign_string() const {
        std::string s;
        for (auto sg : signs) s.push_back(sign_char(sg));
        return s;
    }
};

/// Faces of the clipped arrangement with the closure partial order.
class FacePoset {
public:
    FacePoset(ClippedArrangement arr, std::vector<Face> faces)
        : arr_(std::move(arr)), faces_(std::move(faces)) {
        build_order();
    }

    const ClippedArrangement& arrangement() const { return arr_; }
    const std::vector<Face>& faces() const { return faces_; }
    std::size_t size() const { return faces_.size(); }
    const Face& face(std::size_t i) const { return faces_[i]; }

    bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }

    std::optional<std::size_t> index_of(const std::string& sign_string) const {
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (faces_[i].sign_string() == sign_string) return i;
        return std::nullopt;
    }

    /// Canonical key of the affine span (the flat cut out by the zero set).
    const std::vector<std::vector<Rat>>& span_key(std::size_t i) const { return span_keys_[i]; }

private:
    void build_order();

    ClippedArrangement arr_;
    std::vector<Face> faces_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::vector<std::vector<Rat>>> span_keys_;

    friend FacePoset stratify(const ClippedArrangement&);
};

namespace detail {

// Canonical rref form of the affine system {<u_h, x> = c_h : h in zero set},
// used as a dictionary key for flats.
inline std::vector<std::vector<Rat>> flat_key(const std::vector<Hyperplane>& active,
                                              const std::vector<std::size_t>& zero_set,
                                              std::size_t n) {
    RatMat m(zero_set.size(), n + 1);
    for (std::size_t i = 0; i < zero_set.size(); ++i) {
        const auto& h = active[zero_set[i]];
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(h.normal[j]);
        m(i, n) = h.offset;
    }
    auto pivots = rref(m);
    std::vector<std::vector<Rat>> key;
    for (std::size_t i = 0; i < pivots.size(); ++i) key.push_back(m.row(i));
    return key;
}

inline std::vector<LinConstraint> box_constraints(const Box& box) {
    std::size_t n = box.dim();
    std::vector<LinConstraint> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rat> e(n, Rat(0));
        e[i] = 1;
        out.push_back(lt_constraint(e, box.hi[i]));
        out.push_back(gt_constraint(std::move(e), box.lo[i]));
    }
    return out;
}

}  // namespace detail

/// Relative-interior membership constraints of a face, in ambient coordinates.
inline std::vector<LinConstraint> face_constraints(const FacePoset& p, std::size_t fi) {
    const auto& arr = p.arrangement();
    const auto& f = p.face(fi);
    std::size_t n = arr.dim();
    auto cons = detail::box_constraints(arr.box);
    for (std::size_t h = 0; h < arr.active.size(); ++h) {
        std::vector<Rat> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = Rat(arr.active[h].normal[j]);
        const Rat& c = arr.active[h].offset;
        switch (f.signs[h]) {
            case Sign::zero: cons.push_back(eq_constraint(std::move(a), c)); break;
            case Sign::plus: cons.push_back(gt_constraint(std::move(a), c)); break;
            case Sign::minus: cons.push_back(lt_constraint(std::move(a), c)); break;
        }
    }
    return cons;
}

/// Enumerates every face of the clipped arrangement inside the open box.
/// Faces are found flat by flat (each face is a full-dimensional open cell of
/// the arrangement restricted to the flat of its zero set); sign vectors and
/// witnesses are exact.
inline FacePoset stratify(const ClippedArrangement& arr);

/// C' <= C iff sign(C') zero-refines sign(C); cross-checked geometrically at
/// poset construction time.
inline bool face_leq(const FacePoset& p, std::size_t a, std::size_t b) { return p.leq(a, b); }

/// Same dimension L, same affine span, sharing a facet (common face of
/// dimension L-1); requires distinct faces.
inline bool same_dim_adjacent(const FacePoset& p, std::size_t a, std::size_t b) {
    if (a == b) return false;
    const Face& fa = p.face(a);
    const Face& fb = p.face(b);
    if (fa.dim != fb.dim) return false;
    if (p.span_key(a) != p.span_key(b)) return false;
    for (std::size_t f = 0; f < p.size(); ++f)
        if (p.face(f).dim + 1 == fa.dim && p.leq(f, a) && p.leq(f, b)) return true;
    return false;
}

enum class CollinearStatus { no, yes, incomplete };

struct CollinearResult {
    CollinearStatus status;
    // certified witnesses (c2 = (1-t) c1 + t c3 in the closed-parameter sense)
    std::vector<Rat> c1, c2, c3;
    Rat t;
};

/// Collinearity of a face triple: a common lower-bound face must exist and a
/// betweenness witness c2 in [c1, c3]. Degenerate placements (C2 = C1 or
/// C2 = C3) are accepted directly; interior placements are decided by exact
/// rational feasibility over a finite t-grid after a per-hyperplane
/// necessary-sign filter. Positives always carry exact witnesses; a filter
/// pass without a witness at the configured grid is reported as incomplete,
/// never silently false.
inline CollinearResult collinear_check(const FacePoset& p, std::size_t c1, std::size_t c2,
                                       std::size_t c3, unsigned max_denominator = 16);

/// Boolean form; throws IncompleteDecision instead of guessing.
inline bool collinear(const FacePoset& p, std::size_t c1, std::size_t c2, std::size_t c3,
                      unsigned max_denominator = 16) {
    auto r = collinear_check(p, c1, c2, c3, max_denominator);
    if (r.status == CollinearStatus::incomplete)
        throw IncompleteDecision("collinearity undecided at grid denominator limit");
    return r.status == CollinearStatus::yes;
}

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

inline void FacePoset::build_order() {
    std::size_t m = faces_.size();
    const auto& act = arr_.active;
    leq_.assign(m, std::vector<bool>(m, false));
    span_keys_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> zero;
        for (std::size_t h = 0; h < act.size(); ++h)
            if (faces_[i].signs[h] == Sign::zero) zero.push_back(h);
        span_keys_[i] = detail::flat_key(act, zero, arr_.dim());
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            bool refine = true;
            for (std::size_t h = 0; h < act.size() && refine; ++h)
                refine = faces_[a].signs[h] == faces_[b].signs[h] ||
                         faces_[a].signs[h] == Sign::zero;
            // geometric cross-check: witness of a in the closure of b
            bool geo = true;
            for (std::size_t h = 0; h < act.size() && geo; ++h) {
                Rat v = act[h].eval(faces_[a].witness);
                switch (faces_[b].signs[h]) {
                    case Sign::zero: geo = (v == 0); break;
                    case Sign::plus: geo = (v >= 0); break;
                    case Sign::minus: geo = (v <= 0); break;
                }
            }
            if (refine != geo)
                throw std::logic_error("face order: sign refinement and closure test disagree");
            leq_[a][b] = refine;
        }
}

inline FacePoset stratify(const ClippedArrangement& arr) {
    std::size_t n = arr.dim();
    const auto& act = arr.active;
    std::map<std::vector<int>, Face> found;

    auto record = [&](const std::vector<Rat>& witness, std::size_t flat_dim) {
        if (!arr.box.contains_open(witness)) throw std::logic_error("witness escaped the box");
        std::vector<Sign> signs(act.size());
        std::vector<int> key(act.size());
        for (std::size_t h = 0; h < act.size(); ++h) {
            signs[h] = sign_of(act[h].eval(witness));
            key[h] = static_cast<int>(signs[h]);
        }
        // witness denominators: snap to the smallest grid realizing the signs
        std::vector<Rat> w = witness;
        for (unsigned q = 1; q <= 16; ++q) {
            std::vector<Rat> cand(n);
            for (std::size_t i = 0; i < n; ++i)
                cand[i] = Rat(round_half_down(witness[i] * Rat(q)), Int(q));
            if (!arr.box.contains_open(cand)) continue;
            bool ok = true;
            for (std::size_t h = 0; h < act.size() && ok; ++h)
                ok = sign_of(act[h].eval(cand)) == signs[h];
            if (ok) {
                w = cand;
                break;
            }
        }
        found.try_emplace(key, Face{signs, flat_dim, w});
    };

    if (act.empty()) {
        record(arr.box.center(), n);
    } else {
        std::set<std::vector<std::vector<Rat>>> seen_flats;
        std::vector<std::size_t> cur;
        for (std::size_t k = 0; k <= n; ++k) {
            detail::subsets_of_size(act.size(), k, 0, cur, [&](const std::vector<std::size_t>& sub) {
                // flat of the subset
                RatMat eq(sub.size(), n);
                std::vector<Rat> rhs(sub.size());
                for (std::size_t i = 0; i < sub.size(); ++i) {
                    for (std::size_t j = 0; j < n; ++j) eq(i, j) = Rat(act[sub[i]].normal[j]);
                    rhs[i] = act[sub[i]].offset;
                }
                auto part = solve_rational(eq, rhs);
                if (!part) return;  // inconsistent subset
                if (!seen_flats.insert(detail::flat_key(act, sub, n)).second) return;

                auto dirs = nullspace(eq);
                std::size_t m = dirs.size();

                // constraints in flat parameters t: x = p + V t
                auto to_param = [&](const std::vector<Rat>& a_x, const Rat& c) {
                    std::vector<Rat> a_t(m, Rat(0));
                    Rat cc = c;
                    for (std::size_t j = 0; j < n; ++j) cc -= a_x[j] * (*part)[j];
                    for (std::size_t kk = 0; kk < m; ++kk)
                        for (std::size_t j = 0; j < n; ++j) a_t[kk] += a_x[j] * dirs[kk][j];
                    return std::pair<std::vector<Rat>, Rat>{a_t, cc};
                };

                std::vector<LinConstraint> base_cons;
                for (std::size_t i = 0; i < n; ++i) {
                    std::vector<Rat> e(n, Rat(0));
                    e[i] = 1;
                    auto [au, cu] = to_param(e, arr.box.hi[i]);
                    base_cons.push_back(lt_constraint(au, cu));
                    auto [al, cl] = to_param(e, arr.box.lo[i]);
                    base_cons.push_back(gt_constraint(al, cl));
                }

                // hyperplanes cutting the flat properly become DFS variables
                std::vector<std::pair<std::vector<Rat>, Rat>> cuts;
                for (std::size_t h = 0; h < act.size(); ++h) {
                    std::vector<Rat> a_x(n);
                    for (std::size_t j = 0; j < n; ++j) a_x[j] = Rat(act[h].normal[j]);
                    auto [a_t, c_t] = to_param(a_x, act[h].offset);
                    bool zero = std::all_of(a_t.begin(), a_t.end(), [](const Rat& q) { return q == 0; });
                    if (!zero) cuts.push_back({a_t, c_t});
                }

                // DFS over strict sign assignments with exact pruning
                std::function<void(std::size_t, std::vector<LinConstraint>&)> dfs =
                    [&](std::size_t idx, std::vector<LinConstraint>& cons) {
                        auto feas = solve_strict(m, cons);
                        if (!feas) return;
                        if (idx == cuts.size()) {
                            std::vector<Rat> x(n);
                            for (std::size_t j = 0; j < n; ++j) {
                                x[j] = (*part)[j];
                                for (std::size_t kk = 0; kk < m; ++kk)
                                    x[j] += dirs[kk][j] * (*feas)[kk];
                            }
                            record(x, m);
                            return;
                        }
                        cons.push_back(lt_constraint(cuts[idx].first, cuts[idx].second));
                        dfs(idx + 1, cons);
                        cons.pop_back();
                        cons.push_back(gt_constraint(cuts[idx].first, cuts[idx].second));
                        dfs(idx + 1, cons);
                        cons.pop_back();
                    };
                dfs(0, base_cons);
            });
        }
    }

    std::vector<Face> faces;
    for (auto& [key, f] : found) faces.push_back(std::move(f));
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.sign_string() < b.sign_string();
    });
    // sanity: dim equals n minus the rank of the zero-set normals
    for (const auto& f : faces) {
        std::vector<std::vector<Int>> zn;
        for (std::size_t h = 0; h < act.size(); ++h)
            if (f.signs[h] == Sign::zero) zn.push_back(act[h].normal);
        if (f.dim != n - rank_int_rows(zn, n))
            throw std::logic_error("face dimension inconsistent with zero-set rank");
    }
    return FacePoset(arr, std::move(faces));
}

inline CollinearResult collinear_check(const FacePoset& p, std::size_t i1, std::size_t i2,
                                       std::size_t i3, unsigned max_denominator /*= 16*/) {
    const auto& arr = p.arrangement();
    std::size_t n = arr.dim();
    const auto& act = arr.active;

    bool has_lower = false;
    for (std::size_t f = 0; f < p.size() && !has_lower; ++f)
        has_lower = p.leq(f, i1) && p.leq(f, i2) && p.leq(f, i3);
    if (!has_lower) return {CollinearStatus::no, {}, {}, {}, Rat(0)};

    const Face& f1 = p.face(i1);
    const Face& f2 = p.face(i2);
    const Face& f3 = p.face(i3);

    if (i2 == i1) return {CollinearStatus::yes, f1.witness, f1.witness, f3.witness, Rat(0)};
    if (i2 == i3) return {CollinearStatus::yes, f1.witness, f3.witness, f3.witness, Rat(1)};

    // necessary per-hyperplane filter for an interior parameter t in (0,1)
    auto attainable = [](Sign a, Sign b, Sign want) {
        if (a == Sign::zero && b == Sign::zero) return want == Sign::zero;
        if (a == b) return want == a;
        if (a == Sign::zero) return want == b;
        if (b == Sign::zero) return want == a;
        return true;  // opposite strict signs reach everything
    };
    for (std::size_t h = 0; h < act.size(); ++h)
        if (!attainable(f1.signs[h], f3.signs[h], f2.signs[h]))
            return {CollinearStatus::no, {}, {}, {}, Rat(0)};

    // candidate parameters: grid plus values derived from the witnesses
    std::set<Rat> ts;
    for (unsigned q = 1; q <= max_denominator; ++q)
        for (unsigned pnum = 1; pnum < q; ++pnum)
            if (std::gcd(pnum, q) == 1) ts.insert(Rat(Int(pnum), Int(q)));
    for (std::size_t h = 0; h < act.size(); ++h) {
        if (f2.signs[h] != Sign::zero) continue;
        Rat e1 = act[h].eval(f1.witness);
        Rat e3 = act[h].eval(f3.witness);
        if (e1 == e3) continue;
        Rat t = e1 / (e1 - e3);
        if (Rat(0) < t && t < Rat(1)) ts.insert(t);
    }

    auto eval_signs_ok = [&](const std::vector<Rat>& x, const Face& f) {
        if (!arr.box.contains_open(x)) return false;
        for (std::size_t h = 0; h < act.size(); ++h)
            if (sign_of(act[h].eval(x)) != f.signs[h]) return false;
        return true;
    };

    auto cons1 = face_constraints(p, i1);
    auto cons3 = face_constraints(p, i3);

    for (const Rat& t : ts) {
        // cheap certificate from the stored witnesses
        std::vector<Rat> mid(n);
        for (std::size_t j = 0; j < n; ++j)
            mid[j] = (Rat(1) - t) * f1.witness[j] + t * f3.witness[j];
        if (eval_signs_ok(mid, f2))
            return {CollinearStatus::yes, f1.witness, mid, f3.witness, t};

        // exact feasibility in (c1, c3)
        std::vector<LinConstraint> cons;
        auto widen = [&](const LinConstraint& c, std::size_t offset) {
            std::vector<Rat> a(2 * n, Rat(0));
            for (std::size_t j = 0; j < n; ++j) a[offset + j] = c.a[j];
            return LinConstraint{std::move(a), c.c, c.equality};
        };
        for (const auto& c : cons1) cons.push_back(widen(c, 0));
        for (const auto& c : cons3) cons.push_back(widen(c, n));
        // (1-t) c1 + t c3 must realize f2's signs (box membership is convex)
        for (std::size_t h = 0; h < act.size(); ++h) {
            std::vector<Rat> a(2 * n, Rat(0));
            for (std::size_t j = 0; j < n; ++j) {
                a[j] = Rat(act[h].normal[j]) * (Rat(1) - t);
                a[n + j] = Rat(act[h].normal[j]) * t;
            }
            const Rat& c = act[h].offset;
            switch (f2.signs[h]) {
                case Sign::zero: cons.push_back(eq_constraint(std::move(a), c)); break;
                case Sign::plus: cons.push_back(gt_constraint(std::move(a), c)); break;
                case Sign::minus: cons.push_back(lt_constraint(std::move(a), c)); break;
            }
        }
        if (auto sol = solve_strict(2 * n, std::move(cons))) {
            std::vector<Rat> c1(sol->begin(), sol->begin() + n);
            std::vector<Rat> c3(sol->begin() + n, sol->end());
            std::vector<Rat> c2(n);
            for (std::size_t j = 0; j < n; ++j) c2[j] = (Rat(1) - t) * c1[j] + t * c3[j];
            return {CollinearStatus::yes, c1, c2, c3, t};
        }
    }
    return {CollinearStatus::incomplete, {}, {}, {}, Rat(0)};
}

}  // namespace gkzlab
