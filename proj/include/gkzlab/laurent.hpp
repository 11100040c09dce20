#pragma once

#include <complex>
#include <map>
#include <vector>

#include "gkzlab/matrix.hpp"

namespace gkzlab {

inline Cplx pow_int(Cplx base, long e) {
    if (e < 0) return Cplx(1.0) / pow_int(base, -e);
    Cplx out(1.0);
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

/// Element of the group algebra C[Z^k]: finite map exponent -> coefficient.
/// Zero coefficients are never stored.
class LaurentPoly {
public:
    LaurentPoly() : nvars_(0) {}
    explicit LaurentPoly(std::size_t nvars) : nvars_(nvars) {}

    static LaurentPoly constant(std::size_t nvars, Cplx c) {
        LaurentPoly p(nvars);
        p.add_term(std::vector<long>(nvars, 0), c);
        return p;
    }
    static LaurentPoly monomial(std::size_t nvars, std::vector<long> exp, Cplx c = 1.0) {
        LaurentPoly p(nvars);
        p.add_term(std::move(exp), c);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const std::map<std::vector<long>, Cplx>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(std::vector<long> exp, Cplx c) {
        auto it = terms_.find(exp);
        if (it == terms_.end()) {
            if (c != Cplx(0.0)) terms_.emplace(std::move(exp), c);
            return;
        }
        it->second += c;
        if (it->second == Cplx(0.0)) terms_.erase(it);
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out = a;
        out.nvars_ = std::max(a.nvars_, b.nvars_);
        for (const auto& [e, c] : b.terms_) out.add_term(e, c);
        return out;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out = a;
        out.nvars_ = std::max(a.nvars_, b.nvars_);
        for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
        return out;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out(std::max(a.nvars_, b.nvars_));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                std::vector<long> e(out.nvars_, 0);
                for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
                for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
                out.add_term(std::move(e), ca * cb);
            }
        return out;
    }
    LaurentPoly& operator+=(const LaurentPoly& b) { return *this = *this + b; }
    LaurentPoly& operator-=(const LaurentPoly& b) { return *this = *this - b; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.terms_ == b.terms_;
    }

    /// Evaluation at h in (C*)^k.
    Cplx eval(const std::vector<Cplx>& h) const {
        Cplx out(0.0);
        for (const auto& [e, c] : terms_) {
            Cplx m = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) m *= pow_int(h[i], e[i]);
            out += m;
        }
        return out;
    }

private:
    std::size_t nvars_;
    std::map<std::vector<long>, Cplx> terms_;
};

using LaurentMatrix = Matrix<LaurentPoly>;

/// Entry-wise evaluation at a point of the torus; every coordinate must be
/// nonzero.
inline CMat specialize(const LaurentMatrix& m, const std::vector<Cplx>& h) {
    for (const auto& z : h)
        if (z == Cplx(0.0)) throw ZeroCoordinate("specialization point has a zero coordinate");
    CMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(h);
    return out;
}

}  // namespace gkzlab
