#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "gkzlab/normal_form.hpp"

namespace gkzlab {

/// Weight matrix of a (C*)^n action on C^d: column j is the character beta_j.
/// Valid inputs have full row rank with all Smith invariants 1, so the weight
/// map Z^d -> Z^n is onto and the kernel is a direct summand.
struct ToricInput {
    IntMat B;  // n x d
    std::size_t d() const { return B.cols(); }
    std::size_t n() const { return B.rows(); }

    static ToricInput checked(IntMat B) {
        ToricInput in{std::move(B)};
        if (in.n() < 1 || in.d() < in.n())
            throw DimensionMismatch("weight matrix must be n x d with d >= n >= 1");
        auto sm = smith_normal_form(in.B);
        auto inv = sm.invariants();
        if (inv.size() != in.n())
            throw NotSurjective("weight matrix does not have full row rank");
        for (const auto& s : inv)
            if (s != 1) {
                std::ostringstream os;
                os << "weight matrix is not surjective onto Z^n (Smith invariant " << s << ")";
                throw NotSurjective(os.str());
            }
        return in;
    }
};

/// Rows form a basis of ker(B: Z^d -> Z^n). Stored as (d-n) x d, i.e. the
/// transpose of the inclusion map: row i lists the coefficients a_{ij} of the
/// i-th homogeneity relation.
struct KernelBasis {
    IntMat A;  // (d-n) x d
    std::size_t rows() const { return A.rows(); }
    std::size_t cols() const { return A.cols(); }

    /// Validates rows against a weight matrix: exact annihilation and saturation.
    static KernelBasis checked(IntMat A, const ToricInput& input) {
        if (A.cols() != input.d() || A.rows() != input.d() - input.n())
            throw DimensionMismatch("kernel basis must be (d-n) x d");
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t r = 0; r < input.n(); ++r) {
                Int s = 0;
                for (std::size_t j = 0; j < A.cols(); ++j) s += input.B(r, j) * A(i, j);
                if (s != 0) throw DimensionMismatch("kernel basis row not annihilated by B");
            }
        auto inv = smith_normal_form(A).invariants();
        if (inv.size() != A.rows())
            throw DimensionMismatch("kernel basis rows are linearly dependent");
        for (const auto& s : inv)
            if (s != 1) throw DimensionMismatch("kernel basis is not saturated");
        return KernelBasis{std::move(A)};
    }
};

/// Basis of ker(B) in row-style Hermite normal form (deterministic canonical
/// representative of the "up to automorphism of Z^{d-n}" ambiguity).
inline KernelBasis kernel_basis(const ToricInput& input) {
    auto sm = smith_normal_form(input.B);
    auto inv = sm.invariants();
    if (inv.size() != input.n())
        throw NotSurjective("weight matrix does not have full row rank");
    for (const auto& s : inv)
        if (s != 1) throw NotSurjective("weight matrix has nontrivial Smith invariants");

    // U B V = S = [I_n | 0]; kernel basis = columns n..d-1 of V.
    std::size_t d = input.d(), n = input.n();
    IntMat A(d - n, d);
    for (std::size_t k = 0; k < d - n; ++k)
        for (std::size_t j = 0; j < d; ++j) A(k, j) = sm.V(j, n + k);
    return KernelBasis{hermite_normal_form(A)};
}

/// True iff the weights sum to zero (the Calabi-Yau condition).
inline bool is_unimodular_weights(const ToricInput& input) {
    for (std::size_t i = 0; i < input.n(); ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < input.d(); ++j) s += input.B(i, j);
        if (s != 0) return false;
    }
    return true;
}

/// True iff for every line through the origin the weights on it sum to zero.
/// Lines are enumerated as primitive-direction classes of the nonzero columns;
/// zero columns lie on every line and contribute nothing.
inline bool is_quasi_symmetric(const ToricInput& input) {
    std::map<std::vector<Int>, std::vector<Int>> line_sums;
    for (std::size_t j = 0; j < input.d(); ++j) {
        std::vector<Int> col = input.B.col(j);
        std::vector<Int> dir = primitive(col);
        if (vec_gcd(dir) == 0) continue;
        auto [it, fresh] = line_sums.try_emplace(dir, std::vector<Int>(input.n(), 0));
        for (std::size_t i = 0; i < input.n(); ++i) it->second[i] += col[i];
    }
    for (const auto& [dir, sum] : line_sums)
        for (const auto& s : sum)
            if (s != 0) return false;
    return true;
}

}  // namespace gkzlab
