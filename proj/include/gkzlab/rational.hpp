#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "gkzlab/errors.hpp"

namespace gkzlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int floor_div(const Int& a, const Int& b) {
    // b > 0 assumed
    Int q = a / b, r = a % b;
    if (r != 0 && a < 0) --q;
    return q;
}

inline Int floor_rat(const Rat& q) { return floor_div(num(q), den(q)); }
inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

// Nearest integer, halves toward -inf (translation invariant: round(x+n) = round(x)+n).
inline Int round_half_down(const Rat& q) { return floor_rat(q + Rat(1, 2)); }

inline double to_double(const Rat& q) { return q.template convert_to<double>(); }
inline double to_double(const Int& n) { return n.template convert_to<double>(); }

inline std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    if (den(q) == 1)
        os << num(q);
    else
        os << num(q) << "/" << den(q);
    return os.str();
}

// Accepts "p", "p/q", and plain integer-valued JSON numbers pre-rendered as text.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) throw SchemaError("rational with zero denominator: " + s);
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        throw SchemaError("cannot parse rational: " + s);
    }
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// gcd of a vector, nonnegative; 0 for the zero vector.
inline Int vec_gcd(const std::vector<Int>& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

// Scales to coprime entries and flips so the first nonzero entry is positive.
// The zero vector is returned unchanged.
inline std::vector<Int> primitive(std::vector<Int> v) {
    Int g = vec_gcd(v);
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
    return v;
}

// Complex numbers over Rat: the exact scalar field for GKZ series and perverse data.
struct CRat {
    Rat re, im;

    CRat() = default;
    CRat(Rat r) : re(std::move(r)) {}
    CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    CRat(int r) : re(r) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend CRat operator+(const CRat& a, const CRat& b) { return {a.re + b.re, a.im + b.im}; }
    friend CRat operator-(const CRat& a, const CRat& b) { return {a.re - b.re, a.im - b.im}; }
    friend CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend CRat operator/(const CRat& a, const CRat& b) {
        Rat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    CRat& operator+=(const CRat& b) { return *this = *this + b; }
    CRat& operator-=(const CRat& b) { return *this = *this - b; }
    CRat& operator*=(const CRat& b) { return *this = *this * b; }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

using Cplx = std::complex<double>;

inline Cplx to_complex(const CRat& z) { return z.to_complex(); }
inline Cplx to_complex(const Cplx& z) { return z; }

}  // namespace gkzlab
