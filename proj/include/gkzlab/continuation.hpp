#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "gkzlab/fuchsian.hpp"

namespace gkzlab {

/// Closed polygonal path with its clearance to the singular set.
struct Loop {
    Cplx base;
    std::vector<Cplx> vertices;  // closed: front == back
    double clearance = 0;

    static double point_segment_distance(Cplx p, Cplx a, Cplx b) {
        Cplx ab = b - a;
        double len2 = std::norm(ab);
        if (len2 == 0) return std::abs(p - a);
        double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
        return std::abs(p - (a + t * ab));
    }

    static Loop polygon(std::vector<Cplx> vertices, const std::vector<Cplx>& singular) {
        if (vertices.size() < 2 || std::abs(vertices.front() - vertices.back()) > 0)
            throw DimensionMismatch("loop polygon must be closed");
        Loop loop{vertices.front(), std::move(vertices), 0};
        double c = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < loop.vertices.size(); ++k)
            for (const auto& a : singular)
                c = std::min(c, point_segment_distance(a, loop.vertices[k], loop.vertices[k + 1]));
        loop.clearance = singular.empty() ? 1.0 : c;
        return loop;
    }

    /// Straight lasso from the base to a circle of the given radius around the
    /// center, traversed as a regular polygon (counterclockwise for
    /// winding = +1, clockwise for -1, |winding| turns).
    static Loop lasso(Cplx base, Cplx center, double radius, int segments,
                      const std::vector<Cplx>& singular, int winding = 1) {
        if (segments < 16) segments = 16;
        if (winding == 0) throw DimensionMismatch("lasso winding must be nonzero");
        Cplx dir = base - center;
        dir /= std::abs(dir);
        Cplx start = center + radius * dir;
        std::vector<Cplx> vs{base, start};
        double phase0 = std::arg(dir);
        int turns = std::abs(winding);
        double orient = winding > 0 ? 1.0 : -1.0;
        for (int t = 0; t < turns; ++t)
            for (int k = 1; k <= segments; ++k) {
                double phase = phase0 + orient * 2.0 * M_PI * k / segments;
                vs.push_back(center + std::polar(radius, phase));
            }
        vs.push_back(base);
        return polygon(std::move(vs), singular);
    }
};

struct ContinuationOptions {
    double tol = 1e-12;        // local error control (atol = rtol)
    double sing_fraction = 0.45;  // step length cap as a fraction of singularity distance
    double min_clearance = 1e-9;
    std::size_t max_steps = 400000;
};

namespace detail {

// Dormand-Prince 5(4) coefficients
struct Dp54 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

inline void axpy(CMat& y, double a, const CMat& x) {
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += a * x(i, j);
}

}  // namespace detail

/// Transports the identity-initial-condition fundamental matrix along the
/// loop: the returned matrix relates continued solutions to the original
/// basis. Adaptive embedded Runge-Kutta (order 5(4)) with per-step error
/// control and step length capped by the distance to the singular set.
inline CMat continue_along(const FuchsianSystem& sys, const Loop& loop,
                           const ContinuationOptions& opts = {}) {
    if (loop.clearance <= opts.min_clearance)
        throw ClearanceTooSmall("loop approaches the singular set");
    std::size_t n = sys.dim;
    CMat y = CMat::identity(n);
    std::size_t steps = 0;
    using D = detail::Dp54;

    for (std::size_t seg = 0; seg + 1 < loop.vertices.size(); ++seg) {
        Cplx z0 = loop.vertices[seg];
        Cplx dz = loop.vertices[seg + 1] - z0;
        double seg_len = std::abs(dz);
        if (seg_len == 0) continue;
        auto rhs = [&](double t, const CMat& m) {
            CMat a = sys.eval(z0 + t * dz);
            CMat r(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) {
                    Cplx f = dz * a(i, k);
                    for (std::size_t j = 0; j < n; ++j) r(i, j) += f * m(k, j);
                }
            return r;
        };

        double t = 0;
        double h = 0.1;
        while (t < 1.0) {
            // cap by singularity distance along the step
            double dist = sys.distance_to_singular(z0 + t * dz);
            double hcap = opts.sing_fraction * dist / seg_len;
            h = std::min({h, hcap, 1.0 - t});
            if (h < 1e-14) throw StepUnderflow("step size underflow during continuation");
            if (++steps > opts.max_steps) throw StepUnderflow("step budget exhausted");

            CMat k1 = rhs(t, y);
            CMat y2 = y;
            detail::axpy(y2, h * D::a21, k1);
            CMat k2 = rhs(t + D::c2 * h, y2);
            CMat y3 = y;
            detail::axpy(y3, h * D::a31, k1);
            detail::axpy(y3, h * D::a32, k2);
            CMat k3 = rhs(t + D::c3 * h, y3);
            CMat y4 = y;
            detail::axpy(y4, h * D::a41, k1);
            detail::axpy(y4, h * D::a42, k2);
            detail::axpy(y4, h * D::a43, k3);
            CMat k4 = rhs(t + D::c4 * h, y4);
            CMat y5 = y;
            detail::axpy(y5, h * D::a51, k1);
            detail::axpy(y5, h * D::a52, k2);
            detail::axpy(y5, h * D::a53, k3);
            detail::axpy(y5, h * D::a54, k4);
            CMat k5 = rhs(t + D::c5 * h, y5);
            CMat y6 = y;
            detail::axpy(y6, h * D::a61, k1);
            detail::axpy(y6, h * D::a62, k2);
            detail::axpy(y6, h * D::a63, k3);
            detail::axpy(y6, h * D::a64, k4);
            detail::axpy(y6, h * D::a65, k5);
            CMat k6 = rhs(t + h, y6);

            CMat ynew = y;
            detail::axpy(ynew, h * D::b1, k1);
            detail::axpy(ynew, h * D::b3, k3);
            detail::axpy(ynew, h * D::b4, k4);
            detail::axpy(ynew, h * D::b5, k5);
            detail::axpy(ynew, h * D::b6, k6);
            CMat k7 = rhs(t + h, ynew);

            CMat err(n, n);
            detail::axpy(err, h * D::e1, k1);
            detail::axpy(err, h * D::e3, k3);
            detail::axpy(err, h * D::e4, k4);
            detail::axpy(err, h * D::e5, k5);
            detail::axpy(err, h * D::e6, k6);
            detail::axpy(err, h * D::e7, k7);

            double scale = opts.tol * (1.0 + max_abs(y));
            double errnorm = max_abs(err) / scale;
            if (errnorm <= 1.0) {
                t += h;
                if (1.0 - t < 1e-12) t = 1.0;
                y = ynew;
            }
            double factor = errnorm > 0 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
    }
    return y;
}

/// Trapezoid quadrature of tr A along the loop (oracle for the Liouville
/// determinant identity det(transport) = exp(integral of tr A)).
inline Cplx integrate_trace(const FuchsianSystem& sys, const Loop& loop, int points_per_segment) {
    Cplx total(0.0);
    for (std::size_t seg = 0; seg + 1 < loop.vertices.size(); ++seg) {
        Cplx z0 = loop.vertices[seg];
        Cplx dz = loop.vertices[seg + 1] - z0;
        if (std::abs(dz) == 0) continue;
        Cplx acc(0.0);
        for (int k = 0; k <= points_per_segment; ++k) {
            double t = double(k) / points_per_segment;
            Cplx v = sys.trace(z0 + t * dz);
            acc += (k == 0 || k == points_per_segment) ? 0.5 * v : v;
        }
        total += acc * dz / double(points_per_segment);
    }
    return total;
}

}  // namespace gkzlab
