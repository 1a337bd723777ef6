#pragma once

#include <array>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "kleinjac/path.hpp"

namespace kleinjac {

namespace detail {

// Full 32-node Gauss-Legendre rule on [-1, 1], expanded from the half tables.
inline const std::array<double, 32>& gl_nodes() {
    static const std::array<double, 32> nodes = [] {
        using rule = boost::math::quadrature::gauss<double, 32>;
        std::array<double, 32> out{};
        const auto& half = rule::abscissa();
        for (std::size_t i = 0; i < 16; ++i) {
            out[i] = -half[15 - i];
            out[16 + i] = half[i];
        }
        return out;
    }();
    return nodes;
}

inline const std::array<double, 32>& gl_weights() {
    static const std::array<double, 32> weights = [] {
        using rule = boost::math::quadrature::gauss<double, 32>;
        std::array<double, 32> out{};
        const auto& half = rule::weights();
        for (std::size_t i = 0; i < 16; ++i) {
            out[i] = half[15 - i];
            out[16 + i] = half[i];
        }
        return out;
    }();
    return weights;
}

// Gauss-Legendre sum of x^{k-1} dx / y, k = 1..forms, along one straight
// segment, continuing y through the nodes. Returns the continued value at b.
inline Complex gl_monomials_segment(const CurveDescriptor& curve, Complex a, Complex b, Complex ya,
                                    int forms, std::vector<Complex>& acc) {
    const auto& nodes = gl_nodes();
    const auto& weights = gl_weights();
    Complex mid = 0.5 * (a + b);
    Complex half = 0.5 * (b - a);
    Complex y = ya;
    Complex xprev = a;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Complex x = mid + nodes[i] * half;
        y = continue_step(curve, xprev, y, x);
        xprev = x;
        Complex base = weights[i] * half / y;
        Complex xpow(1.0, 0.0);
        for (int k = 0; k < forms; ++k) {
            acc[static_cast<std::size_t>(k)] += base * xpow;
            xpow *= x;
        }
    }
    return continue_step(curve, xprev, y, b);
}

inline Complex monomials_segment_adaptive(const CurveDescriptor& curve, Complex a, Complex b,
                                          Complex ya, int forms, const Tolerances& tol, int depth,
                                          std::vector<Complex>& acc) {
    std::vector<Complex> coarse(static_cast<std::size_t>(forms), Complex(0.0, 0.0));
    gl_monomials_segment(curve, a, b, ya, forms, coarse);
    std::vector<Complex> fine(static_cast<std::size_t>(forms), Complex(0.0, 0.0));
    Complex mid = 0.5 * (a + b);
    Complex ym = gl_monomials_segment(curve, a, mid, ya, forms, fine);
    Complex yb = gl_monomials_segment(curve, mid, b, ym, forms, fine);

    double err = 0.0, ref = 0.0;
    for (int k = 0; k < forms; ++k) {
        err = std::max(err, std::abs(coarse[static_cast<std::size_t>(k)] -
                                     fine[static_cast<std::size_t>(k)]));
        ref = std::max(ref, std::abs(fine[static_cast<std::size_t>(k)]));
    }
    if (err <= tol.quad_rel * ref + 1e-15 * (1.0 + ref)) {
        for (int k = 0; k < forms; ++k) acc[static_cast<std::size_t>(k)] += fine[static_cast<std::size_t>(k)];
        return yb;
    }
    if (depth >= tol.quad_max_depth)
        fail(ErrorKind::QuadratureStall, "quadrature tolerance not reached at maximum depth");
    ym = monomials_segment_adaptive(curve, a, mid, ya, forms, tol, depth + 1, acc);
    return monomials_segment_adaptive(curve, mid, b, ym, forms, tol, depth + 1, acc);
}

} // namespace detail

// Integrals of the monomial differentials x^{k-1} dx / y, k = 1..genus, along
// a path. The sheet at the first waypoint seeds the continuation.
inline std::vector<Complex> integrate_monomials(const CurveDescriptor& curve,
                                                const SurfacePath& path,
                                                const Tolerances& tol = Tolerances{}) {
    int forms = curve.genus;
    std::vector<Complex> acc(static_cast<std::size_t>(forms), Complex(0.0, 0.0));
    if (path.waypoints.size() < 2 && !path.closed) return acc;
    Complex y = y_of(curve, path.waypoints.front(), path.start_sheet, tol);
    for (std::size_t i = 0; i < path.segment_count(); ++i)
        y = detail::monomials_segment_adaptive(curve, path.seg_a(i), path.seg_b(i), y, forms, tol,
                                               0, acc);
    return acc;
}

inline Complex integrate_form(const CurveDescriptor& curve, int k, const SurfacePath& path,
                              const Tolerances& tol = Tolerances{}) {
    if (k < 1 || k > curve.genus) fail(ErrorKind::BadInput, "form index out of range");
    return integrate_monomials(curve, path, tol)[static_cast<std::size_t>(k - 1)];
}

namespace detail {

// Continuation of w = sqrt(q(s)) along real s, nearest-branch stepping with
// the same quarter-turn guard as the curve continuation.
inline Complex sqrt_step(const std::vector<Complex>& q, double s0, Complex w0, double s1,
                         int depth = 0) {
    auto eval = [&](double s) {
        Complex acc(0.0, 0.0);
        for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * s + *it;
        return acc;
    };
    if (s0 == s1) return w0;
    Complex cand = std::sqrt(eval(s1));
    if (std::abs(-cand - w0) < std::abs(cand - w0)) cand = -cand;
    double dot = cand.real() * w0.real() + cand.imag() * w0.imag();
    if (std::abs(cand) == 0.0 || dot > 0.156 * std::abs(cand) * std::abs(w0)) return cand;
    if (depth > 48) fail(ErrorKind::QuadratureStall, "sqrt continuation did not stabilize");
    double mid = 0.5 * (s0 + s1);
    Complex wm = sqrt_step(q, s0, w0, mid, depth + 1);
    return sqrt_step(q, mid, wm, s1, depth + 1);
}

struct SqrtIntegrand {
    // values of the integrand vector at (s, w)
    std::function<void(double, Complex, std::vector<Complex>&)> eval;
    int forms = 0;
};

inline Complex sqrt_gl_segment(const std::vector<Complex>& q, const SqrtIntegrand& f, double a,
                               double b, Complex wa, std::vector<Complex>& acc) {
    const auto& nodes = gl_nodes();
    const auto& weights = gl_weights();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex w = wa;
    double sprev = a;
    std::vector<Complex> vals(static_cast<std::size_t>(f.forms));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double s = mid + nodes[i] * half;
        w = sqrt_step(q, sprev, w, s);
        sprev = s;
        f.eval(s, w, vals);
        for (int k = 0; k < f.forms; ++k)
            acc[static_cast<std::size_t>(k)] += (weights[i] * half) * vals[static_cast<std::size_t>(k)];
    }
    return sqrt_step(q, sprev, w, b);
}

inline Complex sqrt_integrate_adaptive(const std::vector<Complex>& q, const SqrtIntegrand& f,
                                       double a, double b, Complex wa, const Tolerances& tol,
                                       int depth, std::vector<Complex>& acc) {
    std::vector<Complex> coarse(static_cast<std::size_t>(f.forms), Complex(0.0, 0.0));
    sqrt_gl_segment(q, f, a, b, wa, coarse);
    std::vector<Complex> fine(static_cast<std::size_t>(f.forms), Complex(0.0, 0.0));
    double mid = 0.5 * (a + b);
    Complex wm = sqrt_gl_segment(q, f, a, mid, wa, fine);
    Complex wb = sqrt_gl_segment(q, f, mid, b, wm, fine);
    double err = 0.0, ref = 0.0;
    for (int k = 0; k < f.forms; ++k) {
        err = std::max(err, std::abs(coarse[static_cast<std::size_t>(k)] -
                                     fine[static_cast<std::size_t>(k)]));
        ref = std::max(ref, std::abs(fine[static_cast<std::size_t>(k)]));
    }
    if (err <= tol.quad_rel * ref + 1e-15 * (1.0 + ref)) {
        for (int k = 0; k < f.forms; ++k)
            acc[static_cast<std::size_t>(k)] += fine[static_cast<std::size_t>(k)];
        return wb;
    }
    if (depth >= tol.quad_max_depth)
        fail(ErrorKind::QuadratureStall, "substituted quadrature stalled");
    wm = sqrt_integrate_adaptive(q, f, a, mid, wa, tol, depth + 1, acc);
    return sqrt_integrate_adaptive(q, f, mid, b, wm, tol, depth + 1, acc);
}

} // namespace detail

struct TailResult {
    std::vector<Complex> values;  // integrals of x^{k-1} dx / y from the rim to infinity
    Complex w_limit;              // limit of y * (c/x)^{g+1} * c^{... }: w(0), identifies the sheet at infinity
};

// Integral from a rim point c (|c| well beyond every branch point) out to
// x = infinity along the ray through c. Substituting x = c/s makes the
// integrand a polynomial-sqrt expression smooth at s = 0, so plain
// Gauss-Legendre applies. w(s) = y * s^{g+1}; w(0)/c^{g+1} identifies which
// point over infinity the ray reaches.
inline TailResult tail_to_infinity(const CurveDescriptor& curve, Complex c, Complex y_at_c,
                                   const Tolerances& tol = Tolerances{}) {
    int g = curve.genus;
    int d = curve.degree();
    std::vector<Complex> q(static_cast<std::size_t>(d) + 1, Complex(0.0, 0.0));
    // q(s) = p(c/s) * s^d = sum_m a_m c^m s^{d-m}
    for (int m = 0; m <= d; ++m) {
        Complex cm = std::pow(c, m) * curve.dcoeffs[static_cast<std::size_t>(m)];
        q[static_cast<std::size_t>(d - m)] = cm;
    }
    detail::SqrtIntegrand f;
    f.forms = g;
    std::vector<Complex> cpow(static_cast<std::size_t>(g) + 1, Complex(1.0, 0.0));
    for (int k = 1; k <= g; ++k) cpow[static_cast<std::size_t>(k)] = cpow[static_cast<std::size_t>(k - 1)] * c;
    f.eval = [&, g](double s, Complex w, std::vector<Complex>& out) {
        // integrand of int_0^1: c^k s^{g-k} / w for k = 1..g
        double spow = 1.0;
        for (int k = g; k >= 1; --k) {
            out[static_cast<std::size_t>(k - 1)] = cpow[static_cast<std::size_t>(k)] * spow / w;
            spow *= s;
        }
    };
    TailResult result;
    result.values.assign(static_cast<std::size_t>(g), Complex(0.0, 0.0));
    // Integrate s from 0 to 1 and keep that orientation: the two orientation
    // flips (s = 1/x reversal and the integrand sign) cancel.
    // Continuation must still run from the known seed at s = 1 down to 0, so
    // integrate [0,1] but seed by stepping from s=1.
    Complex w1 = y_at_c;  // w(1) = y(c)
    // Chain continuation from s=1 to s=0 first to get w at 0 (also the limit value).
    result.w_limit = detail::sqrt_step(q, 1.0, w1, 0.0);
    // Now accumulate the integral, seeding at s=0 with the continued value.
    detail::sqrt_integrate_adaptive(q, f, 0.0, 1.0, result.w_limit, tol, 0, result.values);
    return result;
}

// Integral from a to a branch point b; x = b + s^2 (a - b) removes the
// square-root endpoint singularity. Returns integrals of x^{k-1} dx / y
// from a to b.
inline std::vector<Complex> integrate_to_branch(const CurveDescriptor& curve, Complex a, Complex b,
                                                Complex y_at_a, const Tolerances& tol = Tolerances{}) {
    int g = curve.genus;
    int d = curve.degree();
    // Taylor coefficients of p at b via repeated synthetic division.
    std::vector<Complex> work(curve.dcoeffs.begin(), curve.dcoeffs.end());
    std::vector<Complex> taylor(static_cast<std::size_t>(d) + 1, Complex(0.0, 0.0));
    for (int m = 0; m <= d; ++m) {
        int n = static_cast<int>(work.size()) - 1;
        if (n == 0) {
            taylor[static_cast<std::size_t>(m)] = work[0];
            break;
        }
        std::vector<Complex> quot(static_cast<std::size_t>(n), Complex(0.0, 0.0));
        quot[static_cast<std::size_t>(n - 1)] = work[static_cast<std::size_t>(n)];
        for (int i = n - 1; i >= 1; --i)
            quot[static_cast<std::size_t>(i - 1)] =
                work[static_cast<std::size_t>(i)] + b * quot[static_cast<std::size_t>(i)];
        taylor[static_cast<std::size_t>(m)] = work[0] + b * quot[0];
        work = std::move(quot);
    }
    if (std::abs(taylor[0]) > 1e-7 * std::max(1.0, std::abs(curve.dcoeffs.back())) *
                                   std::pow(std::max(1.0, curve.scale), d))
        fail(ErrorKind::BadInput, "endpoint is not a branch point");

    Complex d0 = a - b;
    // q(s) = p(b + s^2 d0) / s^2 = sum_{m>=1} taylor_m d0^m s^{2m-2}
    std::vector<Complex> q(static_cast<std::size_t>(2 * d - 1), Complex(0.0, 0.0));
    Complex dpow = d0;
    for (int m = 1; m <= d; ++m) {
        q[static_cast<std::size_t>(2 * m - 2)] = taylor[static_cast<std::size_t>(m)] * dpow;
        dpow *= d0;
    }
    detail::SqrtIntegrand f;
    f.forms = g;
    f.eval = [&, g](double s, Complex w, std::vector<Complex>& out) {
        Complex x = b + (s * s) * d0;
        Complex base = 2.0 * d0 / w;
        Complex xpow(1.0, 0.0);
        for (int k = 1; k <= g; ++k) {
            out[static_cast<std::size_t>(k - 1)] = base * xpow;
            xpow *= x;
        }
    };
    std::vector<Complex> acc(static_cast<std::size_t>(g), Complex(0.0, 0.0));
    Complex w1 = y_at_a;  // w(1) = y(a)
    Complex w0 = detail::sqrt_step(q, 1.0, w1, 0.0);
    detail::sqrt_integrate_adaptive(q, f, 0.0, 1.0, w0, tol, 0, acc);
    // Integral over s in [0,1] equals the a -> b integral with a sign flip
    // (s runs 1 -> 0 along the path); flip it back.
    for (auto& v : acc) v = -v;
    return acc;
}

} // namespace kleinjac
