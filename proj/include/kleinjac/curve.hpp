#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kleinjac/config.hpp"
#include "kleinjac/errors.hpp"
#include "kleinjac/rational.hpp"

namespace kleinjac {

using Complex = std::complex<double>;

// Record of the validity checks a curve must pass: the defining polynomial
// has even degree 2g+2 with g >= 1, carries no real zeros (so the curve has
// no real points and the anti-holomorphic involution acts freely), has a
// negative leading coefficient (so the two points over x = infinity are
// swapped as well), and is squarefree.
struct ValidityCertificate {
    bool even_degree = false;
    bool no_real_roots = false;
    bool negative_leading = false;
    bool squarefree = false;
    bool ok() const { return even_degree && no_real_roots && negative_leading && squarefree; }
};

// A conjugate pair of branch points; `upper` has positive imaginary part.
struct BranchPair {
    Complex upper;
    Complex lower() const { return std::conj(upper); }
};

// Imaginary real hyperelliptic curve y^2 = p(x), deg p = 2g+2, p < 0 on the
// real axis. Immutable after construction.
struct CurveDescriptor {
    std::vector<BigRat> coeffs;       // exact, low degree first
    std::vector<double> dcoeffs;      // double image of coeffs
    int genus = 0;
    std::vector<Complex> branch_points;  // conjugation-closed, 2g+2 entries
    std::vector<BranchPair> pairs;       // cut order: by (Re, |Im|)
    ValidityCertificate validity;
    double scale = 1.0;      // max |branch point|
    double min_gap = 1.0;    // min pairwise branch distance
    double anchor = 0.0;     // real base coordinate for sheet labelling

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Complex p(const Complex& x) const {
        Complex acc(0.0, 0.0);
        for (auto it = dcoeffs.rbegin(); it != dcoeffs.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    double p_real(double x) const {
        double acc = 0.0;
        for (auto it = dcoeffs.rbegin(); it != dcoeffs.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    double clearance(const Tolerances& tol) const { return tol.clearance_factor * scale; }

    // y on sheet +1 over a real coordinate: p(t) < 0 there, and the label is
    // fixed by arg y in (-pi/2, pi/2] at the anchor, which picks +i*sqrt(-p).
    // Continuation along the real axis never meets a branch point, so the
    // same formula labels every real coordinate.
    Complex y_plus_real(double t) const {
        double v = p_real(t);
        if (v >= 0.0) fail(ErrorKind::Internal, "p >= 0 on the real axis of a valid curve");
        return Complex(0.0, std::sqrt(-v));
    }

    double min_branch_distance(const Complex& x) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& b : branch_points) d = std::min(d, std::abs(x - b));
        return d;
    }
};

// A point of the double cover: a finite x with a sheet label, or one of the
// two points over x = infinity. The sheet selects the branch of sqrt(p(x))
// via continuation from the anchor; at branch points the sheets meet and the
// label is canonically +1. For the points at infinity the label is carried
// by the symbol: inf_plus is the point where y/x^{g+1} tends to +i*sqrt(|lead|).
struct SurfacePoint {
    enum class At { Finite, InfPlus, InfMinus };
    At at = At::Finite;
    Complex x{0.0, 0.0};
    int sheet = +1;
    std::optional<Complex> y;  // cached; absent at branch points and infinity

    static SurfacePoint infinity(int sign) {
        SurfacePoint p;
        p.at = sign > 0 ? At::InfPlus : At::InfMinus;
        p.sheet = +1;
        return p;
    }
    bool finite() const { return at == At::Finite; }
};

inline bool same_point(const SurfacePoint& a, const SurfacePoint& b, const CurveDescriptor& curve,
                       const Tolerances& tol) {
    if (a.at != b.at) return false;
    if (!a.finite()) return true;
    double eps = tol.point_eq * std::max(1.0, curve.scale);
    if (std::abs(a.x - b.x) > eps) return false;
    return a.sheet == b.sheet;
}

// Hodge star on real 1-form coefficients: *(a dx + b dy) = -b dx + a dy.
inline std::pair<double, double> hodge_star(double a, double b) {
    return {-b, a};
}

namespace detail {

inline std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs) {
    int n = static_cast<int>(coeffs.size()) - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double lead = coeffs.back();
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

inline Complex newton_polish(const std::vector<double>& coeffs, Complex z) {
    auto eval = [&](Complex x, Complex& dp) {
        Complex acc(0.0, 0.0);
        dp = Complex(0.0, 0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            dp = dp * x + acc;
            acc = acc * x + *it;
        }
        return acc;
    };
    for (int iter = 0; iter < 4; ++iter) {
        Complex dp;
        Complex v = eval(z, dp);
        if (std::abs(dp) == 0.0) break;
        Complex step = v / dp;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

} // namespace detail

// Validates a coefficient list (lowest degree first) and builds the curve.
inline CurveDescriptor validate_curve(const std::vector<BigRat>& coeffs_in,
                                      const Tolerances& tol = Tolerances{}) {
    RatPoly p = RatPoly::from(coeffs_in);
    if (p.is_zero() || p.lead() == 0) fail(ErrorKind::BadInput, "zero polynomial");

    CurveDescriptor curve;
    curve.coeffs = p.c;
    if (p.degree() % 2 != 0)
        fail(ErrorKind::OddDegree, "degree " + std::to_string(p.degree()) + " is odd");

    curve.validity.negative_leading = p.lead() < 0;
    if (!curve.validity.negative_leading)
        fail(ErrorKind::OrientableCover,
             "leading coefficient is positive: the curve has real points and the involution "
             "has fixed points");

    curve.validity.no_real_roots = count_real_roots(p) == 0;
    if (!curve.validity.no_real_roots) fail(ErrorKind::RealBranchPoint, "p has a real root");

    curve.validity.squarefree = poly_squarefree(p);
    if (!curve.validity.squarefree) fail(ErrorKind::RepeatedRoot, "p has a repeated root");

    curve.validity.even_degree = p.degree() >= 4;
    if (p.degree() < 4)
        fail(ErrorKind::DegreeTooSmall,
             "degree " + std::to_string(p.degree()) + " gives no curve of positive genus");

    curve.genus = p.degree() / 2 - 1;
    curve.dcoeffs.reserve(p.c.size());
    for (const auto& a : p.c) curve.dcoeffs.push_back(to_double(a));

    // Branch points: companion-matrix eigenvalues plus one Newton polish,
    // then conjugate pairing enforced by averaging matched roots.
    std::vector<Complex> roots = detail::polynomial_roots(curve.dcoeffs);
    for (auto& r : roots) r = detail::newton_polish(curve.dcoeffs, r);

    std::vector<Complex> uppers;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i] || roots[i].imag() <= 0.0) continue;
        std::size_t best = roots.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (used[j] || j == i || roots[j].imag() >= 0.0) continue;
            double d = std::abs(roots[i] - std::conj(roots[j]));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == roots.size()) fail(ErrorKind::Internal, "conjugate pairing failed");
        used[i] = used[best] = true;
        uppers.push_back(0.5 * (roots[i] + std::conj(roots[best])));
    }
    if (2 * uppers.size() != roots.size())
        fail(ErrorKind::Internal, "branch points do not split into conjugate pairs");

    std::sort(uppers.begin(), uppers.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (const auto& u : uppers) {
        curve.pairs.push_back(BranchPair{u});
        curve.branch_points.push_back(u);
        curve.branch_points.push_back(std::conj(u));
    }

    curve.scale = 0.0;
    for (const auto& b : curve.branch_points) curve.scale = std::max(curve.scale, std::abs(b));
    if (curve.scale == 0.0) curve.scale = 1.0;
    curve.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.branch_points.size(); ++i)
        for (std::size_t j = i + 1; j < curve.branch_points.size(); ++j)
            curve.min_gap = std::min(curve.min_gap,
                                     std::abs(curve.branch_points[i] - curve.branch_points[j]));

    // Sanity: every branch point satisfies |p(b)| ~ 0.
    for (const auto& b : curve.branch_points) {
        double residual = std::abs(curve.p(b));
        double budget = 1e-8 * std::max(1.0, std::pow(curve.scale, curve.degree())) *
                        std::abs(curve.dcoeffs.back());
        if (residual > budget) fail(ErrorKind::Internal, "branch point residual too large");
    }

    // Anchor: smallest nonnegative integer with p != 0 there; p < 0 on the
    // whole real axis for a valid curve, so 0 always works.
    curve.anchor = 0.0;
    (void)tol;
    return curve;
}

inline CurveDescriptor validate_curve_strings(const std::vector<std::string>& tokens,
                                              const Tolerances& tol = Tolerances{}) {
    std::vector<BigRat> coeffs;
    coeffs.reserve(tokens.size());
    for (const auto& t : tokens) coeffs.push_back(parse_rational(t));
    return validate_curve(coeffs, tol);
}

} // namespace kleinjac
